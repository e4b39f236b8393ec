#include "recon/blind_protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "recon/channel.hpp"

namespace recon {

void ProtocolConfig::validate() {
    if (code == nullptr) throw std::invalid_argument("ProtocolConfig: null code");
    if (d != static_cast<int>(pattern.positions.size()))
        throw std::invalid_argument("ProtocolConfig: d != pattern size");
    if (d > code->num_checks()) throw std::invalid_argument("ProtocolConfig: d > n - k");
    if (attempts < 1) throw std::invalid_argument("ProtocolConfig: attempts < 1");
    if (attempts >= 2) {
        if (d % (attempts - 1) != 0)
            throw std::invalid_argument("ProtocolConfig: (attempts - 1) must divide d");
        delta_step = d / (attempts - 1);
    } else {
        delta_step = 0;
    }
}

double LlrPolicy::epsilon_for_rate(double rate) const {
    if (mode == Mode::Fixed) return fixed_epsilon;
    const double target = std::clamp(1.0 - rate, 0.0, 1.0);
    return std::clamp(binary_entropy_inverse(target), 1e-4, 0.5 - 1e-4);
}

namespace {

struct BobState {
    std::vector<PositionTag> tags;
};

BobState make_bob_state(const LdpcCode& code, const PuncturingPattern& pattern,
                        const std::vector<int>& payload_positions, const Bits& y) {
    BobState bob;
    bob.tags.assign(static_cast<std::size_t>(code.n), PositionTag{PositionKind::Punctured, 0});
    for (std::size_t i = 0; i < payload_positions.size(); ++i)
        bob.tags[static_cast<std::size_t>(payload_positions[i])] = PositionTag{PositionKind::Channel, y[i]};
    return bob;
}

std::vector<int> payload_positions_for(const LdpcCode& code, const PuncturingPattern& pattern) {
    std::vector<std::uint8_t> is_pattern(static_cast<std::size_t>(code.n), 0);
    for (int p : pattern.positions) is_pattern[static_cast<std::size_t>(p)] = 1;
    std::vector<int> payload;
    payload.reserve(static_cast<std::size_t>(code.n) - pattern.positions.size());
    for (int v = 0; v < code.n; ++v)
        if (!is_pattern[static_cast<std::size_t>(v)]) payload.push_back(v);
    return payload;
}

}  // namespace

SessionReport run_blind_session(const ProtocolConfig& config_in, const Bits& x, const Bits& y,
                                const LlrPolicy& llr_policy, std::mt19937_64& rng) {
    ProtocolConfig config = config_in;
    config.validate();
    const LdpcCode& code = *config.code;
    const int n = code.n;
    const int d = config.d;
    const int m = n - d;
    if (static_cast<int>(x.size()) != m || static_cast<int>(y.size()) != m)
        throw std::invalid_argument("run_blind_session: payload length != n - d");

    SessionReport report;

    // Alice side: embed and send the syndrome.
    Bits word;
    FramePlan plan = embed_frame(x, code, config.pattern, rng, &word);
    Bits target = syndrome(code, word);
    report.transcript.push_back(Message{MessageType::Syndrome, target, {}, false});

    // filler bit for a given pattern position
    std::vector<int> filler_index(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < config.pattern.positions.size(); ++i)
        filler_index[static_cast<std::size_t>(config.pattern.positions[i])] = static_cast<int>(i);

    BobState bob = make_bob_state(code, config.pattern, plan.payload_positions, y);

    const double r0 = code.rate();
    int s = 0;
    for (int attempt = 1; attempt <= config.attempts; ++attempt) {
        const int p = d - s;
        const double rate = adapted_rate(r0, static_cast<double>(p) / n, static_cast<double>(s) / n);
        report.rates.push_back(rate);

        DecoderInput din;
        din.code = &code;
        din.target_syndrome = target;
        din.tags = bob.tags;
        din.llr_epsilon = llr_policy.epsilon_for_rate(rate);
        din.max_iterations = config.max_decoder_iterations;
        DecoderOutcome out = decode_syndrome(din);

        report.transcript.push_back(Message{MessageType::Verdict, {}, {}, out.success});
        report.attempts_used = attempt;
        if (out.success) {
            report.outcome = SessionOutcome::Success;
            report.bob_payload = extract_payload(plan, out.word);
            report.payload_matches = report.bob_payload == x;
            report.s_final = s;
            report.p_final = p;
            report.leaked_bits = static_cast<long>(code.num_checks()) - p;
            return report;
        }
        if (attempt == config.attempts || s == d) break;  // all shortened, the protocol fails

        // Re-transmission: reveal the next Delta punctured symbols.
        Message reveal{MessageType::Reveal, {}, {}, false};
        for (int j = 0; j < config.delta_step; ++j) {
            const int pos = config.pattern.reveal_order[static_cast<std::size_t>(s + j)];
            const std::uint8_t bit = plan.filler_values[static_cast<std::size_t>(filler_index[static_cast<std::size_t>(pos)])];
            reveal.reveals.emplace_back(pos, bit);
            bob.tags[static_cast<std::size_t>(pos)] = PositionTag{PositionKind::Shortened, bit};
        }
        s += config.delta_step;
        report.transcript.push_back(std::move(reveal));
    }

    report.outcome = SessionOutcome::Failure;
    report.s_final = s;
    report.p_final = d - s;
    report.leaked_bits = static_cast<long>(code.num_checks()) - (d - s);
    return report;
}

SessionReport run_rate_adaptive(const ProtocolConfig& config_in, const Bits& x, const Bits& y,
                                double epsilon_estimate, const ThresholdTable& thresholds,
                                double margin, std::mt19937_64& rng) {
    ProtocolConfig config = config_in;
    config.attempts = 1;
    config.validate();
    if (!(epsilon_estimate > 0.0 && epsilon_estimate < 0.5))
        throw std::invalid_argument("run_rate_adaptive: epsilon_estimate outside (0, 0.5)");
    const LdpcCode& code = *config.code;
    const int n = code.n;
    const int d = config.d;
    const int m = n - d;
    if (static_cast<int>(x.size()) != m || static_cast<int>(y.size()) != m)
        throw std::invalid_argument("run_rate_adaptive: payload length != n - d");

    SessionReport report;
    const double r0 = code.rate();

    // Smallest shortening whose adapted rate still has decoding threshold
    // above the estimate plus margin.
    int chosen_s = -1;
    for (int s = 0; s <= d; ++s) {
        const double rate = adapted_rate(r0, static_cast<double>(d - s) / n, static_cast<double>(s) / n);
        if (!thresholds.covers(rate)) continue;
        if (thresholds.epsilon_star(rate) >= epsilon_estimate + margin) {
            chosen_s = s;
            break;
        }
    }
    if (chosen_s < 0) {
        report.predicted_infeasible = true;
        chosen_s = d;
    }

    Bits word;
    FramePlan plan = embed_frame(x, code, config.pattern, rng, &word);
    Bits target = syndrome(code, word);
    report.transcript.push_back(Message{MessageType::Syndrome, target, {}, false});

    // Shortened symbols are drawn at random among the reserved positions.
    std::vector<int> idx(config.pattern.positions.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::shuffle(idx.begin(), idx.end(), rng);

    BobState bob = make_bob_state(code, config.pattern, plan.payload_positions, y);
    Message reveal{MessageType::Reveal, {}, {}, false};
    for (int j = 0; j < chosen_s; ++j) {
        const int pos = config.pattern.positions[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        const std::uint8_t bit = plan.filler_values[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        reveal.reveals.emplace_back(pos, bit);
        bob.tags[static_cast<std::size_t>(pos)] = PositionTag{PositionKind::Shortened, bit};
    }
    if (chosen_s > 0) report.transcript.push_back(std::move(reveal));

    const int p = d - chosen_s;
    const double rate = adapted_rate(r0, static_cast<double>(p) / n, static_cast<double>(chosen_s) / n);
    report.rates.push_back(rate);

    DecoderInput din;
    din.code = &code;
    din.target_syndrome = target;
    din.tags = bob.tags;
    din.llr_epsilon = std::clamp(epsilon_estimate, 1e-4, 0.5 - 1e-4);
    din.max_iterations = config.max_decoder_iterations;
    DecoderOutcome out = decode_syndrome(din);

    report.transcript.push_back(Message{MessageType::Verdict, {}, {}, out.success});
    report.attempts_used = 1;
    report.s_final = chosen_s;
    report.p_final = p;
    report.leaked_bits = static_cast<long>(code.num_checks()) - p;
    if (out.success) {
        report.outcome = SessionOutcome::Success;
        report.bob_payload = extract_payload(plan, out.word);
        report.payload_matches = report.bob_payload == x;
    } else {
        report.outcome = SessionOutcome::Failure;
    }
    return report;
}

double efficiency(long leaked_bits, int m, double epsilon) {
    if (m < 1) throw std::invalid_argument("efficiency: m < 1");
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("efficiency: epsilon outside (0, 0.5)");
    return static_cast<double>(leaked_bits) / (m * binary_entropy(epsilon));
}

std::string format_transcript(const ProtocolConfig& config, const Bits& y,
                              const SessionReport& report) {
    std::ostringstream os;
    os << "CTX " << config.code->n << " " << config.code->k << " " << config.d << "\n";
    os << "SIDE " << y.size() << " " << bits_to_hex(y) << "\n";
    for (const Message& msg : report.transcript) {
        switch (msg.type) {
            case MessageType::Syndrome:
                os << "MSG SYN " << msg.syndrome.size() << " " << bits_to_hex(msg.syndrome) << "\n";
                break;
            case MessageType::Reveal: {
                os << "MSG REV " << msg.reveals.size();
                for (const auto& [pos, bit] : msg.reveals) os << " " << pos << ":" << int(bit);
                os << "\n";
                break;
            }
            case MessageType::Verdict:
                os << "MSG VER 1 " << (msg.verdict_success ? 1 : 0) << "\n";
                break;
        }
    }
    os << "OUTCOME " << (report.outcome == SessionOutcome::Success ? "success" : "failure") << "\n";
    return os.str();
}

bool replay_transcript(const std::string& text, const LdpcCode& code,
                       const PuncturingPattern& pattern, const LlrPolicy& llr_policy,
                       int max_decoder_iterations, std::string* detail) {
    auto fail = [detail](const std::string& why) {
        if (detail != nullptr) *detail = why;
        return false;
    };

    std::istringstream is(text);
    std::string line;
    int n = 0, k = 0, d = 0;
    Bits y;
    Bits target;
    bool have_syndrome = false;
    bool logged_outcome_success = false, have_outcome = false;
    std::vector<PositionTag> tags;
    std::vector<int> payload;
    int s = 0;
    bool last_decode_success = false;
    bool decode_pending = false;

    auto run_decode = [&]() {
        const int p = d - s;
        const double rate =
            adapted_rate(code.rate(), static_cast<double>(p) / n, static_cast<double>(s) / n);
        DecoderInput din;
        din.code = &code;
        din.target_syndrome = target;
        din.tags = tags;
        din.llr_epsilon = llr_policy.epsilon_for_rate(rate);
        din.max_iterations = max_decoder_iterations;
        last_decode_success = decode_syndrome(din).success;
        decode_pending = false;
    };

    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "CTX") {
            if (!(ls >> n >> k >> d)) return fail("bad CTX line");
            if (n != code.n || k != code.k) return fail("CTX does not match the code");
            if (d != static_cast<int>(pattern.positions.size())) return fail("CTX d != pattern size");
        } else if (tag == "SIDE") {
            std::size_t len;
            std::string hex;
            if (!(ls >> len >> hex)) return fail("bad SIDE line");
            y = hex_to_bits(hex, len);
            payload = payload_positions_for(code, pattern);
            if (payload.size() != y.size()) return fail("side information length mismatch");
            tags = make_bob_state(code, pattern, payload, y).tags;
        } else if (tag == "MSG") {
            std::string type;
            std::size_t len;
            if (!(ls >> type >> len)) return fail("bad MSG line");
            if (type == "SYN") {
                std::string hex;
                if (!(ls >> hex)) return fail("bad SYN payload");
                target = hex_to_bits(hex, len);
                if (static_cast<int>(target.size()) != code.num_checks())
                    return fail("syndrome length mismatch");
                have_syndrome = true;
                decode_pending = true;
            } else if (type == "REV") {
                if (!have_syndrome) return fail("reveal before syndrome");
                for (std::size_t j = 0; j < len; ++j) {
                    std::string pair;
                    if (!(ls >> pair)) return fail("bad REV payload");
                    auto colon = pair.find(':');
                    if (colon == std::string::npos) return fail("bad REV pair");
                    int pos = std::stoi(pair.substr(0, colon));
                    int bit = std::stoi(pair.substr(colon + 1));
                    if (pos < 0 || pos >= n) return fail("REV position out of range");
                    if (tags[static_cast<std::size_t>(pos)].kind != PositionKind::Punctured)
                        return fail("REV position not punctured");
                    tags[static_cast<std::size_t>(pos)] =
                        PositionTag{PositionKind::Shortened, static_cast<std::uint8_t>(bit)};
                }
                s += static_cast<int>(len);
                decode_pending = true;
            } else if (type == "VER") {
                int v;
                if (!(ls >> v)) return fail("bad VER payload");
                if (decode_pending) run_decode();
                if (last_decode_success != (v == 1)) return fail("verdict mismatch on replay");
            } else {
                return fail("unknown message type: " + type);
            }
        } else if (tag == "OUTCOME") {
            std::string what;
            ls >> what;
            logged_outcome_success = what == "success";
            have_outcome = true;
        }
    }
    if (!have_syndrome || !have_outcome) return fail("transcript incomplete");
    if (decode_pending) run_decode();
    if (last_decode_success != logged_outcome_success) return fail("outcome mismatch on replay");
    if (detail != nullptr) *detail = "ok";
    return true;
}

}  // namespace recon
