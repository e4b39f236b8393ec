#include "recon/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "recon/channel.hpp"
#include "recon/rng.hpp"

namespace recon {

namespace {

struct PointAccum {
    long frames = 0;
    long failures = 0;
    long leaked_success = 0;   // summed over successful frames
    long attempts_success = 0;
    long undetected = 0;
    std::vector<long> attempt_histogram;

    void merge(const PointAccum& other) {
        frames += other.frames;
        failures += other.failures;
        leaked_success += other.leaked_success;
        attempts_success += other.attempts_success;
        undetected += other.undetected;
        if (attempt_histogram.size() < other.attempt_histogram.size())
            attempt_histogram.resize(other.attempt_histogram.size(), 0);
        for (std::size_t i = 0; i < other.attempt_histogram.size(); ++i)
            attempt_histogram[i] += other.attempt_histogram[i];
    }
};

// One-shot baseline with a fixed punctured/shortened split.
SessionReport run_fixed_session(const ProtocolConfig& config_in, int fixed_s, const Bits& x,
                                const Bits& y, const LlrPolicy& llr_policy, std::mt19937_64& rng) {
    ProtocolConfig config = config_in;
    config.attempts = 1;
    config.validate();
    const LdpcCode& code = *config.code;
    const int n = code.n;
    const int d = config.d;
    if (fixed_s < 0 || fixed_s > d) throw std::invalid_argument("fixed session: s outside [0, d]");

    SessionReport report;
    Bits word;
    FramePlan plan = embed_frame(x, code, config.pattern, rng, &word);
    Bits target = syndrome(code, word);
    report.transcript.push_back(Message{MessageType::Syndrome, target, {}, false});

    std::vector<int> idx(config.pattern.positions.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    std::shuffle(idx.begin(), idx.end(), rng);

    std::vector<PositionTag> tags(static_cast<std::size_t>(n), PositionTag{PositionKind::Punctured, 0});
    for (std::size_t i = 0; i < plan.payload_positions.size(); ++i)
        tags[static_cast<std::size_t>(plan.payload_positions[i])] = PositionTag{PositionKind::Channel, y[i]};
    Message reveal{MessageType::Reveal, {}, {}, false};
    for (int j = 0; j < fixed_s; ++j) {
        const int pos = config.pattern.positions[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        const std::uint8_t bit = plan.filler_values[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        reveal.reveals.emplace_back(pos, bit);
        tags[static_cast<std::size_t>(pos)] = PositionTag{PositionKind::Shortened, bit};
    }
    if (fixed_s > 0) report.transcript.push_back(std::move(reveal));

    const int p = d - fixed_s;
    const double rate =
        adapted_rate(code.rate(), static_cast<double>(p) / n, static_cast<double>(fixed_s) / n);
    report.rates.push_back(rate);

    DecoderInput din;
    din.code = &code;
    din.target_syndrome = target;
    din.tags = tags;
    din.llr_epsilon = llr_policy.epsilon_for_rate(rate);
    din.max_iterations = config.max_decoder_iterations;
    DecoderOutcome out = decode_syndrome(din);

    report.transcript.push_back(Message{MessageType::Verdict, {}, {}, out.success});
    report.attempts_used = 1;
    report.s_final = fixed_s;
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

}  // namespace

std::vector<FerCurvePoint> run_fer_sweep(const ExperimentSpec& spec, const LdpcCode& code,
                                         const PuncturingPattern& pattern,
                                         const std::optional<ThresholdTable>& thresholds) {
    std::vector<FerCurvePoint> points;
    if (spec.target_errors < 1 || spec.max_frames < 1) return points;
    if (spec.protocol == ProtocolKind::RateAdaptive && !thresholds.has_value())
        throw std::runtime_error("rate-adaptive simulation needs a threshold table");
    if (spec.protocol == ProtocolKind::Fixed &&
        spec.fixed_p + spec.fixed_s != static_cast<int>(pattern.positions.size()))
        throw std::runtime_error("fixed protocol: p + s must equal the pattern size");

    ProtocolConfig base;
    base.code = &code;
    base.pattern = pattern;
    base.d = static_cast<int>(pattern.positions.size());
    base.attempts = spec.protocol == ProtocolKind::Blind ? spec.attempts : 1;
    base.max_decoder_iterations = spec.max_decoder_iterations;
    base.validate();

    const int m = code.n - base.d;
    const int threads = std::max(1, spec.threads);
    // Fixed batch size keeps the stop rule independent of thread count.
    constexpr long kBatch = 256;

    std::uint64_t point_index = 0;
    for (double eps = spec.eps_start; eps <= spec.eps_stop + 1e-12; eps += spec.eps_step, ++point_index) {
        if (!(eps > 0.0 && eps < 0.5)) throw std::runtime_error("epsilon sweep outside (0, 0.5)");
        PointAccum accum;
        accum.attempt_histogram.assign(static_cast<std::size_t>(base.attempts), 0);

        auto run_frame = [&](std::uint64_t frame_index, PointAccum& local) {
            auto rng = make_rng(derive_seed(spec.root_seed, point_index, frame_index));
            Bits x(static_cast<std::size_t>(m));
            for (auto& bit : x) bit = static_cast<std::uint8_t>(rng() & 1u);
            Bits y = bsc_transmit(x, BscParams{eps}, rng);

            SessionReport report;
            switch (spec.protocol) {
                case ProtocolKind::Blind:
                    report = run_blind_session(base, x, y, spec.llr_policy, rng);
                    break;
                case ProtocolKind::RateAdaptive:
                    report = run_rate_adaptive(base, x, y, eps, *thresholds,
                                               spec.rate_adaptive_margin, rng);
                    break;
                case ProtocolKind::Fixed:
                    report = run_fixed_session(base, spec.fixed_s, x, y, spec.llr_policy, rng);
                    break;
            }

            local.frames += 1;
            if (report.outcome == SessionOutcome::Success) {
                local.leaked_success += report.leaked_bits;
                local.attempts_success += report.attempts_used;
                std::size_t slot = static_cast<std::size_t>(report.attempts_used - 1);
                if (slot >= local.attempt_histogram.size())
                    local.attempt_histogram.resize(slot + 1, 0);
                local.attempt_histogram[slot] += 1;
                if (!report.payload_matches) local.undetected += 1;
            } else {
                local.failures += 1;
            }
        };

        std::uint64_t next_frame = 0;
        while (accum.failures < spec.target_errors && accum.frames < spec.max_frames) {
            const long batch = std::min(kBatch, spec.max_frames - accum.frames);
            std::vector<PointAccum> locals(static_cast<std::size_t>(threads));
            for (auto& l : locals) l.attempt_histogram.assign(static_cast<std::size_t>(base.attempts), 0);
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) {
                pool.emplace_back([&, t]() {
                    for (long i = t; i < batch; i += threads)
                        run_frame(next_frame + static_cast<std::uint64_t>(i), locals[static_cast<std::size_t>(t)]);
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& l : locals) accum.merge(l);
            next_frame += static_cast<std::uint64_t>(batch);
        }

        FerCurvePoint point;
        point.epsilon = eps;
        point.frames = accum.frames;
        point.failures = accum.failures;
        point.fer = accum.frames > 0 ? static_cast<double>(accum.failures) / accum.frames : 0.0;
        point.attempt_histogram = accum.attempt_histogram;
        point.undetected_errors = accum.undetected;
        const long successes = accum.frames - accum.failures;
        if (successes > 0) {
            point.avg_leaked_bits = static_cast<double>(accum.leaked_success) / successes;
            point.avg_efficiency = point.avg_leaked_bits / (m * binary_entropy(eps));
            point.attempts_mean = static_cast<double>(accum.attempts_success) / successes;
        }
        points.push_back(std::move(point));
    }
    return points;
}

std::vector<FerCurvePoint> run_model_sweep(const ExperimentSpec& spec, const ModelConfig& model,
                                           const ThresholdTable& thresholds) {
    std::vector<FerCurvePoint> points;
    const double r_min = (model.r0 - model.delta) / (1.0 - model.delta);
    for (double eps = spec.eps_start; eps <= spec.eps_stop + 1e-12; eps += spec.eps_step) {
        if (!(eps > 0.0 && eps < 0.5)) throw std::runtime_error("epsilon sweep outside (0, 0.5)");
        FerCurvePoint point;
        point.epsilon = eps;
        if (spec.protocol == ProtocolKind::RateAdaptive)
            point.avg_efficiency = predicted_rate_adaptive_efficiency(eps, model, thresholds, 1e-3);
        else
            point.avg_efficiency = predicted_average_efficiency(eps, model, thresholds);
        // Residual failure probability at the lowest schedule rate.
        point.fer = gaussian_fer(eps, model.n_effective, thresholds.epsilon_star(r_min));
        point.avg_leaked_bits = point.avg_efficiency * model.n_effective * binary_entropy(eps);
        points.push_back(point);
    }
    return points;
}

namespace {
std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(9) << v;
    return os.str();
}
}  // namespace

std::string csv_header() {
    return "epsilon,frames,failures,fer,avg_leaked_bits,avg_efficiency,attempts_mean,undetected,source";
}

std::string csv_line(const FerCurvePoint& point, const std::string& source) {
    std::ostringstream os;
    os << fmt(point.epsilon) << "," << point.frames << "," << point.failures << ","
       << fmt(point.fer) << "," << fmt(point.avg_leaked_bits) << ","
       << fmt(point.avg_efficiency) << "," << fmt(point.attempts_mean) << ","
       << point.undetected_errors << "," << source;
    return os.str();
}

void write_csv(const std::vector<FerCurvePoint>& points, const std::string& source,
               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    out << csv_header() << "\n";
    for (const auto& point : points) out << csv_line(point, source) << "\n";
}

}  // namespace recon
