// Acceptance suite: one pass/fail line per criterion, exit 0 only if all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "recon/channel.hpp"
#include "recon/decoder.hpp"
#include "recon/degree_distribution.hpp"
#include "recon/fer_model.hpp"
#include "recon/harness.hpp"
#include "recon/peg.hpp"
#include "recon/rng.hpp"

using namespace recon;

namespace {

const std::string kDataDir = RECON_DATA_DIR;

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::cout << "criterion " << criterion << " " << (ok ? "PASS" : "FAIL") << ": " << what
              << std::endl;
    if (!ok) g_failures += 1;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

double fer_sigma(const FerCurvePoint& p) {
    return std::sqrt(std::max(p.fer * (1.0 - p.fer), 1.0 / p.frames) / p.frames);
}

// Mean and standard error of per-frame efficiency reconstructed from the
// per-attempt success histogram (leakage is a deterministic function of the
// attempt the session ended on).
struct EffStats {
    double mean = 0.0;
    double se = 0.0;
    long successes = 0;
};

EffStats blind_efficiency_stats(const FerCurvePoint& p, const LdpcCode& code, int d,
                                int delta_step) {
    EffStats st;
    const int m = code.n - d;
    const double denom = m * binary_entropy(p.epsilon);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < p.attempt_histogram.size(); ++i) {
        const long cnt = p.attempt_histogram[i];
        if (cnt == 0) continue;
        const int s = static_cast<int>(i) * delta_step;
        const double leaked = static_cast<double>(code.num_checks() - (d - s));
        sum += cnt * leaked;
        sum2 += cnt * leaked * leaked;
        st.successes += cnt;
    }
    if (st.successes == 0) return st;
    const double mean_leak = sum / st.successes;
    const double var_leak = std::max(0.0, sum2 / st.successes - mean_leak * mean_leak);
    st.mean = mean_leak / denom;
    st.se = std::sqrt(var_leak / st.successes) / denom;
    return st;
}

// --- criterion 1 -----------------------------------------------------------

void criterion_1() {
    const std::map<std::string, double> expect = {{"rate05.ens", 0.5},
                                                  {"rate06.ens", 0.6},
                                                  {"rate07.ens", 0.7},
                                                  {"rate08.ens", 0.8}};
    bool ok = true;
    std::ostringstream what;
    for (const auto& [file, rate] : expect) {
        auto dist = load_ensemble(kDataDir + "/ensembles/" + file);
        auto rep = validate_distribution(dist);
        bool good = rep.pass() && std::abs(rep.design_rate - rate) <= 0.01 &&
                    rep.edges_per_bit <= 6.06;
        ok = ok && good;
        what << file << " rate=" << rep.design_rate << " edges/bit=" << rep.edges_per_bit << " ";
    }
    report(1, ok, "four shipped ensembles validate; " + what.str());
}

// --- criterion 2 -----------------------------------------------------------

void criterion_2(const LdpcCode& code2000) {
    ExperimentSpec spec;
    spec.protocol = ProtocolKind::Fixed;
    spec.fixed_p = 0;
    spec.fixed_s = 0;
    spec.d = 0;
    spec.target_errors = 100;
    spec.root_seed = 20;
    spec.max_decoder_iterations = 120;
    PuncturingPattern empty;

    spec.eps_start = spec.eps_stop = 0.06;
    spec.eps_step = 1.0;
    spec.max_frames = 12800;
    auto low = run_fer_sweep(spec, code2000, empty, std::nullopt);

    spec.eps_start = spec.eps_stop = 0.102592;
    spec.max_frames = 2048;
    auto high = run_fer_sweep(spec, code2000, empty, std::nullopt);

    bool ok = low.size() == 1 && high.size() == 1 && low[0].fer <= 0.05 && high[0].fer >= 0.5;
    std::ostringstream what;
    what << "n=2000 waterfall bracket: fer(0.06)=" << (low.empty() ? -1.0 : low[0].fer)
         << " <= 0.05, fer(eps*)=" << (high.empty() ? -1.0 : high[0].fer) << " >= 0.5";
    report(2, ok, what.str());
}

// --- criterion 3 -----------------------------------------------------------

void criterion_3(const LdpcCode& code2000) {
    const double eps = 0.095;
    ExperimentSpec spec;
    spec.protocol = ProtocolKind::Fixed;
    spec.eps_start = spec.eps_stop = eps;
    spec.eps_step = 1.0;
    spec.target_errors = 1000000;  // fixed sample size per point
    spec.max_frames = 768;
    spec.root_seed = 30;
    spec.max_decoder_iterations = 80;

    // puncturing sweep: FER non-decreasing in p
    std::vector<double> p_fers;
    std::vector<double> p_sigmas;
    for (int p : {0, 100, 200}) {
        auto pattern = p == 0 ? PuncturingPattern{}
                              : select_pattern(code2000, p, PatternStrategy::Intentional, 1);
        spec.fixed_p = p;
        spec.fixed_s = 0;
        auto pts = run_fer_sweep(spec, code2000, pattern, std::nullopt);
        p_fers.push_back(pts[0].fer);
        p_sigmas.push_back(fer_sigma(pts[0]));
    }
    bool p_ok = true;
    for (std::size_t i = 1; i < p_fers.size(); ++i) {
        double sigma = std::sqrt(p_sigmas[i - 1] * p_sigmas[i - 1] + p_sigmas[i] * p_sigmas[i]);
        if (p_fers[i] < p_fers[i - 1] - 3.0 * sigma) p_ok = false;
    }

    // shortening sweep at fixed d: FER non-increasing in s
    auto pattern = select_pattern(code2000, 200, PatternStrategy::Intentional, 1);
    std::vector<double> s_fers, s_sigmas;
    for (int s : {0, 100, 200}) {
        spec.fixed_s = s;
        spec.fixed_p = 200 - s;
        auto pts = run_fer_sweep(spec, code2000, pattern, std::nullopt);
        s_fers.push_back(pts[0].fer);
        s_sigmas.push_back(fer_sigma(pts[0]));
    }
    bool s_ok = true;
    for (std::size_t i = 1; i < s_fers.size(); ++i) {
        double sigma = std::sqrt(s_sigmas[i - 1] * s_sigmas[i - 1] + s_sigmas[i] * s_sigmas[i]);
        if (s_fers[i] > s_fers[i - 1] + 3.0 * sigma) s_ok = false;
    }

    std::ostringstream what;
    what << "fer vs p (s=0) {";
    for (double f : p_fers) what << " " << f;
    what << " } non-decreasing; fer vs s (d=200) {";
    for (double f : s_fers) what << " " << f;
    what << " } non-increasing at 3 sigma";
    report(3, p_ok && s_ok, what.str());
}

// --- criterion 4 -----------------------------------------------------------

void criterion_4(const LdpcCode& code2000) {
    const int d = 200;
    auto pattern = select_pattern(code2000, d, PatternStrategy::Intentional, 1);
    auto table = scaled_threshold_table(0.5, 0.102592, 0.44, 0.56, 41);
    const std::vector<double> grid = {0.02, 0.05, 0.075, 0.085, 0.095};
    // left-of-A: below the first-attempt (all punctured) threshold every
    // protocol finishes in one shot with the same leakage
    const double eps_star_first = table.epsilon_star(0.5 / 0.9);

    ExperimentSpec spec;
    spec.eps_step = 1.0;
    spec.d = d;
    spec.target_errors = 1000000;
    spec.max_frames = 256;
    spec.root_seed = 40;
    spec.max_decoder_iterations = 60;

    bool ok = true;
    std::ostringstream what;
    for (double eps : grid) {
        spec.eps_start = spec.eps_stop = eps;

        // The baseline provisions against observed-channel fluctuation: the
        // selected rate must keep its threshold 3 sigma above the estimate,
        // the same FER-target reasoning the analytic model uses. A zero
        // margin would make the one-shot baseline an oracle no interactive
        // scheme can match.
        const int m = code2000.n - d;
        spec.rate_adaptive_margin = 3.0 * std::sqrt(eps * (1.0 - eps) / m);
        spec.protocol = ProtocolKind::RateAdaptive;
        spec.max_frames = 256;
        auto ra = run_fer_sweep(spec, code2000, pattern, table)[0];

        spec.protocol = ProtocolKind::Blind;
        spec.attempts = 3;
        auto b3 = run_fer_sweep(spec, code2000, pattern, std::nullopt)[0];
        auto b3_stats = blind_efficiency_stats(b3, code2000, d, d / 2);

        spec.attempts = d + 1;  // I = d regime: one reveal per failed attempt
        spec.max_frames = 128;  // up to d decodes per frame; keep it desk-scale
        auto bd = run_fer_sweep(spec, code2000, pattern, std::nullopt)[0];
        auto bd_stats = blind_efficiency_stats(bd, code2000, d, 1);

        if (b3_stats.successes == 0 || bd_stats.successes == 0 || ra.frames == ra.failures) {
            ok = false;
            what << " eps=" << eps << " starved;";
            continue;
        }
        // rate-adaptive leakage is deterministic at fixed (eps, table)
        double se_ra_b3 = 3.0 * b3_stats.se;
        double se_b3_bd = 3.0 * std::sqrt(b3_stats.se * b3_stats.se + bd_stats.se * bd_stats.se);
        bool order_ok = ra.avg_efficiency >= b3_stats.mean - se_ra_b3 &&
                        b3_stats.mean >= bd_stats.mean - se_b3_bd;
        bool coincide_ok = true;
        if (eps < eps_star_first - 0.02) {
            coincide_ok = std::abs(ra.avg_efficiency - b3_stats.mean) <=
                              std::max(3.0 * b3_stats.se, 1e-9) &&
                          std::abs(b3_stats.mean - bd_stats.mean) <= std::max(se_b3_bd, 1e-9);
        }
        if (!(order_ok && coincide_ok)) ok = false;
        what << " eps=" << eps << " f_ra=" << ra.avg_efficiency << " f_b3=" << b3_stats.mean
             << " f_bd=" << bd_stats.mean << (order_ok && coincide_ok ? "" : " VIOLATION") << ";";
    }
    report(4, ok, "efficiency ordering rate_adaptive >= blind(3) >= blind(I=d):" + what.str());
}

// --- criterion 5 -----------------------------------------------------------

void criterion_5() {
    auto dist = load_ensemble(kDataDir + "/ensembles/rate05.ens");
    auto code = build_peg(400, dist, 2);
    const int d = 40, I = 3;
    auto pattern = select_pattern(code, d, PatternStrategy::Intentional, 1);
    ProtocolConfig config;
    config.code = &code;
    config.pattern = pattern;
    config.d = d;
    config.attempts = I;
    config.max_decoder_iterations = 80;
    config.validate();

    const int m = code.n - d;
    const double r0 = code.rate();
    bool identity_ok = true;
    long total_leaked = 0;
    std::vector<long> attempt_counts(static_cast<std::size_t>(I), 0);
    long successes = 0;
    const int sessions = 300;
    for (int t = 0; t < sessions; ++t) {
        auto rng = make_rng(derive_seed(50, 0, static_cast<std::uint64_t>(t)));
        Bits x(static_cast<std::size_t>(m));
        for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1u);
        auto y = bsc_transmit(x, BscParams{0.07}, rng);
        auto rep = run_blind_session(config, x, y, LlrPolicy{}, rng);
        const double lhs = static_cast<double>(rep.leaked_bits) / m;
        const double rhs = 1.0 - adapted_rate(r0, static_cast<double>(rep.p_final) / code.n,
                                              static_cast<double>(rep.s_final) / code.n);
        if (std::abs(lhs - rhs) > 1e-12) identity_ok = false;
        if (rep.outcome == SessionOutcome::Success) {
            successes += 1;
            total_leaked += rep.leaked_bits;
            attempt_counts[static_cast<std::size_t>(rep.attempts_used - 1)] += 1;
        }
    }
    // batch average leakage vs the alpha-weighted average rate
    bool batch_ok = successes > 0;
    if (batch_ok) {
        double avg_leak = static_cast<double>(total_leaked) / successes;
        double predicted = 0.0;
        for (int i = 0; i < I; ++i) {
            const int s = i * config.delta_step;
            const double r_i = adapted_rate(r0, static_cast<double>(d - s) / code.n,
                                            static_cast<double>(s) / code.n);
            predicted += (static_cast<double>(attempt_counts[static_cast<std::size_t>(i)]) /
                          successes) *
                         (1.0 - r_i) * m;
        }
        batch_ok = std::abs(avg_leak - predicted) <= 1e-9 * std::max(1.0, avg_leak);
    }
    std::ostringstream what;
    what << "per-session leaked/m = 1 - adapted_rate over " << sessions
         << " sessions; batch average matches the alpha-weighted prediction (" << successes
         << " successes)";
    report(5, identity_ok && batch_ok, what.str());
}

// --- criterion 6 -----------------------------------------------------------

BlindSchedule uniform_schedule(double r1, double beta, const std::vector<double>& fers) {
    BlindSchedule s;
    s.beta = beta;
    const int I = static_cast<int>(fers.size());
    for (int i = 0; i < I; ++i)
        s.rates.push_back(I >= 2 ? r1 - beta * i / (I - 1) : r1);
    s.fers = fers;
    return s;
}

void criterion_6() {
    auto rng = make_rng(60);
    std::uniform_real_distribution<double> ur(0.3, 0.9), ub(0.01, 0.3), u(0.0, 1.0);
    std::uniform_int_distribution<int> ui(2, 10);
    bool forms_ok = true;
    // average_rate cross-checks its two closed forms at 1e-12 internally and
    // throws on disagreement
    for (int trial = 0; trial < 1000; ++trial) {
        int I = ui(rng);
        std::vector<double> fers(static_cast<std::size_t>(I));
        double prev = 0.999;
        for (auto& f : fers) {
            f = prev * u(rng);
            prev = f;
        }
        try {
            average_rate(uniform_schedule(ur(rng), ub(rng), fers));
        } catch (const std::exception&) {
            forms_ok = false;
        }
    }
    bool approx_ok = true;
    for (int trial = 0; trial < 300; ++trial) {
        double fi = u(rng) * 1e-3;
        std::vector<double> fers = {u(rng), u(rng) * 0.5, fi};
        std::sort(fers.rbegin(), fers.rend());
        auto s = uniform_schedule(ur(rng), ub(rng), fers);
        double bound = s.beta * fers.back() / (1.0 - fers.back()) + s.beta * fers.back();
        if (std::abs(approx_average_rate(s) - average_rate(s)) > bound + 1e-15) approx_ok = false;
    }
    report(6, forms_ok && approx_ok,
           "two average-rate forms agree to 1e-12 on 1000 schedules; first-order form within "
           "the beta*F(I) bound at F(I) <= 1e-3");
}

// --- criterion 7 -----------------------------------------------------------

void criterion_7() {
    bool window_ok = true;
    for (double eps = 0.05; eps <= 0.1501; eps += 0.002) {
        if (std::abs(gaussian_fer(eps, 2000, 0.102592) - binomial_fer(eps, 2000, 0.102592)) >
            0.02)
            window_ok = false;
    }
    bool center_ok = std::abs(gaussian_fer(0.102592, 2000, 0.102592) - 0.5) <= 1e-3;
    report(7, window_ok && center_ok,
           "Gaussian vs binomial within 0.02 over the waterfall window (N=2000); Gaussian "
           "FER(eps*) = 0.5 within 1e-3");
}

// --- criterion 8 -----------------------------------------------------------

std::optional<Bits> coset_min_distance(const LdpcCode& code, const Bits& target, const Bits& y) {
    std::optional<Bits> best;
    std::size_t best_dist = y.size() + 1;
    bool unique = false;
    for (std::uint32_t w = 0; w < (1u << code.n); ++w) {
        Bits word(static_cast<std::size_t>(code.n));
        for (int i = 0; i < code.n; ++i) word[static_cast<std::size_t>(i)] = (w >> i) & 1u;
        if (syndrome(code, word) != target) continue;
        std::size_t dist = hamming_distance(word, y);
        if (dist < best_dist) {
            best_dist = dist;
            best = word;
            unique = true;
        } else if (dist == best_dist) {
            unique = false;
        }
    }
    if (!unique) return std::nullopt;
    return best;
}

void criterion_8() {
    DegreeDistribution reg;
    reg.lambda_coeffs = {{3, 1.0}};
    reg.rho_coeffs = {{6, 1.0}};
    reg.nominal_rate = 0.5;
    reg.threshold = 0.084;
    auto code = build_peg(16, reg, 1);
    auto rng = make_rng(80);
    Bits x(16);
    for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1u);
    Bits target = syndrome(code, x);

    bool ok = true;
    int compared = 0;
    auto try_pattern = [&](const Bits& error) {
        Bits y = xor_bits(x, error);
        auto oracle = coset_min_distance(code, target, y);
        if (!oracle.has_value()) return;
        DecoderInput in;
        in.code = &code;
        in.target_syndrome = target;
        in.tags.resize(16);
        for (std::size_t i = 0; i < 16; ++i) in.tags[i] = {PositionKind::Channel, y[i]};
        in.llr_epsilon = 0.05;
        in.max_iterations = 100;
        auto out = decode_syndrome(in);
        if (!out.success) return;  // BP non-convergence is outside the claim
        if (syndrome(code, out.word) != target) ok = false;
        compared += 1;
        if (out.word != *oracle) ok = false;
    };

    Bits none(16, 0);
    try_pattern(none);
    for (int i = 0; i < 16; ++i) {
        Bits e(16, 0);
        e[static_cast<std::size_t>(i)] = 1;
        try_pattern(e);
    }
    for (int i = 0; i < 16; ++i)
        for (int j = i + 1; j < 16; ++j) {
            Bits e(16, 0);
            e[static_cast<std::size_t>(i)] = 1;
            e[static_cast<std::size_t>(j)] = 1;
            try_pattern(e);
        }
    std::ostringstream what;
    what << "n=16 BP matches brute-force coset decoding on " << compared
         << " weight<=2 patterns with unique minima";
    report(8, ok && compared >= 10, what.str());
}

// --- criterion 9 -----------------------------------------------------------

void criterion_9() {
    auto dist = load_ensemble(kDataDir + "/ensembles/rate05.ens");
    auto code = build_peg(400, dist, 2);
    const int d = 40;
    auto pattern = select_pattern(code, d, PatternStrategy::Intentional, 1);

    auto count_alice = [](const SessionReport& rep, MessageType type) {
        int c = 0;
        for (const auto& msg : rep.transcript)
            if (msg.type == type) c += 1;
        return c;
    };

    bool bound_ok = true;
    for (int attempts : {1, 3, 5}) {
        ProtocolConfig config;
        config.code = &code;
        config.pattern = pattern;
        config.d = d;
        config.attempts = attempts;
        config.max_decoder_iterations = 60;
        config.validate();
        for (int t = 0; t < 40; ++t) {
            auto rng = make_rng(derive_seed(90, static_cast<std::uint64_t>(attempts),
                                            static_cast<std::uint64_t>(t)));
            Bits x(static_cast<std::size_t>(code.n - d));
            for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1u);
            auto y = bsc_transmit(x, BscParams{0.09}, rng);
            auto rep = run_blind_session(config, x, y, LlrPolicy{}, rng);
            if (count_alice(rep, MessageType::Syndrome) != 1) bound_ok = false;
            if (count_alice(rep, MessageType::Reveal) > attempts - 1) bound_ok = false;
        }
    }

    // walkthrough configuration: m = 8, d = 8, Delta = 4, I = 3; find a noisy
    // session needing all three attempts and check Alice's message sequence
    DegreeDistribution reg;
    reg.lambda_coeffs = {{3, 1.0}};
    reg.rho_coeffs = {{6, 1.0}};
    reg.nominal_rate = 0.5;
    reg.threshold = 0.084;
    auto small = build_peg(16, reg, 1);
    auto small_pattern = select_pattern(small, 8, PatternStrategy::Intentional, 1);
    ProtocolConfig small_config;
    small_config.code = &small;
    small_config.pattern = small_pattern;
    small_config.d = 8;
    small_config.attempts = 3;
    small_config.max_decoder_iterations = 60;
    small_config.validate();
    bool walkthrough_ok = false;
    for (std::uint64_t t = 0; t < 400 && !walkthrough_ok; ++t) {
        auto rng = make_rng(derive_seed(91, 0, t));
        Bits x(8);
        for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1u);
        auto y = bsc_transmit(x, BscParams{0.12}, rng);
        auto rep = run_blind_session(small_config, x, y, LlrPolicy{}, rng);
        if (rep.attempts_used != 3) continue;
        std::vector<Message> alice;
        for (const auto& msg : rep.transcript)
            if (msg.type != MessageType::Verdict) alice.push_back(msg);
        walkthrough_ok = alice.size() == 3 && alice[0].type == MessageType::Syndrome &&
                         alice[1].type == MessageType::Reveal && alice[1].reveals.size() == 4 &&
                         alice[2].type == MessageType::Reveal && alice[2].reveals.size() == 4;
    }
    report(9, bound_ok && walkthrough_ok,
           "one syndrome and at most I-1 reveals per session; m=8 d=8 Delta=4 walkthrough "
           "produces the three-message sequence syndrome + two reveals of four");
}

// --- criterion 10 ----------------------------------------------------------

void criterion_10() {
    auto dist = load_ensemble(kDataDir + "/ensembles/rate05.ens");
    auto code = build_peg(400, dist, 2);
    auto pattern = select_pattern(code, 40, PatternStrategy::Intentional, 1);
    ExperimentSpec spec;
    spec.protocol = ProtocolKind::Blind;
    spec.attempts = 3;
    spec.d = 40;
    spec.eps_start = 0.05;
    spec.eps_stop = 0.09;
    spec.eps_step = 0.02;
    spec.target_errors = 10;
    spec.max_frames = 512;
    spec.root_seed = 100;
    spec.max_decoder_iterations = 60;

    auto to_csv = [](const std::vector<FerCurvePoint>& pts) {
        std::ostringstream os;
        os << csv_header() << "\n";
        for (const auto& p : pts) os << csv_line(p, "simulation") << "\n";
        return os.str();
    };
    spec.threads = 1;
    auto a = to_csv(run_fer_sweep(spec, code, pattern, std::nullopt));
    spec.threads = 4;
    auto b = to_csv(run_fer_sweep(spec, code, pattern, std::nullopt));
    report(10, a == b, "same root seed at 1 and 4 worker threads emits byte-identical CSV");
}

}  // namespace

int main() {
    Timer total;
    criterion_1();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_5();
    criterion_9();
    criterion_10();

    auto dist = load_ensemble(kDataDir + "/ensembles/rate05.ens");
    auto code2000 = build_peg(2000, dist, 1);
    criterion_2(code2000);
    criterion_3(code2000);
    criterion_4(code2000);

    std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT") << " ("
              << total.seconds() << " s)" << std::endl;
    return g_failures == 0 ? 0 : 1;
}
