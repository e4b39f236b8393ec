#include "recon/rate_adapt.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "recon/rng.hpp"

namespace recon {

double adapted_rate(double r0, double pi, double sigma) {
    if (pi < 0.0 || sigma < 0.0 || pi + sigma >= 1.0)
        throw std::invalid_argument("adapted_rate: need 0 <= pi + sigma < 1");
    return (r0 - sigma) / (1.0 - pi - sigma);
}

std::pair<double, double> rate_range(double r0, double delta) {
    if (delta < 0.0 || delta >= 1.0) throw std::invalid_argument("rate_range: delta outside [0, 1)");
    return {(r0 - delta) / (1.0 - delta), r0 / (1.0 - delta)};
}

PuncturingPattern select_pattern(const LdpcCode& code, int d, PatternStrategy strategy,
                                 std::uint64_t seed) {
    if (d < 0 || d > code.num_checks())
        throw std::invalid_argument("select_pattern: need 0 <= d <= n - k");
    PuncturingPattern pattern;
    pattern.strategy = strategy;
    auto rng = make_rng(seed);

    std::vector<std::uint8_t> taken(static_cast<std::size_t>(code.n), 0);
    if (strategy == PatternStrategy::Random) {
        std::vector<int> all(static_cast<std::size_t>(code.n));
        for (int v = 0; v < code.n; ++v) all[static_cast<std::size_t>(v)] = v;
        std::shuffle(all.begin(), all.end(), rng);
        pattern.positions.assign(all.begin(), all.begin() + d);
    } else {
        // Greedy: fewest punctured neighbors within distance two, then low
        // degree, then lowest index. conflict[v] counts punctured variables
        // sharing a check with v.
        std::vector<int> conflict(static_cast<std::size_t>(code.n), 0);
        bool saturated = false;
        for (int picked = 0; picked < d; ++picked) {
            int best = -1;
            long best_key_conflict = std::numeric_limits<long>::max();
            std::size_t best_key_degree = 0;
            for (int v = 0; v < code.n; ++v) {
                if (taken[static_cast<std::size_t>(v)]) continue;
                long kc = conflict[static_cast<std::size_t>(v)];
                std::size_t kd = code.var_neighbors[static_cast<std::size_t>(v)].size();
                if (best == -1 || kc < best_key_conflict ||
                    (kc == best_key_conflict && kd < best_key_degree)) {
                    best = v;
                    best_key_conflict = kc;
                    best_key_degree = kd;
                }
            }
            if (best_key_conflict > 0 && !saturated) {
                // Every remaining candidate touches a punctured check
                // neighborhood; the tail is no longer "intentional".
                saturated = true;
                pattern.fallback_warning = true;
                std::vector<int> rest;
                for (int v = 0; v < code.n; ++v)
                    if (!taken[static_cast<std::size_t>(v)]) rest.push_back(v);
                std::shuffle(rest.begin(), rest.end(), rng);
                for (int i = 0; picked < d; ++picked, ++i) pattern.positions.push_back(rest[static_cast<std::size_t>(i)]);
                break;
            }
            pattern.positions.push_back(best);
            taken[static_cast<std::size_t>(best)] = 1;
            for (int c : code.var_neighbors[static_cast<std::size_t>(best)])
                for (int w : code.check_neighbors[static_cast<std::size_t>(c)])
                    conflict[static_cast<std::size_t>(w)] += 1;
        }
    }

    // Hardest-to-recover symbols (the last, most constrained picks) are
    // revealed first.
    pattern.reveal_order.assign(pattern.positions.rbegin(), pattern.positions.rend());
    return pattern;
}

FramePlan embed_frame(const Bits& x, const LdpcCode& code, const PuncturingPattern& pattern,
                      std::mt19937_64& rng, Bits* word_out) {
    const int n = code.n;
    const int d = static_cast<int>(pattern.positions.size());
    if (static_cast<int>(x.size()) != n - d)
        throw std::invalid_argument("embed_frame: payload length != n - d");

    FramePlan plan;
    plan.pattern = pattern;
    std::vector<std::uint8_t> is_pattern(static_cast<std::size_t>(n), 0);
    for (int p : pattern.positions) is_pattern[static_cast<std::size_t>(p)] = 1;
    plan.payload_positions.reserve(static_cast<std::size_t>(n - d));
    for (int v = 0; v < n; ++v)
        if (!is_pattern[static_cast<std::size_t>(v)]) plan.payload_positions.push_back(v);

    plan.filler_values.resize(static_cast<std::size_t>(d));
    for (auto& bit : plan.filler_values) bit = static_cast<std::uint8_t>(rng() & 1u);

    if (word_out != nullptr) {
        word_out->assign(static_cast<std::size_t>(n), 0);
        for (std::size_t i = 0; i < plan.payload_positions.size(); ++i)
            (*word_out)[static_cast<std::size_t>(plan.payload_positions[i])] = x[i];
        for (std::size_t i = 0; i < pattern.positions.size(); ++i)
            (*word_out)[static_cast<std::size_t>(pattern.positions[i])] = plan.filler_values[i];
    }
    return plan;
}

Bits extract_payload(const FramePlan& plan, const Bits& word) {
    Bits x(plan.payload_positions.size());
    for (std::size_t i = 0; i < plan.payload_positions.size(); ++i)
        x[i] = word[static_cast<std::size_t>(plan.payload_positions[i])];
    return x;
}

void save_pattern(const PuncturingPattern& pattern, int n, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write pattern file: " + path);
    out << n << " " << pattern.positions.size() << " "
        << (pattern.strategy == PatternStrategy::Intentional ? "intentional" : "random") << "\n";
    for (int p : pattern.reveal_order) out << p << "\n";
}

PuncturingPattern load_pattern(const std::string& path, int expected_n) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pattern file: " + path);
    int n = 0, d = 0;
    std::string strategy;
    if (!(in >> n >> d >> strategy)) throw std::runtime_error("bad pattern file header: " + path);
    if (expected_n != 0 && n != expected_n)
        throw std::runtime_error("pattern file n mismatch: " + path);
    PuncturingPattern pattern;
    pattern.strategy = strategy == "intentional" ? PatternStrategy::Intentional : PatternStrategy::Random;
    pattern.reveal_order.reserve(static_cast<std::size_t>(d));
    int pos;
    while (in >> pos) {
        if (pos < 0 || pos >= n) throw std::runtime_error("pattern position out of range");
        pattern.reveal_order.push_back(pos);
    }
    if (static_cast<int>(pattern.reveal_order.size()) != d)
        throw std::runtime_error("pattern file position count mismatch");
    pattern.positions.assign(pattern.reveal_order.rbegin(), pattern.reveal_order.rend());
    return pattern;
}

}  // namespace recon
