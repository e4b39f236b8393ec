#ifndef RECON_RATE_ADAPT_HPP
#define RECON_RATE_ADAPT_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "recon/bits.hpp"
#include "recon/ldpc_code.hpp"

namespace recon {

/// Bookkeeping for delta modulation: d = p + s reserved positions out of n.
struct ModulationParams {
    int n = 0;
    int d = 0;
    double r0 = 0.0;

    double delta() const { return static_cast<double>(d) / n; }
};

enum class PatternStrategy : std::uint8_t { Intentional, Random };

struct PuncturingPattern {
    std::vector<int> positions;     // d distinct variable indices, selection order
    PatternStrategy strategy = PatternStrategy::Random;
    std::vector<int> reveal_order;  // permutation of positions
    bool fallback_warning = false;  // greedy saturated, tail chosen at random
};

/// One frame's layout: the payload indices (ascending) and the filler bits
/// Alice placed on the pattern positions.
struct FramePlan {
    PuncturingPattern pattern;
    std::vector<int> payload_positions;  // n - d indices, ascending
    Bits filler_values;                  // length d, aligned with pattern.positions
};

/// R = (R0 - sigma) / (1 - pi - sigma). Throws for pi + sigma >= 1.
double adapted_rate(double r0, double pi, double sigma);

/// [R_min, R_max] reachable at fixed delta.
std::pair<double, double> rate_range(double r0, double delta);

/// Picks d distinct variable positions. Intentional: greedy, preferring
/// variables with no already-punctured neighbor within distance two in the
/// Tanner graph, then low degree, ties by index; once every candidate
/// conflicts the remainder is drawn at random and fallback_warning is set.
/// reveal_order is the reverse of selection order.
PuncturingPattern select_pattern(const LdpcCode& code, int d, PatternStrategy strategy,
                                 std::uint64_t seed);

/// Embeds x (length n - d) into a length-n word: payload bits at the
/// non-pattern positions in order, uniform filler on the pattern positions.
FramePlan embed_frame(const Bits& x, const LdpcCode& code, const PuncturingPattern& pattern,
                      std::mt19937_64& rng, Bits* word_out);

/// Extracts the payload back out of a length-n word.
Bits extract_payload(const FramePlan& plan, const Bits& word);

// Pattern file: header "n d strategy", one position per line in reveal order.
void save_pattern(const PuncturingPattern& pattern, int n, const std::string& path);
PuncturingPattern load_pattern(const std::string& path, int expected_n);

}  // namespace recon

#endif
