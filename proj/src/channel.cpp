#include "recon/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace recon {

Bits bsc_transmit(const Bits& word, const BscParams& params, std::mt19937_64& rng) {
    if (params.epsilon < 0.0 || params.epsilon >= 0.5)
        throw std::invalid_argument("bsc_transmit: epsilon outside [0, 0.5)");
    Bits out = word;
    if (params.epsilon == 0.0) return out;
    std::bernoulli_distribution flip(params.epsilon);
    for (auto& bit : out)
        if (flip(rng)) bit ^= 1u;
    return out;
}

double binary_entropy(double epsilon) {
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
    if (epsilon == 0.0 || epsilon == 1.0) return 0.0;
    return -epsilon * std::log2(epsilon) - (1.0 - epsilon) * std::log2(1.0 - epsilon);
}

double binary_entropy_inverse(double value) {
    if (value < 0.0 || value > 1.0)
        throw std::invalid_argument("binary_entropy_inverse: argument outside [0, 1]");
    if (value == 0.0) return 0.0;
    if (value == 1.0) return 0.5;
    double lo = 0.0, hi = 0.5;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (binary_entropy(mid) < value)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace recon
