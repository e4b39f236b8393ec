#ifndef RECON_CHANNEL_HPP
#define RECON_CHANNEL_HPP

#include <random>

#include "recon/bits.hpp"

namespace recon {

struct BscParams {
    double epsilon = 0.0;  // crossover probability, in [0, 0.5)
};

/// Flips each bit independently with probability epsilon. Deterministic
/// given the generator state.
Bits bsc_transmit(const Bits& word, const BscParams& params, std::mt19937_64& rng);

/// h(e) = -e log2 e - (1-e) log2 (1-e), with h(0) = h(1) = 0.
double binary_entropy(double epsilon);

/// Inverse of h on [0, 0.5]: returns e with h(e) = value. value in [0, 1].
double binary_entropy_inverse(double value);

}  // namespace recon

#endif
