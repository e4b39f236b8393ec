#ifndef RECON_RNG_HPP
#define RECON_RNG_HPP

#include <cstdint>
#include <random>

namespace recon {

// splitmix64, the usual seeding mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a root seed and one or two
// indices. Frames get hash(root, point, frame) so results do not depend
// on worker scheduling.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(mix64(root) ^ a) ^ b);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(mix64(seed));
}

}  // namespace recon

#endif
