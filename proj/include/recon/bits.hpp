#ifndef RECON_BITS_HPP
#define RECON_BITS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace recon {

using Bits = std::vector<std::uint8_t>;

inline Bits xor_bits(const Bits& a, const Bits& b) {
    Bits out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

inline std::size_t hamming_distance(const Bits& a, const Bits& b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

inline std::size_t weight(const Bits& a) {
    std::size_t w = 0;
    for (auto bit : a) w += bit;
    return w;
}

// Hex packing for transcript payloads: bit 0 of the string goes to the MSB
// of the first nibble, so leading bits are human-visible in the dump.
std::string bits_to_hex(const Bits& bits);
Bits hex_to_bits(const std::string& hex, std::size_t nbits);

}  // namespace recon

#endif
