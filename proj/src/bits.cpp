#include "recon/bits.hpp"

#include <stdexcept>

namespace recon {

namespace {
char nibble_to_hex(unsigned v) { return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10); }

unsigned hex_to_nibble(char c) {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw std::invalid_argument("bad hex digit");
}
}  // namespace

std::string bits_to_hex(const Bits& bits) {
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        unsigned v = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            v <<= 1;
            if (i + j < bits.size()) v |= bits[i + j] & 1u;
        }
        out.push_back(nibble_to_hex(v));
    }
    return out;
}

Bits hex_to_bits(const std::string& hex, std::size_t nbits) {
    if (hex.size() * 4 < nbits) throw std::invalid_argument("hex string too short");
    Bits out(nbits, 0);
    for (std::size_t i = 0; i < nbits; ++i) {
        unsigned v = hex_to_nibble(hex[i / 4]);
        out[i] = static_cast<std::uint8_t>((v >> (3 - i % 4)) & 1u);
    }
    return out;
}

}  // namespace recon
