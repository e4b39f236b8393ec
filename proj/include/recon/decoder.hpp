#ifndef RECON_DECODER_HPP
#define RECON_DECODER_HPP

#include <cstdint>
#include <vector>

#include "recon/bits.hpp"
#include "recon/ldpc_code.hpp"

namespace recon {

enum class PositionKind : std::uint8_t { Channel, Punctured, Shortened };

/// Per-position prior tag. Channel carries the observed bit, Shortened the
/// bit both parties know; Punctured has no information (LLR 0).
struct PositionTag {
    PositionKind kind = PositionKind::Punctured;
    std::uint8_t bit = 0;
};

struct DecoderInput {
    const LdpcCode* code = nullptr;
    Bits target_syndrome;              // length n - k
    std::vector<PositionTag> tags;     // length n
    double llr_epsilon = 0.05;         // crossover assumed for channel LLRs
    int max_iterations = 200;
};

struct DecoderOutcome {
    bool success = false;
    Bits word;                         // length n, valid on success
    int iterations_used = 0;
    int residual_unsatisfied_checks = 0;
};

/// Sum-product syndrome decoder with flooding schedule and exact tanh
/// check update. Shortened priors are saturated at +/-64 in natural-log
/// LLR units; all messages are clipped to the same range. Stops as soon
/// as the hard decision matches the target syndrome.
DecoderOutcome decode_syndrome(const DecoderInput& input);

}  // namespace recon

#endif
