#include "recon/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace recon {

namespace {

constexpr double kLlrClip = 64.0;

double clip(double x) { return std::clamp(x, -kLlrClip, kLlrClip); }

// atanh with its argument kept strictly inside (-1, 1).
double safe_atanh(double x) {
    constexpr double lim = 1.0 - 1e-15;
    return std::atanh(std::clamp(x, -lim, lim));
}

}  // namespace

DecoderOutcome decode_syndrome(const DecoderInput& input) {
    if (input.code == nullptr) throw std::invalid_argument("decode_syndrome: null code");
    const LdpcCode& code = *input.code;
    if (static_cast<int>(input.tags.size()) != code.n)
        throw std::invalid_argument("decode_syndrome: tag count != n");
    if (static_cast<int>(input.target_syndrome.size()) != code.num_checks())
        throw std::invalid_argument("decode_syndrome: syndrome length != n - k");
    if (!(input.llr_epsilon > 0.0 && input.llr_epsilon < 0.5))
        throw std::invalid_argument("decode_syndrome: llr_epsilon outside (0, 0.5)");

    const int n = code.n;
    const int m = code.num_checks();
    const double channel_mag = std::log((1.0 - input.llr_epsilon) / input.llr_epsilon);

    // Priors; LLR = log P(0)/P(1), so bit 1 maps to a negative prior.
    std::vector<double> prior(static_cast<std::size_t>(n), 0.0);
    for (int v = 0; v < n; ++v) {
        const PositionTag& tag = input.tags[static_cast<std::size_t>(v)];
        switch (tag.kind) {
            case PositionKind::Channel:
                prior[static_cast<std::size_t>(v)] = tag.bit ? -channel_mag : channel_mag;
                break;
            case PositionKind::Punctured:
                prior[static_cast<std::size_t>(v)] = 0.0;
                break;
            case PositionKind::Shortened:
                prior[static_cast<std::size_t>(v)] = tag.bit ? -kLlrClip : kLlrClip;
                break;
        }
    }

    // Flat edge storage: edges of check c occupy [offset[c], offset[c+1]).
    std::vector<std::size_t> offset(static_cast<std::size_t>(m) + 1, 0);
    for (int c = 0; c < m; ++c)
        offset[static_cast<std::size_t>(c) + 1] =
            offset[static_cast<std::size_t>(c)] + code.check_neighbors[static_cast<std::size_t>(c)].size();
    const std::size_t num_edges = offset.back();
    std::vector<int> edge_var(num_edges);
    for (int c = 0; c < m; ++c) {
        const auto& nb = code.check_neighbors[static_cast<std::size_t>(c)];
        for (std::size_t j = 0; j < nb.size(); ++j) edge_var[offset[static_cast<std::size_t>(c)] + j] = nb[j];
    }
    // Per-variable incoming edge ids.
    std::vector<std::vector<std::size_t>> var_edges(static_cast<std::size_t>(n));
    for (std::size_t e = 0; e < num_edges; ++e) var_edges[static_cast<std::size_t>(edge_var[e])].push_back(e);

    std::vector<double> v2c(num_edges), c2v(num_edges, 0.0);
    for (std::size_t e = 0; e < num_edges; ++e) v2c[e] = prior[static_cast<std::size_t>(edge_var[e])];

    std::vector<double> total(static_cast<std::size_t>(n));
    Bits word(static_cast<std::size_t>(n), 0);

    auto hard_decide = [&]() {
        for (int v = 0; v < n; ++v) {
            const PositionTag& tag = input.tags[static_cast<std::size_t>(v)];
            if (tag.kind == PositionKind::Shortened)
                word[static_cast<std::size_t>(v)] = tag.bit;  // shortened bits are fixed
            else
                word[static_cast<std::size_t>(v)] = total[static_cast<std::size_t>(v)] < 0.0 ? 1 : 0;
        }
    };

    auto syndrome_matches = [&]() {
        for (int c = 0; c < m; ++c) {
            std::uint8_t parity = 0;
            for (std::size_t e = offset[static_cast<std::size_t>(c)]; e < offset[static_cast<std::size_t>(c) + 1]; ++e)
                parity ^= word[static_cast<std::size_t>(edge_var[e])];
            if (parity != input.target_syndrome[static_cast<std::size_t>(c)]) return false;
        }
        return true;
    };

    DecoderOutcome outcome;

    // Iteration 0: hard decision straight from the priors.
    for (int v = 0; v < n; ++v) total[static_cast<std::size_t>(v)] = prior[static_cast<std::size_t>(v)];
    hard_decide();
    if (syndrome_matches()) {
        outcome.success = true;
        outcome.word = word;
        outcome.iterations_used = 0;
        return outcome;
    }

    std::vector<double> tanh_buf;
    for (int iter = 1; iter <= input.max_iterations; ++iter) {
        // Check pass: exact tanh rule with leave-one-out products; the
        // target syndrome bit flips the message sign.
        for (int c = 0; c < m; ++c) {
            const std::size_t begin = offset[static_cast<std::size_t>(c)];
            const std::size_t end = offset[static_cast<std::size_t>(c) + 1];
            const std::size_t deg = end - begin;
            tanh_buf.resize(deg);
            for (std::size_t j = 0; j < deg; ++j) tanh_buf[j] = std::tanh(0.5 * v2c[begin + j]);
            const double sign = input.target_syndrome[static_cast<std::size_t>(c)] ? -1.0 : 1.0;
            // prefix/suffix products avoid dividing by near-zero terms
            double suffix = 1.0;
            std::vector<double> suffixes(deg);
            for (std::size_t j = deg; j-- > 0;) {
                suffixes[j] = suffix;
                suffix *= tanh_buf[j];
            }
            double prefix = 1.0;
            for (std::size_t j = 0; j < deg; ++j) {
                const double prod = prefix * suffixes[j];
                c2v[begin + j] = clip(sign * 2.0 * safe_atanh(prod));
                prefix *= tanh_buf[j];
            }
        }

        // Variable pass.
        for (int v = 0; v < n; ++v) {
            double sum = prior[static_cast<std::size_t>(v)];
            for (std::size_t e : var_edges[static_cast<std::size_t>(v)]) sum += c2v[e];
            total[static_cast<std::size_t>(v)] = sum;
        }
        for (std::size_t e = 0; e < num_edges; ++e) {
            const int v = edge_var[e];
            if (input.tags[static_cast<std::size_t>(v)].kind == PositionKind::Shortened)
                v2c[e] = prior[static_cast<std::size_t>(v)];
            else
                v2c[e] = clip(total[static_cast<std::size_t>(v)] - c2v[e]);
        }

        hard_decide();
        if (syndrome_matches()) {
            outcome.success = true;
            outcome.word = word;
            outcome.iterations_used = iter;
            return outcome;
        }
    }

    outcome.success = false;
    outcome.iterations_used = input.max_iterations;
    outcome.word = word;
    int unsatisfied = 0;
    for (int c = 0; c < m; ++c) {
        std::uint8_t parity = 0;
        for (std::size_t e = offset[static_cast<std::size_t>(c)]; e < offset[static_cast<std::size_t>(c) + 1]; ++e)
            parity ^= word[static_cast<std::size_t>(edge_var[e])];
        if (parity != input.target_syndrome[static_cast<std::size_t>(c)]) unsatisfied += 1;
    }
    outcome.residual_unsatisfied_checks = unsatisfied;
    return outcome;
}

}  // namespace recon
