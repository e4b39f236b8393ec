#ifndef RECON_PEG_HPP
#define RECON_PEG_HPP

#include <cstdint>

#include "recon/degree_distribution.hpp"
#include "recon/ldpc_code.hpp"

namespace recon {

/// Progressive edge growth construction: edges are placed one at a time,
/// each to a check node at maximal graph distance from the variable
/// (girth-maximizing), lowest current degree first, remaining ties broken
/// by the seeded generator. Deterministic for fixed (n, dist, seed).
///
/// Node degree targets are apportioned from the edge-perspective fractions
/// by largest remainder; the check side absorbs the edge-count mismatch by
/// shifting nodes between its top two degree classes.
///
/// Throws std::invalid_argument for n < 16 and std::runtime_error when the
/// degree sequence is infeasible.
LdpcCode build_peg(int n, const DegreeDistribution& dist, std::uint64_t seed);

}  // namespace recon

#endif
