#ifndef RECON_LDPC_CODE_HPP
#define RECON_LDPC_CODE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "recon/bits.hpp"

namespace recon {

/// Concrete sparse bipartite parity-check graph. Immutable after
/// construction; safe to share across threads.
struct LdpcCode {
    int n = 0;  // variable nodes (block length)
    int k = 0;  // information symbols; n - k check nodes
    std::uint64_t seed = 0;

    // check_neighbors[c] lists variable indices adjacent to check c, ascending.
    std::vector<std::vector<int>> check_neighbors;
    // var_neighbors[v] lists check indices adjacent to variable v, ascending.
    std::vector<std::vector<int>> var_neighbors;

    int num_checks() const { return n - k; }
    std::size_t num_edges() const;
    double rate() const { return static_cast<double>(k) / n; }

    /// Rebuilds var_neighbors from check_neighbors.
    void rebuild_var_adjacency();
};

/// s(x) = H x over GF(2): component c is the parity of the word bits on
/// check c's neighborhood.
Bits syndrome(const LdpcCode& code, const Bits& word);

// Code file: header "n k seed", then one line per check node with its
// variable indices (0-based, ascending). Round-trip is lossless.
void save_code(const LdpcCode& code, const std::string& path);
LdpcCode load_code(const std::string& path);

}  // namespace recon

#endif
