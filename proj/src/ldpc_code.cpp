#include "recon/ldpc_code.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace recon {

std::size_t LdpcCode::num_edges() const {
    std::size_t e = 0;
    for (const auto& nb : check_neighbors) e += nb.size();
    return e;
}

void LdpcCode::rebuild_var_adjacency() {
    var_neighbors.assign(static_cast<std::size_t>(n), {});
    for (int c = 0; c < num_checks(); ++c)
        for (int v : check_neighbors[static_cast<std::size_t>(c)])
            var_neighbors[static_cast<std::size_t>(v)].push_back(c);
    for (auto& nb : var_neighbors) std::sort(nb.begin(), nb.end());
}

Bits syndrome(const LdpcCode& code, const Bits& word) {
    if (static_cast<int>(word.size()) != code.n)
        throw std::invalid_argument("syndrome: word length != n");
    Bits s(static_cast<std::size_t>(code.num_checks()), 0);
    for (int c = 0; c < code.num_checks(); ++c) {
        std::uint8_t parity = 0;
        for (int v : code.check_neighbors[static_cast<std::size_t>(c)])
            parity ^= word[static_cast<std::size_t>(v)];
        s[static_cast<std::size_t>(c)] = parity;
    }
    return s;
}

void save_code(const LdpcCode& code, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write code file: " + path);
    out << code.n << " " << code.k << " " << code.seed << "\n";
    for (const auto& nb : code.check_neighbors) {
        for (std::size_t i = 0; i < nb.size(); ++i) out << (i ? " " : "") << nb[i];
        out << "\n";
    }
}

LdpcCode load_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open code file: " + path);
    LdpcCode code;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("code file empty: " + path);
    {
        std::istringstream is(line);
        if (!(is >> code.n >> code.k >> code.seed))
            throw std::runtime_error("bad code file header: " + path);
    }
    code.check_neighbors.reserve(static_cast<std::size_t>(code.num_checks()));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::vector<int> nb;
        int v;
        while (is >> v) {
            if (v < 0 || v >= code.n) throw std::runtime_error("variable index out of range");
            nb.push_back(v);
        }
        code.check_neighbors.push_back(std::move(nb));
    }
    if (static_cast<int>(code.check_neighbors.size()) != code.num_checks())
        throw std::runtime_error("code file check count mismatch");
    code.rebuild_var_adjacency();
    return code;
}

}  // namespace recon
