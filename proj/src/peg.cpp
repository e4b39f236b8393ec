#include "recon/peg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include "recon/rng.hpp"

namespace recon {

namespace {

// Largest-remainder apportionment of `total` nodes onto degree classes with
// node-perspective fractions derived from the edge-perspective ones.
std::vector<std::pair<int, int>> apportion_nodes(const std::vector<std::pair<int, double>>& coeffs,
                                                 int total) {
    double inv_sum = 0.0;
    for (const auto& [deg, frac] : coeffs) inv_sum += frac / deg;
    std::vector<int> counts(coeffs.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    int assigned = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        double ideal = (coeffs[i].second / coeffs[i].first) / inv_sum * total;
        counts[i] = static_cast<int>(std::floor(ideal));
        assigned += counts[i];
        remainders.emplace_back(ideal - counts[i], i);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int j = 0; j < total - assigned; ++j) counts[remainders[static_cast<std::size_t>(j)].second] += 1;
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (counts[i] > 0) out.emplace_back(coeffs[i].first, counts[i]);
    return out;
}

long total_edges(const std::vector<std::pair<int, int>>& classes) {
    long e = 0;
    for (const auto& [deg, cnt] : classes) e += static_cast<long>(deg) * cnt;
    return e;
}

// Shifts check nodes between the largest degree class and the class one
// degree below it (created on demand) until the check side carries exactly
// `target` edges.
void fix_edge_total(std::vector<std::pair<int, int>>& classes, long target) {
    long diff = target - total_edges(classes);
    if (diff == 0) return;
    std::sort(classes.begin(), classes.end());
    int top = classes.back().first;
    auto ensure_class = [&classes](int deg) {
        for (auto& [d, c] : classes)
            if (d == deg) return;
        classes.emplace_back(deg, 0);
        std::sort(classes.begin(), classes.end());
    };
    auto get = [&classes](int deg) -> int& {
        for (auto& [d, c] : classes)
            if (d == deg) return c;
        throw std::logic_error("degree class missing");
    };
    if (diff > 0) {
        // Raise nodes from top-1 to top, or grow a top+1 class.
        ensure_class(top - 1);
        while (diff > 0) {
            if (get(top - 1) > 0) {
                get(top - 1) -= 1;
                get(top) += 1;
            } else {
                ensure_class(top + 1);
                get(top) -= 1;
                get(top + 1) += 1;
                top += 1;
                ensure_class(top - 1);
            }
            diff -= 1;
        }
    } else {
        if (top - 1 < 2) throw std::runtime_error("cannot lower check degrees below 2");
        ensure_class(top - 1);
        while (diff < 0) {
            if (get(top) == 0) throw std::runtime_error("check degree adjustment exhausted");
            get(top) -= 1;
            get(top - 1) += 1;
            diff += 1;
        }
    }
    classes.erase(std::remove_if(classes.begin(), classes.end(),
                                 [](const auto& p) { return p.second == 0; }),
                  classes.end());
}

}  // namespace

LdpcCode build_peg(int n, const DegreeDistribution& dist, std::uint64_t seed) {
    if (n < 16) throw std::invalid_argument("build_peg: n must be >= 16");
    LdpcCode code;
    code.n = n;
    code.k = static_cast<int>(std::lround(n * dist.nominal_rate));
    code.seed = seed;
    const int m = code.num_checks();
    if (m < 1) throw std::runtime_error("build_peg: no check nodes");

    auto var_classes = apportion_nodes(dist.lambda_coeffs, n);
    auto chk_classes = apportion_nodes(dist.rho_coeffs, m);
    const long edges = total_edges(var_classes);
    fix_edge_total(chk_classes, edges);
    if (edges > static_cast<long>(n) * m)
        throw std::runtime_error("build_peg: infeasible degree sequence");

    // Per-node degree targets, ascending degree with node index.
    std::vector<int> var_degree;
    var_degree.reserve(static_cast<std::size_t>(n));
    std::sort(var_classes.begin(), var_classes.end());
    for (const auto& [deg, cnt] : var_classes)
        for (int i = 0; i < cnt; ++i) var_degree.push_back(deg);
    std::vector<int> chk_capacity;
    chk_capacity.reserve(static_cast<std::size_t>(m));
    std::sort(chk_classes.begin(), chk_classes.end());
    for (const auto& [deg, cnt] : chk_classes)
        for (int i = 0; i < cnt; ++i) chk_capacity.push_back(deg);
    if (static_cast<int>(chk_capacity.size()) != m)
        throw std::runtime_error("build_peg: check apportionment mismatch");

    code.check_neighbors.assign(static_cast<std::size_t>(m), {});
    code.var_neighbors.assign(static_cast<std::size_t>(n), {});
    std::vector<int> chk_degree(static_cast<std::size_t>(m), 0);
    auto rng = make_rng(seed);

    std::vector<int> dist_to_check(static_cast<std::size_t>(m));
    std::vector<int> var_seen(static_cast<std::size_t>(n));
    constexpr int kUnreached = std::numeric_limits<int>::max();

    // BFS from v over the current graph; fills dist_to_check.
    auto bfs = [&](int v) {
        std::fill(dist_to_check.begin(), dist_to_check.end(), kUnreached);
        std::fill(var_seen.begin(), var_seen.end(), 0);
        var_seen[static_cast<std::size_t>(v)] = 1;
        std::vector<int> frontier = {v};
        int depth = 0;
        while (!frontier.empty()) {
            depth += 1;
            std::vector<int> next_checks;
            for (int fv : frontier)
                for (int c : code.var_neighbors[static_cast<std::size_t>(fv)])
                    if (dist_to_check[static_cast<std::size_t>(c)] == kUnreached) {
                        dist_to_check[static_cast<std::size_t>(c)] = depth;
                        next_checks.push_back(c);
                    }
            depth += 1;
            std::vector<int> next_vars;
            for (int c : next_checks)
                for (int nv : code.check_neighbors[static_cast<std::size_t>(c)])
                    if (!var_seen[static_cast<std::size_t>(nv)]) {
                        var_seen[static_cast<std::size_t>(nv)] = 1;
                        next_vars.push_back(nv);
                    }
            frontier = std::move(next_vars);
        }
    };

    std::vector<std::uint8_t> adjacent(static_cast<std::size_t>(m));
    for (int v = 0; v < n; ++v) {
        const int deg = var_degree[static_cast<std::size_t>(v)];
        for (int t = 0; t < deg; ++t) {
            std::fill(adjacent.begin(), adjacent.end(), 0);
            for (int c : code.var_neighbors[static_cast<std::size_t>(v)])
                adjacent[static_cast<std::size_t>(c)] = 1;
            if (t == 0)
                std::fill(dist_to_check.begin(), dist_to_check.end(), kUnreached);
            else
                bfs(v);
            // Candidates: free capacity, no duplicate edge, maximal distance,
            // then minimal current degree.
            long best_dist = -1;
            int best_deg = std::numeric_limits<int>::max();
            std::vector<int> best;
            for (int c = 0; c < m; ++c) {
                if (adjacent[static_cast<std::size_t>(c)]) continue;
                if (chk_degree[static_cast<std::size_t>(c)] >= chk_capacity[static_cast<std::size_t>(c)]) continue;
                long dist_c = dist_to_check[static_cast<std::size_t>(c)] == kUnreached
                                  ? std::numeric_limits<long>::max()
                                  : dist_to_check[static_cast<std::size_t>(c)];
                if (dist_c > best_dist) {
                    best_dist = dist_c;
                    best_deg = chk_degree[static_cast<std::size_t>(c)];
                    best = {c};
                } else if (dist_c == best_dist) {
                    int cd = chk_degree[static_cast<std::size_t>(c)];
                    if (cd < best_deg) {
                        best_deg = cd;
                        best = {c};
                    } else if (cd == best_deg) {
                        best.push_back(c);
                    }
                }
            }
            if (best.empty()) throw std::runtime_error("build_peg: wedged, no placeable check");
            int pick = best[static_cast<std::size_t>(rng() % best.size())];
            code.var_neighbors[static_cast<std::size_t>(v)].push_back(pick);
            code.check_neighbors[static_cast<std::size_t>(pick)].push_back(v);
            chk_degree[static_cast<std::size_t>(pick)] += 1;
        }
    }

    for (auto& nb : code.check_neighbors) std::sort(nb.begin(), nb.end());
    for (auto& nb : code.var_neighbors) std::sort(nb.begin(), nb.end());
    return code;
}

}  // namespace recon
