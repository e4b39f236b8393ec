#ifndef RECON_DEGREE_DISTRIBUTION_HPP
#define RECON_DEGREE_DISTRIBUTION_HPP

#include <string>
#include <utility>
#include <vector>

namespace recon {

/// Edge-perspective degree distribution pair (lambda, rho) of an LDPC
/// ensemble, together with its design rate and BSC decoding threshold.
struct DegreeDistribution {
    // (degree, fraction of edges), degrees strictly increasing.
    std::vector<std::pair<int, double>> lambda_coeffs;
    std::vector<std::pair<int, double>> rho_coeffs;
    double nominal_rate = 0.0;
    double threshold = 0.0;  // epsilon* over the BSC

    double lambda_inv_sum() const;  // sum lambda_i / i
    double rho_inv_sum() const;     // sum rho_j / j
    double design_rate() const;     // 1 - rho_inv_sum / lambda_inv_sum
    double edges_per_bit() const;   // 1 / lambda_inv_sum
};

struct ValidationReport {
    bool lambda_normalized = false;
    bool rho_normalized = false;
    bool fractions_positive = false;
    bool degrees_increasing = false;
    bool rate_consistent = false;
    bool edges_per_bit_ok = false;
    double design_rate = 0.0;
    double edges_per_bit = 0.0;

    bool pass() const {
        return lambda_normalized && rho_normalized && fractions_positive &&
               degrees_increasing && rate_consistent && edges_per_bit_ok;
    }
    std::string summary() const;
};

ValidationReport validate_distribution(const DegreeDistribution& dist);

// Key-value ensemble file:
//   rate = 0.5
//   threshold = 0.102592
//   lambda = [(2, 0.159673), (3, 0.121875), ...]
//   rho = [(9, 0.360479), (10, 0.639521)]
// Fractions are renormalized on load when their sum is within 1e-4 of 1,
// which absorbs the truncation of published coefficients.
DegreeDistribution load_ensemble(const std::string& path);
void save_ensemble(const DegreeDistribution& dist, const std::string& path);
DegreeDistribution parse_ensemble(const std::string& text);

}  // namespace recon

#endif
