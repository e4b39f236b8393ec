#ifndef RECON_FER_MODEL_HPP
#define RECON_FER_MODEL_HPP

#include <string>
#include <utility>
#include <vector>

namespace recon {

/// Decoding thresholds epsilon*(rate), consumed as data. Interpolation is
/// monotone piecewise-linear in rate; extrapolation is refused.
struct ThresholdTable {
    // (rate, epsilon_star), ascending rate, epsilon_star strictly decreasing.
    std::vector<std::pair<double, double>> entries;

    double epsilon_star(double rate) const;  // throws outside the span
    bool covers(double rate) const;
};

ThresholdTable load_threshold_table(const std::string& path);
void save_threshold_table(const ThresholdTable& table, const std::string& path);

/// Fills a table over [r_min, r_max] from a single (r0, eps0) anchor by
/// constant-efficiency scaling: h(eps*(r)) = (1 - r) h(eps0) / (1 - r0).
ThresholdTable scaled_threshold_table(double r0, double eps0, double r_min, double r_max,
                                      int points);

/// Exact binomial tail: Pr(errors > floor(eps_star N)) for N channel uses
/// at crossover eps. Strict ">" at the integer boundary.
double binomial_fer(double eps, int N, double eps_star);

/// Gaussian tail with mean eps and variance eps(1-eps)/N, upper limit
/// taken to infinity via erfc.
double gaussian_fer(double eps, int N, double eps_star);

/// Rate schedule of a blind session: r_1 > ... > r_I with the model FER
/// F^(i) per attempt; beta = delta / (1 - delta).
struct BlindSchedule {
    std::vector<double> rates;   // length I
    std::vector<double> fers;    // length I, F^(1)..F^(I); F^(0) = 1 implied
    double beta = 0.0;
};

/// alpha_i = (F^(i-1) - F^(i)) / (1 - F^(I)), F^(0) = 1. Throws when
/// F^(I) = 1 (no frame ever corrected).
std::vector<double> alpha_fractions(const std::vector<double>& fers);

/// Average rate sum alpha_i r_i; also evaluated through the telescoped
/// closed form and cross-checked to 1e-12.
double average_rate(const BlindSchedule& schedule);

/// First-order form r_1 - beta/(I-1) sum F^(i), valid for F^(I) ~ 0.
/// warning set when F^(I) > 1e-3.
double approx_average_rate(const BlindSchedule& schedule, bool* warning = nullptr);

struct ModelConfig {
    double r0 = 0.5;
    double delta = 0.1;
    int attempts = 3;       // I
    int n_effective = 1800; // channel uses entering the observed-channel model
};

/// Builds the blind schedule's rates, fills F^(i) from the Gaussian model
/// with interpolated thresholds, and returns (1 - Rhat) / h(eps).
double predicted_average_efficiency(double eps, const ModelConfig& config,
                                    const ThresholdTable& table);

/// One-shot rate-adaptive model curve: smallest shortening meeting the
/// target FER under the Gaussian model, efficiency (1 - r) / h(eps).
double predicted_rate_adaptive_efficiency(double eps, const ModelConfig& config,
                                          const ThresholdTable& table, double fer_target);

}  // namespace recon

#endif
