#include "recon/fer_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "recon/channel.hpp"

namespace recon {

double ThresholdTable::epsilon_star(double rate) const {
    if (entries.size() < 2) throw std::runtime_error("threshold table needs >= 2 entries");
    const double lo = entries.front().first, hi = entries.back().first;
    if (rate < lo - 1e-12 || rate > hi + 1e-12)
        throw std::runtime_error("threshold table: rate outside span, extrapolation refused");
    rate = std::clamp(rate, lo, hi);
    for (std::size_t i = 1; i < entries.size(); ++i) {
        if (rate <= entries[i].first + 1e-15) {
            const auto& [r0, e0] = entries[i - 1];
            const auto& [r1, e1] = entries[i];
            const double t = r1 == r0 ? 0.0 : (rate - r0) / (r1 - r0);
            return e0 + t * (e1 - e0);
        }
    }
    return entries.back().second;
}

bool ThresholdTable::covers(double rate) const {
    return entries.size() >= 2 && rate >= entries.front().first - 1e-12 &&
           rate <= entries.back().first + 1e-12;
}

ThresholdTable load_threshold_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open threshold table: " + path);
    ThresholdTable table;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        double rate, eps;
        if (is >> rate >> eps) table.entries.emplace_back(rate, eps);
    }
    for (std::size_t i = 1; i < table.entries.size(); ++i) {
        if (table.entries[i].first <= table.entries[i - 1].first)
            throw std::runtime_error("threshold table rates not ascending");
        if (table.entries[i].second >= table.entries[i - 1].second)
            throw std::runtime_error("threshold table epsilon* not decreasing");
    }
    if (table.entries.size() < 2) throw std::runtime_error("threshold table needs >= 2 entries");
    return table;
}

void save_threshold_table(const ThresholdTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write threshold table: " + path);
    out.precision(12);
    for (const auto& [rate, eps] : table.entries) out << rate << " " << eps << "\n";
}

ThresholdTable scaled_threshold_table(double r0, double eps0, double r_min, double r_max,
                                      int points) {
    if (points < 2) throw std::invalid_argument("scaled_threshold_table: points < 2");
    if (!(r_min < r_max)) throw std::invalid_argument("scaled_threshold_table: empty range");
    const double h0 = binary_entropy(eps0);
    ThresholdTable table;
    for (int i = 0; i < points; ++i) {
        const double r = r_min + (r_max - r_min) * i / (points - 1);
        const double target = (1.0 - r) * h0 / (1.0 - r0);
        table.entries.emplace_back(r, binary_entropy_inverse(std::clamp(target, 0.0, 1.0)));
    }
    return table;
}

double binomial_fer(double eps, int N, double eps_star) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("binomial_fer: eps outside (0, 0.5)");
    if (N < 1) throw std::invalid_argument("binomial_fer: N < 1");
    const long threshold = static_cast<long>(std::floor(eps_star * N));
    if (threshold >= N) return 0.0;
    if (threshold < 0) return 1.0;
    // Head sum P(X <= threshold) in log space, complemented.
    const double log_eps = std::log(eps), log_1m = std::log1p(-eps);
    double head = 0.0;
    double log_pmf = N * log_1m;  // x = 0
    head += std::exp(log_pmf);
    for (long x = 1; x <= threshold; ++x) {
        log_pmf += std::log(static_cast<double>(N - x + 1)) - std::log(static_cast<double>(x)) +
                   log_eps - log_1m;
        head += std::exp(log_pmf);
    }
    return std::clamp(1.0 - head, 0.0, 1.0);
}

double gaussian_fer(double eps, int N, double eps_star) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("gaussian_fer: eps outside (0, 0.5)");
    if (N < 1) throw std::invalid_argument("gaussian_fer: N < 1");
    const double sigma = std::sqrt(eps * (1.0 - eps) / N);
    // Upper limit taken to infinity; the mass beyond 1 is below 1e-15 for
    // any in-range parameters.
    return 0.5 * std::erfc((eps_star - eps) / (sigma * std::sqrt(2.0)));
}

std::vector<double> alpha_fractions(const std::vector<double>& fers) {
    if (fers.empty()) throw std::invalid_argument("alpha_fractions: empty FER list");
    const double last = fers.back();
    if (last >= 1.0) throw std::runtime_error("alpha_fractions: F^(I) = 1, no frame ever corrected");
    std::vector<double> alpha(fers.size());
    double prev = 1.0;
    for (std::size_t i = 0; i < fers.size(); ++i) {
        alpha[i] = (prev - fers[i]) / (1.0 - last);
        prev = fers[i];
    }
    return alpha;
}

double average_rate(const BlindSchedule& schedule) {
    const std::size_t I = schedule.rates.size();
    if (I == 0 || schedule.fers.size() != I)
        throw std::invalid_argument("average_rate: malformed schedule");
    const auto alpha = alpha_fractions(schedule.fers);
    double direct = 0.0;
    for (std::size_t i = 0; i < I; ++i) direct += alpha[i] * schedule.rates[i];

    double closed = schedule.rates.front();
    if (I >= 2) {
        const double last = schedule.fers.back();
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < I; ++i) sum += schedule.fers[i];
        closed += schedule.beta / (1.0 - last) * (last - sum / static_cast<double>(I - 1));
    }
    // Both routes are exact algebraically; the float gap grows with the
    // 1/(1 - F^(I)) conditioning factor.
    const double tol = 1e-12 / (1.0 - schedule.fers.back());
    if (std::abs(direct - closed) > tol)
        throw std::runtime_error("average_rate: closed form disagrees with direct sum");
    return direct;
}

double approx_average_rate(const BlindSchedule& schedule, bool* warning) {
    const std::size_t I = schedule.rates.size();
    if (I == 0 || schedule.fers.size() != I)
        throw std::invalid_argument("approx_average_rate: malformed schedule");
    if (warning != nullptr) *warning = schedule.fers.back() > 1e-3;
    double value = schedule.rates.front();
    if (I >= 2) {
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < I; ++i) sum += schedule.fers[i];
        value -= schedule.beta / static_cast<double>(I - 1) * sum;
    }
    return value;
}

namespace {

BlindSchedule build_schedule(double eps, const ModelConfig& config, const ThresholdTable& table) {
    BlindSchedule schedule;
    schedule.beta = config.delta / (1.0 - config.delta);
    const int I = config.attempts;
    for (int i = 0; i < I; ++i) {
        const double sigma = I >= 2 ? config.delta * i / (I - 1) : 0.0;
        const double rate = (config.r0 - sigma) / (1.0 - config.delta);
        schedule.rates.push_back(rate);
        double fer = gaussian_fer(eps, config.n_effective, table.epsilon_star(rate));
        schedule.fers.push_back(fer);
    }
    // The last FER is clamped just below 1 so the success-conditioned
    // average stays defined deep in the failure region.
    schedule.fers.back() = std::min(schedule.fers.back(), 1.0 - 1e-12);
    for (std::size_t i = 1; i < schedule.fers.size(); ++i)
        schedule.fers[i] = std::min(schedule.fers[i], schedule.fers[i - 1]);
    return schedule;
}

}  // namespace

double predicted_average_efficiency(double eps, const ModelConfig& config,
                                    const ThresholdTable& table) {
    const auto schedule = build_schedule(eps, config, table);
    return (1.0 - average_rate(schedule)) / binary_entropy(eps);
}

double predicted_rate_adaptive_efficiency(double eps, const ModelConfig& config,
                                          const ThresholdTable& table, double fer_target) {
    constexpr int kSteps = 200;
    double chosen_rate = (config.r0 - config.delta) / (1.0 - config.delta);
    for (int i = 0; i <= kSteps; ++i) {
        const double sigma = config.delta * i / kSteps;
        const double rate = (config.r0 - sigma) / (1.0 - config.delta);
        if (gaussian_fer(eps, config.n_effective, table.epsilon_star(rate)) <= fer_target) {
            chosen_rate = rate;
            break;
        }
    }
    return (1.0 - chosen_rate) / binary_entropy(eps);
}

}  // namespace recon
