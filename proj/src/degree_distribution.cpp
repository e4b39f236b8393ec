#include "recon/degree_distribution.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace recon {

namespace {

double fraction_sum(const std::vector<std::pair<int, double>>& coeffs) {
    double s = 0.0;
    for (const auto& [deg, frac] : coeffs) s += frac;
    return s;
}

double inv_sum(const std::vector<std::pair<int, double>>& coeffs) {
    double s = 0.0;
    for (const auto& [deg, frac] : coeffs) s += frac / deg;
    return s;
}

bool well_formed(const std::vector<std::pair<int, double>>& coeffs) {
    int prev = 1;
    for (const auto& [deg, frac] : coeffs) {
        if (deg <= prev || frac <= 0.0) return false;
        prev = deg;
    }
    return !coeffs.empty();
}

void normalize(std::vector<std::pair<int, double>>& coeffs, const char* name) {
    double s = fraction_sum(coeffs);
    if (std::abs(s - 1.0) > 1e-4)
        throw std::runtime_error(std::string(name) + " fractions sum to " + std::to_string(s));
    for (auto& [deg, frac] : coeffs) frac /= s;
}

// Parses "[(2, 0.159673), (3, 0.121875)]".
std::vector<std::pair<int, double>> parse_pair_list(const std::string& text) {
    std::vector<std::pair<int, double>> out;
    std::string cleaned;
    for (char c : text)
        cleaned.push_back((c == '[' || c == ']' || c == '(' || c == ')' || c == ',') ? ' ' : c);
    std::istringstream is(cleaned);
    int deg;
    double frac;
    while (is >> deg >> frac) out.emplace_back(deg, frac);
    if (out.empty()) throw std::runtime_error("empty degree list: " + text);
    return out;
}

}  // namespace

double DegreeDistribution::lambda_inv_sum() const { return inv_sum(lambda_coeffs); }
double DegreeDistribution::rho_inv_sum() const { return inv_sum(rho_coeffs); }
double DegreeDistribution::design_rate() const { return 1.0 - rho_inv_sum() / lambda_inv_sum(); }
double DegreeDistribution::edges_per_bit() const { return 1.0 / lambda_inv_sum(); }

ValidationReport validate_distribution(const DegreeDistribution& dist) {
    ValidationReport report;
    report.lambda_normalized = std::abs(fraction_sum(dist.lambda_coeffs) - 1.0) <= 1e-9;
    report.rho_normalized = std::abs(fraction_sum(dist.rho_coeffs) - 1.0) <= 1e-9;
    report.fractions_positive = true;
    report.degrees_increasing = well_formed(dist.lambda_coeffs) && well_formed(dist.rho_coeffs);
    for (const auto& [deg, frac] : dist.lambda_coeffs)
        if (frac <= 0.0) report.fractions_positive = false;
    for (const auto& [deg, frac] : dist.rho_coeffs)
        if (frac <= 0.0) report.fractions_positive = false;
    report.design_rate = dist.design_rate();
    report.edges_per_bit = dist.edges_per_bit();
    report.rate_consistent = std::abs(report.design_rate - dist.nominal_rate) <= 1e-2;
    report.edges_per_bit_ok = report.edges_per_bit <= 6.06;
    return report;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    auto line = [&os](const char* name, bool ok) { os << name << ": " << (ok ? "pass" : "FAIL") << "\n"; };
    line("lambda normalized", lambda_normalized);
    line("rho normalized", rho_normalized);
    line("fractions positive", fractions_positive);
    line("degrees increasing", degrees_increasing);
    line("design rate consistent", rate_consistent);
    line("edges/bit <= 6.06", edges_per_bit_ok);
    os << "design rate = " << design_rate << "\n";
    os << "edges per bit = " << edges_per_bit << "\n";
    return os.str();
}

DegreeDistribution parse_ensemble(const std::string& text) {
    DegreeDistribution dist;
    bool have_rate = false, have_threshold = false, have_lambda = false, have_rho = false;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        if (key == "rate") {
            dist.nominal_rate = std::stod(value);
            have_rate = true;
        } else if (key == "threshold") {
            dist.threshold = std::stod(value);
            have_threshold = true;
        } else if (key == "lambda") {
            dist.lambda_coeffs = parse_pair_list(value);
            have_lambda = true;
        } else if (key == "rho") {
            dist.rho_coeffs = parse_pair_list(value);
            have_rho = true;
        }
    }
    if (!have_rate || !have_threshold || !have_lambda || !have_rho)
        throw std::runtime_error("ensemble file missing rate/threshold/lambda/rho");
    normalize(dist.lambda_coeffs, "lambda");
    normalize(dist.rho_coeffs, "rho");
    return dist;
}

DegreeDistribution load_ensemble(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ensemble file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ensemble(buf.str());
}

void save_ensemble(const DegreeDistribution& dist, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write ensemble file: " + path);
    out.precision(12);
    out << "rate = " << dist.nominal_rate << "\n";
    out << "threshold = " << dist.threshold << "\n";
    auto emit = [&out](const char* name, const std::vector<std::pair<int, double>>& coeffs) {
        out << name << " = [";
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (i) out << ", ";
            out << "(" << coeffs[i].first << ", " << coeffs[i].second << ")";
        }
        out << "]\n";
    };
    emit("lambda", dist.lambda_coeffs);
    emit("rho", dist.rho_coeffs);
}

}  // namespace recon
