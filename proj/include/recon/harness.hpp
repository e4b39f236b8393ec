#ifndef RECON_HARNESS_HPP
#define RECON_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recon/blind_protocol.hpp"
#include "recon/fer_model.hpp"
#include "recon/ldpc_code.hpp"
#include "recon/rate_adapt.hpp"

namespace recon {

enum class ProtocolKind : std::uint8_t { Blind, RateAdaptive, Fixed };

struct ExperimentSpec {
    ProtocolKind protocol = ProtocolKind::Blind;
    int attempts = 3;          // blind: I
    int fixed_p = 0;           // fixed: punctured count
    int fixed_s = 0;           // fixed: shortened count
    int d = 0;
    double eps_start = 0.02;
    double eps_stop = 0.1;
    double eps_step = 0.02;
    long target_errors = 100;  // stop a point after this many failures...
    long max_frames = 1000000; // ...or this many frames, whichever first
    std::uint64_t root_seed = 1;
    int threads = 1;
    int max_decoder_iterations = 200;
    LlrPolicy llr_policy;          // blind / fixed
    double rate_adaptive_margin = 0.0;
    PatternStrategy pattern_strategy = PatternStrategy::Intentional;
};

struct FerCurvePoint {
    double epsilon = 0.0;
    long frames = 0;
    long failures = 0;
    double fer = 0.0;
    double avg_leaked_bits = 0.0;   // over successful frames
    double avg_efficiency = 0.0;    // over successful frames
    std::vector<long> attempt_histogram;  // successes per attempt, sums to frames - failures
    long undetected_errors = 0;     // success with payload != x
    double attempts_mean = 0.0;
};

std::vector<FerCurvePoint> run_fer_sweep(const ExperimentSpec& spec, const LdpcCode& code,
                                         const PuncturingPattern& pattern,
                                         const std::optional<ThresholdTable>& thresholds);

std::vector<FerCurvePoint> run_model_sweep(const ExperimentSpec& spec, const ModelConfig& model,
                                           const ThresholdTable& thresholds);

// CSV schema, fixed column order; floats at 9 significant digits.
std::string csv_header();
std::string csv_line(const FerCurvePoint& point, const std::string& source);
void write_csv(const std::vector<FerCurvePoint>& points, const std::string& source,
               const std::string& path);

}  // namespace recon

#endif
