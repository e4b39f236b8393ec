#ifndef RECON_BLIND_PROTOCOL_HPP
#define RECON_BLIND_PROTOCOL_HPP

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "recon/bits.hpp"
#include "recon/decoder.hpp"
#include "recon/fer_model.hpp"
#include "recon/ldpc_code.hpp"
#include "recon/rate_adapt.hpp"

namespace recon {

struct ProtocolConfig {
    const LdpcCode* code = nullptr;
    PuncturingPattern pattern;
    int d = 0;
    int attempts = 1;    // I decoding attempts; I = 1 is the one-shot all-punctured case
    int delta_step = 0;  // Delta = d / (I - 1) for I >= 2, filled by validate()
    int max_decoder_iterations = 200;

    /// Checks the (I - 1) | d divisibility and fills delta_step.
    void validate();
};

enum class MessageType : std::uint8_t { Syndrome, Reveal, Verdict };

struct Message {
    MessageType type = MessageType::Syndrome;
    Bits syndrome;                                        // Syndrome
    std::vector<std::pair<int, std::uint8_t>> reveals;    // Reveal
    bool verdict_success = false;                         // Verdict
};

enum class SessionOutcome : std::uint8_t { Pending, Success, Failure };

struct SessionReport {
    SessionOutcome outcome = SessionOutcome::Pending;
    int attempts_used = 0;
    int s_final = 0;
    int p_final = 0;
    long leaked_bits = 0;          // (n - k) - p
    std::vector<double> rates;     // effective rate r_i per attempt made
    bool payload_matches = false;  // out-of-band check against Alice's x
    bool predicted_infeasible = false;  // rate-adaptive only
    Bits bob_payload;              // on success
    std::vector<Message> transcript;
};

/// How Bob forms channel LLR magnitudes when no error estimate exists.
struct LlrPolicy {
    enum class Mode : std::uint8_t { RateMatched, Fixed };
    Mode mode = Mode::RateMatched;
    double fixed_epsilon = 0.05;

    /// RateMatched solves 1 - r = h(e) for the attempt's effective rate r.
    double epsilon_for_rate(double rate) const;
};

/// Runs the interactive estimate-free session: syndrome first with all d
/// positions punctured, then Delta reveals per failed attempt until
/// success or s = d. Takes no channel error estimate by construction.
SessionReport run_blind_session(const ProtocolConfig& config, const Bits& x, const Bits& y,
                                const LlrPolicy& llr_policy, std::mt19937_64& rng);

/// One-shot rate-adaptive baseline: picks the smallest shortening whose
/// adapted rate still has threshold above epsilon_estimate + margin
/// (shortened positions drawn at random from the pattern), then a single
/// syndrome exchange and decode.
SessionReport run_rate_adaptive(const ProtocolConfig& config, const Bits& x, const Bits& y,
                                double epsilon_estimate, const ThresholdTable& thresholds,
                                double margin, std::mt19937_64& rng);

/// f = leaked / (m h(epsilon)). Throws for epsilon = 0.
double efficiency(long leaked_bits, int m, double epsilon);

// Transcript log, one line per record:
//   CTX <n> <k> <d>
//   SIDE <len> <hex>           Bob's side information, for self-contained replay
//   MSG <type> <length> <hex>
//   OUTCOME <success|failure>
std::string format_transcript(const ProtocolConfig& config, const Bits& y,
                              const SessionReport& report);

/// Re-runs Bob's state machine against the logged Alice messages and
/// checks the logged outcome. Returns true when the replay agrees.
bool replay_transcript(const std::string& text, const LdpcCode& code,
                       const PuncturingPattern& pattern, const LlrPolicy& llr_policy,
                       int max_decoder_iterations, std::string* detail = nullptr);

}  // namespace recon

#endif
