#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "recon/channel.hpp"
#include "recon/degree_distribution.hpp"
#include "recon/harness.hpp"
#include "recon/peg.hpp"
#include "recon/rng.hpp"

using namespace recon;

namespace {

LdpcCode load_or_build_code(const std::string& code_file, int n, const std::string& ensemble,
                            std::uint64_t seed) {
    if (!code_file.empty()) return load_code(code_file);
    if (n <= 0 || ensemble.empty())
        throw std::runtime_error("need either --code or both --n and --ensemble");
    return build_peg(n, load_ensemble(ensemble), seed);
}

PatternStrategy parse_strategy(const std::string& name) {
    if (name == "intentional") return PatternStrategy::Intentional;
    if (name == "random") return PatternStrategy::Random;
    throw std::runtime_error("unknown pattern strategy: " + name);
}

// Threshold source shared by `simulate` and `model`: an explicit table file,
// or a constant-efficiency scaling from one anchor when --scaled-thresholds
// is given. No silent fallback.
struct ThresholdFlags {
    std::string file;
    bool scaled = false;
    double anchor_rate = 0.5;
    double anchor_eps = 0.102592;
    double rate_min = 0.44;
    double rate_max = 0.56;
    int points = 41;

    void attach(CLI::App* cmd) {
        cmd->add_option("--thresholds", file, "threshold table file (rate<TAB>eps per line)");
        cmd->add_flag("--scaled-thresholds", scaled,
                      "derive the table by constant-efficiency scaling from the anchor");
        cmd->add_option("--anchor-rate", anchor_rate, "scaling anchor rate")
            ->capture_default_str();
        cmd->add_option("--anchor-eps", anchor_eps, "scaling anchor threshold")
            ->capture_default_str();
        cmd->add_option("--rate-min", rate_min, "scaled table lower rate")->capture_default_str();
        cmd->add_option("--rate-max", rate_max, "scaled table upper rate")->capture_default_str();
        cmd->add_option("--table-points", points, "scaled table size")->capture_default_str();
    }

    std::optional<ThresholdTable> resolve(bool required) const {
        if (!file.empty()) return load_threshold_table(file);
        if (scaled)
            return scaled_threshold_table(anchor_rate, anchor_eps, rate_min, rate_max, points);
        if (required)
            throw std::runtime_error(
                "a threshold table is required: pass --thresholds FILE or --scaled-thresholds");
        return std::nullopt;
    }
};

// Expands `--config FILE` into `--key value` tokens placed before the
// explicit flags; combined with TakeLast options this makes the command
// line override the file. Keys use the flag names without the dashes.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> out;
    std::vector<std::string> from_file;
    std::vector<std::string> rest;
    // everything up to and including the subcommand name stays in front
    std::size_t i = 0;
    for (; i < args.size(); ++i) {
        out.push_back(args[i]);
        if (!args[i].empty() && args[i][0] != '-') {
            i += 1;
            break;
        }
    }
    for (; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw std::runtime_error("--config needs a file");
            std::ifstream in(args[i + 1]);
            if (!in.good()) throw std::runtime_error("cannot open config " + args[i + 1]);
            for (std::string line; std::getline(in, line);) {
                auto hash = line.find('#');
                if (hash != std::string::npos) line.erase(hash);
                auto eq = line.find('=');
                if (eq == std::string::npos) continue;
                auto trim = [](std::string s) {
                    auto b = s.find_first_not_of(" \t\"");
                    auto e = s.find_last_not_of(" \t\"\r");
                    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
                };
                std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
                if (key.empty()) continue;
                from_file.push_back("--" + key);
                if (value == "true") continue;  // flag
                from_file.push_back(value);
            }
            i += 1;  // skip the file name
        } else {
            rest.push_back(args[i]);
        }
    }
    out.insert(out.end(), from_file.begin(), from_file.end());
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

void emit(const std::vector<FerCurvePoint>& points, const std::string& source,
          const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << csv_header() << "\n";
        for (const auto& p : points) std::cout << csv_line(p, source) << "\n";
    } else {
        write_csv(points, source, out);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDPC rate-adaptive and blind reconciliation simulator"};
    app.require_subcommand(1);

    // build-code
    auto* build = app.add_subcommand("build-code", "construct a PEG code from an ensemble");
    std::string b_ensemble, b_out;
    int b_n = 2000;
    std::uint64_t b_seed = 1;
    build->add_option("--ensemble", b_ensemble, "ensemble file")->required();
    build->add_option("--n", b_n, "block length")->capture_default_str();
    build->add_option("--seed", b_seed, "construction seed")->capture_default_str();
    build->add_option("--out", b_out, "output code file")->required();

    // validate-ensemble
    auto* validate = app.add_subcommand("validate-ensemble", "check a degree distribution");
    std::string v_file;
    validate->add_option("file", v_file, "ensemble file")->required();

    // select-pattern
    auto* select = app.add_subcommand("select-pattern", "choose d puncturable positions");
    std::string s_code, s_out, s_strategy = "intentional";
    int s_d = 0;
    std::uint64_t s_seed = 1;
    select->add_option("--code", s_code, "code file")->required();
    select->add_option("--d", s_d, "number of modulated positions")->required();
    select->add_option("--strategy", s_strategy, "intentional|random")->capture_default_str();
    select->add_option("--seed", s_seed, "selection seed")->capture_default_str();
    select->add_option("--out", s_out, "output pattern file")->required();

    // shared simulate/model sweep flags
    ExperimentSpec spec;
    std::string code_file, ensemble_file, pattern_file, protocol = "blind", out_file;
    std::string llr_mode = "rate-matched", pattern_strategy = "intentional";
    int code_n = 0;
    std::uint64_t code_seed = 1, pattern_seed = 1;
    ThresholdFlags sim_thresholds;

    auto* simulate = app.add_subcommand("simulate", "Monte-Carlo FER/efficiency sweep");
    simulate->add_option("--code", code_file, "code file (else --n + --ensemble)");
    simulate->add_option("--n", code_n, "block length when building the code");
    simulate->add_option("--ensemble", ensemble_file, "ensemble file when building the code");
    simulate->add_option("--code-seed", code_seed, "PEG seed")->capture_default_str();
    simulate->add_option("--pattern", pattern_file, "pattern file (else selected from --d)");
    simulate->add_option("--pattern-strategy", pattern_strategy, "intentional|random")
        ->capture_default_str();
    simulate->add_option("--pattern-seed", pattern_seed, "selection seed")->capture_default_str();
    simulate->add_option("--d", spec.d, "modulated positions per frame")->capture_default_str();
    simulate->add_option("--protocol", protocol, "blind|rate-adaptive|fixed")
        ->capture_default_str();
    simulate->add_option("--attempts", spec.attempts, "blind decoding attempts I")
        ->capture_default_str();
    simulate->add_option("--fixed-p", spec.fixed_p, "fixed protocol punctured count")
        ->capture_default_str();
    simulate->add_option("--fixed-s", spec.fixed_s, "fixed protocol shortened count")
        ->capture_default_str();
    simulate->add_option("--eps-start", spec.eps_start, "sweep start")->capture_default_str();
    simulate->add_option("--eps-stop", spec.eps_stop, "sweep stop (inclusive)")
        ->capture_default_str();
    simulate->add_option("--eps-step", spec.eps_step, "sweep step")->capture_default_str();
    simulate->add_option("--target-errors", spec.target_errors, "stop a point at E failures")
        ->capture_default_str();
    simulate->add_option("--max-frames", spec.max_frames, "frame cap per point")
        ->capture_default_str();
    simulate->add_option("--root-seed", spec.root_seed, "root seed")->capture_default_str();
    simulate->add_option("--threads", spec.threads, "worker threads")->capture_default_str();
    simulate->add_option("--max-iterations", spec.max_decoder_iterations, "decoder iteration cap")
        ->capture_default_str();
    simulate->add_option("--llr-mode", llr_mode, "rate-matched|fixed")->capture_default_str();
    simulate->add_option("--llr-eps", spec.llr_policy.fixed_epsilon,
                         "channel LLR epsilon for --llr-mode fixed")
        ->capture_default_str();
    simulate->add_option("--margin", spec.rate_adaptive_margin,
                         "rate-adaptive threshold margin over the estimate")
        ->capture_default_str();
    simulate->add_option("--out", out_file, "output CSV path (default stdout)");
    std::string transcript_out;
    simulate->add_option("--transcript-out", transcript_out,
                         "also log one blind session at --eps-start to this file");
    sim_thresholds.attach(simulate);

    // model
    auto* model_cmd = app.add_subcommand("model", "analytic efficiency sweep, no simulation");
    ModelConfig model{0.5, 0.1, 3, 2000};
    std::string model_protocol = "blind", model_out;
    ExperimentSpec model_spec;
    ThresholdFlags model_thresholds;
    model_cmd->add_option("--r0", model.r0, "mother code rate")->capture_default_str();
    model_cmd->add_option("--delta", model.delta, "modulated fraction delta")
        ->capture_default_str();
    model_cmd->add_option("--attempts", model.attempts, "blind attempts I")
        ->capture_default_str();
    model_cmd->add_option("--n-effective", model.n_effective, "observed-channel sample size")
        ->capture_default_str();
    model_cmd->add_option("--protocol", model_protocol, "blind|rate-adaptive")
        ->capture_default_str();
    model_cmd->add_option("--eps-start", model_spec.eps_start, "sweep start")
        ->capture_default_str();
    model_cmd->add_option("--eps-stop", model_spec.eps_stop, "sweep stop (inclusive)")
        ->capture_default_str();
    model_cmd->add_option("--eps-step", model_spec.eps_step, "sweep step")->capture_default_str();
    model_cmd->add_option("--out", model_out, "output CSV path (default stdout)");
    model_thresholds.attach(model_cmd);

    // replay
    auto* replay = app.add_subcommand("replay", "re-verify a session transcript");
    std::string r_transcript, r_code, r_pattern, r_llr_mode = "rate-matched";
    double r_llr_eps = 0.05;
    int r_max_iterations = 200;
    replay->add_option("--transcript", r_transcript, "transcript file")->required();
    replay->add_option("--code", r_code, "code file")->required();
    replay->add_option("--pattern", r_pattern, "pattern file")->required();
    replay->add_option("--llr-mode", r_llr_mode, "rate-matched|fixed")->capture_default_str();
    replay->add_option("--llr-eps", r_llr_eps, "epsilon for --llr-mode fixed")
        ->capture_default_str();
    replay->add_option("--max-iterations", r_max_iterations, "decoder iteration cap")
        ->capture_default_str();

    // command line overrides config-file values
    for (auto* sub : {build, validate, select, simulate, model_cmd, replay}) {
        sub->add_option("--config")
            ->description("key-value config file; command-line flags take precedence")
            ->type_name("FILE");
        for (auto* opt : sub->get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }

    try {
        auto args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (build->parsed()) {
            auto code = build_peg(b_n, load_ensemble(b_ensemble), b_seed);
            save_code(code, b_out);
            std::cout << "wrote " << b_out << ": n=" << code.n << " k=" << code.k
                      << " edges=" << code.num_edges() << "\n";
            return 0;
        }
        if (validate->parsed()) {
            auto report = validate_distribution(load_ensemble(v_file));
            std::cout << report.summary();
            return report.pass() ? 0 : 2;
        }
        if (select->parsed()) {
            auto code = load_code(s_code);
            auto pattern = select_pattern(code, s_d, parse_strategy(s_strategy), s_seed);
            save_pattern(pattern, code.n, s_out);
            if (pattern.fallback_warning)
                std::cerr << "warning: intentional selection saturated, tail chosen at random\n";
            std::cout << "wrote " << s_out << ": d=" << s_d << "\n";
            return 0;
        }
        if (simulate->parsed()) {
            if (protocol == "blind")
                spec.protocol = ProtocolKind::Blind;
            else if (protocol == "rate-adaptive")
                spec.protocol = ProtocolKind::RateAdaptive;
            else if (protocol == "fixed")
                spec.protocol = ProtocolKind::Fixed;
            else
                throw std::runtime_error("unknown protocol: " + protocol);
            if (llr_mode == "rate-matched")
                spec.llr_policy.mode = LlrPolicy::Mode::RateMatched;
            else if (llr_mode == "fixed")
                spec.llr_policy.mode = LlrPolicy::Mode::Fixed;
            else
                throw std::runtime_error("unknown llr mode: " + llr_mode);
            spec.pattern_strategy = parse_strategy(pattern_strategy);

            auto code = load_or_build_code(code_file, code_n, ensemble_file, code_seed);
            PuncturingPattern pattern;
            if (!pattern_file.empty()) {
                pattern = load_pattern(pattern_file, code.n);
                if (spec.d == 0) spec.d = static_cast<int>(pattern.positions.size());
            } else if (spec.d > 0) {
                pattern = select_pattern(code, spec.d, spec.pattern_strategy, pattern_seed);
            }
            auto thresholds =
                sim_thresholds.resolve(spec.protocol == ProtocolKind::RateAdaptive);
            auto points = run_fer_sweep(spec, code, pattern, thresholds);
            emit(points, "simulation", out_file);
            if (!transcript_out.empty()) {
                ProtocolConfig config;
                config.code = &code;
                config.pattern = pattern;
                config.d = spec.d;
                config.attempts = spec.attempts;
                config.max_decoder_iterations = spec.max_decoder_iterations;
                config.validate();
                auto rng = make_rng(derive_seed(spec.root_seed, 0xF00D, 0));
                Bits x(static_cast<std::size_t>(code.n - spec.d));
                for (auto& b : x) b = static_cast<std::uint8_t>(rng() & 1u);
                auto y = bsc_transmit(x, BscParams{spec.eps_start}, rng);
                auto report = run_blind_session(config, x, y, spec.llr_policy, rng);
                std::ofstream ts(transcript_out);
                if (!ts.good()) throw std::runtime_error("cannot write " + transcript_out);
                ts << format_transcript(config, y, report);
                std::cout << "wrote transcript " << transcript_out << "\n";
            }
            return 0;
        }
        if (model_cmd->parsed()) {
            auto table = model_thresholds.resolve(true);
            if (model_protocol == "blind") {
                model_spec.protocol = ProtocolKind::Blind;
            } else if (model_protocol == "rate-adaptive") {
                model_spec.protocol = ProtocolKind::RateAdaptive;
            } else {
                throw std::runtime_error("unknown model protocol: " + model_protocol);
            }
            model_spec.attempts = model.attempts;
            auto points = run_model_sweep(model_spec, model, *table);
            emit(points, "model", model_out);
            return 0;
        }
        if (replay->parsed()) {
            std::ifstream in(r_transcript);
            if (!in.good()) throw std::runtime_error("cannot open " + r_transcript);
            std::ostringstream text;
            text << in.rdbuf();
            auto code = load_code(r_code);
            auto pattern = load_pattern(r_pattern, code.n);
            LlrPolicy policy;
            policy.mode = r_llr_mode == "fixed" ? LlrPolicy::Mode::Fixed
                                                : LlrPolicy::Mode::RateMatched;
            policy.fixed_epsilon = r_llr_eps;
            std::string detail;
            bool ok = replay_transcript(text.str(), code, pattern, policy, r_max_iterations,
                                        &detail);
            std::cout << (ok ? "replay: consistent" : "replay: MISMATCH") << "\n";
            if (!detail.empty()) std::cout << detail << "\n";
            return ok ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
