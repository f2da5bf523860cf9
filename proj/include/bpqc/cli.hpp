// Copyright 2026 The bpqc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file cli.hpp
 * Command-line front end: argument parsing and experiment dispatch.
 *
 * Exit status: 0 on success, 1 on usage or configuration errors, 2 on I/O
 * errors.
 */
#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "experiments.hpp"
#include "io.hpp"

namespace bpqc::cli {

/// Environment variable overriding the default seed.
inline constexpr const char *kSeedEnv = "BPQC_SEED";
inline constexpr std::uint64_t kDefaultSeed = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;

class UsageError : public std::runtime_error {
  public:
    explicit UsageError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Thrown by parse_args when --help was requested; carries the help text.
class HelpRequested : public std::runtime_error {
  public:
    explicit HelpRequested(const std::string &text) : std::runtime_error(text) {}
};

struct RunConfig {
    std::string experiment;
    std::vector<std::size_t> qubits;
    std::vector<std::size_t> layers;
    std::size_t samples{25};
    std::uint64_t seed{kDefaultSeed};
    double learning_rate{0.01};
    std::size_t epochs{50};
    double physics_weight{kDefaultPhysicsWeight};
    std::string output{"-"};
    std::string reference;
    OutputFormat format{OutputFormat::Csv};
    std::size_t threads{0};
};

/// Per-experiment default grids.
inline RunConfig defaults_for(const std::string &experiment) {
    RunConfig c;
    c.experiment = experiment;
    if (experiment == "sweep-qubits") {
        c.qubits = {4, 6, 8};
        c.layers = {3};
    } else if (experiment == "sweep-depth") {
        c.qubits = {6};
        c.layers = {1, 2, 3, 4, 5};
    } else if (experiment == "sweep-pde") {
        c.qubits = {6};
        c.layers = {3};
    } else if (experiment == "entanglement") {
        c.qubits = {4, 6, 8};
        c.layers = {1, 3, 5};
        c.samples = 20;
    } else if (experiment == "converge") {
        c.qubits = {4};
        c.layers = {3};
    } else if (experiment == "per-param") {
        c.qubits = {8};
        c.layers = {3};
    } else if (experiment == "all") {
        c.output.clear();
    } else {
        throw UsageError("unknown experiment '" + experiment + "'");
    }
    return c;
}

inline std::uint64_t default_seed() {
    const char *env = std::getenv(kSeedEnv);
    if (env == nullptr || *env == '\0') {
        return kDefaultSeed;
    }
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(env, &pos);
        if (pos != std::string(env).size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception &) {
        throw UsageError(std::string(kSeedEnv) + " is not an unsigned integer: '" +
                         env + "'");
    }
}

namespace detail {

inline std::string join(const std::vector<std::size_t> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + std::to_string(v[i]);
    }
    return s;
}

inline void validate(const RunConfig &c) {
    for (auto n : c.qubits) {
        if (n < kMinQubits || n > kMaxQubits) {
            throw UsageError("--qubits values must lie in [2, 12]");
        }
    }
    for (auto l : c.layers) {
        if (l == 0) {
            throw UsageError("--layers values must be positive");
        }
    }
    const bool variance = c.experiment == "sweep-qubits" ||
                          c.experiment == "sweep-depth" ||
                          c.experiment == "sweep-pde" ||
                          c.experiment == "per-param" || c.experiment == "all";
    if (variance && c.samples < 2) {
        throw UsageError("--samples must be at least 2 for variance sweeps");
    }
    if (c.samples < 1) {
        throw UsageError("--samples must be positive");
    }
    if (c.experiment == "converge") {
        if (c.qubits.size() != 1 || c.layers.size() != 1) {
            throw UsageError("converge takes exactly one --qubits and one --layers value");
        }
        if (c.epochs < 1) {
            throw UsageError("--epochs must be positive");
        }
    }
    if (c.experiment == "sweep-qubits" && c.layers.size() != 1) {
        throw UsageError("sweep-qubits takes exactly one --layers value");
    }
    if (c.physics_weight < 0.0) {
        throw UsageError("--physics-weight must be nonnegative");
    }
}

} // namespace detail

/**
 * Parses a full argv (program name first).
 *
 * Throws HelpRequested for --help and UsageError for anything malformed.
 */
inline RunConfig parse_args(const std::vector<std::string> &argv) {
    static const std::vector<std::pair<std::string, std::string>> commands{
        {"sweep-qubits", "gradient variance vs qubit count"},
        {"sweep-depth", "gradient variance vs circuit depth"},
        {"sweep-pde", "gradient variance per PDE residual"},
        {"entanglement", "half-cut entanglement entropy"},
        {"converge", "gradient-descent training traces"},
        {"per-param", "per-parameter variance distribution"},
        {"all", "run every experiment with default grids into one directory"},
    };

    const std::uint64_t seed_default = default_seed();
    CLI::App app{"Barren-plateau gradient-variance laboratory", "bpqc"};
    app.require_subcommand(0, 1);
    app.option_defaults()->always_capture_default();
    bool all_flag = false;
    app.add_flag("--all", all_flag,
                 "run every experiment with default grids (same as 'all')");
    app.footer(std::string("Environment: ") + kSeedEnv +
               " overrides the default seed (" + std::to_string(kDefaultSeed) +
               ").");

    std::map<std::string, RunConfig> configs;
    std::map<std::string, std::string> formats;
    for (const auto &[name, help] : commands) {
        auto &cfg = configs[name] = defaults_for(name);
        cfg.seed = seed_default;
        formats[name] = "csv";
        auto *sub = app.add_subcommand(name, help);
        if (name != "all") {
            sub->add_option("--qubits", cfg.qubits, "qubit counts")
                ->default_str(detail::join(cfg.qubits))
                ->delimiter(',');
            sub->add_option("--layers", cfg.layers, "layer counts")
                ->default_str(detail::join(cfg.layers))
                ->delimiter(',');
        }
        if (name != "converge") {
            sub->add_option("--samples,-K", cfg.samples,
                            "random parameter draws per cell");
        }
        sub->add_option("--seed", cfg.seed,
                        std::string("master seed (env ") + kSeedEnv + ")");
        if (name == "converge" || name == "all") {
            sub->add_option("--epochs", cfg.epochs, "gradient-descent epochs");
            sub->add_option("--lr", cfg.learning_rate, "learning rate");
        }
        if (name != "entanglement") {
            sub->add_option("--physics-weight", cfg.physics_weight,
                            "physics loss weight lambda");
        }
        if (name == "all") {
            sub->add_option("--output-dir", cfg.output,
                            "output directory (default runs/<timestamp>)");
        } else {
            sub->add_option("--output,-o", cfg.output, "output file, - for stdout");
        }
        if (name == "sweep-qubits") {
            sub->add_option("--reference", cfg.reference,
                            "also write the 2^-n reference line CSV here");
        }
        sub->add_option("--format", formats[name], "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", cfg.threads, "worker threads, 0 = auto");
    }

    std::vector<std::string> args(argv.begin() + (argv.empty() ? 0 : 1),
                                  argv.end());
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp &) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp &) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError &e) {
        throw UsageError(e.what());
    }
    // subcommand --help surfaces through the subcommand's own flag
    for (auto *sub : app.get_subcommands()) {
        if (sub->get_help_ptr() != nullptr && sub->get_help_ptr()->count() > 0) {
            throw HelpRequested(sub->help());
        }
    }

    std::string chosen;
    if (!app.get_subcommands().empty()) {
        chosen = app.get_subcommands().front()->get_name();
    } else if (all_flag) {
        chosen = "all";
    } else {
        throw UsageError("no experiment given\n" + app.help());
    }
    if (all_flag && chosen != "all") {
        throw UsageError("--all cannot be combined with a subcommand");
    }
    RunConfig cfg = configs[chosen];
    cfg.format = formats[chosen] == "json" ? OutputFormat::Json : OutputFormat::Csv;
    detail::validate(cfg);
    return cfg;
}

/// Run configuration as recorded in JSON output (threads excluded).
inline nlohmann::json config_json(const RunConfig &c) {
    nlohmann::json j{
        {"experiment", c.experiment},
        {"qubits", c.qubits},
        {"layers", c.layers},
        {"K", c.samples},
        {"seed", c.seed},
        {"physics_weight", c.physics_weight},
    };
    if (c.experiment == "converge") {
        j["epochs"] = c.epochs;
        j["learning_rate"] = c.learning_rate;
        j.erase("K");
    }
    return j;
}

namespace detail {

inline SweepOptions sweep_options(const RunConfig &c) {
    return {c.samples, c.seed, c.physics_weight, c.threads};
}

inline SweepResult run_variance(const RunConfig &c) {
    const auto opts = sweep_options(c);
    if (c.experiment == "sweep-qubits") {
        return sweep_qubits(c.qubits, c.layers.front(), all_loss_kinds(), opts);
    }
    SweepResult merged;
    for (auto n : c.qubits) {
        SweepResult part;
        if (c.experiment == "sweep-depth") {
            part = sweep_depth(c.layers, n, all_loss_kinds(), opts);
        } else if (c.experiment == "sweep-pde") {
            part = SweepResult{"sweep-pde", {}};
            for (auto l : c.layers) {
                auto cell = sweep_pde(all_pdes(), n, l, opts);
                part.rows.insert(part.rows.end(), cell.rows.begin(),
                                 cell.rows.end());
            }
        } else {
            part = SweepResult{"per-param", {}};
            for (auto l : c.layers) {
                auto cell = per_param_distribution(n, l, all_loss_kinds(), opts);
                part.rows.insert(part.rows.end(), cell.rows.begin(),
                                 cell.rows.end());
            }
        }
        merged.experiment = part.experiment;
        merged.rows.insert(merged.rows.end(), part.rows.begin(),
                           part.rows.end());
    }
    merged.sort_rows();
    return merged;
}

inline std::vector<TrainTrace> run_converge(const RunConfig &c) {
    std::vector<TrainTrace> traces;
    const TrainOptions opts{c.qubits.front(), c.layers.front(), c.epochs,
                            c.learning_rate, c.seed};
    for (auto kind : all_loss_kinds()) {
        traces.push_back(
            train(make_config(kind, opts.n_qubits, c.physics_weight), opts));
    }
    return traces;
}

inline void emit(const std::string &path, const std::string &content,
                 std::ostream &out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_file(path, content);
    }
}

/// Renders the table for a single experiment.
inline std::string render(const RunConfig &c, std::string *reference_csv) {
    const bool json = c.format == OutputFormat::Json;
    const auto meta = config_json(c);
    if (c.experiment == "entanglement") {
        const auto result = entanglement_sweep(
            c.qubits, c.layers, {Topology::NearestNeighbor, Topology::AllToAll},
            c.samples, c.seed, c.threads);
        return json ? to_json(result, meta).dump(2) + "\n" : to_csv(result);
    }
    if (c.experiment == "converge") {
        const auto traces = run_converge(c);
        return json ? to_json(traces, meta).dump(2) + "\n" : to_csv(traces);
    }
    const auto result = run_variance(c);
    if (reference_csv != nullptr && c.experiment == "sweep-qubits" &&
        !result.rows.empty()) {
        const SweepRow *anchor = result.find(
            c.qubits.front(), c.layers.front(), LossKind::GlobalCost);
        if (anchor == nullptr) {
            anchor = &result.rows.front();
        }
        *reference_csv = reference_lines_csv(
            reference_lines(c.qubits, anchor->report.mean_variance));
    }
    if (c.experiment == "per-param") {
        return json ? to_json(result, meta, true).dump(2) + "\n"
                    : to_csv_per_param(result);
    }
    return json ? to_json(result, meta).dump(2) + "\n" : to_csv(result);
}

inline std::string timestamp_dir() {
    const auto now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    std::tm tm{};
    localtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "runs/%Y%m%d-%H%M%S", &tm);
    return buf;
}

} // namespace detail

/// Executes @p c, writing results to its output path (or @p out for "-").
inline void run(const RunConfig &c, std::ostream &out) {
    if (c.experiment != "all") {
        std::string reference;
        const auto content =
            detail::render(c, c.reference.empty() ? nullptr : &reference);
        detail::emit(c.output, content, out);
        if (!c.reference.empty()) {
            write_file(c.reference, reference);
        }
        return;
    }
    const std::filesystem::path dir =
        c.output.empty() ? detail::timestamp_dir() : c.output;
    const std::string ext = c.format == OutputFormat::Json ? ".json" : ".csv";
    for (const std::string name : {"sweep-qubits", "sweep-depth", "sweep-pde",
                                   "entanglement", "converge", "per-param"}) {
        RunConfig sub = defaults_for(name);
        sub.seed = c.seed;
        sub.threads = c.threads;
        sub.format = c.format;
        sub.physics_weight = c.physics_weight;
        if (name == "converge") {
            sub.epochs = c.epochs;
            sub.learning_rate = c.learning_rate;
        } else if (name != "entanglement") {
            sub.samples = c.samples;
        }
        sub.output = (dir / (name + ext)).string();
        if (name == "sweep-qubits") {
            sub.reference = (dir / "reference.csv").string();
        }
        run(sub, out);
    }
    out << "wrote results to " << dir.string() << "\n";
}

/// Full program: parse, run, map errors to exit codes.
inline int main(const std::vector<std::string> &argv, std::ostream &out,
                std::ostream &err) {
    RunConfig config;
    try {
        config = parse_args(argv);
    } catch (const HelpRequested &h) {
        out << h.what();
        return kExitOk;
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        run(config, out);
    } catch (const IoError &e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}

} // namespace bpqc::cli
