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
 * @file io.hpp
 * CSV and JSON serialization of experiment results.
 *
 * CSV tables are UTF-8, comma-delimited, LF-terminated, with one header row:
 *
 *   variance sweeps   experiment,n,layers,config,pde,mean_variance,stderr_of_mean,K,seed
 *   per-parameter     experiment,n,layers,config,param_index,variance,K,seed
 *   entanglement      experiment,n,layers,topology,mean_entropy_bits,ratio_to_max,K,seed
 *   training traces   experiment,config,epoch,loss,grad_norm,seed
 *   reference lines   n,reference
 *
 * Floating-point values carry 9 significant digits. JSON documents hold the
 * same rounded values under {"experiment", "config", "rows"}.
 */
#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "experiments.hpp"

namespace bpqc {

enum class OutputFormat { Csv, Json };

/// %.9g formatting.
inline std::string format_g9(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

/// @p x rounded to 9 significant digits.
inline double round_g9(double x) { return std::stod(format_g9(x)); }

/// 2^{-n} reference line passing through (ns[0], anchor).
inline std::vector<std::pair<std::size_t, double>>
reference_lines(const std::vector<std::size_t> &ns, double anchor) {
    std::vector<std::pair<std::size_t, double>> out;
    if (ns.empty()) {
        return out;
    }
    const double n0 = static_cast<double>(ns.front());
    for (auto n : ns) {
        out.emplace_back(n, anchor * std::exp2(n0 - static_cast<double>(n)));
    }
    return out;
}

inline std::string reference_lines_csv(
    const std::vector<std::pair<std::size_t, double>> &lines) {
    std::ostringstream os;
    os << "n,reference\n";
    for (const auto &[n, v] : lines) {
        os << n << ',' << format_g9(v) << '\n';
    }
    return os.str();
}

inline std::string to_csv(const SweepResult &result) {
    std::ostringstream os;
    os << "experiment,n,layers,config,pde,mean_variance,stderr_of_mean,K,seed\n";
    for (const auto &r : result.rows) {
        os << result.experiment << ',' << r.n_qubits << ',' << r.layers << ','
           << to_string(r.config) << ',' << r.pde_label() << ','
           << format_g9(r.report.mean_variance) << ','
           << format_g9(r.report.stderr_of_mean()) << ','
           << r.report.n_samples << ',' << r.report.seed << '\n';
    }
    return os.str();
}

/// Long-format table of every per-parameter variance.
inline std::string to_csv_per_param(const SweepResult &result) {
    std::ostringstream os;
    os << "experiment,n,layers,config,param_index,variance,K,seed\n";
    for (const auto &r : result.rows) {
        for (std::size_t j = 0; j < r.report.per_param_variance.size(); ++j) {
            os << result.experiment << ',' << r.n_qubits << ',' << r.layers
               << ',' << to_string(r.config) << ',' << j << ','
               << format_g9(r.report.per_param_variance[j]) << ','
               << r.report.n_samples << ',' << r.report.seed << '\n';
        }
    }
    return os.str();
}

inline std::string to_csv(const EntropyResult &result) {
    std::ostringstream os;
    os << "experiment,n,layers,topology,mean_entropy_bits,ratio_to_max,K,seed\n";
    for (const auto &r : result.rows) {
        os << result.experiment << ',' << r.n_qubits << ',' << r.layers << ','
           << to_string(r.topology) << ',' << format_g9(r.mean_entropy_bits)
           << ',' << format_g9(r.ratio_to_max) << ',' << r.n_samples << ','
           << r.seed << '\n';
    }
    return os.str();
}

inline std::string to_csv(const std::vector<TrainTrace> &traces) {
    std::ostringstream os;
    os << "experiment,config,epoch,loss,grad_norm,seed\n";
    for (const auto &t : traces) {
        for (const auto &e : t.epochs) {
            os << "converge," << to_string(t.config) << ',' << e.epoch << ','
               << format_g9(e.loss) << ',' << format_g9(e.gradient_norm) << ','
               << t.seed << '\n';
        }
    }
    return os.str();
}

inline nlohmann::json to_json(const SweepResult &result,
                              const nlohmann::json &config,
                              bool with_per_param = false) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : result.rows) {
        nlohmann::json row{
            {"n", r.n_qubits},
            {"layers", r.layers},
            {"config", to_string(r.config)},
            {"pde", r.pde_label()},
            {"mean_variance", round_g9(r.report.mean_variance)},
            {"stderr_of_mean", round_g9(r.report.stderr_of_mean())},
            {"K", r.report.n_samples},
            {"seed", r.report.seed},
        };
        if (with_per_param) {
            nlohmann::json per = nlohmann::json::array();
            for (double v : r.report.per_param_variance) {
                per.push_back(round_g9(v));
            }
            row["per_param_variance"] = std::move(per);
        }
        rows.push_back(std::move(row));
    }
    return {{"experiment", result.experiment},
            {"config", config},
            {"rows", std::move(rows)}};
}

inline nlohmann::json to_json(const EntropyResult &result,
                              const nlohmann::json &config) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : result.rows) {
        rows.push_back({
            {"n", r.n_qubits},
            {"layers", r.layers},
            {"topology", to_string(r.topology)},
            {"mean_entropy_bits", round_g9(r.mean_entropy_bits)},
            {"ratio_to_max", round_g9(r.ratio_to_max)},
            {"K", r.n_samples},
            {"seed", r.seed},
        });
    }
    return {{"experiment", result.experiment},
            {"config", config},
            {"rows", std::move(rows)}};
}

inline nlohmann::json to_json(const std::vector<TrainTrace> &traces,
                              const nlohmann::json &config) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &t : traces) {
        for (const auto &e : t.epochs) {
            rows.push_back({
                {"config", to_string(t.config)},
                {"epoch", e.epoch},
                {"loss", round_g9(e.loss)},
                {"grad_norm", round_g9(e.gradient_norm)},
                {"seed", t.seed},
            });
        }
    }
    return {{"experiment", "converge"},
            {"config", config},
            {"rows", std::move(rows)}};
}

/// Writes @p content to @p path, creating parent directories.
inline void write_file(const std::filesystem::path &path,
                       const std::string &content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

} // namespace bpqc
