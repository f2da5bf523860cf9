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
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "bpqc/io.hpp"

using namespace bpqc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        rows.push_back(cells);
    }
    return rows;
}

const SweepResult &small_sweep() {
    static const SweepResult r =
        sweep_qubits({4, 6, 8}, 3, all_loss_kinds(), {3, 11});
    return r;
}

} // namespace

TEST_CASE("9 significant digit formatting", "[io]") {
    CHECK(format_g9(0.0123456789123) == "0.0123456789");
    CHECK(format_g9(1.0) == "1");
    CHECK(round_g9(3.14159265358979) == 3.14159265);
}

TEST_CASE("sweep CSV layout", "[io]") {
    const auto csv = to_csv(small_sweep());
    CHECK(csv.find('\r') == std::string::npos);
    const auto rows = parse_csv(csv);
    REQUIRE(rows.size() == 13);
    CHECK(rows[0] == std::vector<std::string>{"experiment", "n", "layers", "config",
                                              "pde", "mean_variance",
                                              "stderr_of_mean", "K", "seed"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].size() == 9);
        CHECK(rows[i][0] == "sweep-qubits");
    }
}

TEST_CASE("CSV round-trips to 9 significant digits", "[io][property]") {
    const auto &r = small_sweep();
    const auto rows = parse_csv(to_csv(r));
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto &row = r.rows[i];
        const auto &cells = rows[i + 1];
        CHECK(std::stoul(cells[1]) == row.n_qubits);
        CHECK(std::stoul(cells[2]) == row.layers);
        CHECK(cells[3] == to_string(row.config));
        CHECK_THAT(std::stod(cells[5]), WithinRel(row.report.mean_variance, 1e-8));
        CHECK_THAT(std::stod(cells[6]), WithinRel(row.report.stderr_of_mean(), 1e-8));
    }
}

TEST_CASE("JSON and CSV carry identical values", "[io]") {
    const auto &r = small_sweep();
    const auto j = to_json(r, {{"seed", 11}});
    CHECK(j.at("experiment") == "sweep-qubits");
    CHECK(j.at("config").at("seed") == 11);
    const auto rows = parse_csv(to_csv(r));
    REQUIRE(j.at("rows").size() == rows.size() - 1);
    for (std::size_t i = 0; i < j.at("rows").size(); ++i) {
        const auto &jr = j.at("rows")[i];
        CHECK(jr.at("config") == rows[i + 1][3]);
        CHECK(jr.at("mean_variance").get<double>() == std::stod(rows[i + 1][5]));
        CHECK(jr.at("stderr_of_mean").get<double>() == std::stod(rows[i + 1][6]));
    }

    const auto e = entanglement_sweep({4}, {1, 3}, {Topology::AllToAll}, 3, 1);
    const auto ej = to_json(e, nlohmann::json::object());
    const auto erows = parse_csv(to_csv(e));
    CHECK(erows[0][4] == "mean_entropy_bits");
    for (std::size_t i = 0; i < e.rows.size(); ++i) {
        CHECK(ej.at("rows")[i].at("ratio_to_max").get<double>() ==
              std::stod(erows[i + 1][5]));
    }
}

TEST_CASE("per-parameter and trace tables", "[io]") {
    const auto per = parse_csv(to_csv_per_param(small_sweep()));
    CHECK(per[0][5] == "variance");
    // 4 configs x (24 + 36 + 48) parameters
    CHECK(per.size() == 1 + 4 * (24 + 36 + 48));

    const auto trace = train(LossConfig::global(), {4, 2, 3, 0.01, 1});
    const auto rows = parse_csv(to_csv(std::vector<TrainTrace>{trace}));
    CHECK(rows[0] == std::vector<std::string>{"experiment", "config", "epoch", "loss",
                                              "grad_norm", "seed"});
    CHECK(rows.size() == 5);
}

TEST_CASE("reference lines", "[io]") {
    const auto lines = reference_lines({4, 6, 8}, 0.032);
    REQUIRE(lines.size() == 3);
    CHECK_THAT(lines[0].second, WithinAbs(0.032, 1e-15));
    CHECK_THAT(lines[1].second, WithinAbs(0.032 / 4, 1e-15));
    CHECK_THAT(lines[2].second, WithinAbs(0.032 / 16, 1e-15));
    const auto single = reference_lines({5}, 0.5);
    REQUIRE(single.size() == 1);
    CHECK(single[0].second == 0.5);
    const auto many = reference_lines({2, 3, 5, 8, 12}, 1.0);
    for (std::size_t i = 1; i < many.size(); ++i) {
        CHECK(many[i].second < many[i - 1].second);
    }
    CHECK(reference_lines_csv(lines).rfind("n,reference\n4,0.032\n", 0) == 0);
}

TEST_CASE("write_file reports I/O failures", "[io]") {
    const auto dir = std::filesystem::temp_directory_path() / "bpqc_io_test";
    std::filesystem::create_directories(dir);
    const auto blocker = dir / "plain_file";
    write_file(blocker, "x");
    CHECK_THROWS_AS(write_file(blocker / "nested.csv", "data"), IoError);
    std::filesystem::remove_all(dir);
}
