// Copyright 2026 The chainsmith Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

#include "chainsmith/io.hpp"
#include "chainsmith/pst.hpp"

using namespace chainsmith;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

std::filesystem::path workdir() {
    static std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() / ("chainsmith_cli_" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string path(const std::string &name) {
    return (workdir() / name).string();
}

std::string slurp(const std::string &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliRun cli(const std::string &args, const std::string &env = "CHAINSMITH_CONFIG=") {
    std::string out = path("stdout.txt");
    std::string err = path("stderr.txt");
    std::string cmd = "env " + env + " " + CHAINSMITH_CLI_PATH + " " + args + " > " + out + " 2> " + err;
    int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::vector<std::vector<double>> csv_rows(const std::string &text, std::string *header = nullptr) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    if (header) {
        *header = line;
    }
    while (std::getline(ss, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            row.push_back(std::strtod(cell.c_str(), nullptr));
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST(cli, design_triple_five_sites) {
    CliRun r = cli("design triple --n 5 --alpha 0,0,0,0.7071,0.7071 --spectrum 4,2,0,-2,-4 --out " + path("five.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    auto report = nlohmann::json::parse(r.out);
    ASSERT_EQ(report["solutions"].size(), 2u);
    ChainFile f = read_chain_file(path("five.json"));
    Vec expected_j(4);
    expected_j << 2 * std::sqrt((7 + std::sqrt(10.0)) / 13), std::sqrt(9 * std::sqrt(10.0) - 24),
        2 * std::sqrt(2 * (1 + 2 * std::sqrt(10.0)) / 13), std::sqrt(3 + std::sqrt(2.5));
    ASSERT_LT((f.chain.couplings().cwiseAbs() - expected_j).cwiseAbs().maxCoeff(), 1e-8);
    ASSERT_NEAR(f.chain.fields()[0], -2 * std::sqrt((6 - std::sqrt(10.0)) / 13), 1e-8);
}

TEST(cli, design_pst) {
    CliRun r = cli("design pst --n 21 --out " + path("pst21.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    ChainFile f = read_chain_file(path("pst21.json"));
    ASSERT_LT((f.chain.couplings().cwiseAbs() - christandl_chain(21).couplings()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(cli, design_numeric_w_state_and_speed) {
    CliRun r = cli("design numeric --n 21 --target w-state --out " + path("w21.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    auto report = nlohmann::json::parse(r.out);
    ASSERT_LE(1 - report["solutions"][0]["fidelity"].get<double>(), 1e-8);
    ASSERT_EQ(cli("design pst --n 21 --out " + path("pst21b.json")).code, 0);
    CliRun s = cli("speed --chain " + path("w21.json") + " --reference " + path("pst21b.json"));
    ASSERT_EQ(s.code, 0) << s.err;
    auto j = nlohmann::json::parse(s.out);
    ASSERT_NEAR(j["j_max_t0"].get<double>(), 14.6, 1.46);
    ASSERT_LE(j["lower_bound_exact"].get<double>(), j["j_max_t0"].get<double>());
    ASSERT_LT(j["product_identity_error"].get<double>(), 1e-8);
    CliRun v = cli("verify --chain " + path("w21.json"));
    ASSERT_EQ(v.code, 0) << v.err;
}

TEST(cli, infeasible_target_exit_code) {
    CliRun r = cli("design triple --n 5 --alpha 0,0,0,1,0 --out " + path("x.json"));
    ASSERT_EQ(r.code, 65);
    ASSERT_NE(r.err.find("end site"), std::string::npos);
    ASSERT_EQ(cli("design numeric --alpha 0,1,0 --out " + path("x.json")).code, 65);
}

TEST(cli, usage_errors) {
    ASSERT_EQ(cli("").code, 64);
    ASSERT_EQ(cli("design").code, 64);
    ASSERT_EQ(cli("design sideways --n 3").code, 64);
    ASSERT_EQ(cli("design triple --n 5 --alpha 0,0,x,1,1").code, 64);
    ASSERT_EQ(cli("simulate").code, 64);
    ASSERT_EQ(cli("design pst").code, 64);
    ASSERT_EQ(cli("--help").code, 0);
}

TEST(cli, missing_and_corrupt_files) {
    ASSERT_EQ(cli("simulate --chain " + path("nope.json")).code, 66);
    {
        std::ofstream(path("corrupt.json")) << "{\"format\": 1, \"n\": 3";
    }
    ASSERT_EQ(cli("simulate --chain " + path("corrupt.json")).code, 66);
    {
        std::ofstream(path("wrong.json")) << R"({"format": 1, "n": 3, "fields": [0, 0], "couplings": [1, 1]})";
    }
    ASSERT_EQ(cli("verify --chain " + path("wrong.json") + " --target end").code, 66);
    ASSERT_EQ(cli("design pst --n 3", "CHAINSMITH_CONFIG=" + path("nope.json")).code, 66);
}

TEST(cli, convergence_failure_exit_code) {
    CliRun r = cli("design numeric --n 12 --target w-state --start uniform --max-iterations 1 --out " + path("x.json"));
    ASSERT_EQ(r.code, 2) << r.err;
    CliRun t = cli("design pst --n 5 --threshold 2 --out " + path("x.json"));
    ASSERT_EQ(t.code, 2);
}

TEST(cli, simulate_grid) {
    ASSERT_EQ(cli("design pst --n 6 --out " + path("pst6.json")).code, 0);
    CliRun r = cli("simulate --chain " + path("pst6.json") + " --steps 1 --t-start 0 --input-site 2");
    ASSERT_EQ(r.code, 0) << r.err;
    std::string header;
    auto rows = csv_rows(r.out, &header);
    ASSERT_EQ(header, "t,site_1,site_2,site_3,site_4,site_5,site_6");
    ASSERT_EQ(rows.size(), 1u);
    ASSERT_EQ(rows[0][0], 0);
    ASSERT_NEAR(rows[0][2], 1, 1e-15);

    CliRun full = cli("simulate --chain " + path("pst6.json") + " --steps 50 --out " + path("sim.csv"));
    ASSERT_EQ(full.code, 0);
    rows = csv_rows(slurp(path("sim.csv")));
    ASSERT_EQ(rows.size(), 50u);
    for (const auto &row : rows) {
        double total = 0;
        for (size_t k = 1; k < row.size(); k++) {
            total += row[k];
        }
        ASSERT_NEAR(total, 1, 1e-10);
    }
    ASSERT_NEAR(rows.back()[6], 1, 1e-10);
}

TEST(cli, parity_revival_peaks) {
    std::string alpha = "0,0,0,0,0,0,0,0,0.7071067811865476,0,0,0,0,0,0.7071067811865476";
    CliRun r = cli("design numeric --parity --alpha " + alpha + " --out " + path("revival.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    CliRun s = cli("simulate --chain " + path("revival.json") + " --steps 11");
    auto rows = csv_rows(s.out);
    const auto &last = rows.back();
    ASSERT_NEAR(last[9], 0.5, 1e-7);
    ASSERT_NEAR(last[15], 0.5, 1e-7);
}

TEST(cli, middle_release_uniform_on_odd_sites) {
    std::vector<double> a(11, 0.0);
    a[0] = 1;
    for (int k = 1; k <= 5; k++) {
        a[2 * k] = std::sqrt(2.0);
    }
    std::string alpha;
    for (double x : a) {
        alpha += (alpha.empty() ? "" : ",") + format_double(x);
    }
    CliRun d = cli("design numeric --parity --normalize --alpha " + alpha + " --out " + path("w11.json"));
    ASSERT_EQ(d.code, 0) << d.err;
    ASSERT_EQ(cli("extend --chain " + path("w11.json") + " --out " + path("w21odd.json")).code, 0);
    ChainFile ext = read_chain_file(path("w21odd.json"));
    ASSERT_EQ(ext.meta["input_site"], 11);
    CliRun s = cli("simulate --chain " + path("w21odd.json") + " --steps 5");
    auto rows = csv_rows(s.out);
    const auto &last = rows.back();
    for (int site = 1; site <= 21; site++) {
        ASSERT_NEAR(last[site], site % 2 ? 1.0 / 11 : 0.0, 1e-8) << site;
    }
    ASSERT_EQ(cli("verify --chain " + path("w21odd.json")).code, 0);
}

TEST(cli, robustness_reports) {
    ASSERT_EQ(cli("design pst --n 9 --out " + path("pst9.json")).code, 0);
    CliRun zero = cli("robustness --chain " + path("pst9.json") + " --eps 0 --trials 10");
    ASSERT_EQ(zero.code, 0) << zero.err;
    auto rows = csv_rows(zero.out);
    ASSERT_EQ(rows[0][2], rows[0][3]);

    std::string args = "robustness --chain " + path("pst9.json") + " --eps 0.01,0.02 --trials 300 --seed 5";
    CliRun a = cli(args + " --threads 1");
    CliRun b = cli(args + " --threads 3");
    ASSERT_EQ(a.out, b.out);
    rows = csv_rows(a.out);
    for (const auto &row : rows) {
        ASSERT_GE(row[3], row[2]);
    }
}

TEST(cli, config_precedence) {
    ASSERT_EQ(cli("design pst --n 5 --out " + path("pst5.json")).code, 0);
    {
        std::ofstream(path("cfg.json")) << R"({"robustness": {"trials": 7, "eps": [0.01], "seed": 3}})";
    }
    std::string env = "CHAINSMITH_CONFIG=" + path("cfg.json");
    auto rows = csv_rows(cli("robustness --chain " + path("pst5.json"), env).out);
    ASSERT_EQ(rows.size(), 1u);
    ASSERT_EQ(rows[0][1], 7);
    ASSERT_EQ(rows[0][5], 3);
    rows = csv_rows(cli("robustness --chain " + path("pst5.json") + " --trials 4", env).out);
    ASSERT_EQ(rows[0][1], 4);
    rows = csv_rows(cli("robustness --chain " + path("pst5.json") + " --trials 4").out);
    ASSERT_EQ(rows.size(), 4u);
}
