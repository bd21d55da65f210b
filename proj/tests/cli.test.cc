/*
 * Copyright 2026 The bqt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "cli.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"

#include "json.hpp"

using namespace bqt;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

/// Drops the "# convention" comment lines of a CSV report.
std::vector<std::string> csv_rows(const std::string &text) {
    std::vector<std::string> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') {
            rows.push_back(line);
        }
    }
    return rows;
}

}  // namespace

TEST(cli, parse_coefficient) {
    EXPECT_EQ(cli::parse_coefficient("0.6"), Amplitude(0.6, 0));
    EXPECT_EQ(cli::parse_coefficient("0.6+0.8j"), Amplitude(0.6, 0.8));
    EXPECT_EQ(cli::parse_coefficient("-0.6-0.8J"), Amplitude(-0.6, -0.8));
    EXPECT_EQ(cli::parse_coefficient("0.8j"), Amplitude(0, 0.8));
    EXPECT_EQ(cli::parse_coefficient("1e-1"), Amplitude(0.1, 0));
    EXPECT_THROW(cli::parse_coefficient("abc"), std::invalid_argument);
    EXPECT_THROW(cli::parse_coefficient("1+j"), std::invalid_argument);
}

TEST(cli, parse_decoy_range) {
    EXPECT_EQ(cli::parse_decoy_range("5"), (std::vector<size_t>{5}));
    EXPECT_EQ(cli::parse_decoy_range("1..4"), (std::vector<size_t>{1, 2, 3, 4}));
    EXPECT_EQ(cli::parse_decoy_range("1,2,4"), (std::vector<size_t>{1, 2, 4}));
    EXPECT_THROW(cli::parse_decoy_range("4..1"), std::invalid_argument);
    EXPECT_THROW(cli::parse_decoy_range("x"), std::invalid_argument);
}

TEST(cli, run_random_enumerate) {
    auto r = invoke({"run", "--scheme", "improved", "--case", "2x3", "--random", "--seed", "1", "--mode", "enumerate"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["branches"].size(), 16u);
    EXPECT_EQ(j["summary"]["branches"], 16);
    EXPECT_TRUE(j["summary"]["passed"].get<bool>());
    EXPECT_GE(j["summary"]["min_fidelity"].get<double>(), 1 - 1e-9);
    EXPECT_EQ(j["summary"]["ledger"]["a_u"], 3);
    EXPECT_TRUE(j.contains("convention"));
    EXPECT_EQ(j["plan"]["frame_fix"]["party"], "alice");
}

TEST(cli, run_basis_input) {
    auto r = invoke({"run", "--scheme", "improved", "--alpha-a", "1", "--beta-a", "0", "--alpha-b", "1", "--beta-b", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    for (const auto &b : j["branches"]) {
        EXPECT_NEAR(b["fidelity_a_to_b"].get<double>(), 1, 1e-9);
        EXPECT_NEAR(b["fidelity_b_to_a"].get<double>(), 1, 1e-9);
    }
}

TEST(cli, run_renormalizes_with_warning) {
    auto r = invoke({"run", "--scheme", "improved", "--alpha-a", "1", "--beta-a", "1", "--alpha-b", "0.6", "--beta-b", "0.8j"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("renormalizing"), std::string::npos);
    auto j = nlohmann::json::parse(r.out);
    double inv = 1 / std::sqrt(2.0);
    EXPECT_NEAR(j["messages"][0]["alpha"][0].get<double>(), inv, 1e-12);
    EXPECT_NEAR(j["messages"][0]["beta"][0].get<double>(), inv, 1e-12);

    auto quiet = invoke({"--quiet", "run", "--alpha-a", "1", "--beta-a", "1", "--alpha-b", "1", "--beta-b", "0"});
    EXPECT_EQ(quiet.code, 0);
    EXPECT_TRUE(quiet.err.empty());
}

TEST(cli, run_usage_errors) {
    EXPECT_EQ(invoke({"run", "--scheme", "nope", "--random"}).code, 2);
    EXPECT_EQ(invoke({"run", "--scheme", "improved"}).code, 2);
    EXPECT_EQ(invoke({"run", "--alpha-a", "1"}).code, 2);
    EXPECT_EQ(invoke({"run", "--alpha-a", "0", "--beta-a", "0", "--random"}).code, 2);
    EXPECT_EQ(invoke({"run", "--random", "--mode", "other"}).code, 2);
    EXPECT_EQ(invoke({"run", "--random", "--format", "yaml"}).code, 2);
    EXPECT_EQ(invoke({"run", "--scheme", "zhou-as-claimed", "--random"}).code, 2);
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"bogus"}).code, 2);
}

TEST(cli, run_zhou_and_sample_mode) {
    auto r = invoke({"run", "--scheme", "zhou", "--case", "2x3", "--random", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["scheme"], "zhou-corrected");
    EXPECT_EQ(j["summary"]["ledger"]["c_r"], 6);

    auto s = invoke({"run", "--random", "--seed", "3", "--mode", "sample", "--format", "csv"});
    ASSERT_EQ(s.code, 0) << s.err;
    EXPECT_EQ(csv_rows(s.out).size(), 2u);
}

TEST(cli, outputs_are_byte_deterministic) {
    std::vector<std::vector<std::string>> commands{
        {"run", "--random", "--seed", "5", "--case", "2x3"},
        {"run", "--random", "--seed", "5", "--mode", "sample"},
        {"attack", "--strategy", "entangle-measure", "--decoys", "1..3", "--trials", "2000", "--seed", "5"},
        {"derive", "--channel", "eq4"},
        {"efficiency", "--format", "json"},
    };
    for (const auto &c : commands) {
        auto a = invoke(c);
        auto b = invoke(c);
        EXPECT_EQ(a.code, 0) << c[0];
        EXPECT_EQ(a.out, b.out) << c[0];
    }
}

TEST(cli, efficiency_formats) {
    auto md = invoke({"efficiency", "--format", "markdown"});
    ASSERT_EQ(md.code, 0);
    for (const char *needle : {"1/3", "5/13", "2/5", "5/11", "convention"}) {
        EXPECT_NE(md.out.find(needle), std::string::npos) << needle;
    }
    auto js = invoke({"efficiency", "--format", "json"});
    ASSERT_EQ(js.code, 0);
    auto j = nlohmann::json::parse(js.out);
    EXPECT_EQ(j["rows"].size(), 6u);
    for (const auto &row : j["rows"]) {
        EXPECT_TRUE(row.contains("eta_num"));
        EXPECT_TRUE(row.contains("eta_den"));
    }
    auto one = invoke({"efficiency", "--scheme", "improved", "--case", "2x2", "--format", "csv"});
    ASSERT_EQ(one.code, 0);
    auto rows = csv_rows(one.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_NE(rows[1].find("40.0"), std::string::npos);
    EXPECT_EQ(invoke({"efficiency", "--format", "xml"}).code, 2);
    EXPECT_EQ(invoke({"efficiency", "--scheme", "other"}).code, 2);
}

TEST(cli, attack_reports) {
    auto none = invoke({"attack", "--strategy", "none", "--decoys", "5", "--trials", "5000"});
    ASSERT_EQ(none.code, 0);
    auto rows = csv_rows(none.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1], "none,5,5000,0,0");

    auto em = invoke({"attack", "--strategy", "entangle-measure", "--decoys", "4", "--trials", "100000", "--format", "json"});
    ASSERT_EQ(em.code, 0);
    auto j = nlohmann::json::parse(em.out);
    const auto &row = j["rows"][0];
    EXPECT_NEAR(row["analytic_rate"].get<double>(), 0.68359375, 1e-12);
    EXPECT_NEAR(row["empirical_rate"].get<double>(), 0.68359375, 3 * row["sigma"].get<double>());

    EXPECT_EQ(invoke({"attack", "--strategy", "bogus"}).code, 2);
    EXPECT_EQ(invoke({"attack", "--trials", "0"}).code, 2);
    EXPECT_EQ(invoke({"attack", "--decoys", "a..b"}).code, 2);
}

TEST(cli, derive_tables) {
    auto eq4 = invoke({"derive", "--channel", "eq4"});
    ASSERT_EQ(eq4.code, 0) << eq4.err;
    auto j = nlohmann::json::parse(eq4.out);
    EXPECT_EQ(j["entries"].size(), 16u);
    EXPECT_EQ(j["frame_fix"]["party"], "alice");

    auto bell = invoke({"derive", "--channel", "bell-phi-plus"});
    ASSERT_EQ(bell.code, 0);
    j = nlohmann::json::parse(bell.out);
    EXPECT_EQ(j["entries"].size(), 4u);
    EXPECT_EQ(j["entries"]["00"]["bob"], "I");

    auto eq3 = invoke({"derive", "--channel", "eq3"});
    ASSERT_EQ(eq3.code, 0);
    EXPECT_EQ(nlohmann::json::parse(eq3.out)["entries"].size(), 64u);

    auto bare = invoke({"derive", "--channel", "eq4", "--no-frame-fix"});
    EXPECT_EQ(bare.code, 1);
    EXPECT_NE(bare.err.find("failing outcome: "), std::string::npos);

    EXPECT_EQ(invoke({"derive", "--channel", "phi-plus-x2", "--no-frame-fix"}).code, 0);
    EXPECT_EQ(invoke({"derive", "--channel", "nope"}).code, 2);
}

TEST(cli, out_flag_writes_file) {
    const std::string path = "cli_test_report.md";
    std::remove(path.c_str());
    auto r = invoke({"efficiency", "--out", path});
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    std::stringstream content;
    content << f.rdbuf();
    EXPECT_EQ(content.str(), invoke({"efficiency"}).out);
    std::remove(path.c_str());
}

TEST(cli, help_exits_zero) {
    auto r = invoke({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("attack"), std::string::npos);
}
