// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The stia-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "stia/errors.hpp"

using namespace stia::cli;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "stia");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "stia_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("run configuration survives a JSON round trip", "[cli]") {
    RunConfig a;
    CHECK(run_config_from_json(to_json(a)) == a);

    RunConfig b;
    b.command = Command::Tradeoff;
    b.k = 5;
    b.tc = 5;
    b.tfb = 2;
    b.snr_grid_db = {30.0, 45.5};
    b.trials = 1234;
    b.seed = 0xFFFFFFFFFFFFFFFFULL;
    b.scheme = "zf_tdma";
    b.output_path = "out dir/x.csv";
    b.format = OutputFormat::Json;
    b.rounds = 9;
    b.n = 17;
    b.gammas = {"1/3", "2"};
    b.mutate = "negate-outdated";
    CHECK(run_config_from_json(to_json(b)) == b);
    CHECK(run_config_from_json(nlohmann::json::parse(to_json(b).dump())) == b);
}

TEST_CASE("partial config files keep the remaining defaults", "[cli]") {
    const auto cfg = run_config_from_json(nlohmann::json{{"k", 4}, {"tc", 4}});
    CHECK(cfg.k == 4);
    CHECK(cfg.seed == 7);
    CHECK(cfg.resolved_trials() == 10000);
    CHECK_THROWS(run_config_from_json(nlohmann::json{{"k", "three"}}));
}

TEST_CASE("validation rejects bad settings", "[cli]") {
    RunConfig cfg;
    cfg.trials = 0;
    CHECK_THROWS_AS(validate(cfg), stia::DomainError);
    cfg = RunConfig{};
    cfg.k = 2;
    CHECK_THROWS_AS(validate(cfg), stia::DomainError);
    cfg = RunConfig{};
    cfg.scheme = "mat";
    CHECK_THROWS_AS(validate(cfg), stia::DomainError);
}

TEST_CASE("simulate with zero trials is a usage error", "[cli]") {
    const auto r = invoke({"simulate", "--trials", "0"});
    CHECK(r.code != 0);
    CHECK_FALSE(r.err.empty());
    CHECK(invoke({"simulate", "--bogus"}).code != 0);
    CHECK(invoke({"simulate", "--scheme", "stia", "--tfb", "2"}).code != 0);
}

TEST_CASE("default trade-off table contains the reference rows", "[cli]") {
    const auto r = invoke({"tradeoff"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("1,stia,1,3,2,1\r\n") != std::string::npos);
    CHECK(r.out.find("1,zf_mat,1,3,11,6\r\n") != std::string::npos);
    CHECK(r.out.find("1,stia,3,2,3,2\r\n") != std::string::npos);

    const auto j = invoke({"tradeoff", "--gammas", "2/3", "--format", "json"});
    REQUIRE(j.code == 0);
    const auto doc = nlohmann::json::parse(j.out);
    CHECK(doc.dump().find("\"stia\"") != std::string::npos);
}

TEST_CASE("schedule command emits the n=3 index sets", "[cli]") {
    const auto r = invoke({"schedule", "--n", "3"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    const auto& rounds = doc.at("stia_rounds");
    REQUIRE(rounds.size() == 3);
    std::vector<std::vector<std::int64_t>> sets;
    for (const auto& round : rounds) {
        auto slots = round.get<std::vector<std::int64_t>>();
        std::sort(slots.begin(), slots.end());
        sets.push_back(slots);
    }
    CHECK(sets == std::vector<std::vector<std::int64_t>>{{1, 6, 8}, {4, 9, 11}, {7, 12, 14}});
    CHECK(doc.at("zf_slots").get<std::vector<std::int64_t>>() == std::vector<std::int64_t>{2, 3, 5, 15});
    CHECK(doc.at("tdma_slots").get<std::vector<std::int64_t>>() == std::vector<std::int64_t>{10, 13});
}

TEST_CASE("verify passes and catches a broken precoder", "[cli]") {
    const auto ok = invoke({"verify", "--trials", "50"});
    CHECK(ok.code == 0);
    const auto report = nlohmann::json::parse(ok.out);
    CHECK(report.at("passed") == true);

    const auto broken = invoke({"verify", "--trials", "50", "--mutate", "negate-outdated"});
    CHECK(broken.code != 0);
    bool alignment_failed = false;
    const auto broken_report = nlohmann::json::parse(broken.out);
    for (const auto& suite : broken_report.at("suites")) {
        if (suite.at("name").get<std::string>() == "alignment") alignment_failed = !suite.at("passed").get<bool>();
    }
    CHECK(alignment_failed);
}

TEST_CASE("simulate output is byte-identical across runs and thread counts", "[cli]") {
    const auto a = scratch("sim_a.json");
    const auto b = scratch("sim_b.json");
    const auto c = scratch("sim_c.csv");
    const std::vector<std::string> base{"simulate", "--trials", "1000", "--rounds", "2", "--seed", "11"};
    auto with_out = [&](const std::filesystem::path& p, std::vector<std::string> extra = {}) {
        auto args = base;
        args.insert(args.end(), {"--out", p.string()});
        args.insert(args.end(), extra.begin(), extra.end());
        return args;
    };
    ::setenv("STIA_THREADS", "1", 1);
    REQUIRE(invoke(with_out(a)).code == 0);
    ::setenv("STIA_THREADS", "3", 1);
    REQUIRE(invoke(with_out(b)).code == 0);
    ::unsetenv("STIA_THREADS");
    CHECK(slurp(a) == slurp(b));
    CHECK_FALSE(slurp(a).empty());
    const auto doc = nlohmann::json::parse(slurp(a));
    CHECK(doc.at("seed") == 11);
    CHECK(doc.at("trials") == 1000);

    REQUIRE(invoke(with_out(c, {"--format", "csv"})).code == 0);
    CHECK(slurp(c).rfind("schema_version,scheme,k,t_c,t_fb,snr_db,mean_sum_rate\r\n", 0) == 0);
}

TEST_CASE("config file values yield to explicit flags", "[cli]") {
    const auto cfg_path = scratch("config.json");
    {
        std::ofstream f(cfg_path);
        f << R"({"n": 5, "k": 3})";
    }
    const auto from_file = invoke({"schedule", "--config", cfg_path.string()});
    REQUIRE(from_file.code == 0);
    CHECK(nlohmann::json::parse(from_file.out).at("n") == 5);
    const auto overridden = invoke({"schedule", "--config", cfg_path.string(), "--n", "2"});
    REQUIRE(overridden.code == 0);
    CHECK(nlohmann::json::parse(overridden.out).at("n") == 2);
    CHECK(invoke({"schedule", "--config", scratch("missing.json").string()}).code != 0);
}

TEST_CASE("unwritable output path fails cleanly", "[cli]") {
    const auto r = invoke({"tradeoff", "--out", "/nonexistent-dir/x.csv"});
    CHECK(r.code != 0);
}
