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

#include <cmath>

#include "stia/analysis.hpp"
#include "stia/errors.hpp"

using namespace stia;

TEST_CASE("three-user trade-off values", "[analysis]") {
    CHECK(tradeoff_k3(Rational(0)) == Rational(2));
    CHECK(tradeoff_k3(Rational(1, 3)) == Rational(2));
    CHECK(tradeoff_k3(Rational(2, 3)) == Rational(7, 4));
    CHECK(tradeoff_k3(Rational(1)) == Rational(3, 2));
    CHECK(tradeoff_k3(Rational(4, 3)) == Rational(3, 2));
    CHECK(tradeoff_k3(Rational(3, 2)) == Rational(3, 2));
    CHECK_THROWS_AS(tradeoff_k3(Rational(-1, 10)), DomainError);
}

TEST_CASE("trade-off is continuous at its breakpoints", "[analysis]") {
    const Rational eps(1, 1000000);
    for (const Rational b : {Rational(1, 3), Rational(1)}) {
        const auto left = tradeoff_k3(b - eps);
        const auto right = tradeoff_k3(b + eps);
        CHECK(boost::rational_cast<double>(left - right) <= 1e-6);
        CHECK(left >= tradeoff_k3(b));
        CHECK(tradeoff_k3(b) >= right);
    }
}

TEST_CASE("trade-off is nonincreasing and piecewise linear", "[analysis]") {
    std::vector<Rational> grid;
    for (int i = 0; i <= 240; ++i) grid.emplace_back(i, 120);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        CHECK(tradeoff_k3(grid[i]) <= tradeoff_k3(grid[i - 1]));
    }
    // Second differences vanish except across a breakpoint.
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const auto second = tradeoff_k3(grid[i + 1]) - 2 * tradeoff_k3(grid[i]) + tradeoff_k3(grid[i - 1]);
        const bool breakpoint = grid[i] == Rational(1, 3) || grid[i] == Rational(1);
        CHECK((second != Rational(0)) == breakpoint);
    }
}

TEST_CASE("baseline time-sharing lines", "[analysis]") {
    CHECK(baseline_zf_tdma(Rational(1, 3)) == Rational(5, 3));
    CHECK(baseline_zf_mat(Rational(1, 3)) == Rational(11, 6));
    CHECK(baseline_zf_tdma(Rational(0)) == Rational(2));
    CHECK(baseline_zf_mat(Rational(0)) == Rational(2));
    CHECK(tradeoff_k3(Rational(1, 3)) - baseline_zf_tdma(Rational(1, 3)) == Rational(1, 3));
    CHECK(tradeoff_k3(Rational(1, 3)) - baseline_zf_mat(Rational(1, 3)) == Rational(1, 6));
    CHECK_THROWS_AS(baseline_zf_tdma(Rational(4, 3)), DomainError);
    CHECK_THROWS_AS(baseline_zf_mat(Rational(-1, 3)), DomainError);
}

TEST_CASE("STIA dominates both baselines on the unit interval", "[analysis]") {
    for (int i = 0; i <= 1000; ++i) {
        const Rational g(i, 1000);
        const auto stia = tradeoff_k3(g);
        const auto zm = baseline_zf_mat(g);
        const auto zt = baseline_zf_tdma(g);
        CHECK(stia >= zm);
        CHECK(zm >= zt);
        if (g > Rational(0) && g < Rational(1)) {
            CHECK(zm > zt);
            CHECK(stia > zt);
        }
        if (g > Rational(1, 3) && g < Rational(1)) {
            CHECK(stia > zm);
        }
    }
}

TEST_CASE("general-K curve keeps the K-1 plateau up to 1/K", "[analysis]") {
    CHECK(tradeoff_general(4, Rational(0)) == Rational(3));
    CHECK(tradeoff_general(4, Rational(1, 4)) == Rational(3));
    CHECK(tradeoff_general(4, Rational(1)) == Rational(1));
    CHECK(tradeoff_general(5, Rational(1, 5)) == Rational(4));
    CHECK(tradeoff_general(3, Rational(2, 3)) == Rational(7, 4));
    CHECK_THROWS_AS(tradeoff_general(2, Rational(0)), DomainError);
    for (int k = 3; k <= 6; ++k) {
        for (int i = 0; i <= 100; ++i) {
            CHECK(tradeoff_general(k, Rational(i, 100)) >= Rational(1));
        }
    }
}

TEST_CASE("trade-off table columns", "[analysis]") {
    const std::vector<Rational> gammas{0, Rational(1, 3), Rational(2, 3), 1, Rational(4, 3)};
    const auto rows = emit_tradeoff_table(gammas);
    std::vector<Rational> stia;
    std::vector<Rational> zt;
    for (const auto& r : rows) {
        if (r.scheme == TradeoffScheme::StiaTradeoff) stia.push_back(r.dof);
        if (r.scheme == TradeoffScheme::ZfTdma) zt.push_back(r.dof);
    }
    CHECK(stia == std::vector<Rational>{2, 2, Rational(7, 4), Rational(3, 2), Rational(3, 2)});
    CHECK(rows.size() == gammas.size() * 5);
    for (std::size_t i = 0; i < 4; ++i) CHECK(stia[i] >= zt[i]);
    CHECK_THROWS_AS(emit_tradeoff_table(std::span<const Rational>{}), DomainError);
}

TEST_CASE("trade-off CSV layout", "[analysis]") {
    const std::vector<Rational> gammas{Rational(1, 3)};
    const auto csv = tradeoff_csv(emit_tradeoff_table(gammas));
    CHECK(csv.rfind("schema_version,scheme,gamma_num,gamma_den,dof_num,dof_den\r\n", 0) == 0);
    CHECK(csv.find("1,stia,1,3,2,1\r\n") != std::string::npos);
    CHECK(csv.find("1,zf_tdma,1,3,5,3\r\n") != std::string::npos);
    CHECK(csv.find("1,zf_mat,1,3,11,6\r\n") != std::string::npos);
    CHECK(csv.find("1,mat,1,3,3,2\r\n") != std::string::npos);
    CHECK(default_gamma_grid().front() == Rational(0));
    CHECK(default_gamma_grid().back() == Rational(3, 2));
}

TEST_CASE("rational and CSV field parsing", "[analysis]") {
    CHECK(parse_rational("2/6") == Rational(1, 3));
    CHECK(parse_rational(" 3 ") == Rational(3));
    CHECK_THROWS_AS(parse_rational("1/0"), DomainError);
    CHECK_THROWS_AS(parse_rational("x"), DomainError);
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("regression recovers an injected slope exactly", "[analysis]") {
    const std::vector<double> grid{40.0, 50.0, 60.0};
    for (double d : {1.0, 5.0 / 3.0, 2.0, 3.0}) {
        std::vector<double> rates;
        for (double db : grid) rates.push_back(d * db / 10.0 * std::log2(10.0) - 0.7);
        CHECK(std::abs(regression_slope(grid, rates) - d) <= 1e-12);

        SumRateSamples samples{grid, 3, {}, 0, Rational(2), 15};
        for (int t = 0; t < 3; ++t) samples.rates.insert(samples.rates.end(), rates.begin(), rates.end());
        const auto est = fit_dof_slope(samples, 1, 50);
        CHECK(std::abs(est.slope - d) <= 1e-12);
        CHECK(est.confidence_halfwidth <= 1e-12);
    }
    CHECK_THROWS_AS(regression_slope(std::vector<double>{40.0}, std::vector<double>{1.0}), DomainError);
}

TEST_CASE("slope estimation rejects unusable configurations", "[analysis]") {
    SimulationConfig cfg;
    cfg.trials = 999;
    CHECK_THROWS_AS(estimate_dof_slope(cfg), DomainError);
    cfg.trials = 1000;
    cfg.snr_grid_db = {50.0, 40.0};
    CHECK_THROWS_AS(estimate_dof_slope(cfg), DomainError);
    cfg.snr_grid_db = {10.0, 20.0};
    CHECK_THROWS_AS(estimate_dof_slope(cfg), DomainError);
    cfg.snr_grid_db = {40.0};
    CHECK_THROWS_AS(estimate_dof_slope(cfg), DomainError);

    SimulationConfig bad;
    bad.trials = 10;
    bad.delay = DelayConfig(3, 2);
    CHECK_THROWS_AS(simulate_sum_rates(bad), DomainError);
    bad.scheme = SimScheme::Zf;
    bad.delay = DelayConfig(3, 1);
    CHECK_THROWS_AS(simulate_sum_rates(bad), DomainError);
    CHECK_THROWS_AS(parse_sim_scheme("mat"), DomainError);
    CHECK(parse_sim_scheme("zf_tdma") == SimScheme::ZfTdma);
}

TEST_CASE("simulation output is independent of the thread count", "[analysis]") {
    for (auto scheme : {SimScheme::Stia, SimScheme::ZfTdma, SimScheme::Tdma}) {
        SimulationConfig cfg;
        cfg.scheme = scheme;
        cfg.trials = 60;
        cfg.rounds = 3;
        cfg.threads = 1;
        const auto one = simulate_sum_rates(cfg);
        cfg.threads = 3;
        const auto three = simulate_sum_rates(cfg);
        CHECK(one.rates == three.rates);
        CHECK(one.resamples == three.resamples);
        cfg.seed = 8;
        CHECK(simulate_sum_rates(cfg).rates != one.rates);
    }
}

TEST_CASE("simulated sum rates rise with snr", "[analysis]") {
    SimulationConfig cfg;
    cfg.trials = 40;
    cfg.rounds = 2;
    cfg.threads = 1;
    const auto s = simulate_sum_rates(cfg);
    CHECK(s.plan_dof == Rational(22, 12));
    CHECK(s.horizon == 12);
    const auto est = fit_dof_slope(s, 1, 0);
    CHECK(est.mean_sum_rates[0] < est.mean_sum_rates[1]);
    CHECK(est.mean_sum_rates[1] < est.mean_sum_rates[2]);
}
