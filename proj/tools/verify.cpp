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

#include <algorithm>
#include <cmath>

#include "cli.hpp"
#include "stia/errors.hpp"
#include "stia/precoding.hpp"
#include "stia/protocol.hpp"
#include "stia/rng.hpp"
#include "stia/scheduler.hpp"

namespace stia::cli {

namespace {

constexpr double kAlignmentTol = 1e-9;
constexpr double kDecodeTol = 1e-8;
constexpr double kRankPassFraction = 0.999;
constexpr double kPowerTol = 0.02;

struct RoundStats {
    double max_alignment = 0.0;
    double max_leakage = 0.0;
    double max_symbol_error = 0.0;
    std::int64_t rounds = 0;
    std::int64_t resamples = 0;
    std::int64_t full_rank = 0;
    std::int64_t rank_failures = 0;
    std::int64_t rank_failures_flagged = 0;
    std::int64_t decode_failures = 0;
    std::int64_t symbols_decoded = 0;
    std::int64_t slots_used = 0;
};

RoundStats run_rounds(int users, const VerifyOptions& options) {
    RoundStats stats;
    const auto k = static_cast<std::size_t>(users);
    for (std::int64_t r = 0; r < options.rounds; ++r) {
        for (std::uint64_t attempt = 0;; ++attempt) {
            const auto ch = draw_round_channels(users, options.seed, static_cast<std::uint64_t>(r), attempt);
            auto reference = ch.reference;
            if (options.negate_outdated) {
                for (auto& h : reference) {
                    for (auto& z : h.entries) {
                        z = -z;
                    }
                }
            }
            std::vector<PrecoderSet> precoders;
            try {
                for (std::size_t m = 0; m < ch.phase_two.size(); ++m) {
                    precoders.push_back(build_stia_precoders(ch.phase_two[m], reference, users,
                                                             ch.phase_two_slots[m]));
                }
            } catch (const IllConditionedChannel&) {
                ++stats.resamples;
                continue;
            }

            StreamRng symbol_rng(options.seed, static_cast<std::uint64_t>(r), attempt, 0x76657269ULL);
            StreamRng silent(0);
            const auto symbols = SymbolBlock::random(users, symbol_rng);

            std::vector<std::vector<Complex>> received(k);
            std::vector<double> scales;
            const auto first = phase_one_transmit(symbols);
            scales.push_back(first.scale);
            for (std::size_t u = 0; u < k; ++u) {
                received[u].push_back(receive(ch.reference[u], first.x, 0.0, silent));
            }
            for (std::size_t m = 0; m < precoders.size(); ++m) {
                const auto tx = phase_two_transmit(symbols, precoders[m]);
                scales.push_back(tx.scale);
                for (std::size_t u = 0; u < k; ++u) {
                    received[u].push_back(receive(ch.phase_two[m][u], tx.x, 0.0, silent));
                }
                stats.max_alignment =
                    std::max(stats.max_alignment, alignment_residual(precoders[m], ch.phase_two[m], ch.reference));
            }

            bool round_full_rank = true;
            bool round_flagged = true;
            for (int user = 1; user <= users; ++user) {
                const auto u = static_cast<std::size_t>(user - 1);
                stats.max_leakage = std::max(stats.max_leakage, residual_interference(user, ch, precoders));
                const auto eff = effective_channel(user, ch, precoders);
                if (rank_with_tol(eff.matrix) != k - 1) {
                    round_full_rank = false;
                    round_flagged = round_flagged && condition_estimate(eff.matrix) > kSingularConditionLimit;
                }
                const auto diff = cancel_interference(received[u], scales);
                try {
                    const auto decoded = decode_round(eff, diff);
                    const auto& sent = symbols.per_user[u];
                    double err = 0.0;
                    for (std::size_t i = 0; i < sent.size(); ++i) {
                        err = std::max(err, std::abs(decoded[i] - sent[i]));
                    }
                    stats.max_symbol_error = std::max(stats.max_symbol_error, err / norm_inf(sent));
                    stats.symbols_decoded += static_cast<std::int64_t>(decoded.size());
                } catch (const DecodeFailure&) {
                    ++stats.decode_failures;
                }
            }
            if (round_full_rank) {
                ++stats.full_rank;
            } else {
                ++stats.rank_failures;
                stats.rank_failures_flagged += round_flagged ? 1 : 0;
            }
            stats.slots_used += users;
            ++stats.rounds;
            break;
        }
    }
    return stats;
}

SuiteResult partition_suite() {
    SuiteResult suite{"partition", true, {}};
    std::int64_t plans = 0;
    nlohmann::json failures = nlohmann::json::array();
    for (int k = 3; k <= 6; ++k) {
        for (std::int64_t n = 1; n <= 50; ++n) {
            const auto plan = build_plan_general(k, n);
            const auto check = verify_plan(plan);
            ++plans;
            if (!check.ok) {
                suite.passed = false;
                failures.push_back({{"k", k}, {"n", n}, {"why", check.failures.front()}});
            }
            if (k == 3 && plan != build_plan_k3(n)) {
                suite.passed = false;
                failures.push_back({{"k", 3}, {"n", n}, {"why", "general plan differs from closed form"}});
            }
        }
    }
    suite.details = {{"plans_checked", plans}, {"failures", failures}};
    return suite;
}

SuiteResult golden_schedule_suite() {
    const auto plan = build_plan_k3(3);
    const std::vector<std::vector<Slot>> expected_rounds{{1, 6, 8}, {4, 9, 11}, {7, 12, 14}};
    std::vector<std::vector<Slot>> rounds;
    for (const auto& r : plan.stia_rounds) {
        rounds.push_back(r.slots());
    }
    const bool ok = rounds == expected_rounds && plan.zf_slots == std::vector<Slot>{2, 3, 5, 15} &&
                    plan.tdma_slots == std::vector<Slot>{10, 13};
    return {"schedule_golden", ok,
            {{"stia_rounds", rounds}, {"zf_slots", plan.zf_slots}, {"tdma_slots", plan.tdma_slots}}};
}

SuiteResult dof_accounting_suite() {
    bool ok = true;
    for (std::int64_t n = 1; n <= 100; ++n) {
        ok = ok && account_dof(build_plan_k3(n)).dof == Rational(6 * n + 10, 3 * n + 6);
    }
    const double k3_limit = boost::rational_cast<double>(account_dof(build_plan_k3(10000)).dof);
    const double k4_limit = boost::rational_cast<double>(account_dof(build_plan_general(4, 10000)).dof);
    ok = ok && std::abs(k3_limit - 2.0) <= 1e-3 && std::abs(k4_limit - 3.0) <= 1e-3;
    return {"dof_accounting", ok, {{"k3_n10000", k3_limit}, {"k4_n10000", k4_limit}}};
}

SuiteResult power_suite(std::uint64_t seed) {
    constexpr int draws = 10000;
    constexpr int users = 3;
    constexpr double power = 1000.0;
    double phase_one = 0.0;
    double phase_two = 0.0;
    double zf = 0.0;
    double tdma = 0.0;
    std::int64_t resamples = 0;
    for (int d = 0; d < draws; ++d) {
        StreamRng rng(seed, static_cast<std::uint64_t>(d), 0, 0x706f776572ULL);
        const auto symbols = SymbolBlock::random(users, rng);
        for (const auto& z : phase_one_transmit(symbols, power).x) {
            phase_one += std::norm(z);
        }
        for (std::uint64_t attempt = 0;; ++attempt) {
            const auto ch = draw_round_channels(users, seed, static_cast<std::uint64_t>(d), attempt);
            try {
                const auto pre = build_stia_precoders(ch.phase_two[0], ch.reference, users);
                for (const auto& z : phase_two_transmit(symbols, pre, power).x) {
                    phase_two += std::norm(z);
                }
                const std::vector<int> served{1, 2};
                const auto beams = build_zf_precoder(ch.reference, served);
                const std::vector<Complex> zf_symbols{rng.complex_gaussian(), rng.complex_gaussian()};
                for (const auto& z : zf_transmit(beams, zf_symbols, power).x) {
                    zf += std::norm(z);
                }
                break;
            } catch (const IllConditionedChannel&) {
                ++resamples;
            }
        }
        for (const auto& z : tdma_transmit(rng.complex_gaussian(), users - 1, power).x) {
            tdma += std::norm(z);
        }
    }
    const double denom = power * draws;
    const nlohmann::json ratios = {{"phase_one", phase_one / denom},
                                   {"phase_two", phase_two / denom},
                                   {"zf", zf / denom},
                                   {"tdma", tdma / denom}};
    bool ok = true;
    for (const auto& [name, value] : ratios.items()) {
        ok = ok && std::abs(value.get<double>() - 1.0) <= kPowerTol;
    }
    return {"power_audit", ok, {{"power_ratio", ratios}, {"draws", draws}, {"resamples", resamples}}};
}

}  // namespace

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options) {
    std::vector<SuiteResult> suites;
    SuiteResult alignment{"alignment", true, nlohmann::json::object()};
    SuiteResult decoding{"decoding", true, nlohmann::json::object()};
    SuiteResult rank{"effective_rank", true, nlohmann::json::object()};
    for (int k : options.users) {
        const auto stats = run_rounds(k, options);
        const std::string key = "k" + std::to_string(k);

        const bool aligned = stats.max_alignment <= kAlignmentTol && stats.max_leakage <= kAlignmentTol;
        alignment.passed = alignment.passed && aligned;
        alignment.details[key] = {{"max_alignment_residual", stats.max_alignment},
                                  {"max_interference_leakage", stats.max_leakage},
                                  {"rounds", stats.rounds},
                                  {"resamples", stats.resamples}};

        // K(K-1) symbols per K slots, i.e. K-1 per slot.
        const bool bookkeeping = stats.symbols_decoded == stats.slots_used * (k - 1);
        const bool decoded = stats.decode_failures == 0 && stats.max_symbol_error <= kDecodeTol && bookkeeping;
        decoding.passed = decoding.passed && decoded;
        decoding.details[key] = {{"max_relative_symbol_error", stats.max_symbol_error},
                                 {"decode_failures", stats.decode_failures},
                                 {"symbols_decoded", stats.symbols_decoded},
                                 {"slots_used", stats.slots_used}};

        const auto checked = stats.full_rank + stats.rank_failures;
        const double fraction = checked == 0 ? 0.0 : static_cast<double>(stats.full_rank) / checked;
        const bool ranked = fraction >= kRankPassFraction && stats.rank_failures == stats.rank_failures_flagged;
        rank.passed = rank.passed && ranked;
        rank.details[key] = {{"full_rank_fraction", fraction},
                             {"rank_failures", stats.rank_failures},
                             {"rank_failures_flagged", stats.rank_failures_flagged}};
    }
    suites.push_back(std::move(alignment));
    suites.push_back(std::move(decoding));
    suites.push_back(std::move(rank));
    suites.push_back(partition_suite());
    suites.push_back(golden_schedule_suite());
    suites.push_back(dof_accounting_suite());
    suites.push_back(power_suite(options.seed));
    return suites;
}

}  // namespace stia::cli
