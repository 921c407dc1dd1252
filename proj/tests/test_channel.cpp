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

#include "stia/channel.hpp"
#include "stia/errors.hpp"

using namespace stia;

TEST_CASE("DelayConfig validates and exposes gamma as an exact ratio", "[channel]") {
    CHECK(DelayConfig(3, 1).gamma() == Rational(1, 3));
    CHECK(DelayConfig(4, 0).gamma() == Rational(0));
    CHECK(DelayConfig(2, 3).gamma() == Rational(3, 2));
    CHECK_THROWS_AS(DelayConfig(0, 1), DomainError);
    CHECK_THROWS_AS(DelayConfig(3, -1), DomainError);
}

TEST_CASE("block boundaries", "[channel]") {
    const DelayConfig cfg(3, 1);
    CHECK(cfg.block_of(1) == 1);
    CHECK(cfg.block_of(3) == 1);
    CHECK(cfg.block_of(4) == 2);
    CHECK(cfg.block_of(8) == 3);
    CHECK(cfg.block_start(3) == 7);
    CHECK(cfg.block_start_of_slot(9) == 7);
    CHECK_THROWS_AS(cfg.block_of(0), DomainError);
}

TEST_CASE("fading is deterministic per seed and constant within a block", "[channel]") {
    const FadingProcess a(3, 2, 4, 99);
    const FadingProcess b(3, 2, 4, 99);
    const FadingProcess c(3, 2, 4, 100);
    for (BlockIndex blk = 1; blk <= 5; ++blk) {
        for (int u = 1; u <= 3; ++u) {
            CHECK(a.channel(u, blk).entries == b.channel(u, blk).entries);
            CHECK(a.channel(u, blk).entries != c.channel(u, blk).entries);
        }
    }
    for (Slot s = 5; s <= 8; ++s) {
        const auto set = a.at_slot(s);
        for (int u = 1; u <= 3; ++u) {
            CHECK(set[static_cast<std::size_t>(u - 1)].entries == a.channel(u, 2).entries);
            CHECK(set[static_cast<std::size_t>(u - 1)].block == 2);
        }
    }
    CHECK(sample_block(a, 3)[1].entries == a.channel(2, 3).entries);
}

TEST_CASE("fading entries are unit-variance and uncorrelated across blocks", "[channel]") {
    const FadingProcess proc(1, 1, 1, 2024);
    constexpr int draws = 100000;
    double power = 0.0;
    double re_power = 0.0;
    Complex mean{};
    Complex corr{};
    Complex prev = proc.channel(1, 1).entries[0];
    for (int b = 2; b <= draws + 1; ++b) {
        const Complex h = proc.channel(1, b).entries[0];
        power += std::norm(h);
        re_power += h.real() * h.real();
        mean += h;
        corr += h * std::conj(prev);
        prev = h;
    }
    CHECK(std::abs(power / draws - 1.0) <= 0.02);
    CHECK(std::abs(re_power / draws - 0.5) <= 0.01);
    CHECK(std::abs(mean / static_cast<double>(draws)) <= 0.02);
    CHECK(std::abs(corr / static_cast<double>(draws)) <= 0.02);
}

TEST_CASE("CSIT at the first slot of a three-slot block is empty", "[channel]") {
    const FadingProcess proc(3, 2, 3, 1);
    const auto view = csit_at(proc, DelayConfig(3, 1), 1);
    CHECK_FALSE(view.current.has_value());
    CHECK(view.outdated.empty());
}

TEST_CASE("CSIT at slot 8 holds block 3 and both earlier blocks", "[channel]") {
    const FadingProcess proc(3, 2, 3, 1);
    const auto view = csit_at(proc, DelayConfig(3, 1), 8);
    REQUIRE(view.current.has_value());
    CHECK(view.current_block == 3);
    CHECK((*view.current)[0].entries == proc.channel(1, 3).entries);
    REQUIRE(view.outdated.size() == 2);
    CHECK(view.outdated.count(1) == 1);
    CHECK(view.outdated.count(2) == 1);
    CHECK(view.outdated.at(2)[2].entries == proc.channel(3, 2).entries);
}

TEST_CASE("instantaneous feedback always exposes the current block", "[channel]") {
    const FadingProcess proc(3, 2, 5, 1);
    const DelayConfig cfg(5, 0);
    for (Slot s = 1; s <= 40; ++s) {
        CHECK(csit_at(proc, cfg, s).current.has_value());
    }
}

TEST_CASE("csit_at rejects a mismatched coherence time", "[channel]") {
    const FadingProcess proc(3, 2, 4, 1);
    CHECK_THROWS_AS(csit_at(proc, DelayConfig(3, 1), 2), DomainError);
}

TEST_CASE("CSIT causality against a feedback-event timeline", "[channel]") {
    for (int tc = 1; tc <= 6; ++tc) {
        for (int tfb = 0; tfb <= 2 * tc; ++tfb) {
            const DelayConfig cfg(tc, tfb);
            for (Slot slot = 1; slot <= 8 * tc; ++slot) {
                // Oracle: replay feedback arrivals. Block b is measured in its
                // first slot and known from that slot + tfb onward.
                std::vector<BlockIndex> known;
                for (BlockIndex b = 1; (b - 1) * tc + 1 <= slot; ++b) {
                    const Slot measured = (b - 1) * tc + 1;
                    if (measured + tfb <= slot) {
                        known.push_back(b);
                    }
                }
                const BlockIndex now = (slot - 1) / tc + 1;
                const auto avail = csit_availability(cfg, slot);
                const bool oracle_current = !known.empty() && known.back() == now;
                std::vector<BlockIndex> oracle_past(known.begin(), known.end());
                if (oracle_current) oracle_past.pop_back();
                CHECK(avail.current_block == now);
                CHECK(avail.has_current == oracle_current);
                CHECK(avail.outdated_blocks == oracle_past);
                CHECK(has_current_csit(cfg, slot) == oracle_current);
            }
        }
    }
}

TEST_CASE("coherence time from carrier and speed", "[channel]") {
    const double walk = 3.0 / 3.6;
    CHECK(std::abs(coherence_time_estimate(2.1e9, walk) * 1e3 - 21.4) <= 0.1);
    CHECK(std::abs(coherence_time_estimate(1.05e9, walk) * 1e3 - 42.8) <= 0.2);
    const double base = coherence_time_estimate(2.1e9, walk);
    CHECK(coherence_time_estimate(2.1e9, 2.0 * walk) == Catch::Approx(base / 2.0).epsilon(1e-12));
    CHECK_THROWS_AS(coherence_time_estimate(0.0, walk), DomainError);
    CHECK_THROWS_AS(coherence_time_estimate(2.1e9, -1.0), DomainError);
    CHECK_THROWS_AS(coherence_time_estimate(2.1e9, 0.0), DomainError);
}
