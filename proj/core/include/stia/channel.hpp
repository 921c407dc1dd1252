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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "stia/numerics.hpp"

namespace stia {

// Compare against Rational values, never bare integers: with Boost 1.74 and
// C++20 rewritten comparisons, rational == int recurses without end.
using Rational = boost::rational<std::int64_t>;
using Slot = std::int64_t;
using BlockIndex = std::int64_t;

/// h^(k) for one user and one coherence block. Users and blocks are 1-based.
struct ChannelVector {
    std::vector<Complex> entries;
    int user = 1;
    BlockIndex block = 1;
};

/// One ChannelVector per user, ordered by user index (element 0 is user 1).
using ChannelSet = std::vector<ChannelVector>;

/// Coherence time and feedback delay, both in slots.
class DelayConfig {
public:
    DelayConfig(int coherence_slots, int feedback_delay);

    int coherence_slots() const noexcept { return coherence_slots_; }
    int feedback_delay() const noexcept { return feedback_delay_; }
    Rational gamma() const { return {feedback_delay_, coherence_slots_}; }

    BlockIndex block_of(Slot slot) const;
    Slot block_start(BlockIndex block) const;
    Slot block_start_of_slot(Slot slot) const { return block_start(block_of(slot)); }

    friend bool operator==(const DelayConfig&, const DelayConfig&) = default;

private:
    int coherence_slots_;
    int feedback_delay_;
};

/// I.i.d. CN(0,1) block fading. Every entry is a pure function of
/// (seed, block, user, antenna), so queries are read-only and thread-safe.
class FadingProcess {
public:
    FadingProcess(int users, int antennas, int coherence_slots, std::uint64_t seed);

    int users() const noexcept { return users_; }
    int antennas() const noexcept { return antennas_; }
    int coherence_slots() const noexcept { return coherence_slots_; }
    std::uint64_t seed() const noexcept { return seed_; }

    ChannelVector channel(int user, BlockIndex block) const;
    ChannelSet sample_block(BlockIndex block) const;
    ChannelSet at_slot(Slot slot) const;

private:
    int users_;
    int antennas_;
    int coherence_slots_;
    std::uint64_t seed_;
};

ChannelSet sample_block(const FadingProcess& process, BlockIndex block);

/// Which blocks the transmitter knows at a slot, without the channel values.
struct CsitAvailability {
    Slot slot = 1;
    BlockIndex current_block = 1;
    bool has_current = false;
    std::vector<BlockIndex> outdated_blocks;  // ascending
};

/// What the transmitter knows at a slot. Feedback for a block is sent at
/// the block's first slot and arrives feedback_delay slots later.
struct CsitView {
    Slot slot = 1;
    BlockIndex current_block = 1;
    std::optional<ChannelSet> current;
    std::map<BlockIndex, ChannelSet> outdated;
};

CsitAvailability csit_availability(const DelayConfig& config, Slot slot);
bool has_current_csit(const DelayConfig& config, Slot slot);
CsitView csit_at(const FadingProcess& process, const DelayConfig& config, Slot slot);

inline constexpr double kSpeedOfLight = 2.998e8;

/// Rule-of-thumb coherence time c / (8 f v) in seconds.
double coherence_time_estimate(double carrier_hz, double speed_m_per_s);

}  // namespace stia
