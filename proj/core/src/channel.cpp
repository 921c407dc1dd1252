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

#include "stia/channel.hpp"

#include <cmath>

#include "stia/errors.hpp"
#include "stia/rng.hpp"

namespace stia {

DelayConfig::DelayConfig(int coherence_slots, int feedback_delay)
    : coherence_slots_(coherence_slots), feedback_delay_(feedback_delay) {
    if (coherence_slots_ < 1) {
        throw DomainError("DelayConfig: coherence time must be at least one slot");
    }
    if (feedback_delay_ < 0) {
        throw DomainError("DelayConfig: feedback delay must be non-negative");
    }
}

BlockIndex DelayConfig::block_of(Slot slot) const {
    if (slot < 1) {
        throw DomainError("slot indices start at 1");
    }
    return (slot - 1) / coherence_slots_ + 1;
}

Slot DelayConfig::block_start(BlockIndex block) const {
    if (block < 1) {
        throw DomainError("block indices start at 1");
    }
    return static_cast<Slot>(coherence_slots_) * (block - 1) + 1;
}

FadingProcess::FadingProcess(int users, int antennas, int coherence_slots, std::uint64_t seed)
    : users_(users), antennas_(antennas), coherence_slots_(coherence_slots), seed_(seed) {
    if (users_ < 1 || antennas_ < 1) {
        throw DomainError("FadingProcess: need at least one user and one antenna");
    }
    if (coherence_slots_ < 1) {
        throw DomainError("FadingProcess: coherence time must be at least one slot");
    }
}

ChannelVector FadingProcess::channel(int user, BlockIndex block) const {
    if (user < 1 || user > users_) {
        throw DomainError("FadingProcess::channel: user index out of range");
    }
    if (block < 1) {
        throw DomainError("FadingProcess::channel: block indices start at 1");
    }
    StreamRng rng(seed_, static_cast<std::uint64_t>(block), static_cast<std::uint64_t>(user));
    ChannelVector h{std::vector<Complex>(static_cast<std::size_t>(antennas_)), user, block};
    for (auto& z : h.entries) {
        z = rng.complex_gaussian();
    }
    return h;
}

ChannelSet FadingProcess::sample_block(BlockIndex block) const {
    ChannelSet set;
    set.reserve(static_cast<std::size_t>(users_));
    for (int k = 1; k <= users_; ++k) {
        set.push_back(channel(k, block));
    }
    return set;
}

ChannelSet FadingProcess::at_slot(Slot slot) const {
    if (slot < 1) {
        throw DomainError("slot indices start at 1");
    }
    return sample_block((slot - 1) / coherence_slots_ + 1);
}

ChannelSet sample_block(const FadingProcess& process, BlockIndex block) {
    return process.sample_block(block);
}

CsitAvailability csit_availability(const DelayConfig& config, Slot slot) {
    CsitAvailability out;
    out.slot = slot;
    out.current_block = config.block_of(slot);
    out.has_current = slot - config.block_start(out.current_block) >= config.feedback_delay();
    for (BlockIndex b = 1; b < out.current_block; ++b) {
        if (config.block_start(b) + config.feedback_delay() <= slot) {
            out.outdated_blocks.push_back(b);
        }
    }
    return out;
}

bool has_current_csit(const DelayConfig& config, Slot slot) {
    return slot - config.block_start_of_slot(slot) >= config.feedback_delay();
}

CsitView csit_at(const FadingProcess& process, const DelayConfig& config, Slot slot) {
    if (process.coherence_slots() != config.coherence_slots()) {
        throw DomainError("csit_at: process and delay config disagree on coherence time");
    }
    const auto avail = csit_availability(config, slot);
    CsitView view;
    view.slot = slot;
    view.current_block = avail.current_block;
    if (avail.has_current) {
        view.current = process.sample_block(avail.current_block);
    }
    for (BlockIndex b : avail.outdated_blocks) {
        view.outdated.emplace(b, process.sample_block(b));
    }
    return view;
}

double coherence_time_estimate(double carrier_hz, double speed_m_per_s) {
    if (!(carrier_hz > 0.0) || !(speed_m_per_s > 0.0)) {
        throw DomainError("coherence_time_estimate: carrier and speed must be positive");
    }
    return kSpeedOfLight / (8.0 * carrier_hz * speed_m_per_s);
}

}  // namespace stia
