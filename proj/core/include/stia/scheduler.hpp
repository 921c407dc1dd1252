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
#include <string>
#include <vector>

#include <json.hpp>

#include "stia/channel.hpp"

namespace stia {

enum class SlotRole { Stia, ZeroForcing, Tdma };

std::string to_string(SlotRole role);

/// One STIA round: the no-CSIT reference slot and its K-1 aligned slots.
struct StiaRoundSlots {
    Slot reference = 1;
    std::vector<Slot> phase_two;

    std::vector<Slot> slots() const;  // reference first
    friend bool operator==(const StiaRoundSlots&, const StiaRoundSlots&) = default;
};

/// Partition of slots 1..horizon into STIA rounds, ZF slots and TDMA slots.
struct SchedulerPlan {
    int users = 3;
    DelayConfig delay{3, 1};
    std::int64_t rounds = 0;
    Slot horizon = 0;
    std::vector<StiaRoundSlots> stia_rounds;
    std::vector<Slot> zf_slots;    // ascending
    std::vector<Slot> tdma_slots;  // ascending

    /// Role of every slot, index 0 is slot 1.
    std::vector<SlotRole> roles() const;

    friend bool operator==(const SchedulerPlan&, const SchedulerPlan&) = default;
};

struct DofAccount {
    std::int64_t symbols_delivered = 0;
    std::int64_t slots_used = 0;
    Rational dof;
};

/// The closed-form K = 3 partition (T_c = 3, T_fb = 1) over 3n + 6 slots:
/// I_k = {3k-2, 3k+3, 3k+5}, I_ZF = {2, 3, 5, 3n+6}, I_TDMA = {3n+1, 3n+4}.
SchedulerPlan build_plan_k3(std::int64_t n);

/// General K (T_c = K, T_fb = 1) over K(n + K - 1) slots. Round k uses the
/// first slot of block k and slot K+1-j of block k+j for j = 1..K-1; the
/// rest are classified by CSIT availability.
SchedulerPlan build_plan_general(int users, std::int64_t n);

/// Slots 1..horizon classified by CSIT alone: current CSIT -> ZF, else TDMA.
SchedulerPlan build_plan_zf_tdma(int users, const DelayConfig& delay, Slot horizon);

/// Every slot TDMA.
SchedulerPlan build_plan_tdma(int users, const DelayConfig& delay, Slot horizon);

/// STIA rounds deliver K(K-1) symbols, ZF slots N_t = K-1, TDMA slots 1.
DofAccount account_dof(const SchedulerPlan& plan, int users);
DofAccount account_dof(const SchedulerPlan& plan);

struct PlanCheck {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Disjointness, exhaustiveness, CSIT consistency (via csit_availability) and
/// distinct coherence blocks within every round.
PlanCheck verify_plan(const SchedulerPlan& plan);

/// {"users", "n", "horizon", "t_c", "t_fb", "stia_rounds", "zf_slots",
///  "tdma_slots", "slots": [{"slot", "role", "round"?}], "dof": {num, den}}
nlohmann::json plan_to_json(const SchedulerPlan& plan);

}  // namespace stia
