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

#include "stia/scheduler.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "stia/errors.hpp"

namespace stia {

std::string to_string(SlotRole role) {
    switch (role) {
        case SlotRole::Stia:
            return "stia";
        case SlotRole::ZeroForcing:
            return "zf";
        case SlotRole::Tdma:
            return "tdma";
    }
    return "unknown";
}

std::vector<Slot> StiaRoundSlots::slots() const {
    std::vector<Slot> out{reference};
    out.insert(out.end(), phase_two.begin(), phase_two.end());
    return out;
}

std::vector<SlotRole> SchedulerPlan::roles() const {
    std::vector<SlotRole> out(static_cast<std::size_t>(horizon), SlotRole::Tdma);
    for (const auto& r : stia_rounds) {
        for (Slot s : r.slots()) {
            out.at(static_cast<std::size_t>(s - 1)) = SlotRole::Stia;
        }
    }
    for (Slot s : zf_slots) {
        out.at(static_cast<std::size_t>(s - 1)) = SlotRole::ZeroForcing;
    }
    return out;
}

namespace {

void classify_leftovers(SchedulerPlan& plan) {
    std::vector<bool> used(static_cast<std::size_t>(plan.horizon) + 1, false);
    for (const auto& r : plan.stia_rounds) {
        for (Slot s : r.slots()) {
            used[static_cast<std::size_t>(s)] = true;
        }
    }
    for (Slot s = 1; s <= plan.horizon; ++s) {
        if (used[static_cast<std::size_t>(s)]) {
            continue;
        }
        if (has_current_csit(plan.delay, s)) {
            plan.zf_slots.push_back(s);
        } else {
            plan.tdma_slots.push_back(s);
        }
    }
}

}  // namespace

SchedulerPlan build_plan_k3(std::int64_t n) {
    if (n < 1) {
        throw DomainError("build_plan_k3: need at least one round");
    }
    SchedulerPlan plan;
    plan.users = 3;
    plan.delay = DelayConfig(3, 1);
    plan.rounds = n;
    plan.horizon = 3 * n + 6;
    for (std::int64_t k = 1; k <= n; ++k) {
        plan.stia_rounds.push_back({3 * k - 2, {3 * k + 3, 3 * k + 5}});
    }
    plan.zf_slots = {2, 3, 5, 3 * n + 6};
    plan.tdma_slots = {3 * n + 1, 3 * n + 4};
    return plan;
}

SchedulerPlan build_plan_general(int users, std::int64_t n) {
    if (users < 3) {
        throw DomainError("build_plan_general: STIA plans need K >= 3");
    }
    if (n < 1) {
        throw DomainError("build_plan_general: need at least one round");
    }
    const std::int64_t big_k = users;
    SchedulerPlan plan;
    plan.users = users;
    plan.delay = DelayConfig(users, 1);
    plan.rounds = n;
    plan.horizon = big_k * (n + big_k - 1);
    for (std::int64_t k = 1; k <= n; ++k) {
        StiaRoundSlots round;
        round.reference = big_k * (k - 1) + 1;
        for (std::int64_t j = 1; j < big_k; ++j) {
            // Slot K+1-j of block k+j.
            round.phase_two.push_back(big_k * (k + j - 1) + big_k + 1 - j);
        }
        plan.stia_rounds.push_back(std::move(round));
    }
    classify_leftovers(plan);
    return plan;
}

SchedulerPlan build_plan_zf_tdma(int users, const DelayConfig& delay, Slot horizon) {
    if (users < 2 || horizon < 1) {
        throw DomainError("build_plan_zf_tdma: need K >= 2 and a positive horizon");
    }
    SchedulerPlan plan;
    plan.users = users;
    plan.delay = delay;
    plan.horizon = horizon;
    classify_leftovers(plan);
    return plan;
}

SchedulerPlan build_plan_tdma(int users, const DelayConfig& delay, Slot horizon) {
    if (users < 1 || horizon < 1) {
        throw DomainError("build_plan_tdma: need K >= 1 and a positive horizon");
    }
    SchedulerPlan plan;
    plan.users = users;
    plan.delay = delay;
    plan.horizon = horizon;
    for (Slot s = 1; s <= horizon; ++s) {
        plan.tdma_slots.push_back(s);
    }
    return plan;
}

DofAccount account_dof(const SchedulerPlan& plan, int users) {
    const std::int64_t big_k = users;
    DofAccount acc;
    acc.symbols_delivered = static_cast<std::int64_t>(plan.stia_rounds.size()) * big_k * (big_k - 1) +
                            static_cast<std::int64_t>(plan.zf_slots.size()) * (big_k - 1) +
                            static_cast<std::int64_t>(plan.tdma_slots.size());
    acc.slots_used = plan.horizon;
    if (acc.slots_used <= 0) {
        throw DomainError("account_dof: empty plan");
    }
    acc.dof = Rational(acc.symbols_delivered, acc.slots_used);
    return acc;
}

DofAccount account_dof(const SchedulerPlan& plan) { return account_dof(plan, plan.users); }

PlanCheck verify_plan(const SchedulerPlan& plan) {
    PlanCheck check;
    auto fail = [&check](const std::string& why) {
        check.ok = false;
        check.failures.push_back(why);
    };

    std::vector<int> hits(static_cast<std::size_t>(plan.horizon) + 1, 0);
    auto mark = [&](Slot s) {
        if (s < 1 || s > plan.horizon) {
            fail("slot " + std::to_string(s) + " outside horizon");
            return;
        }
        ++hits[static_cast<std::size_t>(s)];
    };

    for (std::size_t r = 0; r < plan.stia_rounds.size(); ++r) {
        const auto& round = plan.stia_rounds[r];
        const std::string tag = "round " + std::to_string(r + 1);
        if (static_cast<int>(round.phase_two.size()) != plan.users - 1) {
            fail(tag + ": expected K-1 phase-two slots");
        }
        std::set<BlockIndex> blocks;
        for (Slot s : round.slots()) {
            mark(s);
            if (s >= 1) {
                blocks.insert(plan.delay.block_of(s));
            }
        }
        if (blocks.size() != round.slots().size()) {
            fail(tag + ": slots share a coherence block");
        }
        if (round.reference < 1) {
            continue;
        }
        if (has_current_csit(plan.delay, round.reference)) {
            fail(tag + ": reference slot has current CSIT");
        }
        const BlockIndex ref_block = plan.delay.block_of(round.reference);
        for (Slot s : round.phase_two) {
            if (s < 1) {
                continue;
            }
            if (s <= round.reference) {
                fail(tag + ": phase-two slot precedes the reference slot");
            }
            const auto avail = csit_availability(plan.delay, s);
            if (!avail.has_current) {
                fail(tag + ": phase-two slot " + std::to_string(s) + " lacks current CSIT");
            }
            if (!std::binary_search(avail.outdated_blocks.begin(), avail.outdated_blocks.end(), ref_block)) {
                fail(tag + ": reference CSI not yet fed back at slot " + std::to_string(s));
            }
        }
    }
    for (Slot s : plan.zf_slots) {
        mark(s);
        if (s >= 1 && !has_current_csit(plan.delay, s)) {
            fail("ZF slot " + std::to_string(s) + " lacks current CSIT");
        }
    }
    for (Slot s : plan.tdma_slots) {
        mark(s);
        // Only enforced when the plan mixes schemes; a pure TDMA plan may
        // ignore CSIT it happens to have.
        if (s >= 1 && (!plan.stia_rounds.empty() || !plan.zf_slots.empty()) &&
            has_current_csit(plan.delay, s)) {
            fail("TDMA slot " + std::to_string(s) + " has current CSIT");
        }
    }
    for (Slot s = 1; s <= plan.horizon; ++s) {
        const int h = hits[static_cast<std::size_t>(s)];
        if (h == 0) {
            fail("slot " + std::to_string(s) + " unassigned");
        } else if (h > 1) {
            fail("slot " + std::to_string(s) + " assigned " + std::to_string(h) + " times");
        }
    }
    return check;
}

nlohmann::json plan_to_json(const SchedulerPlan& plan) {
    using nlohmann::json;
    json rounds = json::array();
    for (const auto& r : plan.stia_rounds) {
        rounds.push_back(r.slots());
    }
    std::vector<std::int64_t> round_of(static_cast<std::size_t>(plan.horizon) + 1, 0);
    for (std::size_t i = 0; i < plan.stia_rounds.size(); ++i) {
        for (Slot s : plan.stia_rounds[i].slots()) {
            round_of[static_cast<std::size_t>(s)] = static_cast<std::int64_t>(i) + 1;
        }
    }
    json slots = json::array();
    const auto roles = plan.roles();
    for (Slot s = 1; s <= plan.horizon; ++s) {
        json entry = {{"slot", s}, {"role", to_string(roles[static_cast<std::size_t>(s - 1)])}};
        if (round_of[static_cast<std::size_t>(s)] != 0) {
            entry["round"] = round_of[static_cast<std::size_t>(s)];
        }
        slots.push_back(std::move(entry));
    }
    const auto acc = account_dof(plan);
    return json{{"users", plan.users},
                {"n", plan.rounds},
                {"horizon", plan.horizon},
                {"t_c", plan.delay.coherence_slots()},
                {"t_fb", plan.delay.feedback_delay()},
                {"stia_rounds", rounds},
                {"zf_slots", plan.zf_slots},
                {"tdma_slots", plan.tdma_slots},
                {"slots", slots},
                {"dof", {{"num", acc.dof.numerator()}, {"den", acc.dof.denominator()}}},
                {"symbols_delivered", acc.symbols_delivered}};
}

}  // namespace stia
