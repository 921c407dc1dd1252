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

#include "stia/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stia/errors.hpp"

namespace stia {

SymbolBlock SymbolBlock::zeros(int users) {
    if (users < 2) {
        throw DomainError("SymbolBlock: need at least two users");
    }
    SymbolBlock block;
    block.per_user.assign(static_cast<std::size_t>(users),
                          SymbolVector(static_cast<std::size_t>(users - 1)));
    return block;
}

SymbolBlock SymbolBlock::random(int users, StreamRng& rng) {
    auto block = zeros(users);
    for (auto& s : block.per_user) {
        for (auto& z : s) {
            z = rng.complex_gaussian();
        }
    }
    return block;
}

namespace {

void check_channel_set(std::span<const ChannelVector> channels, std::size_t antennas, const char* what) {
    for (const auto& h : channels) {
        if (h.entries.size() != antennas) {
            std::ostringstream msg;
            msg << what << ": channel vector of user " << h.user << " has " << h.entries.size()
                << " entries, expected " << antennas;
            throw DomainError(msg.str());
        }
    }
}

}  // namespace

ComplexMatrix stack_interferers(std::span<const ChannelVector> channels, int excluded_user) {
    const std::size_t k = channels.size();
    const std::size_t nt = channels.empty() ? 0 : channels.front().entries.size();
    ComplexMatrix out(k - 1, nt);
    std::size_t r = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (static_cast<int>(j) + 1 == excluded_user) {
            continue;
        }
        std::copy(channels[j].entries.begin(), channels[j].entries.end(), out.row(r).begin());
        ++r;
    }
    return out;
}

ComplexMatrix stack_users(std::span<const ChannelVector> channels, std::span<const int> users) {
    const std::size_t nt = channels.empty() ? 0 : channels.front().entries.size();
    ComplexMatrix out(users.size(), nt);
    for (std::size_t r = 0; r < users.size(); ++r) {
        const int u = users[r];
        if (u < 1 || static_cast<std::size_t>(u) > channels.size()) {
            throw DomainError("stack_users: user index out of range");
        }
        const auto& h = channels[static_cast<std::size_t>(u - 1)].entries;
        std::copy(h.begin(), h.end(), out.row(r).begin());
    }
    return out;
}

PrecoderSet build_stia_precoders(std::span<const ChannelVector> current,
                                 std::span<const ChannelVector> outdated, int users, Slot slot) {
    if (users < 3) {
        throw DomainError("build_stia_precoders: alignment needs K >= 3");
    }
    const auto k = static_cast<std::size_t>(users);
    if (current.size() != k || outdated.size() != k) {
        throw DomainError("build_stia_precoders: expected one channel vector per user");
    }
    check_channel_set(current, k - 1, "build_stia_precoders (current)");
    check_channel_set(outdated, k - 1, "build_stia_precoders (outdated)");

    PrecoderSet set;
    set.slot = slot;
    set.per_user.reserve(k);
    for (int user = 1; user <= users; ++user) {
        const auto now = stack_interferers(current, user);
        const auto then = stack_interferers(outdated, user);
        try {
            set.per_user.push_back(solve_right(now, then));
        } catch (const SingularMatrix& e) {
            std::ostringstream msg;
            msg << "interferer channels of user " << user << " are ill-conditioned (condition "
                << e.condition() << ")";
            throw IllConditionedChannel(msg.str(), e.condition());
        }
    }
    return set;
}

double alignment_residual(const PrecoderSet& precoders, std::span<const ChannelVector> current,
                          std::span<const ChannelVector> outdated) {
    double worst = 0.0;
    const std::size_t k = precoders.per_user.size();
    for (std::size_t user = 0; user < k; ++user) {
        for (std::size_t j = 0; j < k; ++j) {
            if (j == user) {
                continue;
            }
            const auto seen = row_times(current[j].entries, precoders.per_user[user]);
            const auto& ref = outdated[j].entries;
            double err = 0.0;
            for (std::size_t i = 0; i < ref.size(); ++i) {
                err = std::max(err, std::abs(seen[i] - ref[i]));
            }
            worst = std::max(worst, err / norm_inf(ref));
        }
    }
    return worst;
}

ComplexMatrix build_zf_precoder(std::span<const ChannelVector> current, std::span<const int> served_users) {
    if (current.empty()) {
        throw DomainError("build_zf_precoder: no channels");
    }
    const std::size_t nt = current.front().entries.size();
    check_channel_set(current, nt, "build_zf_precoder");
    if (served_users.size() != nt) {
        throw DomainError("build_zf_precoder: must serve exactly N_t users");
    }
    const auto stacked = stack_users(current, served_users);
    ComplexMatrix beams;
    try {
        beams = solve_right(stacked, ComplexMatrix::identity(nt));
    } catch (const SingularMatrix& e) {
        throw IllConditionedChannel("build_zf_precoder: served channels are ill-conditioned", e.condition());
    }
    for (std::size_t c = 0; c < nt; ++c) {
        double norm2 = 0.0;
        for (std::size_t r = 0; r < nt; ++r) {
            norm2 += std::norm(beams(r, c));
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t r = 0; r < nt; ++r) {
            beams(r, c) *= inv;
        }
    }
    return beams;
}

std::vector<int> zf_served_users(Slot slot, int users) {
    // The user sitting out rotates with the slot so every user is served
    // equally often.
    const int idle = tdma_select(slot, users);
    std::vector<int> served;
    served.reserve(static_cast<std::size_t>(users - 1));
    for (int u = 1; u <= users; ++u) {
        if (u != idle) {
            served.push_back(u);
        }
    }
    return served;
}

int tdma_select(Slot slot, int users) {
    if (slot < 1) {
        throw DomainError("tdma_select: slot indices start at 1");
    }
    if (users < 1) {
        throw DomainError("tdma_select: need at least one user");
    }
    return static_cast<int>(slot % users) + 1;
}

}  // namespace stia
