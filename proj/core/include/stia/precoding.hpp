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

#include <span>
#include <vector>

#include "stia/channel.hpp"
#include "stia/numerics.hpp"
#include "stia/rng.hpp"

namespace stia {

/// V^(k)[slot] for every user k (element 0 is user 1).
struct PrecoderSet {
    Slot slot = 0;
    std::vector<ComplexMatrix> per_user;
};

using SymbolVector = std::vector<Complex>;

/// K-1 data symbols per user (element 0 is user 1).
struct SymbolBlock {
    std::vector<SymbolVector> per_user;

    static SymbolBlock zeros(int users);
    /// Unit-variance CN(0,1) symbols.
    static SymbolBlock random(int users, StreamRng& rng);

    int users() const noexcept { return static_cast<int>(per_user.size()); }
};

/// Rows h^(j)^T for every user j != excluded_user (1-based), in user order.
ComplexMatrix stack_interferers(std::span<const ChannelVector> channels, int excluded_user);

/// Rows h^(u)^T for the listed users (1-based), in list order.
ComplexMatrix stack_users(std::span<const ChannelVector> channels, std::span<const int> users);

/// Space-time alignment precoders: for each user k,
///   V^(k) = [h^(j)^T[current]]_{j!=k}^{-1} [h^(j)^T[outdated]]_{j!=k},
/// so every interferer sees the same combination of user k's symbols as in
/// the reference (phase-one) slot. Requires N_t == K - 1.
/// Throws IllConditionedChannel when a stacked matrix is singular to tolerance.
PrecoderSet build_stia_precoders(std::span<const ChannelVector> current,
                                 std::span<const ChannelVector> outdated, int users, Slot slot = 0);

/// Largest relative alignment error max_{k, j!=k} ||h_j^T[cur] V_k - h_j^T[ref]||_inf / ||h_j^T[ref]||_inf.
double alignment_residual(const PrecoderSet& precoders, std::span<const ChannelVector> current,
                          std::span<const ChannelVector> outdated);

/// Zero-forcing beams for N_t served users: column i nulls every other served
/// user and is normalised to unit norm. served_users are 1-based.
ComplexMatrix build_zf_precoder(std::span<const ChannelVector> current, std::span<const int> served_users);

/// The N_t users served by ZF at a slot when one of K users must sit out.
std::vector<int> zf_served_users(Slot slot, int users);

/// Round-robin TDMA user: (slot mod K) + 1.
int tdma_select(Slot slot, int users);

}  // namespace stia
