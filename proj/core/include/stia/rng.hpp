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
#include <limits>

#include "stia/numerics.hpp"

namespace stia {

/// Counter-based stream generator. A stream is identified by a seed and up to
/// three keys (block, user, attempt, trial index, ...). Distinct keys give
/// independent streams, so draws never depend on generation order.
///
/// Satisfies UniformRandomBitGenerator; the distributions below are written
/// out explicitly so the output is identical across standard libraries.
class StreamRng {
public:
    using result_type = std::uint64_t;

    explicit StreamRng(std::uint64_t seed, std::uint64_t key_a = 0, std::uint64_t key_b = 0,
                       std::uint64_t key_c = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on (0, 1), never exactly 0.
    double uniform() noexcept;

    /// Circularly-symmetric CN(0, 1): real and imaginary parts each N(0, 1/2).
    Complex complex_gaussian() noexcept;

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) noexcept;

private:
    std::uint64_t state_;
};

/// SplitMix64 finaliser; exposed for key derivation.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace stia
