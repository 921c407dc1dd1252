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

#include "stia/rng.hpp"

#include <cmath>
#include <numbers>

namespace stia {

std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t key_a, std::uint64_t key_b,
                     std::uint64_t key_c) noexcept {
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ mix64(key_a + 0x632be59bd9b4e019ULL));
    h = mix64(h ^ mix64(key_b + 0x85157af5ULL));
    h = mix64(h ^ mix64(key_c + 0x2545f4914f6cdd1dULL));
    state_ = h;
}

StreamRng::result_type StreamRng::operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double StreamRng::uniform() noexcept {
    // 53 random bits, shifted by half an ulp so 0 is never returned.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

Complex StreamRng::complex_gaussian() noexcept {
    const double radius = std::sqrt(-std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::uint64_t StreamRng::below(std::uint64_t bound) noexcept {
    // Modulo bias is below bound / 2^64.
    return (*this)() % bound;
}

}  // namespace stia
