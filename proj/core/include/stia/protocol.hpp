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
#include <optional>
#include <span>
#include <vector>

#include "stia/channel.hpp"
#include "stia/numerics.hpp"
#include "stia/precoding.hpp"
#include "stia/rng.hpp"

namespace stia {

using TransmitVector = std::vector<Complex>;

/// A transmit vector together with the scalar applied to meet the power target.
struct Transmission {
    TransmitVector x;
    double scale = 1.0;
};

/// Per-slot scalar alpha with alpha^2 * frobenius_sum == power, i.e. the
/// expected transmit power is exactly `power` for unit-variance symbols.
double power_scale(double power, double frobenius_sum);

/// x[ref] = alpha * sum_k s^(k). No power target means alpha = 1.
Transmission phase_one_transmit(const SymbolBlock& symbols, std::optional<double> power = std::nullopt);

/// x[n] = alpha[n] * sum_k V^(k)[n] s^(k).
Transmission phase_two_transmit(const SymbolBlock& symbols, const PrecoderSet& precoders,
                                std::optional<double> power = std::nullopt);

/// y = h^T x + z with z ~ CN(0, noise_std^2). noise_std == 0 draws nothing.
Complex receive(const ChannelVector& h, std::span<const Complex> x, double noise_std, StreamRng& rng);

/// Channels seen during one round: the reference (phase-one) slot and the
/// K-1 phase-two slots, each from its own coherence block.
struct RoundChannels {
    ChannelSet reference;
    std::vector<ChannelSet> phase_two;
    Slot reference_slot = 1;
    std::vector<Slot> phase_two_slots;
};

struct RoundConfig {
    std::optional<double> power;  // nullopt: unscaled transmission
    double noise_std = 0.0;       // 0: noise-free oracle path
};

/// Everything that goes over the air in one round.
struct RoundTrace {
    std::vector<PrecoderSet> precoders;          // one per phase-two slot
    std::vector<double> slot_scales;             // reference slot first
    std::vector<std::vector<Complex>> received;  // [user][slot], reference slot first
};

RoundTrace transmit_round(const RoundChannels& channels, const SymbolBlock& symbols,
                          const RoundConfig& config, StreamRng& noise_rng);

/// Interference cancellation for one user. Each observation is first divided
/// by its slot scale; entry m is y[ref] - y[n_m], which equals H_eff s^(k)
/// plus noise.
std::vector<Complex> cancel_interference(std::span<const Complex> y_round,
                                         std::span<const double> slot_scales);

struct EffectiveChannel {
    int user = 1;
    ComplexMatrix matrix;  // rows h^(k)^T[ref] - h^(k)^T[n_m] V^(k)[n_m]
    std::vector<Slot> constituent_slots;
};

EffectiveChannel effective_channel(int user, const RoundChannels& channels,
                                   std::span<const PrecoderSet> precoders);

/// Covariance of the cancelled-noise vector: diagonal 1/a_ref^2 + 1/a_m^2,
/// off-diagonal 1/a_ref^2 (the reference-slot noise is shared by all rows).
ComplexMatrix difference_noise_covariance(std::span<const double> slot_scales, double noise_var = 1.0);

/// Recovers s^(k). Without a covariance this is the plain ZF solve; with one,
/// the whitened least-squares estimate. Throws DecodeFailure when H_eff is
/// rank deficient to tolerance.
SymbolVector decode_round(const EffectiveChannel& eff, std::span<const Complex> differences,
                          const std::optional<ComplexMatrix>& noise_covariance = std::nullopt);

/// Bits per slot for the user:
///   (1/K) log2 det(I + P_s H^H Sigma^{-1} H).
double round_rate(const EffectiveChannel& eff, const ComplexMatrix& noise_covariance,
                  double symbol_power, int users);

/// Equal-scale case: P_s = snr / (K(K-1)) and Sigma = [2 on the diagonal, 1 elsewhere].
double round_rate(const EffectiveChannel& eff, double snr_linear, int users);

/// Largest coefficient of any interfering symbol left in the user's
/// difference vector, relative to ||h^(k)[ref]||_inf.
double residual_interference(int user, const RoundChannels& channels, std::span<const PrecoderSet> precoders);

struct StiaRoundResult {
    SymbolBlock decoded;
    std::vector<double> residual_interference;  // per user
    std::vector<double> per_user_rate_bits;     // empty unless power and noise are set
    std::vector<std::size_t> effective_rank;    // per user, at kDefaultRankTol
    int resamples = 0;
};

/// Runs transmission, cancellation and decoding for every user on the given channels.
StiaRoundResult run_stia_round(const RoundChannels& channels, const SymbolBlock& symbols,
                               const RoundConfig& config, StreamRng& noise_rng);

/// Draws a round on K independent blocks keyed by (seed, round_index) and runs
/// it; ill-conditioned or undecodable draws are redrawn and counted.
StiaRoundResult run_random_stia_round(int users, std::uint64_t seed, std::uint64_t round_index,
                                      const RoundConfig& config);

/// K independent CN(0,1) channel sets for one round (reference first).
RoundChannels draw_round_channels(int users, std::uint64_t seed, std::uint64_t round_index,
                                  std::uint64_t attempt = 0);

// ---- single-slot baselines ------------------------------------------------

struct StreamRate {
    int user = 1;
    double bits = 0.0;
};

/// |h_i^T w_i|^2 for each served user's unit-norm ZF beam.
std::vector<double> zf_gains(std::span<const ChannelVector> channels, std::span<const int> served_users);

/// ZF over N_t served users, power split equally: SNR_i = (P / N_t) |h_i^T w_i|^2.
std::vector<StreamRate> zf_slot(std::span<const ChannelVector> channels, std::span<const int> served_users,
                                double snr_linear);

Transmission zf_transmit(const ComplexMatrix& beams, std::span<const Complex> symbols, double power);

/// Gain of the fixed no-CSIT beam ones/sqrt(N_t): |sum_i h_i|^2 / N_t.
double tdma_gain(const ChannelVector& h);

/// log2(1 + P * tdma_gain(h)).
double tdma_slot(const ChannelVector& h, double snr_linear);

Transmission tdma_transmit(Complex symbol, int antennas, double power);

}  // namespace stia
