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

#include "stia/protocol.hpp"

#include <cmath>
#include <sstream>

#include "stia/errors.hpp"

namespace stia {

double power_scale(double power, double frobenius_sum) {
    if (!(power > 0.0) || !(frobenius_sum > 0.0)) {
        throw DomainError("power_scale: power and precoder energy must be positive");
    }
    return std::sqrt(power / frobenius_sum);
}

namespace {

std::size_t symbol_length(const SymbolBlock& symbols) {
    if (symbols.per_user.empty()) {
        throw DomainError("symbol block is empty");
    }
    const std::size_t len = symbols.per_user.front().size();
    for (const auto& s : symbols.per_user) {
        if (s.size() != len) {
            throw DomainError("symbol block: users carry different symbol counts");
        }
    }
    return len;
}

void apply_scale(Transmission& t, std::optional<double> power, double frobenius_sum) {
    if (!power) {
        return;
    }
    t.scale = power_scale(*power, frobenius_sum);
    for (auto& z : t.x) {
        z *= t.scale;
    }
}

}  // namespace

Transmission phase_one_transmit(const SymbolBlock& symbols, std::optional<double> power) {
    const std::size_t len = symbol_length(symbols);
    Transmission t{TransmitVector(len), 1.0};
    for (const auto& s : symbols.per_user) {
        for (std::size_t i = 0; i < len; ++i) {
            t.x[i] += s[i];
        }
    }
    // Every V is the identity in phase one.
    apply_scale(t, power, static_cast<double>(symbols.per_user.size() * len));
    return t;
}

Transmission phase_two_transmit(const SymbolBlock& symbols, const PrecoderSet& precoders,
                                std::optional<double> power) {
    const std::size_t len = symbol_length(symbols);
    if (precoders.per_user.size() != symbols.per_user.size()) {
        throw DomainError("phase_two_transmit: precoder and symbol user counts differ");
    }
    const std::size_t nt = precoders.per_user.front().rows();
    Transmission t{TransmitVector(nt), 1.0};
    double energy = 0.0;
    for (std::size_t k = 0; k < symbols.per_user.size(); ++k) {
        const auto& v = precoders.per_user[k];
        if (v.cols() != len || v.rows() != nt) {
            throw DomainError("phase_two_transmit: precoder shape mismatch");
        }
        const auto part = times_vector(v, symbols.per_user[k]);
        for (std::size_t i = 0; i < nt; ++i) {
            t.x[i] += part[i];
        }
        energy += frobenius_norm_squared(v);
    }
    apply_scale(t, power, energy);
    return t;
}

Complex receive(const ChannelVector& h, std::span<const Complex> x, double noise_std, StreamRng& rng) {
    Complex y = dot(h.entries, x);
    if (noise_std > 0.0) {
        y += noise_std * rng.complex_gaussian();
    }
    return y;
}

RoundTrace transmit_round(const RoundChannels& channels, const SymbolBlock& symbols,
                          const RoundConfig& config, StreamRng& noise_rng) {
    const int users = symbols.users();
    if (static_cast<int>(channels.reference.size()) != users ||
        static_cast<int>(channels.phase_two.size()) != users - 1) {
        throw DomainError("transmit_round: a round needs K user channels and K-1 phase-two slots");
    }
    RoundTrace trace;
    trace.received.assign(static_cast<std::size_t>(users), {});

    const auto first = phase_one_transmit(symbols, config.power);
    trace.slot_scales.push_back(first.scale);
    for (int k = 0; k < users; ++k) {
        trace.received[k].push_back(receive(channels.reference[k], first.x, config.noise_std, noise_rng));
    }

    for (std::size_t m = 0; m < channels.phase_two.size(); ++m) {
        const auto& current = channels.phase_two[m];
        const Slot slot = m < channels.phase_two_slots.size() ? channels.phase_two_slots[m] : 0;
        trace.precoders.push_back(build_stia_precoders(current, channels.reference, users, slot));
        const auto tx = phase_two_transmit(symbols, trace.precoders.back(), config.power);
        trace.slot_scales.push_back(tx.scale);
        for (int k = 0; k < users; ++k) {
            trace.received[k].push_back(receive(current[k], tx.x, config.noise_std, noise_rng));
        }
    }
    return trace;
}

std::vector<Complex> cancel_interference(std::span<const Complex> y_round, std::span<const double> slot_scales) {
    if (y_round.size() < 2 || slot_scales.size() != y_round.size()) {
        throw DomainError("cancel_interference: need one scale per observation and at least two slots");
    }
    const Complex ref = y_round[0] / slot_scales[0];
    std::vector<Complex> diff(y_round.size() - 1);
    for (std::size_t m = 1; m < y_round.size(); ++m) {
        diff[m - 1] = ref - y_round[m] / slot_scales[m];
    }
    return diff;
}

EffectiveChannel effective_channel(int user, const RoundChannels& channels, std::span<const PrecoderSet> precoders) {
    if (precoders.size() != channels.phase_two.size()) {
        throw DomainError("effective_channel: one precoder set per phase-two slot required");
    }
    const auto idx = static_cast<std::size_t>(user - 1);
    const auto& ref = channels.reference.at(idx).entries;
    EffectiveChannel eff;
    eff.user = user;
    eff.matrix = ComplexMatrix(precoders.size(), ref.size());
    eff.constituent_slots.push_back(channels.reference_slot);
    for (std::size_t m = 0; m < precoders.size(); ++m) {
        const auto seen = row_times(channels.phase_two[m].at(idx).entries, precoders[m].per_user.at(idx));
        for (std::size_t c = 0; c < ref.size(); ++c) {
            eff.matrix(m, c) = ref[c] - seen[c];
        }
        if (m < channels.phase_two_slots.size()) {
            eff.constituent_slots.push_back(channels.phase_two_slots[m]);
        }
    }
    return eff;
}

ComplexMatrix difference_noise_covariance(std::span<const double> slot_scales, double noise_var) {
    if (slot_scales.size() < 2) {
        throw DomainError("difference_noise_covariance: need the reference slot and at least one more");
    }
    const std::size_t rows = slot_scales.size() - 1;
    const double shared = noise_var / (slot_scales[0] * slot_scales[0]);
    ComplexMatrix cov(rows, rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < rows; ++j) {
            cov(i, j) = shared;
        }
        cov(i, i) += noise_var / (slot_scales[i + 1] * slot_scales[i + 1]);
    }
    return cov;
}

SymbolVector decode_round(const EffectiveChannel& eff, std::span<const Complex> differences,
                          const std::optional<ComplexMatrix>& noise_covariance) {
    const auto& h = eff.matrix;
    if (differences.size() != h.rows()) {
        throw DomainError("decode_round: difference vector does not match the effective channel");
    }
    if (rank_with_tol(h) < h.cols() || condition_estimate(h) > kSingularConditionLimit) {
        std::ostringstream msg;
        msg << "effective channel of user " << eff.user << " is rank deficient";
        throw DecodeFailure(msg.str());
    }
    ComplexMatrix rhs(differences.size(), 1, {differences.begin(), differences.end()});
    ComplexMatrix estimate;
    if (!noise_covariance) {
        estimate = solve_unguarded(h, rhs);
    } else {
        // Normal equations of the whitened problem: (H^H S^-1 H) s = H^H S^-1 d.
        const auto hh = h.adjoint();
        const auto sinv_h = solve_unguarded(*noise_covariance, h);
        const auto sinv_d = solve_unguarded(*noise_covariance, rhs);
        estimate = solve_unguarded(hh * sinv_h, hh * sinv_d);
    }
    return {estimate.entries().begin(), estimate.entries().end()};
}

double round_rate(const EffectiveChannel& eff, const ComplexMatrix& noise_covariance, double symbol_power,
                  int users) {
    if (!(symbol_power >= 0.0)) {
        throw DomainError("round_rate: symbol power must be non-negative");
    }
    if (users < 1) {
        throw DomainError("round_rate: need at least one user");
    }
    const auto& h = eff.matrix;
    auto m = h.adjoint() * solve_unguarded(noise_covariance, h);
    m *= symbol_power;
    m += ComplexMatrix::identity(h.cols());
    return log2_abs_det(m) / static_cast<double>(users);
}

double round_rate(const EffectiveChannel& eff, double snr_linear, int users) {
    if (!(snr_linear > 0.0)) {
        throw DomainError("round_rate: snr must be positive");
    }
    const std::size_t rows = eff.matrix.rows();
    const std::vector<double> equal(rows + 1, 1.0);
    const auto cov = difference_noise_covariance(equal);
    const double per_symbol = snr_linear / (static_cast<double>(users) * (users - 1));
    return round_rate(eff, cov, per_symbol, users);
}

double residual_interference(int user, const RoundChannels& channels, std::span<const PrecoderSet> precoders) {
    const auto idx = static_cast<std::size_t>(user - 1);
    const auto& ref = channels.reference.at(idx).entries;
    const double ref_norm = norm_inf(ref);
    double worst = 0.0;
    for (std::size_t m = 0; m < precoders.size(); ++m) {
        for (std::size_t j = 0; j < precoders[m].per_user.size(); ++j) {
            if (j == idx) {
                continue;
            }
            // Coefficient of s^(j) in y[ref] - y[n_m] after scale normalisation.
            const auto seen = row_times(channels.phase_two[m][idx].entries, precoders[m].per_user[j]);
            for (std::size_t c = 0; c < ref.size(); ++c) {
                worst = std::max(worst, std::abs(ref[c] - seen[c]) / ref_norm);
            }
        }
    }
    return worst;
}

StiaRoundResult run_stia_round(const RoundChannels& channels, const SymbolBlock& symbols,
                               const RoundConfig& config, StreamRng& noise_rng) {
    const int users = symbols.users();
    const auto trace = transmit_round(channels, symbols, config, noise_rng);

    std::optional<ComplexMatrix> cov;
    if (config.noise_std > 0.0) {
        cov = difference_noise_covariance(trace.slot_scales, config.noise_std * config.noise_std);
    }

    StiaRoundResult result;
    result.decoded.per_user.resize(static_cast<std::size_t>(users));
    for (int k = 1; k <= users; ++k) {
        const auto idx = static_cast<std::size_t>(k - 1);
        const auto eff = effective_channel(k, channels, trace.precoders);
        result.effective_rank.push_back(rank_with_tol(eff.matrix));
        result.residual_interference.push_back(residual_interference(k, channels, trace.precoders));
        const auto diff = cancel_interference(trace.received[idx], trace.slot_scales);
        result.decoded.per_user[idx] = decode_round(eff, diff, cov);
        if (cov && config.power) {
            result.per_user_rate_bits.push_back(round_rate(eff, *cov, 1.0, users));
        }
    }
    return result;
}

RoundChannels draw_round_channels(int users, std::uint64_t seed, std::uint64_t round_index, std::uint64_t attempt) {
    if (users < 3) {
        throw DomainError("draw_round_channels: K >= 3 required");
    }
    StreamRng key(seed, round_index, attempt, 0x726f756e64ULL);
    const FadingProcess process(users, users - 1, 1, key());
    RoundChannels ch;
    ch.reference = process.sample_block(1);
    ch.reference_slot = 1;
    for (int m = 2; m <= users; ++m) {
        ch.phase_two.push_back(process.sample_block(m));
        ch.phase_two_slots.push_back(m);
    }
    return ch;
}

StiaRoundResult run_random_stia_round(int users, std::uint64_t seed, std::uint64_t round_index,
                                      const RoundConfig& config) {
    constexpr int max_attempts = 64;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        const auto channels = draw_round_channels(users, seed, round_index, static_cast<std::uint64_t>(attempt));
        StreamRng symbol_rng(seed, round_index, static_cast<std::uint64_t>(attempt), 0x73796d62ULL);
        StreamRng noise_rng(seed, round_index, static_cast<std::uint64_t>(attempt), 0x6e6f6973ULL);
        const auto symbols = SymbolBlock::random(users, symbol_rng);
        try {
            auto result = run_stia_round(channels, symbols, config, noise_rng);
            result.resamples = attempt;
            return result;
        } catch (const IllConditionedChannel&) {
        } catch (const DecodeFailure&) {
        }
    }
    throw Error("run_random_stia_round: no well-conditioned draw after repeated resampling");
}

std::vector<double> zf_gains(std::span<const ChannelVector> channels, std::span<const int> served_users) {
    const auto beams = build_zf_precoder(channels, served_users);
    std::vector<double> gains(served_users.size());
    for (std::size_t i = 0; i < served_users.size(); ++i) {
        const auto& h = channels[static_cast<std::size_t>(served_users[i] - 1)].entries;
        Complex g{};
        for (std::size_t r = 0; r < h.size(); ++r) {
            g += h[r] * beams(r, i);
        }
        gains[i] = std::norm(g);
    }
    return gains;
}

std::vector<StreamRate> zf_slot(std::span<const ChannelVector> channels, std::span<const int> served_users,
                                double snr_linear) {
    if (!(snr_linear > 0.0)) {
        throw DomainError("zf_slot: snr must be positive");
    }
    const auto gains = zf_gains(channels, served_users);
    const double per_stream = snr_linear / static_cast<double>(served_users.size());
    std::vector<StreamRate> rates;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        rates.push_back({served_users[i], std::log2(1.0 + per_stream * gains[i])});
    }
    return rates;
}

Transmission zf_transmit(const ComplexMatrix& beams, std::span<const Complex> symbols, double power) {
    Transmission t{times_vector(beams, symbols), 1.0};
    apply_scale(t, power, frobenius_norm_squared(beams));
    return t;
}

double tdma_gain(const ChannelVector& h) {
    Complex sum{};
    for (const auto& z : h.entries) {
        sum += z;
    }
    return std::norm(sum) / static_cast<double>(h.entries.size());
}

double tdma_slot(const ChannelVector& h, double snr_linear) {
    if (!(snr_linear > 0.0)) {
        throw DomainError("tdma_slot: snr must be positive");
    }
    return std::log2(1.0 + snr_linear * tdma_gain(h));
}

Transmission tdma_transmit(Complex symbol, int antennas, double power) {
    Transmission t{TransmitVector(static_cast<std::size_t>(antennas), symbol), 1.0};
    apply_scale(t, power, static_cast<double>(antennas));
    return t;
}

}  // namespace stia
