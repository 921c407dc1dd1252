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
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stia/channel.hpp"

namespace stia {

// ---- analytic trade-off curves --------------------------------------------

enum class TradeoffScheme { StiaTradeoff, ZfTdma, ZfMat, Tdma, MatConst };

std::string to_string(TradeoffScheme scheme);

struct TradeoffPoint {
    Rational gamma;
    Rational dof;
    TradeoffScheme scheme = TradeoffScheme::StiaTradeoff;
};

/// Achievable sum DoF of the 3-user 2x1 channel as a function of gamma:
/// 2 up to 1/3, then -(3/4) gamma + 9/4 up to 1, then 3/2.
Rational tradeoff_k3(Rational gamma);

/// K-user version. Equals tradeoff_k3 for K = 3. For K >= 4 only the K-1
/// plateau (gamma <= 1/K) is known; beyond it the curve time-shares with
/// TDMA, reaching 1 at gamma = 1.
Rational tradeoff_general(int users, Rational gamma);

/// ZF on current-CSIT slots, TDMA otherwise: (1 - gamma)(K - 1) + gamma.
/// Defined on [0, 1] only.
Rational baseline_zf_tdma(Rational gamma, int users = 3);

/// ZF on current-CSIT slots, MAT (DoF 3/2) otherwise: 2 - gamma / 2. K = 3, gamma in [0, 1].
Rational baseline_zf_mat(Rational gamma);

/// Completely-outdated-CSIT DoF for K = 3, N_t = 2.
inline const Rational kMatDof{3, 2};

/// Rows for every scheme at every gamma. K >= 4 omits the MAT-based rows.
std::vector<TradeoffPoint> emit_tradeoff_table(std::span<const Rational> gammas, int users = 3);

/// 0, 1/24, ..., 3/2.
std::vector<Rational> default_gamma_grid();

inline constexpr int kCsvSchemaVersion = 1;

/// schema_version,scheme,gamma_num,gamma_den,dof_num,dof_den
std::string tradeoff_csv(std::span<const TradeoffPoint> rows);

/// Parses "p/q" or an integer.
Rational parse_rational(std::string_view text);

/// RFC 4180 field quoting.
std::string csv_field(std::string_view value);

// ---- Monte Carlo DoF estimation -------------------------------------------

enum class SimScheme { Stia, Zf, ZfTdma, Tdma };

std::string to_string(SimScheme scheme);
SimScheme parse_sim_scheme(std::string_view name);

struct SimulationConfig {
    SimScheme scheme = SimScheme::Stia;
    int users = 3;
    DelayConfig delay{3, 1};
    std::vector<double> snr_grid_db{40.0, 50.0, 60.0};
    std::int64_t trials = 10000;
    std::uint64_t seed = 7;
    std::int64_t rounds = 32;           // STIA rounds per plan; sets the horizon for every scheme
    unsigned threads = 0;               // 0: STIA_THREADS or hardware concurrency
    int bootstrap_resamples = 200;
};

/// Per-trial sum rates (bits/slot), trial-major: rates[t * grid + i].
struct SumRateSamples {
    std::vector<double> snr_grid_db;
    std::int64_t trials = 0;
    std::vector<double> rates;
    std::int64_t resamples = 0;
    Rational plan_dof;
    Slot horizon = 0;
};

struct DofEstimate {
    SimScheme scheme = SimScheme::Stia;
    int users = 3;
    DelayConfig delay{3, 1};
    std::vector<double> snr_grid_db;
    std::vector<double> mean_sum_rates;
    double slope = 0.0;
    double confidence_halfwidth = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    std::int64_t resamples = 0;
    std::int64_t rounds = 0;
    Rational plan_dof;

    nlohmann::json to_json() const;
};

/// Least-squares slope of rates against log2 of the linear SNR.
double regression_slope(std::span<const double> snr_grid_db, std::span<const double> rates);

/// Worker count: explicit request, else STIA_THREADS, else hardware concurrency.
unsigned resolve_thread_count(unsigned requested);

/// Runs the scheme's slot plan end to end for every trial.
SumRateSamples simulate_sum_rates(const SimulationConfig& config);

/// Means, slope and a bootstrap 95% half-width (resampling trials).
DofEstimate fit_dof_slope(const SumRateSamples& samples, std::uint64_t seed, int bootstrap_resamples);

/// Validates the grid (strictly increasing, top >= 40 dB) and trial budget
/// (>= 1000), then simulates and fits.
DofEstimate estimate_dof_slope(const SimulationConfig& config);

}  // namespace stia
