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

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>

#include "stia/analysis.hpp"
#include "stia/errors.hpp"
#include "stia/precoding.hpp"
#include "stia/protocol.hpp"
#include "stia/rng.hpp"
#include "stia/scheduler.hpp"

namespace stia {

std::string to_string(SimScheme scheme) {
    switch (scheme) {
        case SimScheme::Stia:
            return "stia";
        case SimScheme::Zf:
            return "zf";
        case SimScheme::ZfTdma:
            return "zf_tdma";
        case SimScheme::Tdma:
            return "tdma";
    }
    return "unknown";
}

SimScheme parse_sim_scheme(std::string_view name) {
    if (name == "stia") return SimScheme::Stia;
    if (name == "zf") return SimScheme::Zf;
    if (name == "zf_tdma" || name == "zf-tdma") return SimScheme::ZfTdma;
    if (name == "tdma") return SimScheme::Tdma;
    throw DomainError("unknown scheme '" + std::string(name) + "'");
}

double regression_slope(std::span<const double> snr_grid_db, std::span<const double> rates) {
    if (snr_grid_db.size() != rates.size() || snr_grid_db.size() < 2) {
        throw DomainError("regression_slope: need at least two matching points");
    }
    const auto n = static_cast<double>(rates.size());
    std::vector<double> x(rates.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = snr_grid_db[i] / 10.0 * std::log2(10.0);
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(rates.begin(), rates.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (rates[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("STIA_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

SchedulerPlan plan_for(const SimulationConfig& config) {
    const int k = config.users;
    const Slot horizon = static_cast<Slot>(k) * (config.rounds + k - 1);
    switch (config.scheme) {
        case SimScheme::Stia:
            if (config.delay != DelayConfig(k, 1)) {
                throw DomainError("STIA plans exist for T_c = K and T_fb = 1 only");
            }
            return build_plan_general(k, config.rounds);
        case SimScheme::Zf:
            if (config.delay.feedback_delay() != 0) {
                throw DomainError("pure ZF needs current CSIT in every slot (T_fb = 0)");
            }
            return build_plan_zf_tdma(k, config.delay, horizon);
        case SimScheme::ZfTdma:
            return build_plan_zf_tdma(k, config.delay, horizon);
        case SimScheme::Tdma:
            return build_plan_tdma(k, config.delay, horizon);
    }
    throw DomainError("unknown scheme");
}

/// Adds the bits delivered by one trial's plan at every SNR to `bits`.
void run_plan(const SchedulerPlan& plan, const FadingProcess& process, std::span<const double> snr,
              std::span<double> bits) {
    const int k = plan.users;
    for (const auto& round : plan.stia_rounds) {
        RoundChannels ch;
        ch.reference = process.at_slot(round.reference);
        ch.reference_slot = round.reference;
        std::vector<PrecoderSet> precoders;
        std::vector<double> scales{power_scale(1.0, static_cast<double>(k * (k - 1)))};
        for (Slot s : round.phase_two) {
            ch.phase_two.push_back(process.at_slot(s));
            ch.phase_two_slots.push_back(s);
            precoders.push_back(build_stia_precoders(ch.phase_two.back(), ch.reference, k, s));
            double energy = 0.0;
            for (const auto& v : precoders.back().per_user) {
                energy += frobenius_norm_squared(v);
            }
            scales.push_back(power_scale(1.0, energy));
        }
        // Noise covariance at unit power; at power P it is this divided by P.
        const auto cov = difference_noise_covariance(scales);
        for (int user = 1; user <= k; ++user) {
            const auto eff = effective_channel(user, ch, precoders);
            const auto gram = eff.matrix.adjoint() * solve_unguarded(cov, eff.matrix);
            for (std::size_t i = 0; i < snr.size(); ++i) {
                auto m = gram;
                m *= snr[i];
                m += ComplexMatrix::identity(gram.rows());
                bits[i] += log2_abs_det(m);
            }
        }
    }
    for (Slot s : plan.zf_slots) {
        const auto channels = process.at_slot(s);
        const auto served = zf_served_users(s, k);
        const auto gains = zf_gains(channels, served);
        for (std::size_t i = 0; i < snr.size(); ++i) {
            const double per_stream = snr[i] / static_cast<double>(served.size());
            for (double g : gains) {
                bits[i] += std::log2(1.0 + per_stream * g);
            }
        }
    }
    for (Slot s : plan.tdma_slots) {
        const auto h = process.channel(tdma_select(s, k), plan.delay.block_of(s));
        const double g = tdma_gain(h);
        for (std::size_t i = 0; i < snr.size(); ++i) {
            bits[i] += std::log2(1.0 + snr[i] * g);
        }
    }
}

constexpr std::uint64_t kTrialTag = 0x747269616cULL;
constexpr std::uint64_t kBootstrapTag = 0x626f6f74ULL;

}  // namespace

SumRateSamples simulate_sum_rates(const SimulationConfig& config) {
    if (config.trials < 1) {
        throw DomainError("simulate_sum_rates: need at least one trial");
    }
    if (config.rounds < 1) {
        throw DomainError("simulate_sum_rates: need at least one round");
    }
    if (config.snr_grid_db.empty()) {
        throw DomainError("simulate_sum_rates: empty SNR grid");
    }
    if (config.users < 2 || (config.scheme == SimScheme::Stia && config.users < 3)) {
        throw DomainError("simulate_sum_rates: too few users for the scheme");
    }
    const auto plan = plan_for(config);
    const std::size_t grid = config.snr_grid_db.size();
    std::vector<double> snr(grid);
    for (std::size_t i = 0; i < grid; ++i) {
        snr[i] = std::pow(10.0, config.snr_grid_db[i] / 10.0);
    }

    SumRateSamples out;
    out.snr_grid_db = config.snr_grid_db;
    out.trials = config.trials;
    out.rates.assign(static_cast<std::size_t>(config.trials) * grid, 0.0);
    out.plan_dof = account_dof(plan).dof;
    out.horizon = plan.horizon;
    std::vector<std::int64_t> resamples(static_cast<std::size_t>(config.trials), 0);

    auto run_trial = [&](std::int64_t t) {
        std::span<double> row(out.rates.data() + static_cast<std::size_t>(t) * grid, grid);
        for (std::uint64_t attempt = 0;; ++attempt) {
            StreamRng key(config.seed, static_cast<std::uint64_t>(t), attempt, kTrialTag);
            const FadingProcess process(config.users, config.users - 1, config.delay.coherence_slots(), key());
            std::fill(row.begin(), row.end(), 0.0);
            try {
                run_plan(plan, process, snr, row);
            } catch (const IllConditionedChannel&) {
                if (attempt >= 64) {
                    throw;
                }
                continue;
            }
            resamples[static_cast<std::size_t>(t)] = static_cast<std::int64_t>(attempt);
            break;
        }
        for (auto& r : row) {
            r /= static_cast<double>(plan.horizon);
        }
    };

    const unsigned workers =
        std::min<unsigned>(resolve_thread_count(config.threads), static_cast<unsigned>(config.trials));
    if (workers <= 1) {
        for (std::int64_t t = 0; t < config.trials; ++t) {
            run_trial(t);
        }
    } else {
        // Each trial writes only its own row, so the result does not depend
        // on the worker count.
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (auto t = static_cast<std::int64_t>(w); t < config.trials; t += workers) {
                        run_trial(t);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    out.resamples = std::accumulate(resamples.begin(), resamples.end(), std::int64_t{0});
    return out;
}

DofEstimate fit_dof_slope(const SumRateSamples& samples, std::uint64_t seed, int bootstrap_resamples) {
    const std::size_t grid = samples.snr_grid_db.size();
    const auto trials = static_cast<std::size_t>(samples.trials);
    if (trials == 0 || samples.rates.size() != trials * grid) {
        throw DomainError("fit_dof_slope: sample matrix does not match the grid");
    }
    auto means_of = [&](auto&& pick) {
        std::vector<double> mean(grid, 0.0);
        for (std::size_t t = 0; t < trials; ++t) {
            const std::size_t row = pick(t);
            for (std::size_t i = 0; i < grid; ++i) {
                mean[i] += samples.rates[row * grid + i];
            }
        }
        for (auto& m : mean) {
            m /= static_cast<double>(trials);
        }
        return mean;
    };

    DofEstimate est;
    est.snr_grid_db = samples.snr_grid_db;
    est.mean_sum_rates = means_of([](std::size_t t) { return t; });
    est.slope = regression_slope(est.snr_grid_db, est.mean_sum_rates);
    est.trials = samples.trials;
    est.seed = seed;
    est.resamples = samples.resamples;
    est.plan_dof = samples.plan_dof;

    if (bootstrap_resamples > 1) {
        std::vector<double> slopes;
        slopes.reserve(static_cast<std::size_t>(bootstrap_resamples));
        for (int b = 0; b < bootstrap_resamples; ++b) {
            StreamRng rng(seed, kBootstrapTag, static_cast<std::uint64_t>(b));
            const auto mean = means_of([&](std::size_t) { return static_cast<std::size_t>(rng.below(trials)); });
            slopes.push_back(regression_slope(est.snr_grid_db, mean));
        }
        const double mu = std::accumulate(slopes.begin(), slopes.end(), 0.0) / static_cast<double>(slopes.size());
        double var = 0.0;
        for (double s : slopes) {
            var += (s - mu) * (s - mu);
        }
        var /= static_cast<double>(slopes.size() - 1);
        est.confidence_halfwidth = 1.96 * std::sqrt(var);
    }
    return est;
}

DofEstimate estimate_dof_slope(const SimulationConfig& config) {
    const auto& grid = config.snr_grid_db;
    if (grid.size() < 2) {
        throw DomainError("estimate_dof_slope: need at least two SNR points");
    }
    if (!std::is_sorted(grid.begin(), grid.end(), std::less_equal<>())) {
        throw DomainError("estimate_dof_slope: SNR grid must be strictly increasing");
    }
    if (grid.back() < 40.0) {
        throw DomainError("estimate_dof_slope: top of the SNR grid must reach 40 dB");
    }
    if (config.trials < 1000) {
        throw DomainError("estimate_dof_slope: at least 1000 trials required");
    }
    const auto samples = simulate_sum_rates(config);
    auto est = fit_dof_slope(samples, config.seed, config.bootstrap_resamples);
    est.scheme = config.scheme;
    est.users = config.users;
    est.delay = config.delay;
    est.rounds = config.rounds;
    return est;
}

nlohmann::json DofEstimate::to_json() const {
    const Rational gamma = delay.gamma();
    return nlohmann::json{{"scheme", to_string(scheme)},
                          {"users", users},
                          {"t_c", delay.coherence_slots()},
                          {"t_fb", delay.feedback_delay()},
                          {"gamma", {{"num", gamma.numerator()}, {"den", gamma.denominator()}}},
                          {"snr_grid_db", snr_grid_db},
                          {"mean_sum_rates", mean_sum_rates},
                          {"slope", slope},
                          {"confidence_halfwidth", confidence_halfwidth},
                          {"trials", trials},
                          {"seed", seed},
                          {"resamples", resamples},
                          {"rounds", rounds},
                          {"plan_dof", {{"num", plan_dof.numerator()}, {"den", plan_dof.denominator()}}}};
}

}  // namespace stia
