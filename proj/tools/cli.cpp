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

#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stia/analysis.hpp"
#include "stia/errors.hpp"
#include "stia/scheduler.hpp"

namespace stia::cli {

std::string to_string(Command command) {
    switch (command) {
        case Command::Simulate:
            return "simulate";
        case Command::Tradeoff:
            return "tradeoff";
        case Command::Verify:
            return "verify";
        case Command::Schedule:
            return "schedule";
    }
    return "unknown";
}

std::string to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

namespace {

Command parse_command(const std::string& name) {
    for (auto c : {Command::Simulate, Command::Tradeoff, Command::Verify, Command::Schedule}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw DomainError("unknown command '" + name + "'");
}

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw DomainError("unknown format '" + name + "' (expected csv or json)");
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            grid.push_back(std::stod(item, &used));
            if (item.find_first_not_of(' ', used) != std::string::npos) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw DomainError("bad SNR value '" + item + "'");
        }
    }
    return grid;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(item);
    }
    return out;
}

/// Writes the payload to --out (summary to `out`) or, without --out, the
/// payload to `out` and the summary to `err`.
int emit(const RunConfig& config, const std::string& payload, const std::string& summary, std::ostream& out,
         std::ostream& err) {
    if (config.output_path.empty()) {
        out << payload;
        if (!summary.empty()) {
            err << summary;
        }
        return kExitOk;
    }
    std::ofstream file(config.output_path, std::ios::binary);
    if (!file) {
        err << "error: cannot open '" << config.output_path << "' for writing\n";
        return kExitFailure;
    }
    file << payload;
    file.close();
    if (!file) {
        err << "error: failed writing '" << config.output_path << "'\n";
        return kExitFailure;
    }
    out << summary;
    return kExitOk;
}

}  // namespace

std::int64_t RunConfig::resolved_trials() const {
    if (trials) {
        return *trials;
    }
    return command == Command::Verify ? 1000 : 10000;
}

OutputFormat RunConfig::resolved_format() const {
    if (format) {
        return *format;
    }
    return command == Command::Tradeoff ? OutputFormat::Csv : OutputFormat::Json;
}

nlohmann::json to_json(const RunConfig& config) {
    nlohmann::json j{{"command", to_string(config.command)},
                     {"k", config.k},
                     {"tc", config.tc},
                     {"tfb", config.tfb},
                     {"snr_grid_db", config.snr_grid_db},
                     {"seed", config.seed},
                     {"scheme", config.scheme},
                     {"output_path", config.output_path},
                     {"rounds", config.rounds},
                     {"n", config.n},
                     {"gammas", config.gammas},
                     {"mutate", config.mutate}};
    j["trials"] = config.trials ? nlohmann::json(*config.trials) : nlohmann::json(nullptr);
    j["format"] = config.format ? nlohmann::json(to_string(*config.format)) : nlohmann::json(nullptr);
    return j;
}

RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base) {
    if (!j.is_object()) {
        throw DomainError("run configuration must be a JSON object");
    }
    auto take = [&j](const char* key, auto& field) {
        if (const auto it = j.find(key); it != j.end()) {
            it->get_to(field);
        }
    };
    try {
        if (const auto it = j.find("command"); it != j.end()) {
            base.command = parse_command(it->get<std::string>());
        }
        take("k", base.k);
        take("tc", base.tc);
        take("tfb", base.tfb);
        take("snr_grid_db", base.snr_grid_db);
        take("seed", base.seed);
        take("scheme", base.scheme);
        take("output_path", base.output_path);
        take("rounds", base.rounds);
        take("n", base.n);
        take("gammas", base.gammas);
        take("mutate", base.mutate);
        if (const auto it = j.find("trials"); it != j.end()) {
            base.trials = it->is_null() ? std::nullopt : std::optional<std::int64_t>(it->get<std::int64_t>());
        }
        if (const auto it = j.find("format"); it != j.end()) {
            base.format =
                it->is_null() ? std::nullopt : std::optional<OutputFormat>(parse_format(it->get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("bad configuration value: ") + e.what());
    }
    return base;
}

void validate(const RunConfig& config) {
    if (config.trials && *config.trials < 1) {
        throw DomainError("--trials must be at least 1");
    }
    if (config.tc < 1) {
        throw DomainError("--tc must be at least 1");
    }
    if (config.tfb < 0) {
        throw DomainError("--tfb must be non-negative");
    }
    switch (config.command) {
        case Command::Simulate:
            if (config.k < 2) {
                throw DomainError("--k must be at least 2");
            }
            if (config.scheme == "stia" && config.k < 3) {
                throw DomainError("STIA needs --k >= 3");
            }
            parse_sim_scheme(config.scheme);
            if (config.snr_grid_db.empty()) {
                throw DomainError("--snr must list at least one value");
            }
            if (config.rounds < 1) {
                throw DomainError("--rounds must be at least 1");
            }
            break;
        case Command::Tradeoff:
            if (config.k < 3) {
                throw DomainError("--k must be at least 3");
            }
            for (const auto& g : config.gammas) {
                if (parse_rational(g) < 0) {
                    throw DomainError("gamma values must be non-negative");
                }
            }
            break;
        case Command::Verify:
            if (config.k < 3) {
                throw DomainError("--k must be at least 3");
            }
            if (!config.mutate.empty() && config.mutate != "negate-outdated") {
                throw DomainError("--mutate accepts only 'negate-outdated'");
            }
            break;
        case Command::Schedule:
            if (config.k < 3) {
                throw DomainError("--k must be at least 3");
            }
            if (config.n < 1) {
                throw DomainError("--n must be at least 1");
            }
            break;
    }
}

int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
    SimulationConfig sim;
    sim.scheme = parse_sim_scheme(config.scheme);
    sim.users = config.k;
    sim.delay = DelayConfig(config.tc, config.tfb);
    sim.snr_grid_db = config.snr_grid_db;
    sim.trials = config.resolved_trials();
    sim.seed = config.seed;
    sim.rounds = config.rounds;

    const auto est = estimate_dof_slope(sim);
    std::string payload;
    if (config.resolved_format() == OutputFormat::Json) {
        payload = est.to_json().dump(2) + "\n";
    } else {
        std::ostringstream csv;
        csv << std::setprecision(17);
        csv << "schema_version,scheme,k,t_c,t_fb,snr_db,mean_sum_rate\r\n";
        for (std::size_t i = 0; i < est.snr_grid_db.size(); ++i) {
            csv << kCsvSchemaVersion << ',' << csv_field(to_string(est.scheme)) << ',' << est.users << ','
                << config.tc << ',' << config.tfb << ',' << est.snr_grid_db[i] << ',' << est.mean_sum_rates[i]
                << "\r\n";
        }
        payload = csv.str();
    }
    std::ostringstream summary;
    summary << std::fixed << std::setprecision(4) << "scheme=" << to_string(est.scheme) << " k=" << est.users
            << " gamma=" << config.tfb << "/" << config.tc << " slope=" << est.slope
            << " ci95=+/-" << est.confidence_halfwidth << " trials=" << est.trials
            << " resamples=" << est.resamples << "\n";
    return emit(config, payload, summary.str(), out, err);
}

int run_tradeoff(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::vector<Rational> gammas;
    for (const auto& g : config.gammas) {
        gammas.push_back(parse_rational(g));
    }
    if (gammas.empty()) {
        gammas = default_gamma_grid();
    }
    const auto rows = emit_tradeoff_table(gammas, config.k);
    std::string payload;
    if (config.resolved_format() == OutputFormat::Csv) {
        payload = tradeoff_csv(rows);
    } else {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) {
            j.push_back({{"scheme", to_string(r.scheme)},
                         {"gamma_num", r.gamma.numerator()},
                         {"gamma_den", r.gamma.denominator()},
                         {"dof_num", r.dof.numerator()},
                         {"dof_den", r.dof.denominator()}});
        }
        payload = nlohmann::json{{"schema_version", kCsvSchemaVersion}, {"k", config.k}, {"rows", j}}.dump(2) + "\n";
    }
    std::ostringstream summary;
    summary << "wrote " << rows.size() << " trade-off rows for k=" << config.k << "\n";
    return emit(config, payload, summary.str(), out, err);
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
    VerifyOptions options;
    options.rounds = config.resolved_trials();
    options.seed = config.seed;
    options.negate_outdated = config.mutate == "negate-outdated";
    options.users.clear();
    for (int k = 3; k <= std::max(config.k, 6); ++k) {
        options.users.push_back(k);
    }
    const auto suites = run_verify_suites(options);
    bool all = true;
    nlohmann::json report_suites = nlohmann::json::array();
    std::ostringstream summary;
    for (const auto& s : suites) {
        all = all && s.passed;
        report_suites.push_back({{"name", s.name}, {"passed", s.passed}, {"details", s.details}});
        summary << (s.passed ? "PASS " : "FAIL ") << s.name << "\n";
    }
    const nlohmann::json report{{"passed", all},
                                {"rounds_per_k", options.rounds},
                                {"seed", options.seed},
                                {"mutation", config.mutate},
                                {"suites", report_suites}};
    const int status = emit(config, report.dump(2) + "\n", summary.str(), out, err);
    if (status != kExitOk) {
        return status;
    }
    return all ? kExitOk : kExitFailure;
}

int run_schedule(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto plan = config.k == 3 ? build_plan_k3(config.n) : build_plan_general(config.k, config.n);
    const auto check = verify_plan(plan);
    std::string payload;
    if (config.resolved_format() == OutputFormat::Json) {
        auto j = plan_to_json(plan);
        j["valid"] = check.ok;
        payload = j.dump(2) + "\n";
    } else {
        std::ostringstream csv;
        csv << "schema_version,slot,role,round\r\n";
        const auto roles = plan.roles();
        std::vector<std::int64_t> round_of(static_cast<std::size_t>(plan.horizon) + 1, 0);
        for (std::size_t i = 0; i < plan.stia_rounds.size(); ++i) {
            for (Slot s : plan.stia_rounds[i].slots()) {
                round_of[static_cast<std::size_t>(s)] = static_cast<std::int64_t>(i) + 1;
            }
        }
        for (Slot s = 1; s <= plan.horizon; ++s) {
            csv << kCsvSchemaVersion << ',' << s << ',' << to_string(roles[static_cast<std::size_t>(s - 1)]) << ',';
            if (round_of[static_cast<std::size_t>(s)] != 0) {
                csv << round_of[static_cast<std::size_t>(s)];
            }
            csv << "\r\n";
        }
        payload = csv.str();
    }
    const auto acc = account_dof(plan);
    std::ostringstream summary;
    summary << "k=" << plan.users << " n=" << plan.rounds << " horizon=" << plan.horizon
            << " dof=" << acc.dof.numerator() << "/" << acc.dof.denominator()
            << (check.ok ? " valid" : " INVALID") << "\n";
    const int status = emit(config, payload, summary.str(), out, err);
    return status == kExitOk && !check.ok ? kExitFailure : status;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate(config);
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        switch (config.command) {
            case Command::Simulate:
                return run_simulate(config, out, err);
            case Command::Tradeoff:
                return run_tradeoff(config, out, err);
            case Command::Verify:
                return run_verify(config, out, err);
            case Command::Schedule:
                return run_schedule(config, out, err);
        }
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Space-time interference alignment simulator for the MISO broadcast channel with delayed CSIT",
                 "stia"};
    app.require_subcommand(1);

    struct Flags {
        int k = 0;
        int tc = 0;
        int tfb = 0;
        std::string snr;
        std::int64_t trials = 0;
        std::uint64_t seed = 0;
        std::string scheme;
        std::string out;
        std::string format;
        std::string config;
        std::int64_t rounds = 0;
        std::int64_t n = 0;
        std::string gammas;
        std::string mutate;
    } flags;

    struct Bound {
        CLI::Option* k = nullptr;
        CLI::Option* tc = nullptr;
        CLI::Option* tfb = nullptr;
        CLI::Option* snr = nullptr;
        CLI::Option* trials = nullptr;
        CLI::Option* seed = nullptr;
        CLI::Option* scheme = nullptr;
        CLI::Option* out = nullptr;
        CLI::Option* format = nullptr;
        CLI::Option* config = nullptr;
        CLI::Option* rounds = nullptr;
        CLI::Option* n = nullptr;
        CLI::Option* gammas = nullptr;
        CLI::Option* mutate = nullptr;
    };
    std::vector<std::pair<CLI::App*, Bound>> subs;

    auto add_common = [&](CLI::App* sub) {
        Bound b;
        b.k = sub->add_option("--k", flags.k, "number of users K (N_t = K - 1 antennas)");
        b.tc = sub->add_option("--tc", flags.tc, "coherence time in slots");
        b.tfb = sub->add_option("--tfb", flags.tfb, "feedback delay in slots");
        b.snr = sub->add_option("--snr", flags.snr, "comma-separated SNR grid in dB");
        b.trials = sub->add_option("--trials", flags.trials, "Monte Carlo trials (verify: rounds per K)");
        b.seed = sub->add_option("--seed", flags.seed, "64-bit RNG seed");
        b.scheme = sub->add_option("--scheme", flags.scheme, "stia | zf | zf_tdma | tdma");
        b.out = sub->add_option("--out", flags.out, "output file (default: standard output)");
        b.format = sub->add_option("--format", flags.format, "csv | json");
        b.config = sub->add_option("--config", flags.config, "JSON file with RunConfig fields");
        b.rounds = sub->add_option("--rounds", flags.rounds, "STIA rounds per simulated plan");
        b.n = sub->add_option("--n", flags.n, "schedule: number of STIA rounds in the plan");
        b.gammas = sub->add_option("--gammas", flags.gammas, "tradeoff: comma-separated gamma values, e.g. 0,1/3,1");
        b.mutate = sub->add_option("--mutate", flags.mutate, "verify: inject a fault (negate-outdated)");
        subs.emplace_back(sub, b);
    };
    add_common(app.add_subcommand("simulate", "Monte Carlo sum-rate sweep and DoF slope estimate"));
    add_common(app.add_subcommand("tradeoff", "CSI-delay vs DoF trade-off table"));
    add_common(app.add_subcommand("verify", "run the alignment, decoding, rank, partition and power suites"));
    add_common(app.add_subcommand("schedule", "emit the slot partition of a scheduler plan"));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    for (const auto& [sub, b] : subs) {
        if (!sub->parsed()) {
            continue;
        }
        RunConfig config;
        try {
            config.command = parse_command(sub->get_name());
            if (b.config->count() > 0) {
                std::ifstream file(flags.config);
                if (!file) {
                    err << "error: cannot read config '" << flags.config << "'\n";
                    return kExitUsage;
                }
                nlohmann::json j;
                try {
                    file >> j;
                } catch (const nlohmann::json::exception& e) {
                    err << "usage error: config is not valid JSON: " << e.what() << "\n";
                    return kExitUsage;
                }
                config = run_config_from_json(j, config);
                config.command = parse_command(sub->get_name());
            }
            if (b.k->count() > 0) config.k = flags.k;
            if (b.tc->count() > 0) config.tc = flags.tc;
            if (b.tfb->count() > 0) config.tfb = flags.tfb;
            if (b.snr->count() > 0) config.snr_grid_db = parse_grid(flags.snr);
            if (b.trials->count() > 0) config.trials = flags.trials;
            if (b.seed->count() > 0) config.seed = flags.seed;
            if (b.scheme->count() > 0) config.scheme = flags.scheme;
            if (b.out->count() > 0) config.output_path = flags.out;
            if (b.format->count() > 0) config.format = parse_format(flags.format);
            if (b.rounds->count() > 0) config.rounds = flags.rounds;
            if (b.n->count() > 0) config.n = flags.n;
            if (b.gammas->count() > 0) config.gammas = split_list(flags.gammas);
            if (b.mutate->count() > 0) config.mutate = flags.mutate;
        } catch (const DomainError& e) {
            err << "usage error: " << e.what() << "\n";
            return kExitUsage;
        }
        return run(config, out, err);
    }
    return kExitUsage;
}

}  // namespace stia::cli
