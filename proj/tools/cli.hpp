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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace stia::cli {

enum class Command { Simulate, Tradeoff, Verify, Schedule };
enum class OutputFormat { Csv, Json };

std::string to_string(Command command);
std::string to_string(OutputFormat format);

/// Flat run configuration; JSON keys match the field names.
struct RunConfig {
    Command command = Command::Simulate;
    int k = 3;
    int tc = 3;
    int tfb = 1;
    std::vector<double> snr_grid_db{40.0, 50.0, 60.0};
    std::optional<std::int64_t> trials;  // simulate: 10000, verify: 1000
    std::uint64_t seed = 7;
    std::string scheme = "stia";
    std::string output_path;             // empty: standard output
    std::optional<OutputFormat> format;  // tradeoff: csv, otherwise json
    std::int64_t rounds = 32;            // simulate: STIA rounds per plan
    std::int64_t n = 3;                  // schedule: plan size
    std::vector<std::string> gammas;     // tradeoff: "p/q" values, empty for the default grid
    std::string mutate;                  // verify: "negate-outdated" breaks the precoder on purpose

    std::int64_t resolved_trials() const;
    OutputFormat resolved_format() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& config);

/// Fields missing from `j` keep their values from `base`.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});

/// Throws stia::DomainError describing the first invalid field.
void validate(const RunConfig& config);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

int run_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_tradeoff(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int run_schedule(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command after validation.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and runs. Returns the process exit status.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// ---- verification suites used by `verify` ---------------------------------

struct SuiteResult {
    std::string name;
    bool passed = false;
    nlohmann::json details;
};

struct VerifyOptions {
    std::vector<int> users{3, 4, 5, 6};
    std::int64_t rounds = 1000;
    std::uint64_t seed = 7;
    bool negate_outdated = false;
};

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options);

}  // namespace stia::cli
