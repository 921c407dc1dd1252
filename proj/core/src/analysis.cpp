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

#include "stia/analysis.hpp"

#include <charconv>
#include <sstream>

#include "stia/errors.hpp"

namespace stia {

std::string to_string(TradeoffScheme scheme) {
    switch (scheme) {
        case TradeoffScheme::StiaTradeoff:
            return "stia";
        case TradeoffScheme::ZfTdma:
            return "zf_tdma";
        case TradeoffScheme::ZfMat:
            return "zf_mat";
        case TradeoffScheme::Tdma:
            return "tdma";
        case TradeoffScheme::MatConst:
            return "mat";
    }
    return "unknown";
}

Rational tradeoff_k3(Rational gamma) {
    if (gamma < 0) {
        throw DomainError("tradeoff_k3: gamma must be non-negative");
    }
    if (gamma <= Rational(1, 3)) {
        return 2;
    }
    if (gamma <= 1) {
        return Rational(-3, 4) * gamma + Rational(9, 4);
    }
    return kMatDof;
}

Rational tradeoff_general(int users, Rational gamma) {
    if (users < 3) {
        throw DomainError("tradeoff_general: K >= 3 required");
    }
    if (users == 3) {
        return tradeoff_k3(gamma);
    }
    if (gamma < 0) {
        throw DomainError("tradeoff_general: gamma must be non-negative");
    }
    const std::int64_t k = users;
    if (gamma <= Rational(1, k)) {
        return k - 1;
    }
    if (gamma <= 1) {
        return Rational(k - 1) - (Rational(k) * gamma - 1) * Rational(k - 2, k - 1);
    }
    return 1;
}

Rational baseline_zf_tdma(Rational gamma, int users) {
    if (gamma < 0 || gamma > 1) {
        throw DomainError("baseline_zf_tdma: defined for gamma in [0, 1] only");
    }
    if (users < 2) {
        throw DomainError("baseline_zf_tdma: K >= 2 required");
    }
    return (Rational(1) - gamma) * Rational(users - 1) + gamma;
}

Rational baseline_zf_mat(Rational gamma) {
    if (gamma < 0 || gamma > 1) {
        throw DomainError("baseline_zf_mat: defined for gamma in [0, 1] only");
    }
    return (Rational(1) - gamma) * 2 + gamma * kMatDof;
}

std::vector<TradeoffPoint> emit_tradeoff_table(std::span<const Rational> gammas, int users) {
    if (gammas.empty()) {
        throw DomainError("emit_tradeoff_table: empty gamma grid");
    }
    std::vector<TradeoffPoint> rows;
    for (const auto& g : gammas) {
        // Baselines are time-sharing lines on [0, 1]; past gamma = 1 there is
        // no current CSIT left, so they sit at their gamma = 1 value.
        const Rational clamped = g > 1 ? Rational(1) : g;
        rows.push_back({g, tradeoff_general(users, g), TradeoffScheme::StiaTradeoff});
        rows.push_back({g, baseline_zf_tdma(clamped, users), TradeoffScheme::ZfTdma});
        if (users == 3) {
            rows.push_back({g, baseline_zf_mat(clamped), TradeoffScheme::ZfMat});
        }
        rows.push_back({g, Rational(1), TradeoffScheme::Tdma});
        if (users == 3) {
            rows.push_back({g, kMatDof, TradeoffScheme::MatConst});
        }
    }
    return rows;
}

std::vector<Rational> default_gamma_grid() {
    std::vector<Rational> grid;
    for (std::int64_t i = 0; i <= 36; ++i) {
        grid.emplace_back(i, 24);
    }
    return grid;
}

std::string csv_field(std::string_view value) {
    if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(value);
    }
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string tradeoff_csv(std::span<const TradeoffPoint> rows) {
    std::ostringstream out;
    out << "schema_version,scheme,gamma_num,gamma_den,dof_num,dof_den\r\n";
    for (const auto& r : rows) {
        out << kCsvSchemaVersion << ',' << csv_field(to_string(r.scheme)) << ',' << r.gamma.numerator() << ','
            << r.gamma.denominator() << ',' << r.dof.numerator() << ',' << r.dof.denominator() << "\r\n";
    }
    return out.str();
}

namespace {

std::int64_t parse_int(std::string_view text) {
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    std::int64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end) {
        throw DomainError("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return parse_int(text);
    }
    const auto den = parse_int(text.substr(slash + 1));
    if (den == 0) {
        throw DomainError("zero denominator in '" + std::string(text) + "'");
    }
    return {parse_int(text.substr(0, slash)), den};
}

}  // namespace stia
