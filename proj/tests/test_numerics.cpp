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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <numeric>

#include "stia/errors.hpp"
#include "stia/numerics.hpp"
#include "test_support.hpp"

using namespace stia;
using Catch::Approx;

namespace {

// Closed-form singular values of a 2x2 matrix:
//   s^2 = (||A||_F^2 +- sqrt(||A||_F^4 - 4 |det A|^2)) / 2.
std::pair<double, double> singular_values_2x2(const ComplexMatrix& a) {
    const double f = frobenius_norm_squared(a);
    const double det = std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
    const double disc = std::sqrt(std::max(0.0, f * f - 4.0 * det * det));
    return {std::sqrt((f + disc) / 2.0), std::sqrt(std::max(0.0, (f - disc) / 2.0))};
}

// Gram determinant by cofactor expansion; zero iff the rows are dependent.
Complex det_by_cofactors(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    if (n == 1) return a(0, 0);
    Complex sum{};
    for (std::size_t c = 0; c < n; ++c) {
        ComplexMatrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != c) minor(r - 1, cc++) = a(r, k);
            }
        }
        sum += (c % 2 == 0 ? 1.0 : -1.0) * a(0, c) * det_by_cofactors(minor);
    }
    return sum;
}

}  // namespace

TEST_CASE("solve_right on identity returns B", "[numerics]") {
    StreamRng rng(1);
    const auto b = test::random_matrix(3, 3, rng);
    CHECK(test::max_abs_diff(solve_right(ComplexMatrix::identity(3), b), b) == 0.0);
}

TEST_CASE("solve_right with 2I gives half identity", "[numerics]") {
    const auto x = solve_right(2.0 * ComplexMatrix::identity(4), ComplexMatrix::identity(4));
    CHECK(test::max_abs_diff(x, 0.5 * ComplexMatrix::identity(4)) < 1e-15);
}

TEST_CASE("solve_right residual bound on well-conditioned matrices", "[numerics]") {
    StreamRng rng(2);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + static_cast<std::size_t>(trial % 6);
        const auto a = test::random_matrix(n, n, rng);
        const auto b = test::random_matrix(n, n, rng);
        if (condition_estimate(a) >= 1e6) {
            continue;
        }
        const auto x = solve_right(a, b);
        CHECK(norm_inf(a * x - b) <= 1e-10 * norm_inf(b));
        ++checked;
    }
    CHECK(checked > 450);
}

TEST_CASE("solve_right refuses singular matrices and reports the condition", "[numerics]") {
    const auto a = ComplexMatrix::from_rows({{1.0, 2.0}, {2.0, 4.0}});
    try {
        (void)solve_right(a, ComplexMatrix::identity(2));
        FAIL("expected SingularMatrix");
    } catch (const SingularMatrix& e) {
        CHECK(e.condition() > kSingularConditionLimit);
    }
    const auto nearly = ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 1e-9}});
    CHECK_THROWS_AS(solve_right(nearly, ComplexMatrix::identity(2)), SingularMatrix);
    CHECK_THROWS_AS(solve_right(ComplexMatrix(2, 3), ComplexMatrix(2, 2)), DomainError);
}

TEST_CASE("rank_with_tol basic cases", "[numerics]") {
    CHECK(rank_with_tol(ComplexMatrix(3, 3)) == 0);
    for (std::size_t m = 1; m <= 6; ++m) {
        CHECK(rank_with_tol(ComplexMatrix::identity(m)) == m);
    }
    CHECK_THROWS_AS(rank_with_tol(ComplexMatrix::identity(2), 0.0), DomainError);
    CHECK_THROWS_AS(rank_with_tol(ComplexMatrix::identity(2), 1.0), DomainError);
}

TEST_CASE("rank_with_tol drops a repeated row, confirmed by Gram determinants", "[numerics]") {
    StreamRng rng(3);
    for (std::size_t rows = 2; rows <= 5; ++rows) {
        auto a = test::random_matrix(rows, rows, rng);
        for (std::size_t c = 0; c < rows; ++c) {
            a(rows - 1, c) = a(0, c);
        }
        // Oracle: det(A A^H) vanishes for the full matrix, not for the rows
        // without the duplicate.
        const auto gram = a * a.adjoint();
        CHECK(std::abs(det_by_cofactors(gram)) < 1e-9);
        ComplexMatrix head(rows - 1, rows);
        for (std::size_t r = 0; r + 1 < rows; ++r) {
            for (std::size_t c = 0; c < rows; ++c) head(r, c) = a(r, c);
        }
        CHECK(std::abs(det_by_cofactors(head * head.adjoint())) > 1e-6);

        CHECK(rank_with_tol(a) == rows - 1);
    }
}

TEST_CASE("rank is invariant under row permutation and unit-modulus row scaling", "[numerics]") {
    StreamRng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 2 + rng.below(5);
        const std::size_t cols = 2 + rng.below(5);
        auto a = test::random_matrix(rows, cols, rng);
        if (rng.below(2) == 0) {
            // Make it rank deficient sometimes.
            for (std::size_t c = 0; c < cols; ++c) a(rows - 1, c) = 2.0 * a(0, c);
        }
        const auto base = rank_with_tol(a);

        std::vector<std::size_t> perm(rows);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = rows; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        ComplexMatrix b(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            const Complex phase = std::polar(1.0, 6.283185307179586 * rng.uniform());
            for (std::size_t c = 0; c < cols; ++c) b(r, c) = phase * a(perm[r], c);
        }
        CHECK(rank_with_tol(b) == base);
    }
}

TEST_CASE("condition_estimate closed-form cases", "[numerics]") {
    CHECK(condition_estimate(ComplexMatrix::identity(3)) == Approx(1.0));
    CHECK(condition_estimate(ComplexMatrix::from_rows({{10.0, 0.0}, {0.0, 0.1}})) == Approx(100.0).epsilon(1e-12));
    CHECK(std::isinf(condition_estimate(ComplexMatrix(2, 2))));
}

TEST_CASE("singular values match the 2x2 closed form", "[numerics]") {
    StreamRng rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto a = test::random_matrix(2, 2, rng);
        const auto [smax, smin] = singular_values_2x2(a);
        const auto sv = singular_values(a);
        REQUIRE(sv.size() == 2);
        CHECK(std::abs(sv[0] - smax) < 1e-8);
        CHECK(std::abs(sv[1] - smin) < 1e-8);
        CHECK(std::abs(condition_estimate(a) - smax / smin) <= 1e-8 * std::max(1.0, smax / smin));
    }
}

TEST_CASE("condition_estimate is at least one", "[numerics]") {
    StreamRng rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + rng.below(7);
        CHECK(condition_estimate(test::random_matrix(n, n, rng)) >= 1.0 - 1e-12);
    }
}

TEST_CASE("singular values of wide and tall matrices agree with their adjoint", "[numerics]") {
    StreamRng rng(7);
    const auto a = test::random_matrix(2, 5, rng);
    const auto s1 = singular_values(a);
    const auto s2 = singular_values(a.adjoint());
    REQUIRE(s1.size() == s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1[i] == Approx(s2[i]).epsilon(1e-12));
    }
}

TEST_CASE("log2_abs_det matches the direct 2x2 determinant", "[numerics]") {
    StreamRng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = test::random_matrix(2, 2, rng);
        const double direct = std::log2(std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)));
        CHECK(log2_abs_det(a) == Approx(direct).margin(1e-10));
    }
    CHECK(log2_abs_det(ComplexMatrix(2, 2)) == -std::numeric_limits<double>::infinity());
}
