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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace stia {

using Complex = std::complex<double>;

/// Relative singular-value threshold used by rank_with_tol when none is given.
inline constexpr double kDefaultRankTol = 1e-9;

/// Solves refuse matrices whose 2-norm condition number exceeds this.
inline constexpr double kSingularConditionLimit = 1e8;

/// Small dense complex matrix, row-major. Sized for K x K problems with K <= ~8.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    std::span<const Complex> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
    std::span<Complex> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
    std::span<const Complex> entries() const noexcept { return entries_; }

    ComplexMatrix adjoint() const;
    bool all_finite() const noexcept;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix a);

/// Row vector times matrix: returns v^T A.
std::vector<Complex> row_times(std::span<const Complex> v, const ComplexMatrix& a);

/// Matrix times column vector.
std::vector<Complex> times_vector(const ComplexMatrix& a, std::span<const Complex> v);

/// Unconjugated inner product sum_i a_i b_i (the h^T x of the channel model).
Complex dot(std::span<const Complex> a, std::span<const Complex> b);

double norm_inf(const ComplexMatrix& a);
double norm_inf(std::span<const Complex> v);
double frobenius_norm_squared(const ComplexMatrix& a);

/// Singular values in descending order (one-sided Jacobi).
std::vector<double> singular_values(const ComplexMatrix& a);

/// Number of singular values above rel_tol times the largest one.
std::size_t rank_with_tol(const ComplexMatrix& a, double rel_tol = kDefaultRankTol);

/// sigma_max / sigma_min of a square matrix; +inf when singular.
double condition_estimate(const ComplexMatrix& a);

/// Returns X = A^{-1} B using LU with partial pivoting. Throws SingularMatrix
/// when condition_estimate(A) exceeds kSingularConditionLimit.
ComplexMatrix solve_right(const ComplexMatrix& a, const ComplexMatrix& b);

/// Same as solve_right but skips the condition guard; only a zero pivot throws.
ComplexMatrix solve_unguarded(const ComplexMatrix& a, const ComplexMatrix& b);

/// log2 |det(A)| of a square matrix via LU. -inf when A is exactly singular.
double log2_abs_det(const ComplexMatrix& a);

}  // namespace stia
