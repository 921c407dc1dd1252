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

#include "stia/numerics.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "stia/errors.hpp"

namespace stia {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw DomainError("ComplexMatrix: entry count does not match shape");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Complex> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw DomainError("ComplexMatrix::from_rows: ragged rows");
        }
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexMatrix(r, c, std::move(entries));
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

bool ComplexMatrix::all_finite() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    assert(rows_ == other.rows_ && cols_ == other.cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += other.entries_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    assert(rows_ == other.rows_ && cols_ == other.cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] -= other.entries_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& z : entries_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DomainError("matrix product: inner dimensions differ");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scale, ComplexMatrix a) { return a *= scale; }

std::vector<Complex> row_times(std::span<const Complex> v, const ComplexMatrix& a) {
    if (v.size() != a.rows()) {
        throw DomainError("row_times: length mismatch");
    }
    std::vector<Complex> out(a.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out[j] += v[k] * a(k, j);
        }
    }
    return out;
}

std::vector<Complex> times_vector(const ComplexMatrix& a, std::span<const Complex> v) {
    if (v.size() != a.cols()) {
        throw DomainError("times_vector: length mismatch");
    }
    std::vector<Complex> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        out[i] = dot(a.row(i), v);
    }
    return out;
}

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw DomainError("dot: length mismatch");
    }
    Complex acc{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

double norm_inf(const ComplexMatrix& a) {
    double best = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        double sum = 0.0;
        for (const auto& z : a.row(r)) {
            sum += std::abs(z);
        }
        best = std::max(best, sum);
    }
    return best;
}

double norm_inf(std::span<const Complex> v) {
    double best = 0.0;
    for (const auto& z : v) {
        best = std::max(best, std::abs(z));
    }
    return best;
}

double frobenius_norm_squared(const ComplexMatrix& a) {
    double sum = 0.0;
    for (const auto& z : a.entries()) {
        sum += std::norm(z);
    }
    return sum;
}

std::vector<double> singular_values(const ComplexMatrix& a) {
    // Hestenes one-sided Jacobi on the columns of a tall matrix. Working on
    // the columns directly avoids squaring the condition number.
    const bool wide = a.rows() < a.cols();
    const std::size_t m = wide ? a.cols() : a.rows();
    const std::size_t n = wide ? a.rows() : a.cols();

    std::vector<std::vector<Complex>> cols(n, std::vector<Complex>(m));
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (wide) {
                cols[r][c] = std::conj(a(r, c));
            } else {
                cols[c][r] = a(r, c);
            }
        }
    }

    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double alpha = 0.0;
                double beta = 0.0;
                Complex gamma{};
                for (std::size_t k = 0; k < m; ++k) {
                    alpha += std::norm(cols[i][k]);
                    beta += std::norm(cols[j][k]);
                    gamma += std::conj(cols[i][k]) * cols[j][k];
                }
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) {
                    continue;
                }
                rotated = true;
                // Rotate column j by conj(phase) so the cross term is real.
                const Complex phase = std::conj(gamma / g);
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < m; ++k) {
                    const Complex ai = cols[i][k];
                    const Complex bj = cols[j][k] * phase;
                    cols[i][k] = c * ai - s * bj;
                    cols[j][k] = s * ai + c * bj;
                }
            }
        }
        if (!rotated) {
            break;
        }
    }

    std::vector<double> sv(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (const auto& z : cols[i]) {
            sum += std::norm(z);
        }
        sv[i] = std::sqrt(sum);
    }
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

std::size_t rank_with_tol(const ComplexMatrix& a, double rel_tol) {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
        throw DomainError("rank_with_tol: rel_tol must lie in (0, 1)");
    }
    const auto sv = singular_values(a);
    if (sv.empty() || sv.front() == 0.0) {
        return 0;
    }
    const double threshold = rel_tol * sv.front();
    return static_cast<std::size_t>(
        std::count_if(sv.begin(), sv.end(), [threshold](double s) { return s > threshold; }));
}

double condition_estimate(const ComplexMatrix& a) {
    if (!a.square()) {
        throw DomainError("condition_estimate: matrix must be square");
    }
    const auto sv = singular_values(a);
    if (sv.empty()) {
        return 1.0;
    }
    if (sv.back() == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return sv.front() / sv.back();
}

namespace {

struct LuFactors {
    ComplexMatrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
};

LuFactors lu_factor(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    LuFactors f{a, std::vector<std::size_t>(n), 1, false};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    auto& lu = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        double best = std::abs(lu(k, k));
        for (std::size_t r = k + 1; r < n; ++r) {
            if (std::abs(lu(r, k)) > best) {
                best = std::abs(lu(r, k));
                pivot = r;
            }
        }
        if (best == 0.0) {
            f.singular = true;
            return f;
        }
        if (pivot != k) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(lu(k, c), lu(pivot, c));
            }
            std::swap(f.perm[k], f.perm[pivot]);
            f.sign = -f.sign;
        }
        for (std::size_t r = k + 1; r < n; ++r) {
            const Complex factor = lu(r, k) / lu(k, k);
            lu(r, k) = factor;
            for (std::size_t c = k + 1; c < n; ++c) {
                lu(r, c) -= factor * lu(k, c);
            }
        }
    }
    return f;
}

ComplexMatrix lu_solve(const LuFactors& f, const ComplexMatrix& b) {
    const std::size_t n = f.lu.rows();
    ComplexMatrix x(n, b.cols());
    for (std::size_t col = 0; col < b.cols(); ++col) {
        std::vector<Complex> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            Complex acc = b(f.perm[i], col);
            for (std::size_t k = 0; k < i; ++k) {
                acc -= f.lu(i, k) * y[k];
            }
            y[i] = acc;
        }
        for (std::size_t i = n; i-- > 0;) {
            Complex acc = y[i];
            for (std::size_t k = i + 1; k < n; ++k) {
                acc -= f.lu(i, k) * x(k, col);
            }
            x(i, col) = acc / f.lu(i, i);
        }
    }
    return x;
}

void check_solve_shapes(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.square()) {
        throw DomainError("solve_right: A must be square");
    }
    if (b.rows() != a.rows()) {
        throw DomainError("solve_right: B is not conformable with A");
    }
}

}  // namespace

ComplexMatrix solve_unguarded(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_solve_shapes(a, b);
    const auto f = lu_factor(a);
    if (f.singular) {
        throw SingularMatrix("solve_right: exactly singular matrix",
                             std::numeric_limits<double>::infinity());
    }
    return lu_solve(f, b);
}

ComplexMatrix solve_right(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_solve_shapes(a, b);
    const double cond = condition_estimate(a);
    if (!(cond <= kSingularConditionLimit)) {
        std::ostringstream msg;
        msg << "solve_right: matrix singular to tolerance (condition " << cond << ")";
        throw SingularMatrix(msg.str(), cond);
    }
    return solve_unguarded(a, b);
}

double log2_abs_det(const ComplexMatrix& a) {
    if (!a.square()) {
        throw DomainError("log2_abs_det: matrix must be square");
    }
    const auto f = lu_factor(a);
    if (f.singular) {
        return -std::numeric_limits<double>::infinity();
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        sum += std::log2(std::abs(f.lu(i, i)));
    }
    return sum;
}

}  // namespace stia
