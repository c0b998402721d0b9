/*
 * Copyright 2026 The rmimo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace rmimo {

using cplx = std::complex<double>;

inline bool is_finite(cplx z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Fixed-size 2-vector, the shape of every received/transmitted signal in a
/// 2x2 system. Value type, no heap.
struct Vec2 {
    std::array<cplx, 2> e{};

    Vec2() = default;
    Vec2(cplx a, cplx b) : e{a, b} {}

    cplx& operator[](std::size_t i) noexcept { return e[i]; }
    const cplx& operator[](std::size_t i) const noexcept { return e[i]; }
};

/// Fixed-size 2x2 complex matrix, row-major. The whole code design lives in
/// this shape, so it gets a dedicated fast path.
struct Mat2 {
    std::array<cplx, 4> e{};  // row-major: e[2*r + c]

    Mat2() = default;
    Mat2(cplx a11, cplx a12, cplx a21, cplx a22) : e{a11, a12, a21, a22} {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 ones() { return {1.0, 1.0, 1.0, 1.0}; }
    static Mat2 zero() { return {}; }

    cplx& operator()(std::size_t r, std::size_t c) noexcept { return e[2 * r + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const noexcept { return e[2 * r + c]; }
};

inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec2 operator*(cplx s, const Vec2& v) { return {s * v[0], s * v[1]}; }

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.e[0] + b.e[0], a.e[1] + b.e[1], a.e[2] + b.e[2], a.e[3] + b.e[3]};
}
inline Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.e[0] - b.e[0], a.e[1] - b.e[1], a.e[2] - b.e[2], a.e[3] - b.e[3]};
}
inline Mat2 operator*(cplx s, const Mat2& m) { return {s * m.e[0], s * m.e[1], s * m.e[2], s * m.e[3]}; }

inline Vec2 matvec(const Mat2& m, const Vec2& v) {
    return {m.e[0] * v[0] + m.e[1] * v[1], m.e[2] * v[0] + m.e[3] * v[1]};
}

inline Mat2 matmul(const Mat2& a, const Mat2& b) {
    return {a.e[0] * b.e[0] + a.e[1] * b.e[2], a.e[0] * b.e[1] + a.e[1] * b.e[3],
            a.e[2] * b.e[0] + a.e[3] * b.e[2], a.e[2] * b.e[1] + a.e[3] * b.e[3]};
}

/// Elementwise (Hadamard) product; models independent per-link gains.
inline Mat2 hadamard(const Mat2& a, const Mat2& b) {
    return {a.e[0] * b.e[0], a.e[1] * b.e[1], a.e[2] * b.e[2], a.e[3] * b.e[3]};
}

inline cplx det2x2(const Mat2& m) { return m.e[0] * m.e[3] - m.e[1] * m.e[2]; }

inline Mat2 conj_transpose(const Mat2& m) {
    return {std::conj(m.e[0]), std::conj(m.e[2]), std::conj(m.e[1]), std::conj(m.e[3])};
}

inline double frobenius_norm_sq(const Vec2& v) { return std::norm(v[0]) + std::norm(v[1]); }
inline double frobenius_norm_sq(const Mat2& m) {
    return std::norm(m.e[0]) + std::norm(m.e[1]) + std::norm(m.e[2]) + std::norm(m.e[3]);
}

inline bool is_finite(const Vec2& v) { return is_finite(v[0]) && is_finite(v[1]); }
inline bool is_finite(const Mat2& m) {
    return is_finite(m.e[0]) && is_finite(m.e[1]) && is_finite(m.e[2]) && is_finite(m.e[3]);
}

/// Heap-backed complex vector with length fixed at construction. Used for
/// the vectorized-channel and dispersion-code paths where lengths other
/// than 2 appear.
class CVec {
  public:
    CVec() = default;
    explicit CVec(std::size_t n) : e_(n) {}
    CVec(std::initializer_list<cplx> init) : e_(init) {}

    std::size_t size() const noexcept { return e_.size(); }
    cplx& operator[](std::size_t i) { return e_[i]; }
    const cplx& operator[](std::size_t i) const { return e_[i]; }

    auto begin() { return e_.begin(); }
    auto end() { return e_.end(); }
    auto begin() const { return e_.begin(); }
    auto end() const { return e_.end(); }

  private:
    std::vector<cplx> e_;
};

/// Heap-backed row-major complex matrix with dimensions fixed at
/// construction. Covers the 2xT dispersion codewords and the 4x4
/// channel-covariance algebra.
class CMat {
  public:
    CMat() = default;
    CMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    cplx& operator()(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> e_;
};

inline void require_same_shape(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix dimension mismatch");
}

inline CMat operator+(const CMat& a, const CMat& b) {
    require_same_shape(a, b);
    CMat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

inline CMat operator-(const CMat& a, const CMat& b) {
    require_same_shape(a, b);
    CMat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
    return r;
}

inline CMat operator*(cplx s, const CMat& m) {
    CMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = s * m(i, j);
    return r;
}

inline CMat matmul(const CMat& a, const CMat& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: inner dimension mismatch");
    CMat r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

inline CMat hadamard(const CMat& a, const CMat& b) {
    require_same_shape(a, b);
    CMat r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) * b(i, j);
    return r;
}

inline cplx det2x2(const CMat& m) {
    if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("det2x2: matrix is not 2x2");
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

inline CMat conj_transpose(const CMat& m) {
    CMat r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

inline double frobenius_norm_sq(const CVec& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
}

inline double frobenius_norm_sq(const CMat& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
    return s;
}

/// Column-stacking vectorization.
inline CVec vec(const CMat& m) {
    CVec v(m.rows() * m.cols());
    std::size_t k = 0;
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) v[k++] = m(i, j);
    return v;
}

inline CVec vec(const Mat2& m) {
    return CVec{m.e[0], m.e[2], m.e[1], m.e[3]};
}

inline CMat kron(const CMat& a, const CMat& b) {
    CMat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return r;
}

/// vv^H outer product.
inline CMat outer(const CVec& v) {
    CMat r(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r(i, j) = v[i] * std::conj(v[j]);
    return r;
}

}  // namespace rmimo
