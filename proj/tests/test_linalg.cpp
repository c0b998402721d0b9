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

#include <catch2/catch_amalgamated.hpp>

#include "rmimo/linalg.hpp"
#include "rmimo/rng.hpp"

using namespace rmimo;

namespace {

Mat2 random_mat2(RandomStream& rng) {
    Mat2 m;
    for (auto& e : m.e) e = rng.cgaussian(1.0);
    return m;
}

// Independent cofactor-expansion oracle.
cplx det_cofactor(const Mat2& m) {
    return m(0, 0) * m(1, 1) + cplx(-1.0, 0.0) * m(0, 1) * m(1, 0);
}

}  // namespace

TEST_CASE("hadamard absorbs all-ones and masks with identity", "[linalg]") {
    const Mat2 ones = Mat2::ones();
    const Mat2 b{{0.5, 0.0}, {0.5, 0.0}, {-0.5, 0.0}, {0.5, 0.0}};
    const Mat2 prod = hadamard(ones, b);
    for (std::size_t i = 0; i < 4; ++i) REQUIRE(prod.e[i] == b.e[i]);

    RandomStream rng(11);
    const Mat2 a = random_mat2(rng);
    const Mat2 masked = hadamard(a, Mat2::identity());
    REQUIRE(masked(0, 0) == a(0, 0));
    REQUIRE(masked(1, 1) == a(1, 1));
    REQUIRE(masked(0, 1) == cplx(0.0, 0.0));
    REQUIRE(masked(1, 0) == cplx(0.0, 0.0));
}

TEST_CASE("hadamard equals the scalar loop entrywise", "[linalg]") {
    RandomStream rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat2 a = random_mat2(rng);
        const Mat2 b = random_mat2(rng);
        const Mat2 p = hadamard(a, b);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) REQUIRE(p(i, j) == a(i, j) * b(i, j));
    }
}

TEST_CASE("hadamard commutes and associates exactly", "[linalg]") {
    RandomStream rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat2 a = random_mat2(rng);
        const Mat2 b = random_mat2(rng);
        const Mat2 c = random_mat2(rng);
        const Mat2 ab = hadamard(a, b);
        const Mat2 ba = hadamard(b, a);
        for (std::size_t i = 0; i < 4; ++i) REQUIRE(ab.e[i] == ba.e[i]);
        const Mat2 left = hadamard(hadamard(a, b), c);
        const Mat2 right = hadamard(a, hadamard(b, c));
        for (std::size_t i = 0; i < 4; ++i) {
            REQUIRE(left.e[i].real() == Catch::Approx(right.e[i].real()).margin(1e-15));
            REQUIRE(left.e[i].imag() == Catch::Approx(right.e[i].imag()).margin(1e-15));
        }
    }
}

TEST_CASE("det2x2 matches hand values and the cofactor oracle", "[linalg]") {
    REQUIRE(det2x2(Mat2::identity()) == cplx(1.0, 0.0));
    REQUIRE(det2x2(Mat2::ones()) == cplx(0.0, 0.0));

    // [[1, j], [-j, 1]] is rank deficient: 1*1 - j*(-j) = 0.
    const Mat2 m{{1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}, {1.0, 0.0}};
    REQUIRE(det2x2(m) == det_cofactor(m));
    REQUIRE(std::abs(det2x2(m)) == 0.0);

    RandomStream rng(14);
    for (int trial = 0; trial < 200; ++trial) {
        const Mat2 a = random_mat2(rng);
        REQUIRE(std::abs(det2x2(a) - det_cofactor(a)) < 1e-14);
    }
}

TEST_CASE("det2x2 is multiplicative", "[linalg]") {
    RandomStream rng(15);
    for (int trial = 0; trial < 500; ++trial) {
        const Mat2 a = random_mat2(rng);
        const Mat2 b = random_mat2(rng);
        const cplx lhs = det2x2(matmul(a, b));
        const cplx rhs = det2x2(a) * det2x2(b);
        REQUIRE(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("frobenius norm basics", "[linalg]") {
    REQUIRE(frobenius_norm_sq(Mat2::identity()) == 2.0);
    REQUIRE(frobenius_norm_sq(Mat2::zero()) == 0.0);

    RandomStream rng(16);
    for (int trial = 0; trial < 100; ++trial) {
        const Mat2 a = random_mat2(rng);
        double ref = 0.0;
        for (const auto& e : a.e) ref += e.real() * e.real() + e.imag() * e.imag();
        REQUIRE(frobenius_norm_sq(a) == Catch::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("frobenius norm vanishes only on the zero matrix", "[linalg]") {
    RandomStream rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        Mat2 a = Mat2::zero();
        const std::size_t hot = static_cast<std::size_t>(rng.below(4));
        a.e[hot] = cplx(1e-30, 0.0);
        REQUIRE(frobenius_norm_sq(a) > 0.0);
    }
    REQUIRE(frobenius_norm_sq(Mat2::zero()) == 0.0);
    REQUIRE(frobenius_norm_sq(CMat(3, 5)) == 0.0);
}

TEST_CASE("dynamic matrices enforce shapes", "[linalg]") {
    CMat a(2, 3), b(3, 2);
    REQUIRE_THROWS_AS(hadamard(a, b), std::invalid_argument);
    REQUIRE_THROWS_AS(det2x2(CMat(3, 3)), std::invalid_argument);
    REQUIRE_THROWS_AS(matmul(a, CMat(2, 2)), std::invalid_argument);
    REQUIRE_NOTHROW(matmul(a, b));
}

TEST_CASE("vec stacks columns and kron matches the blockwise definition", "[linalg]") {
    Mat2 m{{1.0, 0.0}, {2.0, 0.0}, {3.0, 0.0}, {4.0, 0.0}};
    const CVec v = vec(m);
    REQUIRE(v[0] == cplx(1.0, 0.0));
    REQUIRE(v[1] == cplx(3.0, 0.0));
    REQUIRE(v[2] == cplx(2.0, 0.0));
    REQUIRE(v[3] == cplx(4.0, 0.0));

    CMat row(1, 2);
    row(0, 0) = cplx(5.0, 0.0);
    row(0, 1) = cplx(7.0, 0.0);
    const CMat k = kron(row, CMat::identity(2));
    REQUIRE(k.rows() == 2);
    REQUIRE(k.cols() == 4);
    REQUIRE(k(0, 0) == cplx(5.0, 0.0));
    REQUIRE(k(1, 1) == cplx(5.0, 0.0));
    REQUIRE(k(0, 2) == cplx(7.0, 0.0));
    REQUIRE(k(1, 3) == cplx(7.0, 0.0));
    REQUIRE(k(0, 1) == cplx(0.0, 0.0));
}
