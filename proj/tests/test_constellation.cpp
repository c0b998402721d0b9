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

#include <algorithm>
#include <cmath>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "rmimo/constellation.hpp"
#include "rmimo/rng.hpp"

using namespace rmimo;

TEST_CASE("4-QAM points sit on the unit circle corners", "[constellation]") {
    const Constellation c = build_qam(4);
    REQUIRE(c.order() == 4);
    REQUIRE(c.bits_per_symbol() == 2);
    const double v = 1.0 / std::sqrt(2.0);
    std::set<std::pair<double, double>> expected = {{v, v}, {v, -v}, {-v, v}, {-v, -v}};
    for (const auto& p : c.points()) {
        REQUIRE(std::abs(std::norm(p) - 1.0) < 1e-12);
        REQUIRE(expected.count({p.real(), p.imag()}) == 1);
    }
}

TEST_CASE("every supported order has unit average energy and distinct labels", "[constellation]") {
    for (int m : {4, 16, 64}) {
        const Constellation c = build_qam(m);
        double energy = 0.0;
        std::set<std::uint32_t> labels;
        for (int i = 0; i < m; ++i) {
            energy += std::norm(c.point(i));
            labels.insert(c.label(i));
        }
        REQUIRE(std::abs(energy / m - 1.0) < 1e-12);
        REQUIRE(labels.size() == static_cast<std::size_t>(m));
    }
}

TEST_CASE("unsupported orders are rejected", "[constellation]") {
    REQUIRE_THROWS_AS(build_qam(8), config_error);
    REQUIRE_THROWS_AS(build_qam(2), config_error);
    REQUIRE_THROWS_AS(build_qam(0), config_error);
}

TEST_CASE("axis neighbors differ in exactly one label bit", "[constellation]") {
    for (int m : {4, 16, 64}) {
        const Constellation c = build_qam(m);
        // Smallest nonzero coordinate step identifies in-phase/quadrature
        // neighbors.
        double step = 1e9;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double dr = std::abs(c.point(i).real() - c.point(j).real());
                if (dr > 1e-12) step = std::min(step, dr);
            }
        int pairs = 0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (i == j) continue;
                const cplx d = c.point(i) - c.point(j);
                const bool i_neighbor =
                    std::abs(std::abs(d.real()) - step) < 1e-9 && std::abs(d.imag()) < 1e-12;
                const bool q_neighbor =
                    std::abs(std::abs(d.imag()) - step) < 1e-9 && std::abs(d.real()) < 1e-12;
                if (i_neighbor || q_neighbor) {
                    REQUIRE(label_distance(c, i, j) == 1);
                    ++pairs;
                }
            }
        REQUIRE(pairs > 0);
    }
}

TEST_CASE("modulate is a label-table lookup", "[constellation]") {
    const Constellation c = build_qam(4);
    const auto pts = modulate({0, 0}, c);
    REQUIRE(pts.size() == 1);
    REQUIRE(pts[0] == c.point(c.index_of_label(0)));

    REQUIRE(modulate({}, c).empty());
    REQUIRE_THROWS_AS(modulate({1, 0, 1}, c), config_error);
}

TEST_CASE("modulate/demodulate roundtrip is exact", "[constellation]") {
    RandomStream rng(21);
    for (int m : {4, 16, 64}) {
        const Constellation c = build_qam(m);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> bits(static_cast<std::size_t>(c.bits_per_symbol()) * 5);
            for (auto& b : bits) b = rng.bit();
            const auto idx = map_bits(bits, c);
            REQUIRE(idx.size() == 5);
            REQUIRE(demodulate_indices(idx, c) == bits);
        }
    }
}

TEST_CASE("nearest point returns exact hits and quadrant decisions", "[constellation]") {
    const Constellation c = build_qam(4);
    for (int i = 0; i < 4; ++i) {
        const auto np = nearest_point(c.point(i), c);
        REQUIRE(np.index == i);
        REQUIRE(std::norm(np.point - c.point(i)) == 0.0);
    }
    const auto np = nearest_point(cplx(0.9, 0.8), c);
    REQUIRE(np.point.real() > 0.0);
    REQUIRE(np.point.imag() > 0.0);
}

TEST_CASE("nearest point agrees with an exhaustive scan and is idempotent", "[constellation]") {
    RandomStream rng(22);
    for (int m : {4, 16}) {
        const Constellation c = build_qam(m);
        for (int trial = 0; trial < 2000; ++trial) {
            const cplx z = cplx(4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0);
            const auto np = nearest_point(z, c);

            int best = 0;
            double best_d = std::norm(z - c.point(0));
            for (int i = 1; i < m; ++i) {
                const double d = std::norm(z - c.point(i));
                if (d < best_d) {
                    best_d = d;
                    best = i;
                }
            }
            REQUIRE(np.index == best);
            REQUIRE(nearest_point(np.point, c).index == np.index);
        }
    }
}
