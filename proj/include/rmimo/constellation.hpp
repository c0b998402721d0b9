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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "rmimo/errors.hpp"
#include "rmimo/linalg.hpp"

namespace rmimo {

/// Square M-QAM alphabet with unit average symbol energy and per-axis Gray
/// labeling. Immutable after construction; shareable across workers.
class Constellation {
  public:
    int order() const noexcept { return order_; }
    int bits_per_symbol() const noexcept { return bps_; }
    const std::vector<cplx>& points() const noexcept { return points_; }

    cplx point(int index) const { return points_[static_cast<std::size_t>(index)]; }

    /// Gray label of a point, packed LSB-first into an unsigned word
    /// (bit b of the word = bit b of the label string).
    std::uint32_t label(int index) const { return labels_[static_cast<std::size_t>(index)]; }

    /// Point index carrying the given label.
    int index_of_label(std::uint32_t lab) const { return label_to_index_[lab]; }

    friend Constellation build_qam(int order);

  private:
    int order_ = 0;
    int bps_ = 0;
    std::vector<cplx> points_;
    std::vector<std::uint32_t> labels_;
    std::vector<int> label_to_index_;
};

/// Builds unit-energy square QAM with independent Gray codes on the
/// in-phase and quadrature axes. Supported orders: 4, 16, 64.
inline Constellation build_qam(int order) {
    if (order != 4 && order != 16 && order != 64)
        throw config_error("unsupported constellation order " + std::to_string(order) +
                           " (expected 4, 16 or 64)");

    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    const int bits_per_axis = static_cast<int>(std::lround(std::log2(side)));

    // Average energy of square QAM with +/-1, +/-3, ... levels is
    // 2*(side^2-1)/3; scale so the alphabet has unit mean energy.
    const double scale = 1.0 / std::sqrt(2.0 * (side * side - 1) / 3.0);

    Constellation c;
    c.order_ = order;
    c.bps_ = 2 * bits_per_axis;
    c.points_.reserve(static_cast<std::size_t>(order));
    c.labels_.reserve(static_cast<std::size_t>(order));
    c.label_to_index_.assign(static_cast<std::size_t>(order), -1);

    for (int i = 0; i < side; ++i) {
        const std::uint32_t gray_i = static_cast<std::uint32_t>(i ^ (i >> 1));
        const double re = scale * (2 * i - side + 1);
        for (int q = 0; q < side; ++q) {
            const std::uint32_t gray_q = static_cast<std::uint32_t>(q ^ (q >> 1));
            const double im = scale * (2 * q - side + 1);
            const std::uint32_t lab = (gray_i << bits_per_axis) | gray_q;
            c.points_.emplace_back(re, im);
            c.labels_.push_back(lab);
            c.label_to_index_[lab] = static_cast<int>(c.points_.size()) - 1;
        }
    }
    return c;
}

/// Maps a bit sequence (log2(M) bits per symbol, in label order) onto
/// constellation point indices. The bit count must be a whole number of
/// symbols.
inline std::vector<int> map_bits(const std::vector<int>& bits, const Constellation& c) {
    const int bps = c.bits_per_symbol();
    if (bits.size() % static_cast<std::size_t>(bps) != 0)
        throw config_error("bit string length " + std::to_string(bits.size()) +
                           " is not a multiple of bits per symbol " + std::to_string(bps));
    std::vector<int> idx(bits.size() / static_cast<std::size_t>(bps));
    for (std::size_t s = 0; s < idx.size(); ++s) {
        std::uint32_t lab = 0;
        for (int b = 0; b < bps; ++b)
            lab |= static_cast<std::uint32_t>(bits[s * static_cast<std::size_t>(bps) +
                                                   static_cast<std::size_t>(b)] & 1)
                   << b;
        idx[s] = c.index_of_label(lab);
    }
    return idx;
}

inline std::vector<cplx> modulate(const std::vector<int>& bits, const Constellation& c) {
    std::vector<cplx> out;
    const auto idx = map_bits(bits, c);
    out.reserve(idx.size());
    for (int i : idx) out.push_back(c.point(i));
    return out;
}

/// Inverse of map_bits: point indices back to the label bits, LSB-first.
inline std::vector<int> demodulate_indices(const std::vector<int>& indices, const Constellation& c) {
    std::vector<int> bits;
    bits.reserve(indices.size() * static_cast<std::size_t>(c.bits_per_symbol()));
    for (int i : indices) {
        const std::uint32_t lab = c.label(i);
        for (int b = 0; b < c.bits_per_symbol(); ++b) bits.push_back(static_cast<int>((lab >> b) & 1));
    }
    return bits;
}

struct NearestPoint {
    int index;
    cplx point;
};

/// Minimum-Euclidean-distance detection by linear scan over all M points;
/// ties break toward the lowest index.
inline NearestPoint nearest_point(cplx z, const Constellation& c) {
    const auto& pts = c.points();
    int best = 0;
    double best_d = std::norm(z - pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double d = std::norm(z - pts[i]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return {best, pts[static_cast<std::size_t>(best)]};
}

/// Hamming distance between the labels of two points.
inline int label_distance(const Constellation& c, int i, int j) {
    std::uint32_t x = c.label(i) ^ c.label(j);
    int d = 0;
    while (x) {
        d += static_cast<int>(x & 1);
        x >>= 1;
    }
    return d;
}

}  // namespace rmimo
