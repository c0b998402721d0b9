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
#include <limits>
#include <string>
#include <utility>

#include "rmimo/constellation.hpp"
#include "rmimo/errors.hpp"
#include "rmimo/linalg.hpp"
#include "rmimo/reconfig.hpp"
#include "rmimo/spacecode_params.hpp"

namespace rmimo {

/// A transmission scheme's frame geometry: N_s symbols per codeword sent
/// over T channel uses.
struct SchemeDescriptor {
    std::string name;
    int symbols_per_codeword = 0;  // N_s
    int channel_uses = 0;          // T
};

struct SchemeRates {
    double symbol_rate;  // r_s = N_s / T
    double bit_rate;     // r_b = r_s * log2(M)
};

inline SchemeRates scheme_rates(const SchemeDescriptor& s, int order) {
    const double rs = static_cast<double>(s.symbols_per_codeword) / s.channel_uses;
    return {rs, rs * std::log2(static_cast<double>(order))};
}

/// Decoder output: the decided symbol indices, the winning Euclidean
/// metric, and instrumentation counters for the complexity accounting.
/// metric_evaluations counts full codeword-distance evaluations;
/// comparisons counts metric/point-distance comparisons.
struct DecodeResult {
    int s1_index = 0;
    int s2_index = 0;
    double metric = 0.0;
    std::int64_t metric_evaluations = 0;
    std::int64_t comparisons = 0;
    bool degenerate = false;
};

/// Codeword construction: c = [alpha1 s1 + beta1 s2, alpha2 s1 + beta2 s2] /
/// sqrt(nu). Unit average power per antenna for unit-energy symbols.
inline Vec2 encode(cplx s1, cplx s2, const CodeParams& p) {
    const double inv_sqrt_nu = 1.0 / std::sqrt(p.nu);
    return {inv_sqrt_nu * (p.alpha1 * s1 + p.beta1 * s2),
            inv_sqrt_nu * (p.alpha2 * s1 + p.beta2 * s2)};
}

/// Exhaustive joint ML over all M^2 symbol pairs. Iterates s2-major,
/// s1-minor with strict improvement, so ties resolve to the lowest pair of
/// indices.
inline DecodeResult joint_ml_decode(const Vec2& y, const EffectiveChannel& ch, const CodeParams& p,
                                    const Constellation& c) {
    const double inv_sqrt_nu = 1.0 / std::sqrt(p.nu);
    const cplx a1 = inv_sqrt_nu * ch.Heff(0, 0), a2 = inv_sqrt_nu * ch.Heff(1, 0);
    const cplx b1 = inv_sqrt_nu * ch.Heff(0, 1), b2 = inv_sqrt_nu * ch.Heff(1, 1);

    DecodeResult r;
    double best = std::numeric_limits<double>::infinity();
    const auto& pts = c.points();
    const int m = c.order();
    for (int j = 0; j < m; ++j) {
        const cplx y1j = y[0] - b1 * pts[static_cast<std::size_t>(j)];
        const cplx y2j = y[1] - b2 * pts[static_cast<std::size_t>(j)];
        for (int i = 0; i < m; ++i) {
            const double metric = std::norm(y1j - a1 * pts[static_cast<std::size_t>(i)]) +
                                  std::norm(y2j - a2 * pts[static_cast<std::size_t>(i)]);
            ++r.metric_evaluations;
            if (r.metric_evaluations > 1) ++r.comparisons;
            if (metric < best) {
                best = metric;
                r.s1_index = i;
                r.s2_index = j;
            }
        }
    }
    r.metric = best;
    return r;
}

/// How the per-branch interference-cancelled signals are collapsed into the
/// scalar detector input for s1. `paper_sum` adds the branches unweighted;
/// `matched_filter` weights each branch by its conjugated combined gain,
/// which makes the scalar decision the exact conditional ML estimate.
enum class Combiner { paper_sum, matched_filter };

inline Combiner parse_combiner(const std::string& s) {
    if (s == "sum") return Combiner::paper_sum;
    if (s == "mf") return Combiner::matched_filter;
    throw config_error("unknown combiner '" + s + "' (expected 'mf' or 'sum')");
}

inline constexpr double kCombinerEps = 1e-12;

/// O(M) conditional ML: for each candidate s2, cancel its contribution,
/// estimate s1 with a scalar threshold detector on the combined signal, then
/// score the pair with the exact codeword metric. With the matched-filter
/// combiner the decision coincides with exhaustive joint ML; the plain-sum
/// combiner follows the additive combining rule and can pick a suboptimal
/// conditional s1, which the exact re-scoring only partially repairs.
inline DecodeResult conditional_ml_decode(const Vec2& y, const EffectiveChannel& ch,
                                          const CodeParams& p, const Constellation& c,
                                          Combiner combiner = Combiner::matched_filter) {
    const double inv_sqrt_nu = 1.0 / std::sqrt(p.nu);
    const cplx a1 = inv_sqrt_nu * ch.Heff(0, 0), a2 = inv_sqrt_nu * ch.Heff(1, 0);
    const cplx b1 = inv_sqrt_nu * ch.Heff(0, 1), b2 = inv_sqrt_nu * ch.Heff(1, 1);

    // Scalar channel seen by the detector input.
    cplx mf_h = 0.0;
    if (combiner == Combiner::matched_filter) {
        mf_h = std::norm(a1) + std::norm(a2);
    } else {
        mf_h = a1 + a2;
        if (std::abs(mf_h) < kCombinerEps)
            throw infeasible_error("combined branch gain vanished in plain-sum combining");
    }

    DecodeResult r;
    double best = std::numeric_limits<double>::infinity();
    const auto& pts = c.points();
    const int m = c.order();
    for (int j = 0; j < m; ++j) {
        const cplx s2 = pts[static_cast<std::size_t>(j)];
        const cplx r1 = y[0] - b1 * s2;
        const cplx r2 = y[1] - b2 * s2;
        const cplx combined =
            combiner == Combiner::matched_filter ? std::conj(a1) * r1 + std::conj(a2) * r2 : r1 + r2;
        const NearestPoint s1 = nearest_point(combined / mf_h, c);
        r.comparisons += m - 1;

        const double metric =
            std::norm(r1 - a1 * s1.point) + std::norm(r2 - a2 * s1.point);
        ++r.metric_evaluations;
        if (j > 0) ++r.comparisons;
        if (metric < best) {
            best = metric;
            r.s1_index = s1.index;
            r.s2_index = j;
        }
    }
    r.metric = best;
    return r;
}

}  // namespace rmimo
