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
#include <complex>
#include <string>

#include "rmimo/channel.hpp"
#include "rmimo/errors.hpp"
#include "rmimo/linalg.hpp"
#include "rmimo/spacecode_params.hpp"

namespace rmimo {

/// Gain-selection normalization. `paper_literal` divides each row's
/// conjugated channel coefficients by the row's sum of squared magnitudes;
/// `sqrt_normalized` divides by the square root of that sum, which makes the
/// combined per-row gain come out as a root of the row energy. The two modes
/// differ only in the real positive denominator, so rank and phase behavior
/// are identical.
enum class GainNorm { paper_literal, sqrt_normalized };

inline GainNorm parse_gain_norm(const std::string& s) {
    if (s == "paper") return GainNorm::paper_literal;
    if (s == "sqrt") return GainNorm::sqrt_normalized;
    throw config_error("unknown gain normalization '" + s + "' (expected 'paper' or 'sqrt')");
}

/// Complex per-link transmit-antenna gains g_ij, computed from CSI.
struct AntennaGains {
    Mat2 G;
};

/// The composite channel Hg = H o G and the symbol-domain channel Heff whose
/// columns multiply s1 and s2 directly. Heff is stored without the 1/sqrt(nu)
/// code normalization; encoders and decoders apply that factor themselves.
struct EffectiveChannel {
    Mat2 Hg;
    Mat2 Heff;
};

inline constexpr double kDegenerateRowEps = 1e-12;

/// Channel-adaptive gain selection: row 1 phase-aligns both links toward
/// receive antenna 1, row 2 applies the alternating sign pattern (-1)^j that
/// restores rank on line-of-sight channels.
inline AntennaGains compute_gains(const ChannelRealization& h, GainNorm norm) {
    const Mat2& H = h.H;
    const double row1 = std::norm(H(0, 0)) + std::norm(H(0, 1));
    const double row2 = std::norm(H(1, 0)) + std::norm(H(1, 1));
    if (row1 <= kDegenerateRowEps || row2 <= kDegenerateRowEps)
        throw infeasible_error("channel row with vanishing energy; antenna gains undefined");

    const double d1 = norm == GainNorm::paper_literal ? row1 : std::sqrt(row1);
    const double d2 = norm == GainNorm::paper_literal ? row2 : std::sqrt(row2);

    Mat2 g;
    g(0, 0) = std::conj(H(0, 0)) / d1;
    g(0, 1) = std::conj(H(0, 1)) / d1;
    g(1, 0) = -std::conj(H(1, 0)) / d2;  // (-1)^j, j = 1
    g(1, 1) = std::conj(H(1, 1)) / d2;   // (-1)^j, j = 2
    return {g};
}

/// Symbol-domain channel: column 1 collects the alpha-weighted link gains,
/// column 2 the beta-weighted ones, so y = Heff * s / sqrt(nu) + z.
inline EffectiveChannel effective_channel(const ChannelRealization& h, const AntennaGains& g,
                                          const CodeParams& p) {
    const Mat2 hg = hadamard(h.H, g.G);
    Mat2 heff;
    for (std::size_t i = 0; i < 2; ++i) {
        heff(i, 0) = p.alpha1 * hg(i, 0) + p.alpha2 * hg(i, 1);
        heff(i, 1) = p.beta1 * hg(i, 0) + p.beta2 * hg(i, 1);
    }
    return {hg, heff};
}

/// The channel-dependent factor of det(Heff): h11 g11 h22 g22 - h12 g12 h21 g21.
inline cplx channel_det_factor(const Mat2& hg) { return hg(0, 0) * hg(1, 1) - hg(0, 1) * hg(1, 0); }

/// det(Heff) through its factorization (code factor times channel factor).
/// Agrees with det2x2(effective_channel(...).Heff) up to rounding; a nonzero
/// value certifies that the reconfigured channel is full rank.
inline cplx feasibility_det(const ChannelRealization& h, const AntennaGains& g, const CodeParams& p) {
    const Mat2 hg = hadamard(h.H, g.G);
    const cplx code_factor = p.alpha1 * p.beta2 - p.alpha2 * p.beta1;
    return code_factor * channel_det_factor(hg);
}

}  // namespace rmimo
