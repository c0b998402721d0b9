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
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rmimo/channel.hpp"
#include "rmimo/errors.hpp"
#include "rmimo/linalg.hpp"
#include "rmimo/montecarlo.hpp"
#include "rmimo/reconfig.hpp"
#include "rmimo/rng.hpp"

namespace rmimo {

/// Sample estimate of R = E{vec(H o G) vec(H o G)^H} over Rician draws with
/// channel-adaptive gains. Hermitian-symmetrized. The pure-LoS limit is
/// deterministic, so the estimate is exact there.
inline CMat estimate_Rhg(KFactor k, GainNorm norm, std::size_t n_samples, RandomStream& rng) {
    if (n_samples < 1000) throw config_error("R_hg estimation needs at least 1000 samples");
    CMat r(4, 4);
    for (std::size_t n = 0; n < n_samples; ++n) {
        const ChannelRealization h = sample_rician(k, rng);
        const AntennaGains g = compute_gains(h, norm);
        const CVec hg = vec(hadamard(h.H, g.G));
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) r(i, j) += hg[i] * std::conj(hg[j]);
    }
    const double inv = 1.0 / static_cast<double>(n_samples);
    CMat sym(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            sym(i, j) = 0.5 * inv * (r(i, j) + std::conj(r(j, i)));
    return sym;
}

/// Inputs of the pairwise-error-probability bound: two codewords, the
/// vectorized-channel covariance and the linear receive SNR.
struct PepInputs {
    Vec2 codeword_c;
    Vec2 codeword_u;
    CMat r_hg;  // 4x4 Hermitian PSD
    double snr_linear = 0.0;
};

inline constexpr double kPsdTol = 1e-10;

/// Hermitian-within-tolerance plus LDL^H pivots nonnegative within
/// tolerance.
inline void validate_pep_inputs(const PepInputs& p) {
    if (p.r_hg.rows() != 4 || p.r_hg.cols() != 4)
        throw std::invalid_argument("R_hg must be 4x4");
    if (p.snr_linear < 0.0) throw config_error("negative SNR in PEP bound");

    double scale = 0.0;
    for (std::size_t i = 0; i < 4; ++i) scale = std::max(scale, std::abs(p.r_hg(i, i)));
    scale = std::max(scale, 1.0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (std::abs(p.r_hg(i, j) - std::conj(p.r_hg(j, i))) > kPsdTol * scale)
                throw config_error("R_hg is not Hermitian within tolerance");

    // LDL^H with tolerance: nonnegative pivots certify PSD.
    CMat a = p.r_hg;
    for (std::size_t k = 0; k < 4; ++k) {
        const double pivot = a(k, k).real();
        if (pivot < -kPsdTol * scale) throw config_error("R_hg is not positive semidefinite");
        if (pivot <= kPsdTol * scale) continue;  // treat as zero pivot
        for (std::size_t i = k + 1; i < 4; ++i) {
            const cplx l = a(i, k) / pivot;
            for (std::size_t j = k + 1; j < 4; ++j) a(i, j) -= l * std::conj(a(j, k));
        }
    }
}

/// Rank/eigenvalue report for the bound matrix R_hg (C-U)^H (C-U) together
/// with the exact determinant bound and its high-SNR simplification.
struct DiversityReport {
    int rank = 0;
    std::array<double, 4> eigenvalues{};  // descending; trailing entries 0
    double bound = 1.0;
    double high_snr_bound = 1.0;
};

inline constexpr double kRankEpsRel = 1e-8;

/// Chernoff bound on the pairwise error probability,
/// 1 / det(I4 + (snr/4) R_hg D) with D the codeword-difference Gram matrix.
/// D has rank at most 2 (the difference operator has 2 rows), so the
/// nonzero eigenvalues of R_hg D equal those of the 2x2 Hermitian matrix
/// E R_hg E^H where E maps the vectorized channel to the receive vector.
inline DiversityReport pep_chernoff(const PepInputs& p) {
    validate_pep_inputs(p);

    const cplx d1 = p.codeword_c[0] - p.codeword_u[0];
    const cplx d2 = p.codeword_c[1] - p.codeword_u[1];

    // E = d^T kron I2, 2x4: [d1 0 d2 0; 0 d1 0 d2].
    CMat e(2, 4);
    e(0, 0) = d1;
    e(1, 1) = d1;
    e(0, 2) = d2;
    e(1, 3) = d2;

    const CMat s = matmul(matmul(e, p.r_hg), conj_transpose(e));  // 2x2 Hermitian PSD
    const double a = s(0, 0).real();
    const double d = s(1, 1).real();
    const double tr = a + d;
    const double disc = std::sqrt(std::max(0.0, (a - d) * (a - d) + 4.0 * std::norm(s(0, 1))));
    const double l1 = 0.5 * (tr + disc);
    const double l2 = 0.5 * (tr - disc);

    DiversityReport rep;
    rep.eigenvalues = {l1, l2, 0.0, 0.0};
    const double lmax = std::max(l1, 0.0);
    for (double l : rep.eigenvalues)
        if (l > kRankEpsRel * lmax && l > 0.0) ++rep.rank;

    const double g4 = p.snr_linear / 4.0;
    rep.bound = 1.0 / ((1.0 + g4 * std::max(l1, 0.0)) * (1.0 + g4 * std::max(l2, 0.0)));
    double prod = 1.0;
    for (int i = 0; i < rep.rank; ++i) prod *= rep.eigenvalues[static_cast<std::size_t>(i)];
    rep.high_snr_bound =
        rep.rank == 0 ? 1.0 : 1.0 / (std::pow(g4, static_cast<double>(rep.rank)) * prod);
    return rep;
}

/// Arithmetic-operation budget of a decoder, per Euclidean-metric block.
struct ComplexityRow {
    std::string decoder;
    std::int64_t multiplications = 0;
    std::int64_t subtractions = 0;
    std::int64_t additions = 0;
    std::int64_t squares = 0;
    std::int64_t comparisons = 0;
    std::int64_t metric_evaluations = 0;
};

/// Operation counts of exhaustive vs conditional ML for a 2x2 system: the
/// same 8/4/5/2 per-candidate block scaled by M^2 or M, plus M^2-1
/// comparisons either way.
inline std::vector<ComplexityRow> complexity_table(int order) {
    if (order < 2) throw config_error("constellation order must be at least 2");
    const std::int64_t m = order;
    std::vector<ComplexityRow> rows(2);
    rows[0].decoder = "traditional_ml";
    rows[1].decoder = "conditional_ml";
    const std::int64_t scale[2] = {m * m, m};
    for (int i = 0; i < 2; ++i) {
        rows[static_cast<std::size_t>(i)].multiplications = 8 * scale[i];
        rows[static_cast<std::size_t>(i)].subtractions = 4 * scale[i];
        rows[static_cast<std::size_t>(i)].additions = 5 * scale[i];
        rows[static_cast<std::size_t>(i)].squares = 2 * scale[i];
        rows[static_cast<std::size_t>(i)].comparisons = m * m - 1;
        rows[static_cast<std::size_t>(i)].metric_evaluations = scale[i];
    }
    return rows;
}

/// BER of the proposed code at each beta2 grid point, with identical random
/// substreams at every point (common random numbers), so the curve is smooth
/// and its minimum is a meaningful comparison. Grid points run to the full
/// trial budget; no early stop.
inline std::vector<BerPoint> sweep_beta2(const std::vector<double>& grid, double snr_db, KFactor k,
                                         std::int64_t trials, std::uint64_t master_seed,
                                         const Constellation& c,
                                         GainNorm norm = GainNorm::sqrt_normalized,
                                         Combiner combiner = Combiner::matched_filter,
                                         int threads = 1) {
    if (grid.empty()) throw config_error("beta2 grid is empty");
    for (double b : grid)
        if (!(b > 0.0)) throw config_error("beta2 grid values must be positive");

    std::vector<BerPoint> points;
    points.reserve(grid.size());
    for (double beta2 : grid) {
        SchemeRuntime s;
        s.kind = SchemeKind::proposed;
        s.desc = {"proposed", 2, 1};
        s.params = make_params(beta2);
        s.gain_norm = norm;
        s.combiner = combiner;

        CellSpec cell;
        cell.snr_db = snr_db;
        cell.k = k;
        cell.master_seed = master_seed;
        cell.cell_id = 0;  // same substreams at every grid point
        cell.trials = trials;
        cell.early_stop = false;
        cell.threads = threads;
        points.push_back(run_cell(s, c, cell));
    }
    return points;
}

}  // namespace rmimo
