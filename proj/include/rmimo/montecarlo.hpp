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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "rmimo/baselines.hpp"
#include "rmimo/channel.hpp"
#include "rmimo/constellation.hpp"
#include "rmimo/errors.hpp"
#include "rmimo/reconfig.hpp"
#include "rmimo/rng.hpp"
#include "rmimo/spacecode.hpp"

namespace rmimo {

enum class SchemeKind { proposed, vblast_ml, vblast_sic, dispersion };

/// Everything needed to run one transmission scheme inside a measurement
/// cell. Immutable once built; shared read-only by all workers.
struct SchemeRuntime {
    SchemeKind kind = SchemeKind::proposed;
    SchemeDescriptor desc;
    CodeParams params;                          // proposed
    GainNorm gain_norm = GainNorm::sqrt_normalized;
    Combiner combiner = Combiner::matched_filter;
    SicFilter sic_filter = SicFilter::zf;       // vblast_sic
    std::shared_ptr<const DispersionCode> code; // dispersion
    std::shared_ptr<const LdCodebook> codebook; // dispersion
};

/// Resolves a scheme name. "proposed", "vblast_ml" and "vblast_sic" are
/// built in; any other name is looked up as <codes_dir>/<name>.json and run
/// as a linear-dispersion code with exhaustive ML.
inline SchemeRuntime make_scheme(const std::string& name, const Constellation& c, double beta2,
                                 GainNorm gain_norm, Combiner combiner,
                                 const std::string& codes_dir, SicFilter sic_filter = SicFilter::zf) {
    SchemeRuntime s;
    s.gain_norm = gain_norm;
    s.combiner = combiner;
    s.sic_filter = sic_filter;
    if (name == "proposed") {
        s.kind = SchemeKind::proposed;
        s.desc = {name, 2, 1};
        s.params = make_params(beta2);
    } else if (name == "vblast_ml") {
        s.kind = SchemeKind::vblast_ml;
        s.desc = {name, 2, 1};
    } else if (name == "vblast_sic") {
        s.kind = SchemeKind::vblast_sic;
        s.desc = {name, 2, 1};
    } else {
        s.kind = SchemeKind::dispersion;
        auto code = std::make_shared<DispersionCode>(
            load_dispersion_code(codes_dir + "/" + name + ".json"));
        s.codebook = std::make_shared<LdCodebook>(*code, c);
        s.code = std::move(code);
        s.desc = s.code->descriptor();
        s.desc.name = name;
    }
    return s;
}

/// One measurement cell: a (scheme, SNR, K) point plus the sampling budget.
/// cell_id keys the random substreams; schemes compared at the same cell_id
/// see identical channel/noise/data draws (common random numbers).
struct CellSpec {
    double snr_db = 20.0;  // +inf = noiseless
    KFactor k = KFactor::from_db(2.0);
    std::uint64_t master_seed = 1;
    std::uint64_t cell_id = 0;
    std::int64_t trials = 1000000;
    std::int64_t max_errors = 2000;
    bool early_stop = true;
    int threads = 1;
    int hold_codewords = 1;  // channel redraw period, in codewords
};

/// One BER measurement: a cell of the BER-vs-SNR/K/beta2 figures.
struct BerPoint {
    std::string scheme;
    double snr_db = 0.0;
    KFactor k;
    double beta2 = 0.0;
    std::int64_t trials_run = 0;
    std::int64_t bit_errors = 0;
    double ber = 0.0;
    double ci95 = 0.0;
};

namespace detail {

/// Early-stop decisions happen only at batch boundaries so the trial count
/// is independent of the worker split.
inline constexpr std::int64_t kBatchTrials = 32768;

inline int run_one_trial(const SchemeRuntime& s, const Constellation& c, const CellSpec& cell,
                         const NoiseModel& nm, std::int64_t t) {
    const std::uint64_t trial = static_cast<std::uint64_t>(t);
    RandomStream ch_rng =
        trial_stream(cell.master_seed, StreamKind::channel, cell.cell_id,
                     trial / static_cast<std::uint64_t>(cell.hold_codewords));
    RandomStream nz_rng = trial_stream(cell.master_seed, StreamKind::noise, cell.cell_id, trial);
    RandomStream da_rng = trial_stream(cell.master_seed, StreamKind::data, cell.cell_id, trial);

    const ChannelRealization h = sample_rician(cell.k, ch_rng);
    const int m = c.order();

    switch (s.kind) {
        case SchemeKind::proposed: {
            const int i1 = static_cast<int>(da_rng.below(static_cast<std::uint64_t>(m)));
            const int i2 = static_cast<int>(da_rng.below(static_cast<std::uint64_t>(m)));
            const AntennaGains g = compute_gains(h, s.gain_norm);
            const EffectiveChannel ch = effective_channel(h, g, s.params);
            const Vec2 cw = encode(c.point(i1), c.point(i2), s.params);
            const Vec2 y = matvec(ch.Hg, cw) + sample_noise2(nm, nz_rng);
            const DecodeResult r = conditional_ml_decode(y, ch, s.params, c, s.combiner);
            return label_distance(c, i1, r.s1_index) + label_distance(c, i2, r.s2_index);
        }
        case SchemeKind::vblast_ml:
        case SchemeKind::vblast_sic: {
            const int i1 = static_cast<int>(da_rng.below(static_cast<std::uint64_t>(m)));
            const int i2 = static_cast<int>(da_rng.below(static_cast<std::uint64_t>(m)));
            const Vec2 cw = vblast_encode(c.point(i1), c.point(i2));
            const Vec2 y = matvec(h.H, cw) + sample_noise2(nm, nz_rng);
            const DecodeResult r = s.kind == SchemeKind::vblast_ml
                                       ? vblast_ml_decode(y, h.H, c)
                                       : vblast_sic_decode(y, h.H, c, nm.n0, s.sic_filter);
            return label_distance(c, i1, r.s1_index) + label_distance(c, i2, r.s2_index);
        }
        case SchemeKind::dispersion: {
            const int ns = s.desc.symbols_per_codeword;
            std::vector<int> idx(static_cast<std::size_t>(ns));
            std::vector<cplx> symbols(static_cast<std::size_t>(ns));
            for (int k = 0; k < ns; ++k) {
                idx[static_cast<std::size_t>(k)] =
                    static_cast<int>(da_rng.below(static_cast<std::uint64_t>(m)));
                symbols[static_cast<std::size_t>(k)] = c.point(idx[static_cast<std::size_t>(k)]);
            }
            const CMat cw = ld_encode(symbols, *s.code);
            CMat y(2, cw.cols());
            for (std::size_t t_use = 0; t_use < cw.cols(); ++t_use) {
                const CVec z = sample_noise(2, nm, nz_rng);
                y(0, t_use) = h.H(0, 0) * cw(0, t_use) + h.H(0, 1) * cw(1, t_use) + z[0];
                y(1, t_use) = h.H(1, 0) * cw(0, t_use) + h.H(1, 1) * cw(1, t_use) + z[1];
            }
            const LdDecodeResult r = ld_joint_ml_decode(y, h.H, *s.codebook);
            int errors = 0;
            for (int k = 0; k < ns; ++k)
                errors += label_distance(c, idx[static_cast<std::size_t>(k)],
                                         s.codebook->symbol_index(r.flat_index, k));
            return errors;
        }
    }
    return 0;
}

}  // namespace detail

/// Runs one measurement cell: draw channel, apply the scheme, count bit
/// errors. Deterministic for a given seed regardless of the thread count;
/// early stopping triggers at fixed batch boundaries once the error budget
/// is spent.
inline BerPoint run_cell(const SchemeRuntime& s, const Constellation& c, const CellSpec& cell) {
    if (cell.trials < 1) throw config_error("cell trial count must be at least 1");
    if (cell.early_stop && cell.max_errors < 100)
        throw config_error("early-stop threshold below 100 bit errors gives meaningless intervals");
    if (cell.hold_codewords < 1) throw config_error("channel hold must be at least 1 codeword");

    const NoiseModel nm = make_noise_model(cell.snr_db);
    const int threads = std::max(1, cell.threads);

    std::int64_t bit_errors = 0;
    std::int64_t trials_run = 0;

    auto run_range = [&](std::int64_t lo, std::int64_t hi) {
        std::int64_t errors = 0;
        for (std::int64_t t = lo; t < hi; ++t) errors += detail::run_one_trial(s, c, cell, nm, t);
        return errors;
    };

    for (std::int64_t start = 0; start < cell.trials; start += detail::kBatchTrials) {
        const std::int64_t n = std::min(detail::kBatchTrials, cell.trials - start);
        if (threads == 1 || n < 2 * threads) {
            bit_errors += run_range(start, start + n);
        } else {
            std::vector<std::int64_t> partial(static_cast<std::size_t>(threads), 0);
            std::vector<std::exception_ptr> errs(static_cast<std::size_t>(threads));
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(threads));
            const std::int64_t chunk = (n + threads - 1) / threads;
            for (int w = 0; w < threads; ++w) {
                const std::int64_t lo = start + w * chunk;
                const std::int64_t hi = std::min(start + n, lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back([&, w, lo, hi]() {
                    try {
                        partial[static_cast<std::size_t>(w)] = run_range(lo, hi);
                    } catch (...) {
                        errs[static_cast<std::size_t>(w)] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& e : errs)
                if (e) std::rethrow_exception(e);
            for (std::int64_t p : partial) bit_errors += p;
        }
        trials_run += n;
        if (cell.early_stop && bit_errors >= cell.max_errors && bit_errors >= 100) break;
    }

    BerPoint point;
    point.scheme = s.desc.name;
    point.snr_db = cell.snr_db;
    point.k = cell.k;
    point.beta2 = s.kind == SchemeKind::proposed ? s.params.beta2.real() : 0.0;
    point.trials_run = trials_run;
    point.bit_errors = bit_errors;
    const double bits =
        static_cast<double>(trials_run) * s.desc.symbols_per_codeword * c.bits_per_symbol();
    point.ber = bits > 0 ? static_cast<double>(bit_errors) / bits : 0.0;
    point.ci95 = bits > 0 ? 1.96 * std::sqrt(std::max(0.0, point.ber * (1.0 - point.ber)) / bits) : 0.0;
    return point;
}

}  // namespace rmimo
