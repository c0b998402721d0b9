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
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmimo/constellation.hpp"
#include "rmimo/errors.hpp"
#include "rmimo/linalg.hpp"
#include "rmimo/spacecode.hpp"

namespace rmimo {

// ---------------------------------------------------------------------------
// VBLAST spatial multiplexing over the raw channel (omni-directional
// antennas, no gain matrix).
// ---------------------------------------------------------------------------

inline constexpr double kSingularEps = 1e-9;

/// One symbol per antenna per channel use, scaled to unit total transmit
/// power.
inline Vec2 vblast_encode(cplx s1, cplx s2) {
    const double s = 1.0 / std::sqrt(2.0);
    return {s * s1, s * s2};
}

/// Exhaustive M^2 ML detection of the two spatial streams.
inline DecodeResult vblast_ml_decode(const Vec2& y, const Mat2& h, const Constellation& c) {
    const double scale = 1.0 / std::sqrt(2.0);
    const cplx a1 = scale * h(0, 0), a2 = scale * h(1, 0);
    const cplx b1 = scale * h(0, 1), b2 = scale * h(1, 1);

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

enum class SicFilter { zf, mmse };

/// Successive interference cancellation: zero-forcing nulling with
/// post-detection-SNR ordering (the stronger column is detected first),
/// cancellation, then matched filtering of the remaining stream. A channel
/// with |det| below threshold cannot be nulled; both streams then fall back
/// to the rank-one pseudo-inverse and the result carries a degeneracy flag.
/// The mmse filter regularizes the nulling step with the noise power.
inline DecodeResult vblast_sic_decode(const Vec2& y, const Mat2& h, const Constellation& c,
                                      double n0 = 0.0, SicFilter filter = SicFilter::zf) {
    const double scale = 1.0 / std::sqrt(2.0);
    DecodeResult r;
    const cplx det = det2x2(h);

    if (std::abs(det) <= kSingularEps) {
        // Rank-one channel: pinv(H) = H^H / ||H||_F^2.
        const double hf = frobenius_norm_sq(h);
        Vec2 x{};
        if (hf > 0.0) {
            const Mat2 hh = conj_transpose(h);
            x = (1.0 / (hf * scale)) * matvec(hh, y);
        }
        const NearestPoint p1 = nearest_point(x[0], c);
        const NearestPoint p2 = nearest_point(x[1], c);
        r.s1_index = p1.index;
        r.s2_index = p2.index;
        r.comparisons = 2 * (c.order() - 1);
        r.metric_evaluations = 2 * c.order();
        r.degenerate = true;
        const Vec2 chat = vblast_encode(p1.point, p2.point);
        r.metric = frobenius_norm_sq(y - matvec(h, chat));
        return r;
    }

    const double col1 = std::norm(h(0, 0)) + std::norm(h(1, 0));
    const double col2 = std::norm(h(0, 1)) + std::norm(h(1, 1));
    const int first = col1 >= col2 ? 0 : 1;
    const int second = 1 - first;

    // Nulling row for the first stream.
    cplx w0, w1;
    if (filter == SicFilter::zf) {
        // Rows of inv(H) = adj(H)/det.
        if (first == 0) {
            w0 = h(1, 1) / det;
            w1 = -h(0, 1) / det;
        } else {
            w0 = -h(1, 0) / det;
            w1 = h(0, 0) / det;
        }
    } else {
        // Row `first` of (H^H H + 2 n0 I)^-1 H^H; the factor 2 accounts for
        // the per-stream transmit power of 1/2.
        const Mat2 hh = conj_transpose(h);
        Mat2 gram = matmul(hh, h);
        gram(0, 0) += 2.0 * n0;
        gram(1, 1) += 2.0 * n0;
        const cplx gdet = det2x2(gram);
        Mat2 ginv{gram(1, 1) / gdet, -gram(0, 1) / gdet, -gram(1, 0) / gdet, gram(0, 0) / gdet};
        const Mat2 w = matmul(ginv, hh);
        w0 = w(static_cast<std::size_t>(first), 0);
        w1 = w(static_cast<std::size_t>(first), 1);
    }

    const cplx x_first = (w0 * y[0] + w1 * y[1]) / scale;
    const NearestPoint p_first = nearest_point(x_first, c);
    r.comparisons += c.order() - 1;

    // Cancel and matched-filter the remaining stream against its column.
    const cplx cf = scale * p_first.point;
    const Vec2 y2{y[0] - h(0, static_cast<std::size_t>(first)) * cf,
                  y[1] - h(1, static_cast<std::size_t>(first)) * cf};
    const cplx hcol0 = h(0, static_cast<std::size_t>(second));
    const cplx hcol1 = h(1, static_cast<std::size_t>(second));
    const double colnorm = std::norm(hcol0) + std::norm(hcol1);
    const cplx x_second = (std::conj(hcol0) * y2[0] + std::conj(hcol1) * y2[1]) / (colnorm * scale);
    const NearestPoint p_second = nearest_point(x_second, c);
    r.comparisons += c.order() - 1;

    const int idx[2] = {first == 0 ? p_first.index : p_second.index,
                        first == 0 ? p_second.index : p_first.index};
    r.s1_index = idx[0];
    r.s2_index = idx[1];
    r.metric_evaluations = 2 * c.order();
    const Vec2 chat = vblast_encode(c.point(idx[0]), c.point(idx[1]));
    r.metric = frobenius_norm_sq(y - matvec(h, chat));
    return r;
}

// ---------------------------------------------------------------------------
// Generic linear-dispersion space-time block codes loaded from config files.
// ---------------------------------------------------------------------------

/// A rate N_s/T linear-dispersion code: codeword = power_scale *
/// sum_k (A_k Re(s_k) + j B_k Im(s_k)) with 2xT complex dispersion matrices.
/// The matrices are data, loaded from versioned JSON files.
struct DispersionCode {
    std::string name;
    int channel_uses = 0;          // T
    int symbols_per_codeword = 0;  // N_s
    std::vector<CMat> a;           // multiplies Re(s_k)
    std::vector<CMat> b;           // multiplies j * Im(s_k)
    double power_scale = 1.0;

    SchemeDescriptor descriptor() const { return {name, symbols_per_codeword, channel_uses}; }
};

/// Exact average codeword energy per channel use for unit-energy symbols
/// with independent, zero-mean I/Q components of variance 1/2 each.
inline double ld_energy_per_use(const DispersionCode& code) {
    double e = 0.0;
    for (int k = 0; k < code.symbols_per_codeword; ++k)
        e += 0.5 * (frobenius_norm_sq(code.a[static_cast<std::size_t>(k)]) +
                    frobenius_norm_sq(code.b[static_cast<std::size_t>(k)]));
    return code.power_scale * code.power_scale * e / code.channel_uses;
}

/// FNV-1a 64 over the canonical content serialization; guards the shipped
/// matrix files against silent edits.
inline std::uint64_t dispersion_checksum(const DispersionCode& code) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const std::string& s) {
        for (unsigned char ch : s) {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
    };
    auto feed_num = [&](double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g|", v);
        feed(buf);
    };
    feed(code.name);
    feed("|");
    feed_num(code.channel_uses);
    feed_num(code.symbols_per_codeword);
    for (int k = 0; k < code.symbols_per_codeword; ++k) {
        for (const CMat* m : {&code.a[static_cast<std::size_t>(k)], &code.b[static_cast<std::size_t>(k)]})
            for (std::size_t i = 0; i < m->rows(); ++i)
                for (std::size_t j = 0; j < m->cols(); ++j) {
                    feed_num((*m)(i, j).real());
                    feed_num((*m)(i, j).imag());
                }
    }
    feed_num(code.power_scale);
    return h;
}

inline CMat parse_dispersion_matrix(const nlohmann::json& j, int channel_uses,
                                    const std::string& what) {
    if (!j.is_array() || j.size() != 2) throw config_error(what + ": expected 2 rows");
    CMat m(2, static_cast<std::size_t>(channel_uses));
    for (std::size_t r = 0; r < 2; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(channel_uses))
            throw config_error(what + ": expected " + std::to_string(channel_uses) +
                               " entries per row");
        for (std::size_t c = 0; c < row.size(); ++c) {
            const auto& entry = row[c];
            if (!entry.is_array() || entry.size() != 2)
                throw config_error(what + ": entries must be [re, im] pairs");
            m(r, c) = cplx(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

/// Loads and validates a dispersion-code file. Checks the declared checksum
/// and that the code radiates unit average energy per channel use within 1%.
inline DispersionCode load_dispersion_code(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open dispersion-code file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("malformed dispersion-code file '" + path + "': " + e.what());
    }

    DispersionCode code;
    try {
        code.name = j.at("name").get<std::string>();
        code.channel_uses = j.at("channel_uses").get<int>();
        code.symbols_per_codeword = j.at("symbols_per_codeword").get<int>();
        code.power_scale = j.at("power_scale").get<double>();
        const auto& sym = j.at("symbols");
        if (!sym.is_array() || sym.size() != static_cast<std::size_t>(code.symbols_per_codeword))
            throw config_error("'symbols' must list one dispersion pair per symbol");
        for (std::size_t k = 0; k < sym.size(); ++k) {
            code.a.push_back(parse_dispersion_matrix(sym[k].at("a"), code.channel_uses,
                                                     code.name + " A" + std::to_string(k + 1)));
            code.b.push_back(parse_dispersion_matrix(sym[k].at("b"), code.channel_uses,
                                                     code.name + " B" + std::to_string(k + 1)));
        }
    } catch (const nlohmann::json::exception& e) {
        throw config_error("dispersion-code file '" + path + "': " + e.what());
    }
    if (code.channel_uses < 1 || code.symbols_per_codeword < 1)
        throw config_error("dispersion-code file '" + path + "': nonpositive dimensions");

    if (j.contains("checksum_fnv1a64")) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(dispersion_checksum(code)));
        const std::string declared = j["checksum_fnv1a64"].get<std::string>();
        if (declared != buf)
            throw config_error("dispersion-code file '" + path + "' failed its checksum (content " +
                               buf + ", declared " + declared + ")");
    }

    const double e = ld_energy_per_use(code);
    if (std::abs(e - 1.0) > 0.01)
        throw config_error("dispersion code '" + code.name + "' radiates " + std::to_string(e) +
                           " energy per channel use; expected 1 within 1%");
    return code;
}

/// Codeword for one block of N_s symbols: 2 x T transmit matrix.
inline CMat ld_encode(const std::vector<cplx>& symbols, const DispersionCode& code) {
    if (symbols.size() != static_cast<std::size_t>(code.symbols_per_codeword))
        throw config_error("dispersion encode: expected " +
                           std::to_string(code.symbols_per_codeword) + " symbols, got " +
                           std::to_string(symbols.size()));
    CMat cw(2, static_cast<std::size_t>(code.channel_uses));
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        const double re = symbols[k].real();
        const double im = symbols[k].imag();
        const CMat& ak = code.a[k];
        const CMat& bk = code.b[k];
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t t = 0; t < cw.cols(); ++t)
                cw(r, t) += ak(r, t) * re + cplx(0.0, 1.0) * bk(r, t) * im;
    }
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t t = 0; t < cw.cols(); ++t) cw(r, t) *= code.power_scale;
    return cw;
}

inline constexpr int kLdSearchBitCap = 16;

/// All M^N_s candidate codewords of a dispersion code under one
/// constellation, enumerated in lexicographic symbol-index order (symbol 1
/// most significant). Build once, share read-only across workers.
class LdCodebook {
  public:
    LdCodebook(const DispersionCode& code, const Constellation& c) : code_(&code), order_(c.order()) {
        const double bits = code.symbols_per_codeword * std::log2(static_cast<double>(c.order()));
        if (bits > kLdSearchBitCap)
            throw config_error("dispersion code '" + code.name +
                               "' exceeds the exhaustive-search cap (" + std::to_string(bits) +
                               " bits per codeword)");
        std::size_t total = 1;
        for (int k = 0; k < code.symbols_per_codeword; ++k)
            total *= static_cast<std::size_t>(c.order());
        codewords_.reserve(total);
        std::vector<cplx> symbols(static_cast<std::size_t>(code.symbols_per_codeword));
        std::vector<int> digits(static_cast<std::size_t>(code.symbols_per_codeword), 0);
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rem = flat;
            for (int k = code.symbols_per_codeword - 1; k >= 0; --k) {
                digits[static_cast<std::size_t>(k)] = static_cast<int>(rem % order_);
                rem /= static_cast<std::size_t>(order_);
            }
            for (int k = 0; k < code.symbols_per_codeword; ++k)
                symbols[static_cast<std::size_t>(k)] = c.point(digits[static_cast<std::size_t>(k)]);
            codewords_.push_back(ld_encode(symbols, code));
        }
    }

    const DispersionCode& code() const noexcept { return *code_; }
    std::size_t size() const noexcept { return codewords_.size(); }
    const CMat& codeword(std::size_t flat) const { return codewords_[flat]; }

    /// Symbol index of position k inside flat candidate index.
    int symbol_index(std::size_t flat, int k) const {
        std::size_t div = 1;
        for (int i = code_->symbols_per_codeword - 1; i > k; --i)
            div *= static_cast<std::size_t>(order_);
        return static_cast<int>((flat / div) % static_cast<std::size_t>(order_));
    }

    std::vector<int> symbol_indices(std::size_t flat) const {
        std::vector<int> idx(static_cast<std::size_t>(code_->symbols_per_codeword));
        for (int k = code_->symbols_per_codeword - 1; k >= 0; --k) {
            idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(order_));
            flat /= static_cast<std::size_t>(order_);
        }
        return idx;
    }

  private:
    const DispersionCode* code_;
    int order_;
    std::vector<CMat> codewords_;
};

struct LdDecodeResult {
    std::size_t flat_index = 0;
    double metric = 0.0;
    std::int64_t metric_evaluations = 0;
    std::int64_t comparisons = 0;
};

/// Exhaustive ML over the whole codebook: argmin ||Y - H C||_F^2.
inline LdDecodeResult ld_joint_ml_decode(const CMat& y, const Mat2& h, const LdCodebook& book) {
    LdDecodeResult r;
    double best = std::numeric_limits<double>::infinity();
    const std::size_t t_uses = y.cols();
    for (std::size_t idx = 0; idx < book.size(); ++idx) {
        const CMat& cw = book.codeword(idx);
        double metric = 0.0;
        for (std::size_t t = 0; t < t_uses; ++t) {
            const cplx r0 = y(0, t) - (h(0, 0) * cw(0, t) + h(0, 1) * cw(1, t));
            const cplx r1 = y(1, t) - (h(1, 0) * cw(0, t) + h(1, 1) * cw(1, t));
            metric += std::norm(r0) + std::norm(r1);
        }
        ++r.metric_evaluations;
        if (idx > 0) ++r.comparisons;
        if (metric < best) {
            best = metric;
            r.flat_index = idx;
        }
    }
    r.metric = best;
    return r;
}

/// Convenience wrapper that builds the codebook on the fly; for tests and
/// one-off calls. Hot loops should reuse an LdCodebook.
inline LdDecodeResult ld_joint_ml_decode(const CMat& y, const Mat2& h, const DispersionCode& code,
                                         const Constellation& c) {
    return ld_joint_ml_decode(y, h, LdCodebook(code, c));
}

}  // namespace rmimo
