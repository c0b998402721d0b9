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
#include <cstdio>
#include <limits>
#include <string>

#include "rmimo/errors.hpp"
#include "rmimo/linalg.hpp"
#include "rmimo/rng.hpp"

namespace rmimo {

/// Rician K-factor in dB, with the two limit regimes represented explicitly:
/// pure line of sight (K -> inf, deterministic all-ones channel) and pure
/// scatter (K = 0, Rayleigh). The limits are their own states rather than
/// sentinel floats so the ill-conditioned LoS case is exactly representable.
class KFactor {
  public:
    enum class Kind { finite, pure_scatter, pure_los };

    KFactor() = default;

    static KFactor from_db(double k_db) {
        if (!std::isfinite(k_db)) throw config_error("finite K-factor expected; use the limit flags");
        KFactor k;
        k.kind_ = Kind::finite;
        k.db_ = k_db;
        return k;
    }

    static KFactor pure_scatter() {
        KFactor k;
        k.kind_ = Kind::pure_scatter;
        return k;
    }

    static KFactor pure_los() {
        KFactor k;
        k.kind_ = Kind::pure_los;
        return k;
    }

    /// Accepts "inf"/"+inf" and "-inf" as the limit flags, otherwise a
    /// finite dB value.
    static KFactor parse(const std::string& text) {
        if (text == "inf" || text == "+inf" || text == "Inf") return pure_los();
        if (text == "-inf" || text == "-Inf") return pure_scatter();
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &pos);
        } catch (const std::exception&) {
            throw config_error("cannot parse K-factor '" + text + "'");
        }
        if (pos != text.size()) throw config_error("cannot parse K-factor '" + text + "'");
        return from_db(v);
    }

    Kind kind() const noexcept { return kind_; }
    bool is_pure_los() const noexcept { return kind_ == Kind::pure_los; }
    bool is_pure_scatter() const noexcept { return kind_ == Kind::pure_scatter; }

    double db() const {
        if (kind_ != Kind::finite) throw config_error("K-factor limit has no finite dB value");
        return db_;
    }

    double linear() const noexcept {
        switch (kind_) {
            case Kind::pure_scatter: return 0.0;
            case Kind::pure_los: return std::numeric_limits<double>::infinity();
            default: return std::pow(10.0, db_ / 10.0);
        }
    }

    std::string str() const {
        switch (kind_) {
            case Kind::pure_scatter: return "-inf";
            case Kind::pure_los: return "inf";
            default: {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%g", db_);
                return buf;
            }
        }
    }

    friend bool operator==(const KFactor& a, const KFactor& b) {
        if (a.kind_ != b.kind_) return false;
        return a.kind_ != Kind::finite || a.db_ == b.db_;
    }

  private:
    Kind kind_ = Kind::finite;
    double db_ = 0.0;
};

/// One draw of the 2x2 flat-fading channel.
struct ChannelRealization {
    Mat2 H;
    KFactor k_factor;
};

/// Per-branch noise power derived from the SNR axis of the sweeps.
/// n0 == 0 represents the noiseless (SNR -> inf) limit.
struct NoiseModel {
    double n0 = 1.0;
    double snr_db = 0.0;
};

inline double snr_to_n0(double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0) return 0.0;
    return std::pow(10.0, -snr_db / 10.0);
}

inline NoiseModel make_noise_model(double snr_db) { return {snr_to_n0(snr_db), snr_db}; }

/// Rician draw: H = sqrt(K/(K+1)) * H_L + sqrt(1/(K+1)) * H_w with H_L the
/// all-ones (ill-conditioned LoS) matrix and H_w i.i.d. CN(0, 1). The K
/// limits short-circuit so pure LoS is bit-exactly the all-ones matrix.
inline ChannelRealization sample_rician(KFactor k, RandomStream& rng) {
    if (k.is_pure_los()) return {Mat2::ones(), k};

    Mat2 h;
    if (k.is_pure_scatter()) {
        for (auto& e : h.e) e = rng.cgaussian(1.0);
        return {h, k};
    }

    const double klin = k.linear();
    const double los = std::sqrt(klin / (klin + 1.0));
    const double scatter = std::sqrt(1.0 / (klin + 1.0));
    for (auto& e : h.e) e = los + scatter * rng.cgaussian(1.0);
    return {h, k};
}

/// n i.i.d. complex noise samples, total power n0 each (n0/2 per real
/// dimension). n0 == 0 yields an exact zero vector.
inline CVec sample_noise(std::size_t n, const NoiseModel& noise, RandomStream& rng) {
    CVec z(n);
    if (noise.n0 == 0.0) return z;
    for (std::size_t i = 0; i < n; ++i) z[i] = rng.cgaussian(noise.n0);
    return z;
}

inline Vec2 sample_noise2(const NoiseModel& noise, RandomStream& rng) {
    if (noise.n0 == 0.0) return {};
    return {rng.cgaussian(noise.n0), rng.cgaussian(noise.n0)};
}

}  // namespace rmimo
