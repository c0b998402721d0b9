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
#include <cstdint>

namespace rmimo {

namespace detail {

// SplitMix64 finalizer (Stafford mix13). Full 64-bit avalanche.
inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline constexpr std::uint64_t GOLDEN_GAMMA = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

/// Counter-based random stream. Every (master seed, id...) tuple keys an
/// independent substream, so trial t of sweep cell c draws the same values
/// no matter how trials are split across workers or runs. The generator is
/// SplitMix64; uniforms and gaussians are built from raw 64-bit words so the
/// byte stream does not depend on the standard library's distribution
/// implementations.
class RandomStream {
  public:
    RandomStream() = default;

    explicit RandomStream(std::uint64_t seed) : state_(detail::mix64(seed + detail::GOLDEN_GAMMA)) {}

    /// Derives the substream keyed by (master, ids...).
    template <typename... Ids>
    static RandomStream substream(std::uint64_t master, Ids... ids) {
        std::uint64_t key = detail::mix64(master + detail::GOLDEN_GAMMA);
        ((key = detail::mix64(key ^ (static_cast<std::uint64_t>(ids) + detail::GOLDEN_GAMMA))), ...);
        RandomStream s;
        s.state_ = key;
        return s;
    }

    std::uint64_t next_u64() noexcept {
        state_ += detail::GOLDEN_GAMMA;
        return detail::mix64(state_);
    }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos() noexcept { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) noexcept { return next_u64() % n; }

    /// One bit.
    int bit() noexcept { return static_cast<int>(next_u64() >> 63); }

    /// Standard normal via the Marsaglia polar method.
    double gaussian() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    /// Circularly-symmetric complex gaussian, total variance `var`
    /// (var/2 per real dimension).
    std::complex<double> cgaussian(double var = 1.0) noexcept {
        const double s = std::sqrt(var * 0.5);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

  private:
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Stream kinds used by the simulation harness so that channel, noise and
/// data draws stay aligned across schemes that consume different amounts
/// of randomness per trial.
enum class StreamKind : std::uint64_t {
    channel = 1,
    noise = 2,
    data = 3,
};

inline RandomStream trial_stream(std::uint64_t master, StreamKind kind, std::uint64_t cell_id,
                                 std::uint64_t trial) {
    return RandomStream::substream(master, static_cast<std::uint64_t>(kind), cell_id, trial);
}

}  // namespace rmimo
