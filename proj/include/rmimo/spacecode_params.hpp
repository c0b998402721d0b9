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

#include "rmimo/errors.hpp"
#include "rmimo/linalg.hpp"

namespace rmimo {

/// Design scalars of the rate-two space code. Valid parameter sets satisfy
/// alpha1*beta2 != alpha2*beta1 (the code factor of the effective-channel
/// determinant) and the per-antenna power constraint
/// |alpha1|^2 + |beta1|^2 = |alpha2|^2 + |beta2|^2 = nu.
struct CodeParams {
    cplx alpha1{1.0, 0.0};
    cplx alpha2{1.0, 0.0};
    cplx beta1{0.0, 0.0};
    cplx beta2{0.0, 0.0};
    double nu = 1.0;
};

inline constexpr double kParamTol = 1e-12;

inline void validate_params(const CodeParams& p) {
    const cplx code_factor = p.alpha1 * p.beta2 - p.alpha2 * p.beta1;
    if (std::abs(code_factor) <= kParamTol)
        throw config_error("degenerate code parameters: alpha1*beta2 == alpha2*beta1");
    const double pow1 = std::norm(p.alpha1) + std::norm(p.beta1);
    const double pow2 = std::norm(p.alpha2) + std::norm(p.beta2);
    if (std::abs(pow1 - p.nu) > kParamTol * std::max(1.0, p.nu) ||
        std::abs(pow2 - p.nu) > kParamTol * std::max(1.0, p.nu))
        throw config_error("code parameters violate the per-antenna power constraint");
}

/// The one-parameter family used throughout: alpha1 = alpha2 = 1,
/// beta1 = -j*beta2, nu = 1 + beta2^2. beta2 = 0 collapses the code to rank
/// one and is rejected.
inline CodeParams make_params(double beta2) {
    if (beta2 == 0.0) throw config_error("beta2 = 0 makes the code matrix singular");
    CodeParams p;
    p.alpha1 = 1.0;
    p.alpha2 = 1.0;
    p.beta1 = cplx(0.0, -beta2);
    p.beta2 = cplx(beta2, 0.0);
    p.nu = 1.0 + beta2 * beta2;
    validate_params(p);
    return p;
}

}  // namespace rmimo
