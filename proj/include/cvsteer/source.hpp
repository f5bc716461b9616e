// Copyright 2026 The cvsteer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "cvsteer/gaussian.hpp"

namespace cvsteer {

/// Physical knobs of the two-squeezer EPR source and its detection chain.
struct SourceParams {
    double r1 = 0.0;  // squeezing parameter, source 1 (mode A input)
    double r2 = 0.0;  // squeezing parameter, source 2 (mode B input)
    double relative_phase = std::numbers::pi / 2;
    double transmittance = 0.5;
    double eta_prep = 1.0;
    double eta_det_a = 1.0;
    double eta_det_b = 1.0;
    double dark_noise = 0.0;  // additive variance per homodyne output

    /// Throws std::invalid_argument naming the first offending field.
    void validate() const {
        auto fail = [](const std::string &field, const std::string &why) {
            throw std::invalid_argument("SourceParams." + field + ": " + why);
        };
        if (!(r1 >= 0.0) || !std::isfinite(r1)) fail("r1", "must be finite and >= 0");
        if (!(r2 >= 0.0) || !std::isfinite(r2)) fail("r2", "must be finite and >= 0");
        if (!std::isfinite(relative_phase)) fail("relative_phase", "must be finite");
        if (!(transmittance >= 0.0 && transmittance <= 1.0)) fail("transmittance", "must lie in [0, 1]");
        if (!(eta_prep > 0.0 && eta_prep <= 1.0)) fail("eta_prep", "must lie in (0, 1]");
        if (!(eta_det_a > 0.0 && eta_det_a <= 1.0)) fail("eta_det_a", "must lie in (0, 1]");
        if (!(eta_det_b > 0.0 && eta_det_b <= 1.0)) fail("eta_det_b", "must lie in (0, 1]");
        if (!(dark_noise >= 0.0) || !std::isfinite(dark_noise)) fail("dark_noise", "must be finite and >= 0");
    }

    /// Uniform-efficiency shortcut: all loss lumped into the preparation stage.
    static SourceParams uniform(double r1, double r2, double xi) {
        SourceParams p;
        p.r1 = r1;
        p.r2 = r2;
        p.eta_prep = xi;
        return p;
    }

    /// Overall efficiency when the detection arms are balanced.
    double overall_efficiency_a() const { return eta_prep * eta_det_a; }
    double overall_efficiency_b() const { return eta_prep * eta_det_b; }
};

/// Forward model of the optical chain:
///   squeeze both inputs in X -> preparation loss on each -> rotate source 2
///   by relative_phase -> beamsplitter -> detection loss with dark noise.
/// Mode 0 is Alice, mode 1 is Bob.
inline CovarianceMatrix build_epr_source(const SourceParams &params) {
    params.validate();
    constexpr std::size_t n = 2;
    CovarianceMatrix state = vacuum_state(n);
    state = apply_symplectic(state, squeezer(params.r1, 0, n));
    state = apply_symplectic(state, squeezer(params.r2, 1, n));
    state = apply_loss(state, LossChannel{0, params.eta_prep, 0.0});
    state = apply_loss(state, LossChannel{1, params.eta_prep, 0.0});
    state = apply_symplectic(state, phase_shift(params.relative_phase, 1, n));
    state = apply_symplectic(state, beamsplitter(params.transmittance, 0, 1, n));
    state = apply_loss(state, LossChannel{0, params.eta_det_a, params.dark_noise});
    state = apply_loss(state, LossChannel{1, params.eta_det_b, params.dark_noise});
    return state;
}

}  // namespace cvsteer
