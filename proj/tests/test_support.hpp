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

// Shared generators for the property tests.

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "cvsteer.hpp"

namespace cvsteer::fixtures {

inline constexpr double kPi = std::numbers::pi;

/// Random n-mode symplectic transform built from the generator set.
inline SymplecticTransform random_symplectic(std::mt19937_64 &rng, std::size_t n_modes, int layers = 3) {
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> squeeze(-1.2, 1.2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SymplecticTransform s = SymplecticTransform::identity(n_modes);
    for (int l = 0; l < layers; ++l) {
        for (std::size_t m = 0; m < n_modes; ++m) {
            s = phase_shift(angle(rng), m, n_modes) * s;
            s = squeezer(squeeze(rng), m, n_modes) * s;
            s = phase_shift(angle(rng), m, n_modes) * s;
        }
        for (std::size_t m = 0; m + 1 < n_modes; ++m) {
            s = beamsplitter(unit(rng), m, m + 1, n_modes) * s;
        }
    }
    return s;
}

/// Random physical state: S diag(nu_k, nu_k) S^T with thermal nu_k >= 1.
inline CovarianceMatrix random_physical_state(std::mt19937_64 &rng, std::size_t n_modes) {
    std::uniform_real_distribution<double> thermal(1.0, 3.0);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) d(2 * k, 2 * k) = d(2 * k + 1, 2 * k + 1) = thermal(rng);
    return apply_symplectic(CovarianceMatrix(d), random_symplectic(rng, n_modes));
}

/// Random EPR-source parameters (zero X-P cross terms at the default phase).
inline SourceParams random_source(std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> r(0.0, 2.0);
    std::uniform_real_distribution<double> eta(0.5, 1.0);
    std::uniform_real_distribution<double> dark(0.0, 0.02);
    SourceParams p;
    p.r1 = r(rng);
    p.r2 = r(rng);
    p.eta_prep = eta(rng);
    p.eta_det_a = eta(rng);
    p.eta_det_b = eta(rng);
    p.dark_noise = dark(rng);
    return p;
}

/// Two-mode product of independent single-mode physical states.
inline CovarianceMatrix random_product_state(std::mt19937_64 &rng) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
    for (int m = 0; m < 2; ++m) {
        const auto single = random_physical_state(rng, 1);
        g.block<2, 2>(2 * m, 2 * m) = single.entries();
    }
    return CovarianceMatrix(g);
}

}  // namespace cvsteer::fixtures
