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

// Loss model of the EPR source: forward covariance from squeezing strengths
// and a uniform overall efficiency xi, and the inverse fit of (r1, r2, xi)
// to a measured covariance matrix.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "cvsteer/gaussian.hpp"
#include "cvsteer/source.hpp"

namespace cvsteer {

inline CovarianceMatrix forward_covariance(const SourceParams &params) { return build_epr_source(params); }

/// Single-source quadrature variance after uniform efficiency xi:
/// xi * e^{sign * 2r} + (1 - xi). sign = -1 is the squeezed quadrature.
inline double lossy_squeezed_variance(double r, double xi, int sign) {
    return xi * std::exp(2.0 * sign * r) + (1.0 - xi);
}

struct LossFit {
    double xi = 1.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double residual = 0.0;  // RMS over the eight fitted entries
    std::size_t iterations = 0;
    bool converged = false;

    SourceParams params() const { return SourceParams::uniform(r1, r2, xi); }

    /// Detected squeezing of each source in dB below vacuum.
    std::array<double, 2> detected_squeezing_db() const {
        return {-variance_to_db(lossy_squeezed_variance(r1, xi, -1)),
                -variance_to_db(lossy_squeezed_variance(r2, xi, -1))};
    }
    std::array<double, 2> detected_antisqueezing_db() const {
        return {variance_to_db(lossy_squeezed_variance(r1, xi, +1)),
                variance_to_db(lossy_squeezed_variance(r2, xi, +1))};
    }
};

struct FitOptions {
    double xi_min = 0.70;
    double xi_max = 1.00;
    double xi_step = 0.01;
    double tolerance = 1e-6;  // stop when the largest parameter change drops below this
    std::size_t max_evaluations = 10000;
};

namespace detail {

// Entries compared by the fit: diagonal plus the X-X and P-P cross terms,
// both triangles.
inline constexpr std::array<std::array<int, 2>, 8> kFitEntries{
    {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 2}, {2, 0}, {1, 3}, {3, 1}}};

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Vec3 = Eigen::Vector3d;

inline Vec8 fit_entries(const CovarianceMatrix &g) {
    Vec8 v;
    for (std::size_t k = 0; k < kFitEntries.size(); ++k) v(static_cast<Eigen::Index>(k)) = g(kFitEntries[k][0], kFitEntries[k][1]);
    return v;
}

class LossObjective {
   public:
    explicit LossObjective(const CovarianceMatrix &measured) : data_(fit_entries(measured)) {}

    Vec8 residuals(const Vec3 &p) {
        ++evaluations_;
        return fit_entries(forward_covariance(SourceParams::uniform(p(0), p(1), p(2)))) - data_;
    }

    std::size_t evaluations() const { return evaluations_; }

   private:
    Vec8 data_;
    std::size_t evaluations_ = 0;
};

inline Vec3 project(Vec3 p) {
    p(0) = std::max(p(0), 0.0);
    p(1) = std::max(p(1), 0.0);
    p(2) = std::clamp(p(2), 1e-6, 1.0);
    return p;
}

inline void require_fit_shape(const CovarianceMatrix &g) {
    if (g.n_modes() != 2) throw std::invalid_argument("fit_efficiency: state must have two modes");
    const double scale = std::max(1.0, g.entries().cwiseAbs().maxCoeff());
    for (int i : {0, 2}) {
        for (int j : {1, 3}) {
            if (std::abs(g(i, j)) > 1e-9 * scale) {
                throw std::invalid_argument("fit_efficiency: X-P cross terms must be zero");
            }
        }
    }
    if (!is_physical(g)) throw std::invalid_argument("fit_efficiency: input violates the uncertainty principle");
}

}  // namespace detail

/// Fits (r1, r2, xi) of the uniform-loss source to a measured covariance.
///
/// Stage 1 scans xi over a grid; at each xi the squeezing parameters are
/// seeded in closed form from the anti-squeezed source variances
///   v1+ = mean(Var P) - Cov(P_A, P_B),  v2+ = mean(Var X) + Cov(X_A, X_B).
/// Stage 2 refines the best grid point with Levenberg-Marquardt on a
/// finite-difference Jacobian (no analytic derivatives).
inline LossFit fit_efficiency(const CovarianceMatrix &measured, const FitOptions &options = {}) {
    detail::require_fit_shape(measured);
    detail::LossObjective objective(measured);
    using detail::Vec3;
    using detail::Vec8;

    const double mean_x = 0.5 * (measured(0, 0) + measured(2, 2));
    const double mean_p = 0.5 * (measured(1, 1) + measured(3, 3));
    const double v1_anti = mean_p - measured(1, 3);
    const double v2_anti = mean_x + measured(0, 2);
    auto seed_r = [](double v_anti, double xi) {
        return std::max(0.0, 0.5 * std::log(std::max(1.0, (v_anti - 1.0 + xi) / xi)));
    };

    Vec3 best{0.0, 0.0, options.xi_max};
    double best_cost = std::numeric_limits<double>::infinity();
    const auto steps = static_cast<int>(std::lround((options.xi_max - options.xi_min) / options.xi_step));
    for (int k = 0; k <= steps; ++k) {
        const double xi = options.xi_min + k * options.xi_step;
        const Vec3 p{seed_r(v1_anti, xi), seed_r(v2_anti, xi), xi};
        const double cost = objective.residuals(p).squaredNorm();
        if (cost < best_cost) {  // strict: ties keep the lower xi
            best_cost = cost;
            best = p;
        }
    }

    LossFit fit;
    Vec3 p = best;
    Vec8 f = objective.residuals(p);
    double cost = f.squaredNorm();
    double lambda = 1e-3;
    bool done = false;
    while (!done && objective.evaluations() < options.max_evaluations) {
        ++fit.iterations;
        if (cost < 1e-28) {
            fit.converged = true;
            break;
        }
        Eigen::Matrix<double, 8, 3> jac;
        for (int i = 0; i < 3; ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(p(i)));
            Vec3 hi = p, lo = p;
            hi(i) += h;
            lo(i) -= h;
            hi = detail::project(hi);
            lo = detail::project(lo);
            jac.col(i) = (objective.residuals(hi) - objective.residuals(lo)) / (hi(i) - lo(i));
        }
        const Eigen::Matrix3d jtj = jac.transpose() * jac;
        const Vec3 grad = jac.transpose() * f;
        while (true) {
            if (objective.evaluations() >= options.max_evaluations) break;
            Eigen::Matrix3d damped = jtj;
            for (int i = 0; i < 3; ++i) damped(i, i) += lambda * std::max(jtj(i, i), 1e-12);
            const Vec3 candidate = detail::project(p + damped.ldlt().solve(-grad));
            const Vec8 f_new = objective.residuals(candidate);
            const double cost_new = f_new.squaredNorm();
            if (cost_new < cost) {
                const double change = (candidate - p).cwiseAbs().maxCoeff();
                p = candidate;
                f = f_new;
                cost = cost_new;
                lambda = std::max(lambda / 10.0, 1e-12);
                if (change < options.tolerance) {
                    fit.converged = true;
                    done = true;
                }
                break;
            }
            lambda *= 10.0;
            if (lambda > 1e16) {
                // No descent direction left: stationary point.
                fit.converged = true;
                done = true;
                break;
            }
        }
    }

    fit.r1 = p(0);
    fit.r2 = p(1);
    fit.xi = p(2);
    fit.residual = std::sqrt(cost / 8.0);
    return fit;
}

/// Detection efficiency xi / eta_prep.
inline double efficiency_decomposition(double xi, double eta_prep) {
    if (!(eta_prep > 0.0 && eta_prep <= 1.0)) {
        throw std::invalid_argument("efficiency_decomposition: eta_prep must lie in (0, 1]");
    }
    if (!(xi > 0.0)) throw std::invalid_argument("efficiency_decomposition: xi must be > 0");
    if (xi > eta_prep) {
        throw std::invalid_argument("efficiency_decomposition: xi exceeds eta_prep (detection efficiency > 1)");
    }
    return xi / eta_prep;
}

/// Mode-mismatch loss of an interference with fringe visibility V is 1 - V^2.
inline double visibility_loss(double visibility) { return 1.0 - visibility * visibility; }

/// eta = (1 - internal_loss) (1 - propagation_loss) V^2.
inline double budget_prep_efficiency(double internal_loss, double propagation_loss, double visibility) {
    if (!(internal_loss >= 0.0 && internal_loss < 1.0)) {
        throw std::invalid_argument("budget_prep_efficiency: internal_loss must lie in [0, 1)");
    }
    if (!(propagation_loss >= 0.0 && propagation_loss < 1.0)) {
        throw std::invalid_argument("budget_prep_efficiency: propagation_loss must lie in [0, 1)");
    }
    if (!(visibility > 0.0 && visibility <= 1.0)) {
        throw std::invalid_argument("budget_prep_efficiency: visibility must lie in (0, 1]");
    }
    return (1.0 - internal_loss) * (1.0 - propagation_loss) * (1.0 - visibility_loss(visibility));
}

}  // namespace cvsteer
