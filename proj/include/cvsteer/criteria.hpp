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

// Steering and inseparability witnesses for two-mode Gaussian states.
//
// Conventions: mode 0 is Alice (A), mode 1 is Bob (B). A gain g always enters
// as Var(O_target - g * O_steering), so the unit-gain P setting g_p = -1
// evaluates Var(P_A + P_B).

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "cvsteer/errors.hpp"
#include "cvsteer/gaussian.hpp"

namespace cvsteer {

enum class Quadrature { X, P };

/// B|A: Alice steers (predicts) Bob. A|B: the reverse.
enum class Direction { BGivenA, AGivenB };

inline constexpr double kReidBound = 1.0;
inline constexpr double kDuanBound = 4.0;

struct GainPair {
    double g_x = 1.0;
    double g_p = -1.0;
};

inline constexpr GainPair kUnitGains{1.0, -1.0};

struct ConditionalVariances {
    double x_b_given_a = 0.0;
    double p_b_given_a = 0.0;
    double x_a_given_b = 0.0;
    double p_a_given_b = 0.0;
};

struct CriteriaReport {
    double reid_b_given_a = 0.0;
    double reid_a_given_b = 0.0;
    double duan_sum = 0.0;
    double unit_gain_product = 0.0;
    GainPair gains_used = kUnitGains;  // gains behind unit_gain_product
    GainPair optimal_gains_b_given_a;
    GainPair optimal_gains_a_given_b;
    ConditionalVariances conditional_variances;
    bool steering_b_given_a = false;
    bool steering_a_given_b = false;
    bool duan_inseparable = false;
    double conditional_uncertainty_ratio = 0.0;
};

namespace detail {

inline void require_two_modes(const CovarianceMatrix &state, const char *what) {
    if (state.n_modes() != 2) {
        throw std::invalid_argument(std::string(what) + ": state must have exactly two modes, got " +
                                    std::to_string(state.n_modes()));
    }
}

struct QuadPair {
    std::size_t target;
    std::size_t steering;
};

inline QuadPair indices(Quadrature quad, Direction direction) {
    const std::size_t a = quad == Quadrature::X ? x_index(0) : p_index(0);
    const std::size_t b = quad == Quadrature::X ? x_index(1) : p_index(1);
    return direction == Direction::BGivenA ? QuadPair{b, a} : QuadPair{a, b};
}

}  // namespace detail

/// Var(O_target - gain * O_steering) = Var O_t + g^2 Var O_s - 2 g Cov(O_t, O_s).
inline double conditional_variance(const CovarianceMatrix &state, Quadrature quad, Direction direction,
                                   double gain) {
    detail::require_two_modes(state, "conditional_variance");
    const auto [t, s] = detail::indices(quad, direction);
    return state(t, t) + gain * gain * state(s, s) - 2.0 * gain * state(t, s);
}

/// Minimizer of conditional_variance over the gain: Cov(O_A, O_B) / Var(O_steering).
inline double optimal_gain(const CovarianceMatrix &state, Quadrature quad, Direction direction) {
    detail::require_two_modes(state, "optimal_gain");
    const auto [t, s] = detail::indices(quad, direction);
    if (!(state(s, s) > 0.0)) {
        throw DegenerateInputError("optimal_gain: steering-party variance is zero");
    }
    return state(t, s) / state(s, s);
}

/// Closed-form conditional variance at the optimal gain, Var O_t - Cov^2 / Var O_s.
inline double optimal_conditional_variance(const CovarianceMatrix &state, Quadrature quad, Direction direction) {
    detail::require_two_modes(state, "optimal_conditional_variance");
    const auto [t, s] = detail::indices(quad, direction);
    if (!(state(s, s) > 0.0)) {
        throw DegenerateInputError("optimal_conditional_variance: steering-party variance is zero");
    }
    return state(t, t) - state(t, s) * state(t, s) / state(s, s);
}

inline GainPair optimal_gains(const CovarianceMatrix &state, Direction direction) {
    return {optimal_gain(state, Quadrature::X, direction), optimal_gain(state, Quadrature::P, direction)};
}

/// Reid product with fixed gains.
inline double reid_product(const CovarianceMatrix &state, Direction direction, const GainPair &gains) {
    if (!std::isfinite(gains.g_x) || !std::isfinite(gains.g_p)) {
        throw std::invalid_argument("reid_product: gains must be finite");
    }
    return conditional_variance(state, Quadrature::X, direction, gains.g_x) *
           conditional_variance(state, Quadrature::P, direction, gains.g_p);
}

/// Reid product at the optimal gains (the closed covariance form).
inline double reid_product(const CovarianceMatrix &state, Direction direction) {
    return optimal_conditional_variance(state, Quadrature::X, direction) *
           optimal_conditional_variance(state, Quadrature::P, direction);
}

/// Var(X_A - X_B) + Var(P_A + P_B); below 4 certifies inseparability.
inline double duan_sum(const CovarianceMatrix &state) {
    detail::require_two_modes(state, "duan_sum");
    const double var_x_diff = state(0, 0) + state(2, 2) - 2.0 * state(0, 2);
    const double var_p_sum = state(1, 1) + state(3, 3) + 2.0 * state(1, 3);
    return var_x_diff + var_p_sum;
}

inline CriteriaReport criteria_report(const CovarianceMatrix &state) {
    detail::require_two_modes(state, "criteria_report");
    CriteriaReport r;
    auto &cv = r.conditional_variances;
    cv.x_b_given_a = optimal_conditional_variance(state, Quadrature::X, Direction::BGivenA);
    cv.p_b_given_a = optimal_conditional_variance(state, Quadrature::P, Direction::BGivenA);
    cv.x_a_given_b = optimal_conditional_variance(state, Quadrature::X, Direction::AGivenB);
    cv.p_a_given_b = optimal_conditional_variance(state, Quadrature::P, Direction::AGivenB);
    r.reid_b_given_a = cv.x_b_given_a * cv.p_b_given_a;
    r.reid_a_given_b = cv.x_a_given_b * cv.p_a_given_b;
    r.optimal_gains_b_given_a = optimal_gains(state, Direction::BGivenA);
    r.optimal_gains_a_given_b = optimal_gains(state, Direction::AGivenB);
    r.gains_used = kUnitGains;
    r.unit_gain_product = reid_product(state, Direction::BGivenA, kUnitGains);
    r.duan_sum = duan_sum(state);
    r.steering_b_given_a = r.reid_b_given_a < kReidBound;
    r.steering_a_given_b = r.reid_a_given_b < kReidBound;
    r.duan_inseparable = r.duan_sum < kDuanBound;
    r.conditional_uncertainty_ratio = std::sqrt(r.reid_b_given_a);
    return r;
}

}  // namespace cvsteer
