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

// Partial covariance reconstruction from six scalar variances:
// the four single-quadrature variances plus Var(X_A - X_B) and Var(P_A + P_B).
// X-P cross terms are not measured and are set to zero.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvsteer/errors.hpp"
#include "cvsteer/gaussian.hpp"
#include "json.hpp"

namespace cvsteer {

struct MeasurementSet {
    double var_xa = 1.0;
    double var_pa = 1.0;
    double var_xb = 1.0;
    double var_pb = 1.0;
    double var_x_diff = 2.0;  // Var(X_A - X_B)
    double var_p_sum = 2.0;   // Var(P_A + P_B)
    double relative_error = 0.05;
    nlohmann::json metadata = nlohmann::json::object();  // labels only

    static constexpr std::array<const char *, 6> kFieldNames{"var_xa",  "var_pa",     "var_xb",
                                                             "var_pb",  "var_x_diff", "var_p_sum"};

    std::array<double, 6> values() const { return {var_xa, var_pa, var_xb, var_pb, var_x_diff, var_p_sum}; }

    static MeasurementSet from_values(const std::array<double, 6> &v, double relative_error = 0.05) {
        MeasurementSet ms;
        ms.var_xa = v[0];
        ms.var_pa = v[1];
        ms.var_xb = v[2];
        ms.var_pb = v[3];
        ms.var_x_diff = v[4];
        ms.var_p_sum = v[5];
        ms.relative_error = relative_error;
        return ms;
    }

    void validate() const {
        const auto v = values();
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!(v[k] > 0.0) || !std::isfinite(v[k])) {
                throw std::invalid_argument(std::string("MeasurementSet.") + kFieldNames[k] +
                                            ": variance must be finite and > 0");
            }
        }
        if (!(relative_error >= 0.0 && relative_error < 1.0)) {
            throw std::invalid_argument("MeasurementSet.relative_error: must lie in [0, 1)");
        }
    }
};

/// Cov(O1, O2) = (Var(O1 + O2) - Var O1 - Var O2) / 2.
inline double covariance_from_sum(double var_sum, double var_1, double var_2) {
    if (!std::isfinite(var_sum) || !std::isfinite(var_1) || !std::isfinite(var_2)) {
        throw std::invalid_argument("covariance_from_sum: inputs must be finite");
    }
    if (!(var_1 > 0.0) || !(var_2 > 0.0)) {
        throw std::invalid_argument("covariance_from_sum: single variances must be > 0");
    }
    return 0.5 * (var_sum - var_1 - var_2);
}

/// Cov(O1, O2) from Var(O1 - O2): the sum identity gives Cov(O1, -O2).
inline double covariance_from_difference(double var_diff, double var_1, double var_2) {
    return -covariance_from_sum(var_diff, var_1, var_2);
}

/// First-order (independent-error) uncertainty of a covariance obtained
/// from three variances each carrying `relative_error`.
inline double covariance_uncertainty(double relative_error, double var_combined, double var_1, double var_2) {
    const double a = relative_error * var_combined;
    const double b = relative_error * var_1;
    const double c = relative_error * var_2;
    return 0.5 * std::sqrt(a * a + b * b + c * c);
}

/// 4x4 matrix of one-sigma entry uncertainties; unmeasured entries are zero.
inline Eigen::Matrix4d propagate_errors(const MeasurementSet &ms) {
    ms.validate();
    const double e = ms.relative_error;
    Eigen::Matrix4d u = Eigen::Matrix4d::Zero();
    u(0, 0) = e * ms.var_xa;
    u(1, 1) = e * ms.var_pa;
    u(2, 2) = e * ms.var_xb;
    u(3, 3) = e * ms.var_pb;
    u(0, 2) = u(2, 0) = covariance_uncertainty(e, ms.var_x_diff, ms.var_xa, ms.var_xb);
    u(1, 3) = u(3, 1) = covariance_uncertainty(e, ms.var_p_sum, ms.var_pa, ms.var_pb);
    return u;
}

struct Reconstruction {
    CovarianceMatrix gamma;
    Eigen::Matrix4d uncertainties;
    std::vector<double> symplectic_eigenvalues;
    std::vector<std::string> warnings;
};

/// Reconstructs the (X_A, P_A, X_B, P_B) covariance matrix.
///
/// Throws InconsistentDataError when a covariance exceeds the Cauchy-Schwarz
/// bound sqrt(Var1 Var2) by more than its propagated uncertainty, or when the
/// result is not positive definite. Matrices that are positive definite but
/// violate the uncertainty principle are returned with a warning.
inline Reconstruction reconstruct(const MeasurementSet &ms) {
    ms.validate();
    const double cov_x = covariance_from_difference(ms.var_x_diff, ms.var_xa, ms.var_xb);
    const double cov_p = covariance_from_sum(ms.var_p_sum, ms.var_pa, ms.var_pb);
    const Eigen::Matrix4d unc = propagate_errors(ms);

    auto gate = [](double cov, double v1, double v2, double band, const char *entry) {
        const double margin = std::abs(cov) - std::sqrt(v1 * v2) - band;
        if (margin > 0.0) {
            std::ostringstream msg;
            msg << "inconsistent measurements: |Cov" << entry << "| = " << std::abs(cov)
                << " exceeds sqrt(Var1*Var2) = " << std::sqrt(v1 * v2) << " by more than the error band "
                << band << " (margin " << margin << ")";
            throw InconsistentDataError(entry, margin, msg.str());
        }
    };
    gate(cov_x, ms.var_xa, ms.var_xb, unc(0, 2), "(1,3)");
    gate(cov_p, ms.var_pa, ms.var_pb, unc(1, 3), "(2,4)");

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
    g(0, 0) = ms.var_xa;
    g(1, 1) = ms.var_pa;
    g(2, 2) = ms.var_xb;
    g(3, 3) = ms.var_pb;
    g(0, 2) = g(2, 0) = cov_x;
    g(1, 3) = g(3, 1) = cov_p;

    // Within the band but past the bound: no covariance matrix exists.
    auto pd_check = [](double cov, double v1, double v2, const char *entry) {
        const double margin = std::abs(cov) - std::sqrt(v1 * v2);
        if (margin >= 0.0) {
            throw InconsistentDataError(entry, margin,
                                        std::string("inconsistent measurements: Cov") + entry +
                                            " saturates or exceeds the Cauchy-Schwarz bound; "
                                            "matrix is not positive definite");
        }
    };
    pd_check(cov_x, ms.var_xa, ms.var_xb, "(1,3)");
    pd_check(cov_p, ms.var_pa, ms.var_pb, "(2,4)");

    Reconstruction out{CovarianceMatrix(std::move(g)), unc, {}, {}};
    out.symplectic_eigenvalues = symplectic_eigenvalues(out.gamma);
    const double nu_min = out.symplectic_eigenvalues.back();
    if (nu_min < 1.0 - kPhysicalityTolerance) {
        std::ostringstream msg;
        msg << "smallest symplectic eigenvalue " << nu_min << " is below 1: matrix violates the uncertainty "
            << "principle (rounding or measurement error)";
        out.warnings.push_back(msg.str());
    }
    return out;
}

/// The six campaign quantities of a two-mode state (ignores X-P cross terms).
inline MeasurementSet measure_exact(const CovarianceMatrix &state, double relative_error = 0.0) {
    if (state.n_modes() != 2) {
        throw std::invalid_argument("measure_exact: state must have two modes");
    }
    MeasurementSet ms;
    ms.var_xa = state(0, 0);
    ms.var_pa = state(1, 1);
    ms.var_xb = state(2, 2);
    ms.var_pb = state(3, 3);
    ms.var_x_diff = state(0, 0) + state(2, 2) - 2.0 * state(0, 2);
    ms.var_p_sum = state(1, 1) + state(3, 3) + 2.0 * state(1, 3);
    ms.relative_error = relative_error;
    return ms;
}

}  // namespace cvsteer
