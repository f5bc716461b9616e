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

// Zero-mean Gaussian states in the covariance-matrix picture.
//
// Quadratures are ordered (X1, P1, X2, P2, ...) and measured in units of the
// vacuum variance, so the vacuum state is the identity and every physical
// state has symplectic eigenvalues >= 1.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvsteer {

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kPhysicalityTolerance = 1e-9;

inline constexpr std::size_t x_index(std::size_t mode) { return 2 * mode; }
inline constexpr std::size_t p_index(std::size_t mode) { return 2 * mode + 1; }

/// Block-diagonal symplectic form with [[0,1],[-1,0]] per mode.
inline Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
        omega(x_index(k), p_index(k)) = 1.0;
        omega(p_index(k), x_index(k)) = -1.0;
    }
    return omega;
}

namespace detail {

inline bool is_symmetric(const Eigen::MatrixXd &m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
            double scale = std::max(1.0, std::abs(m(i, j)));
            if (!(std::abs(m(i, j) - m(j, i)) <= kSymmetryTolerance * scale)) {
                return false;
            }
        }
    }
    return true;
}

inline void check_even_square(const Eigen::MatrixXd &m, const char *what) {
    if (m.rows() == 0 || m.rows() != m.cols() || m.rows() % 2 != 0) {
        throw std::invalid_argument(std::string(what) + ": expected a non-empty 2n x 2n matrix, got " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

inline void check_mode(std::size_t mode, std::size_t n_modes) {
    if (mode >= n_modes) {
        throw std::invalid_argument("mode index " + std::to_string(mode) + " out of range for " +
                                    std::to_string(n_modes) + " modes");
    }
}

}  // namespace detail

/// Covariance matrix of an n-mode zero-mean Gaussian state.
///
/// Construction validates symmetry and positive definiteness; physicality
/// (the uncertainty principle) is a separate, on-demand check because
/// reconstructed experimental matrices may sit just outside the boundary.
class CovarianceMatrix {
   public:
    explicit CovarianceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
        detail::check_even_square(entries_, "CovarianceMatrix");
        if (!entries_.allFinite()) {
            throw std::invalid_argument("CovarianceMatrix: entries must be finite");
        }
        if (!detail::is_symmetric(entries_)) {
            throw std::invalid_argument("CovarianceMatrix: matrix is not symmetric");
        }
        // Store the exactly symmetric part so downstream algebra sees one value per pair.
        entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
        Eigen::LLT<Eigen::MatrixXd> llt(entries_);
        if (llt.info() != Eigen::Success) {
            throw std::invalid_argument("CovarianceMatrix: matrix is not positive definite");
        }
    }

    std::size_t n_modes() const { return static_cast<std::size_t>(entries_.rows() / 2); }
    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Eigen::MatrixXd &entries() const { return entries_; }
    double operator()(std::size_t i, std::size_t j) const {
        return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    double var_x(std::size_t mode) const { return (*this)(x_index(mode), x_index(mode)); }
    double var_p(std::size_t mode) const { return (*this)(p_index(mode), p_index(mode)); }

    bool operator==(const CovarianceMatrix &other) const { return entries_ == other.entries_; }

   private:
    Eigen::MatrixXd entries_;
};

/// Real linear map on quadratures preserving the symplectic form.
class SymplecticTransform {
   public:
    explicit SymplecticTransform(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
        detail::check_even_square(matrix_, "SymplecticTransform");
        if (!matrix_.allFinite()) {
            throw std::invalid_argument("SymplecticTransform: entries must be finite");
        }
        double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
        if (form_defect() > 1e-12 * scale * scale) {
            throw std::invalid_argument("SymplecticTransform: matrix does not preserve the symplectic form");
        }
    }

    static SymplecticTransform identity(std::size_t n_modes) {
        return SymplecticTransform(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
    }

    std::size_t n_modes() const { return static_cast<std::size_t>(matrix_.rows() / 2); }
    const Eigen::MatrixXd &matrix() const { return matrix_; }

    /// max |S Omega S^T - Omega|.
    double form_defect() const {
        Eigen::MatrixXd omega = symplectic_form(n_modes());
        return (matrix_ * omega * matrix_.transpose() - omega).cwiseAbs().maxCoeff();
    }

    /// `second * first` applies `first`, then `second`.
    friend SymplecticTransform operator*(const SymplecticTransform &second, const SymplecticTransform &first) {
        if (second.n_modes() != first.n_modes()) {
            throw std::invalid_argument("SymplecticTransform: composing transforms of different size");
        }
        return SymplecticTransform(second.matrix_ * first.matrix_);
    }

   private:
    Eigen::MatrixXd matrix_;
};

/// Vacuum admixture on one mode plus additive (e.g. electronic) noise.
struct LossChannel {
    std::size_t mode_index = 0;
    double efficiency = 1.0;
    double excess_noise = 0.0;

    void validate() const {
        if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
            throw std::invalid_argument("LossChannel: efficiency must lie in [0, 1]");
        }
        if (!(excess_noise >= 0.0) || !std::isfinite(excess_noise)) {
            throw std::invalid_argument("LossChannel: excess_noise must be finite and >= 0");
        }
    }
};

inline CovarianceMatrix vacuum_state(std::size_t n_modes) {
    if (n_modes == 0) {
        throw std::invalid_argument("vacuum_state: n_modes must be >= 1");
    }
    return CovarianceMatrix(Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

/// Single-mode squeezer: X scaled by e^{-r}, P by e^{+r}. Positive r squeezes X.
inline SymplecticTransform squeezer(double r, std::size_t mode, std::size_t n_modes) {
    if (!std::isfinite(r)) {
        throw std::invalid_argument("squeezer: r must be finite");
    }
    detail::check_mode(mode, n_modes);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    s(x_index(mode), x_index(mode)) = std::exp(-r);
    s(p_index(mode), p_index(mode)) = std::exp(r);
    return SymplecticTransform(std::move(s));
}

/// Rotation of one mode's phase space: theta = pi/2 sends (X, P) to (P, -X).
inline SymplecticTransform phase_shift(double theta, std::size_t mode, std::size_t n_modes) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("phase_shift: theta must be finite");
    }
    detail::check_mode(mode, n_modes);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    const auto x = x_index(mode);
    const auto p = p_index(mode);
    s(x, x) = c;
    s(x, p) = sn;
    s(p, x) = -sn;
    s(p, p) = c;
    return SymplecticTransform(std::move(s));
}

/// Lossless beamsplitter mixing two modes identically in X and P:
///   a' =  t a + r b
///   b' = -r a + t b
/// with t = sqrt(transmittance), r = sqrt(1 - transmittance).
///
/// With an X-squeezed input on `mode_a` and a P-squeezed input on `mode_b`,
/// X_a - X_b and P_a + P_b are the low-noise combinations.
inline SymplecticTransform beamsplitter(double transmittance, std::size_t mode_a, std::size_t mode_b,
                                        std::size_t n_modes) {
    if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
        throw std::invalid_argument("beamsplitter: transmittance must lie in [0, 1]");
    }
    if (mode_a == mode_b) {
        throw std::invalid_argument("beamsplitter: modes must be distinct");
    }
    detail::check_mode(mode_a, n_modes);
    detail::check_mode(mode_b, n_modes);
    const double t = std::sqrt(transmittance);
    const double r = std::sqrt(1.0 - transmittance);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
    for (auto quad : {std::size_t{0}, std::size_t{1}}) {
        const auto a = 2 * mode_a + quad;
        const auto b = 2 * mode_b + quad;
        s(a, a) = t;
        s(a, b) = r;
        s(b, a) = -r;
        s(b, b) = t;
    }
    return SymplecticTransform(std::move(s));
}

inline CovarianceMatrix apply_symplectic(const CovarianceMatrix &state, const SymplecticTransform &s) {
    if (state.n_modes() != s.n_modes()) {
        throw std::invalid_argument("apply_symplectic: dimension mismatch between state (" +
                                    std::to_string(state.n_modes()) + " modes) and transform (" +
                                    std::to_string(s.n_modes()) + " modes)");
    }
    Eigen::MatrixXd out = s.matrix() * state.entries() * s.matrix().transpose();
    return CovarianceMatrix(0.5 * (out + out.transpose()));
}

/// gamma -> eta*gamma + (1 - eta)*I on the channel's mode block, cross terms
/// scaled by sqrt(eta), then excess_noise added to that block's diagonal.
inline CovarianceMatrix apply_loss(const CovarianceMatrix &state, const LossChannel &channel) {
    channel.validate();
    detail::check_mode(channel.mode_index, state.n_modes());
    const auto x = static_cast<Eigen::Index>(x_index(channel.mode_index));
    const auto p = static_cast<Eigen::Index>(p_index(channel.mode_index));
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(state.dim()));
    scale(x) = scale(p) = std::sqrt(channel.efficiency);
    Eigen::MatrixXd out = scale.asDiagonal() * state.entries() * scale.asDiagonal();
    const double added = (1.0 - channel.efficiency) + channel.excess_noise;
    out(x, x) += added;
    out(p, p) += added;
    return CovarianceMatrix(std::move(out));
}

/// Symplectic eigenvalues of a raw symmetric matrix, descending.
inline std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd &gamma) {
    detail::check_even_square(gamma, "symplectic_eigenvalues");
    if (!detail::is_symmetric(gamma)) {
        throw std::invalid_argument("symplectic_eigenvalues: matrix is not symmetric");
    }
    const auto n = static_cast<std::size_t>(gamma.rows() / 2);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(symplectic_form(n) * gamma, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("symplectic_eigenvalues: eigen decomposition failed");
    }
    // Eigenvalues come in pairs +-i*nu; keep one of each pair.
    std::vector<double> moduli;
    moduli.reserve(2 * n);
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
        moduli.push_back(std::abs(solver.eigenvalues()(k)));
    }
    std::sort(moduli.begin(), moduli.end(), std::greater<>());
    std::vector<double> nu;
    nu.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        nu.push_back(0.5 * (moduli[2 * k] + moduli[2 * k + 1]));
    }
    return nu;
}

inline std::vector<double> symplectic_eigenvalues(const CovarianceMatrix &state) {
    return symplectic_eigenvalues(state.entries());
}

/// Two-mode closed form from the local invariants:
///   nu^2 = (Delta +- sqrt(Delta^2 - 4 det gamma)) / 2,
///   Delta = det A + det B + 2 det C for gamma = [[A, C], [C^T, B]].
/// Independent of the eigen-solver route above. Returns {nu_plus, nu_minus}.
inline std::vector<double> symplectic_eigenvalues_two_mode(const CovarianceMatrix &state) {
    if (state.n_modes() != 2) {
        throw std::invalid_argument("symplectic_eigenvalues_two_mode: state must have two modes");
    }
    const Eigen::MatrixXd &g = state.entries();
    const double det_a = g.block<2, 2>(0, 0).determinant();
    const double det_b = g.block<2, 2>(2, 2).determinant();
    const double det_c = g.block<2, 2>(0, 2).determinant();
    const double delta = det_a + det_b + 2.0 * det_c;
    const double det_g = g.determinant();
    const double disc = std::sqrt(std::max(0.0, delta * delta - 4.0 * det_g));
    return {std::sqrt(0.5 * (delta + disc)), std::sqrt(std::max(0.0, 0.5 * (delta - disc)))};
}

inline double min_symplectic_eigenvalue(const CovarianceMatrix &state) {
    return symplectic_eigenvalues(state).back();
}

/// Uncertainty-principle check: all symplectic eigenvalues >= 1 - tolerance.
inline bool is_physical(const CovarianceMatrix &state, double tolerance = kPhysicalityTolerance) {
    return min_symplectic_eigenvalue(state) >= 1.0 - tolerance;
}

/// Variance of cos(angle) X_mode + sin(angle) P_mode.
inline double quadrature_variance(const CovarianceMatrix &state, std::size_t mode, double angle) {
    detail::check_mode(mode, state.n_modes());
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const auto x = x_index(mode);
    const auto p = p_index(mode);
    return c * c * state(x, x) + s * s * state(p, p) + 2.0 * c * s * state(x, p);
}

/// Variance of the linear form v^T q.
inline double linear_form_variance(const CovarianceMatrix &state, const Eigen::VectorXd &v) {
    if (static_cast<std::size_t>(v.size()) != state.dim()) {
        throw std::invalid_argument("linear_form_variance: coefficient vector has wrong length");
    }
    return v.dot(state.entries() * v);
}

/// Variance in units of vacuum from a dB level: +dB is noise above vacuum.
inline double db_to_variance(double db) { return std::pow(10.0, db / 10.0); }
inline double variance_to_db(double variance) { return 10.0 * std::log10(variance); }

/// Additive dark-noise variance for a detector whose electronic floor sits
/// `clearance_db` below the vacuum level.
inline double dark_noise_from_clearance(double clearance_db) { return db_to_variance(-clearance_db); }

}  // namespace cvsteer
