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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cvsteer.hpp"
#include "test_support.hpp"

using namespace cvsteer;
using cvsteer::fixtures::kPi;

namespace {

double max_abs_diff(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b) { return (a - b).cwiseAbs().maxCoeff(); }

CovarianceMatrix diag2(double vx, double vp) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
    g(0, 0) = vx;
    g(1, 1) = vp;
    return CovarianceMatrix(g);
}

}  // namespace

TEST(VacuumState, IsIdentity) {
    EXPECT_EQ(vacuum_state(2).entries(), Eigen::MatrixXd::Identity(4, 4));
    EXPECT_EQ(vacuum_state(1).entries(), Eigen::MatrixXd::Identity(2, 2));
    const auto nu = symplectic_eigenvalues(vacuum_state(2));
    ASSERT_EQ(nu.size(), 2u);
    EXPECT_NEAR(nu[0], 1.0, 1e-14);
    EXPECT_NEAR(nu[1], 1.0, 1e-14);
}

TEST(VacuumState, ZeroModesRejected) { EXPECT_THROW(vacuum_state(0), std::invalid_argument); }

TEST(CovarianceMatrix, RejectsAsymmetricAndIndefinite) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(4, 4);
    g(0, 2) = 0.5;
    EXPECT_THROW(CovarianceMatrix{g}, std::invalid_argument);
    g(2, 0) = 0.5;
    EXPECT_NO_THROW(CovarianceMatrix{g});
    g(0, 0) = -1.0;
    EXPECT_THROW(CovarianceMatrix{g}, std::invalid_argument);
    EXPECT_THROW(CovarianceMatrix{Eigen::MatrixXd::Identity(3, 3)}, std::invalid_argument);
}

TEST(Squeezer, TenDecibels) {
    const double r = -0.5 * std::log(0.1);
    EXPECT_NEAR(r, 1.1512925464970227, 1e-15);
    const auto s = apply_symplectic(vacuum_state(1), squeezer(r, 0, 1));
    EXPECT_NEAR(s.var_x(0), 0.1, 1e-15);
    EXPECT_NEAR(s.var_p(0), 10.0, 1e-13);
    EXPECT_NEAR(variance_to_db(s.var_x(0)), -10.0, 1e-12);
}

TEST(Squeezer, ZeroAndInversePair) {
    EXPECT_EQ(squeezer(0.0, 1, 2).matrix(), Eigen::MatrixXd::Identity(4, 4));
    const auto pair = squeezer(0.7, 0, 2) * squeezer(-0.7, 0, 2);
    EXPECT_LT(max_abs_diff(pair.matrix(), Eigen::MatrixXd::Identity(4, 4)), 1e-15);
    EXPECT_THROW(squeezer(0.1, 2, 2), std::invalid_argument);
}

TEST(PhaseShift, QuarterTurnSwapsVariances) {
    const auto rotated = apply_symplectic(diag2(0.3, 4.0), phase_shift(kPi / 2, 0, 1));
    EXPECT_NEAR(rotated.var_x(0), 4.0, 1e-14);
    EXPECT_NEAR(rotated.var_p(0), 0.3, 1e-14);
    // (X, P) -> (P, -X)
    const Eigen::MatrixXd m = phase_shift(kPi / 2, 0, 1).matrix();
    EXPECT_NEAR(m(0, 1), 1.0, 1e-15);
    EXPECT_NEAR(m(1, 0), -1.0, 1e-15);
    EXPECT_EQ(phase_shift(0.0, 0, 1).matrix(), Eigen::MatrixXd::Identity(2, 2));
    const auto twice = phase_shift(kPi, 1, 2) * phase_shift(kPi, 1, 2);
    EXPECT_LT(max_abs_diff(twice.matrix(), Eigen::MatrixXd::Identity(4, 4)), 1e-15);
    EXPECT_THROW(phase_shift(0.1, 3, 2), std::invalid_argument);
}

TEST(Beamsplitter, PassiveOnVacuum) {
    const auto out = apply_symplectic(vacuum_state(2), beamsplitter(0.5, 0, 1, 2));
    EXPECT_LT(max_abs_diff(out.entries(), Eigen::MatrixXd::Identity(4, 4)), 1e-15);
}

TEST(Beamsplitter, Extremes) {
    const auto full = beamsplitter(1.0, 0, 1, 2);
    EXPECT_EQ(full.matrix(), Eigen::MatrixXd::Identity(4, 4));
    const auto none = beamsplitter(0.0, 0, 1, 2);
    EXPECT_LT(none.form_defect(), 1e-15);
    // Zero transmittance swaps the modes up to sign.
    EXPECT_EQ(none.matrix()(0, 2), 1.0);
    EXPECT_EQ(none.matrix()(2, 0), -1.0);
    EXPECT_THROW(beamsplitter(0.5, 1, 1, 2), std::invalid_argument);
    EXPECT_THROW(beamsplitter(1.5, 0, 1, 2), std::invalid_argument);
}

TEST(Beamsplitter, SqueezedCombinations) {
    // X-squeezed on A, P-squeezed on B, equal |r|: Var(X_A - X_B) = Var(P_A + P_B) = 2 e^{-2r}.
    const double r = 0.8;
    auto s = apply_symplectic(vacuum_state(2), squeezer(r, 0, 2));
    s = apply_symplectic(s, squeezer(-r, 1, 2));
    s = apply_symplectic(s, beamsplitter(0.5, 0, 1, 2));
    const double x_diff = s(0, 0) + s(2, 2) - 2 * s(0, 2);
    const double p_sum = s(1, 1) + s(3, 3) + 2 * s(1, 3);
    EXPECT_NEAR(x_diff, 2 * std::exp(-2 * r), 1e-13);
    EXPECT_NEAR(p_sum, 2 * std::exp(-2 * r), 1e-13);
}

TEST(ApplySymplectic, IdentityAndMismatch) {
    std::mt19937_64 rng(7);
    const auto g = fixtures::random_physical_state(rng, 2);
    EXPECT_LT(max_abs_diff(apply_symplectic(g, SymplecticTransform::identity(2)).entries(), g.entries()), 1e-15);
    EXPECT_THROW(apply_symplectic(g, SymplecticTransform::identity(1)), std::invalid_argument);
    const auto there = apply_symplectic(g, squeezer(0.9, 1, 2));
    const auto back = apply_symplectic(there, squeezer(-0.9, 1, 2));
    EXPECT_LT(max_abs_diff(back.entries(), g.entries()), 1e-10);
}

TEST(SymplecticTransform, RejectsNonSymplectic) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2, 2);
    m(0, 0) = 2.0;
    EXPECT_THROW(SymplecticTransform{m}, std::invalid_argument);
}

TEST(ApplyLoss, Examples) {
    const auto g = diag2(0.1, 10.0);
    const auto unchanged = apply_loss(g, {0, 1.0, 0.0});
    EXPECT_EQ(unchanged.entries(), g.entries());
    const auto half = apply_loss(g, {0, 0.5, 0.0});
    EXPECT_NEAR(half.var_x(0), 0.55, 1e-15);
    const auto vac = apply_loss(vacuum_state(2), {1, 0.3, 0.0});
    EXPECT_LT(max_abs_diff(vac.entries(), Eigen::MatrixXd::Identity(4, 4)), 1e-15);
    EXPECT_THROW(apply_loss(g, {0, 1.2, 0.0}), std::invalid_argument);
    EXPECT_THROW(apply_loss(g, {0, 0.5, -0.1}), std::invalid_argument);
    EXPECT_THROW(apply_loss(g, {1, 0.5, 0.0}), std::invalid_argument);
}

TEST(ApplyLoss, CrossTermsScaleBySqrtEta) {
    const auto g = reference::gamma();
    const auto lossy = apply_loss(g, {1, 0.81, 0.01});
    EXPECT_NEAR(lossy(0, 2), 0.9 * 18.09, 1e-12);
    EXPECT_NEAR(lossy(2, 2), 0.81 * 17.98 + 0.19 + 0.01, 1e-12);
    EXPECT_NEAR(lossy(0, 0), 18.41, 0.0);
}

TEST(SymplecticEigenvalues, PublishedMatrixBothRoutes) {
    const auto g = reference::gamma();
    const auto nu = symplectic_eigenvalues(g);
    const auto nu2 = symplectic_eigenvalues_two_mode(g);
    // Frozen from an independent numpy evaluation of eig(Omega * gamma).
    EXPECT_NEAR(nu[0], 2.8182028862551967, 1e-9);
    EXPECT_NEAR(nu[1], 1.7959489112729445, 1e-9);
    EXPECT_NEAR(nu[0], nu2[0], 1e-9);
    EXPECT_NEAR(nu[1], nu2[1], 1e-9);
    EXPECT_TRUE(is_physical(g));
}

TEST(SymplecticEigenvalues, PureStatesSaturate) {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 50; ++k) {
        const auto pure = apply_symplectic(vacuum_state(2), fixtures::random_symplectic(rng, 2));
        for (double v : symplectic_eigenvalues(pure)) EXPECT_NEAR(v, 1.0, 1e-9);
    }
}

TEST(SymplecticEigenvalues, RawMatrixMustBeSymmetric) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(4, 4);
    g(0, 1) = 0.2;
    EXPECT_THROW(symplectic_eigenvalues(g), std::invalid_argument);
}

TEST(QuadratureVariance, Examples) {
    EXPECT_NEAR(quadrature_variance(vacuum_state(2), 1, 0.37), 1.0, 1e-15);
    const auto g = reference::gamma();
    EXPECT_NEAR(quadrature_variance(g, 0, 0.0), 18.41, 1e-14);
    EXPECT_NEAR(quadrature_variance(g, 1, kPi / 2), 34.61, 1e-13);
    EXPECT_THROW(quadrature_variance(g, 2, 0.0), std::invalid_argument);
}

TEST(BuildEprSource, VacuumWhenUnsqueezedAndLossless) {
    const auto g = build_epr_source(SourceParams{});
    EXPECT_LT(max_abs_diff(g.entries(), Eigen::MatrixXd::Identity(4, 4)), 1e-15);
}

TEST(BuildEprSource, LosslessSymmetricCombinations) {
    const double r = 1.1;
    const auto g = build_epr_source(SourceParams::uniform(r, r, 1.0));
    EXPECT_NEAR(g(0, 0) + g(2, 2) - 2 * g(0, 2), 2 * std::exp(-2 * r), 1e-12);
    EXPECT_NEAR(g(1, 1) + g(3, 3) + 2 * g(1, 3), 2 * std::exp(-2 * r), 1e-12);
    EXPECT_GT(g(0, 2), 0.0);
    EXPECT_LT(g(1, 3), 0.0);
}

TEST(BuildEprSource, MatchesIndependentMatrixProduct) {
    // Frozen from an explicit numpy product B R (xi D + (1-xi) I) R^T B^T,
    // r1 = 1.3, r2 = 0.9, xi = 0.85.
    const auto g = build_epr_source(SourceParams::uniform(1.3, 0.9, 0.85));
    EXPECT_NEAR(g(0, 0), 2.7526664431165946, 1e-12);
    EXPECT_NEAR(g(2, 2), 2.7526664431165946, 1e-12);
    EXPECT_NEAR(g(0, 2), 2.5395339016344107, 1e-12);
    EXPECT_NEAR(g(1, 1), 5.9423406923698936, 1e-12);
    EXPECT_NEAR(g(1, 3), -5.6518366373815452, 1e-12);
    EXPECT_NEAR(g(0, 1), 0.0, 1e-12);
}

TEST(BuildEprSource, InvalidParamsNameTheField) {
    SourceParams p;
    p.eta_det_b = 1.2;
    try {
        build_epr_source(p);
        FAIL() << "expected invalid_argument";
    } catch (const std::invalid_argument &e) {
        EXPECT_NE(std::string(e.what()).find("eta_det_b"), std::string::npos);
    }
}

// Properties.

TEST(GaussianProperties, GeneratorsPreserveSymplecticForm) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> t(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        EXPECT_LE(squeezer(u(rng), 1, 3).form_defect(), 1e-12);
        EXPECT_LE(phase_shift(u(rng), 2, 3).form_defect(), 1e-12);
        EXPECT_LE(beamsplitter(t(rng), 0, 2, 3).form_defect(), 1e-12);
    }
}

TEST(GaussianProperties, SymplecticEigenvaluesInvariant) {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 200; ++k) {
        const auto g = fixtures::random_physical_state(rng, 2);
        const auto s = fixtures::random_symplectic(rng, 2, 1);
        const auto before = symplectic_eigenvalues(g);
        const auto after = symplectic_eigenvalues(apply_symplectic(g, s));
        for (std::size_t i = 0; i < before.size(); ++i) {
            EXPECT_NEAR(before[i], after[i], 1e-9 * std::max(1.0, before[i]));
        }
    }
}

TEST(GaussianProperties, LossKeepsStatesPhysical) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> eta(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        auto g = fixtures::random_physical_state(rng, 2);
        g = apply_loss(g, {static_cast<std::size_t>(k % 2), eta(rng), 0.0});
        EXPECT_GE(min_symplectic_eigenvalue(g), 1.0 - 1e-9);
    }
}

TEST(GaussianProperties, PassiveTransformsPreserveEnergy) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> t(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const auto g = fixtures::random_physical_state(rng, 2);
        const double before = g.entries().trace() / 2 - 2;
        const auto bs = apply_symplectic(g, beamsplitter(t(rng), 0, 1, 2));
        const auto ps = apply_symplectic(g, phase_shift(u(rng), 1, 2));
        EXPECT_NEAR(bs.entries().trace() / 2 - 2, before, 1e-10 * std::max(1.0, before));
        EXPECT_NEAR(ps.entries().trace() / 2 - 2, before, 1e-10 * std::max(1.0, before));
    }
}

TEST(GaussianProperties, CompositionMatchesSequentialApplication) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 200; ++k) {
        const auto g = fixtures::random_physical_state(rng, 2);
        const auto s1 = fixtures::random_symplectic(rng, 2, 1);
        const auto s2 = fixtures::random_symplectic(rng, 2, 1);
        const auto a = apply_symplectic(g, s2 * s1);
        const auto b = apply_symplectic(apply_symplectic(g, s1), s2);
        const double scale = std::max(1.0, a.entries().cwiseAbs().maxCoeff());
        EXPECT_LT(max_abs_diff(a.entries(), b.entries()), 1e-10 * scale);
    }
}
