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

namespace {

double r_for_antisqueezing(double v_anti, double xi) { return 0.5 * std::log((v_anti - 1.0 + xi) / xi); }

}  // namespace

TEST(LossModel, SqueezedVarianceExample) {
    const double r = -0.5 * std::log(0.0272);
    const double v = lossy_squeezed_variance(r, 0.92, -1);
    EXPECT_NEAR(v, 0.92 * 0.0272 + 0.08, 1e-15);
    EXPECT_NEAR(v, 0.105, 1e-4);
    EXPECT_NEAR(-variance_to_db(v), 9.79, 0.01);
}

TEST(LossModel, AntisqueezingImbalance) {
    const double xi = 0.92;
    const double r1 = r_for_antisqueezing(70.8, xi);
    const double r2 = r_for_antisqueezing(36.6, xi);
    EXPECT_NEAR(lossy_squeezed_variance(r1, xi, +1), 70.8, 1e-12);
    EXPECT_NEAR(variance_to_db(70.8) - variance_to_db(36.6), 2.87, 0.01);

    const auto g = forward_covariance(SourceParams::uniform(r1, r2, xi));
    const double expected_pa = 0.5 * (70.8 + lossy_squeezed_variance(r2, xi, -1));
    EXPECT_NEAR(g.var_p(0), expected_pa, 1e-10);
    EXPECT_NEAR(g.var_p(1), expected_pa, 1e-10);
}

TEST(LossModel, RecoversSyntheticEfficiency) {
    const auto g = forward_covariance(SourceParams::uniform(1.2, 1.0, 0.9));
    const auto fit = fit_efficiency(g);
    EXPECT_TRUE(fit.converged);
    EXPECT_NEAR(fit.xi, 0.9, 1e-4);
    EXPECT_NEAR(fit.r1, 1.2, 1e-3);
    EXPECT_NEAR(fit.r2, 1.0, 1e-3);
    EXPECT_LT(fit.residual, 1e-8);
}

TEST(LossModel, PublishedMatrix) {
    const auto fit = fit_efficiency(reference::gamma());
    EXPECT_TRUE(fit.converged);
    EXPECT_GE(fit.xi, 0.88);
    EXPECT_LE(fit.xi, 0.96);
    EXPECT_NEAR(fit.xi, 0.914949, 1e-5);
    for (double db : fit.detected_squeezing_db()) {
        EXPECT_GE(db, 9.0);
        EXPECT_LE(db, 11.0);
    }
    const auto model = forward_covariance(fit.params());
    EXPECT_NEAR(reid_product(model, Direction::BGivenA), 0.039, 0.15 * 0.039);
    EXPECT_NEAR(reid_product(model, Direction::AGivenB), 0.041, 0.15 * 0.041);
}

TEST(LossModel, PureInputGivesUnitEfficiency) {
    const auto fit = fit_efficiency(forward_covariance(SourceParams::uniform(1.0, 1.0, 1.0)));
    EXPECT_GE(fit.xi, 0.999);
}

TEST(LossModel, EfficiencyDecomposition) {
    EXPECT_NEAR(efficiency_decomposition(0.92, 0.95), 0.968421052631579, 1e-12);
    EXPECT_DOUBLE_EQ(efficiency_decomposition(0.95, 0.95), 1.0);
    EXPECT_THROW(efficiency_decomposition(0.96, 0.95), std::invalid_argument);
    EXPECT_THROW(efficiency_decomposition(0.5, 0.0), std::invalid_argument);
}

TEST(LossModel, LossBudget) {
    EXPECT_NEAR(visibility_loss(0.993), 0.013951, 1e-12);
    const double prep = budget_prep_efficiency(0.025, 0.01, 0.993);
    EXPECT_NEAR(prep, 0.9517838, 1e-6);
    EXPECT_NEAR(prep, 0.952, 5e-4);
    // Detection: photodiode QE, propagation, and homodyne mode matching.
    const double det = budget_prep_efficiency(1.0 - 0.99, 0.006, 0.993);
    EXPECT_NEAR(det, 0.970, 5e-4);
    EXPECT_THROW(budget_prep_efficiency(1.0, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(budget_prep_efficiency(0.0, 0.0, 1.5), std::invalid_argument);
}

TEST(LossModel, RejectsUnsuitableInput) {
    Eigen::MatrixXd unphysical = Eigen::MatrixXd::Identity(4, 4);
    unphysical(0, 0) = unphysical(1, 1) = 0.5;
    EXPECT_THROW(fit_efficiency(CovarianceMatrix(unphysical)), std::invalid_argument);

    Eigen::MatrixXd mixed = 2.0 * Eigen::MatrixXd::Identity(4, 4);
    mixed(0, 1) = mixed(1, 0) = 0.3;
    EXPECT_THROW(fit_efficiency(CovarianceMatrix(mixed)), std::invalid_argument);

    EXPECT_THROW(fit_efficiency(vacuum_state(1)), std::invalid_argument);
}

// Properties.

TEST(LossModelProperties, SteeringWeakensWithLoss) {
    for (double r : {0.3, 0.8, 1.5}) {
        double previous = 0.0;
        for (int k = 100; k >= 50; --k) {
            const double xi = k / 100.0;
            const double reid = reid_product(forward_covariance(SourceParams::uniform(r, r, xi)), Direction::BGivenA);
            EXPECT_GT(reid, previous) << "r=" << r << " xi=" << xi;
            previous = reid;
        }
    }
}

TEST(LossModelProperties, LosslessSymmetricSourceIsPure) {
    for (double r : {0.0, 0.4, 1.1, 2.0}) {
        const auto nu = symplectic_eigenvalues(forward_covariance(SourceParams::uniform(r, r, 1.0)));
        for (double v : nu) EXPECT_NEAR(v, 1.0, 1e-9) << "r=" << r;
    }
}

TEST(LossModelProperties, FitIsIdempotent) {
    const auto first = fit_efficiency(reference::gamma());
    const auto second = fit_efficiency(forward_covariance(first.params()));
    EXPECT_NEAR(second.xi, first.xi, 1e-5);
    EXPECT_NEAR(second.r1, first.r1, 1e-5);
    EXPECT_NEAR(second.r2, first.r2, 1e-5);
}

TEST(LossModelProperties, EfficiencyIsIdentifiable) {
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> r_dist(0.5, 1.8), xi_dist(0.72, 0.99);
    for (int trial = 0; trial < 50; ++trial) {
        const double r1 = r_dist(rng), r2 = r_dist(rng), xi = xi_dist(rng);
        const auto fit = fit_efficiency(forward_covariance(SourceParams::uniform(r1, r2, xi)));
        EXPECT_NEAR(fit.xi, xi, 0.01) << "r1=" << r1 << " r2=" << r2;
    }
}
