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

// Built-in reference dataset: the published six-measurement campaign of a
// 1064 nm two-mode squeezing experiment at 5 MHz, its reconstructed
// covariance matrix, and the headline numbers derived from it.

#pragma once

#include <array>

#include "cvsteer/gaussian.hpp"
#include "cvsteer/reconstruction.hpp"

namespace cvsteer::reference {

// var_xa, var_pa, var_xb, var_pb, var_x_diff, var_p_sum (vacuum units).
inline constexpr std::array<double, 6> kSixVariances{18.41, 35.49, 17.98, 34.61, 0.21, 0.20};
inline constexpr double kRelativeError = 0.05;

// (X_A, P_A, X_B, P_B); X-P entries were not measured.
inline constexpr double kGamma[4][4] = {
    {18.41, 0.0, 18.09, 0.0},
    {0.0, 35.49, 0.0, -34.95},
    {18.09, 0.0, 17.98, 0.0},
    {0.0, -34.95, 0.0, 34.61},
};

inline constexpr double kReidBGivenA = 0.039;
inline constexpr double kReidAGivenB = 0.041;
inline constexpr double kReidHeadline = 0.041;
inline constexpr double kReidHeadlineError = 0.005;
inline constexpr double kUnitGainProduct = 0.042;
inline constexpr double kDuanSum = 0.41;
inline constexpr double kConditionalUncertaintyRatio = 0.2;  // "one fifth" of vacuum
inline constexpr double kOverallEfficiency = 0.92;
inline constexpr double kPrepEfficiency = 0.95;
inline constexpr double kDetectionEfficiency = 0.97;
inline constexpr double kDetectedSqueezingDb = 10.0;

// Preparation loss budget.
inline constexpr double kResonatorInternalLoss = 0.025;
inline constexpr double kPropagationLoss = 0.01;
inline constexpr double kFringeVisibility = 0.993;

// Detection chain.
inline constexpr double kPhotodiodeQuantumEfficiency = 0.99;
inline constexpr double kDetectionPropagationLoss = 0.006;
inline constexpr double kDarkNoiseClearanceDb = 22.0;

inline constexpr double kFourierFrequencyHz = 5.0e6;
inline constexpr double kRbwHz = 3.0e5;
inline constexpr double kVbwHz = 300.0;

inline CovarianceMatrix gamma() {
    Eigen::MatrixXd g(4, 4);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) g(i, j) = kGamma[i][j];
    }
    return CovarianceMatrix(std::move(g));
}

inline MeasurementSet measurement_set() {
    MeasurementSet ms = MeasurementSet::from_values(kSixVariances, kRelativeError);
    ms.metadata = {{"fourier_frequency_hz", kFourierFrequencyHz},
                   {"rbw_hz", kRbwHz},
                   {"vbw_hz", kVbwHz},
                   {"source", "published"}};
    return ms;
}

}  // namespace cvsteer::reference
