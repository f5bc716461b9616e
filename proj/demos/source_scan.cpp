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

// Scans the overall efficiency of a symmetric 12 dB source and prints the
// Reid product and Duan sum, as plot-ready CSV.

#include <cstdio>

#include "cvsteer.hpp"

int main() {
    const double r = 0.5 * std::log(cvsteer::db_to_variance(12.0));
    std::printf("xi,reid_b_given_a,duan_sum,detected_squeezing_db\n");
    for (int k = 0; k <= 30; ++k) {
        const double xi = 1.0 - 0.01 * k;
        const auto state = cvsteer::build_epr_source(cvsteer::SourceParams::uniform(r, r, xi));
        const auto report = cvsteer::criteria_report(state);
        const double sq = -cvsteer::variance_to_db(cvsteer::lossy_squeezed_variance(r, xi, -1));
        std::printf("%.2f,%.6f,%.6f,%.3f\n", xi, report.reid_b_given_a, report.duan_sum, sq);
    }
    return 0;
}
