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

// End-to-end reproduction of the published numbers from the built-in dataset,
// plus the optional dark-noise and input-perturbation studies.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cvsteer/criteria.hpp"
#include "cvsteer/loss_model.hpp"
#include "cvsteer/reconstruction.hpp"
#include "cvsteer/reference_data.hpp"
#include "cvsteer/sampler.hpp"
#include "json.hpp"

namespace cvsteer {

struct ReproRow {
    std::string quantity;
    double reference = 0.0;
    double computed = 0.0;
    double tolerance = 0.0;

    double delta() const { return std::abs(computed - reference); }
    bool pass() const { return delta() <= tolerance; }
};

/// Linear-interpolation quantile of sorted data, q in [0, 1].
inline double quantile_sorted(const std::vector<double> &sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct PerturbationStudy {
    double relative_error = 0.0;
    std::size_t draws = 0;
    std::size_t accepted = 0;
    double median = 0.0;
    double q16 = 0.0;
    double q84 = 0.0;
    double half_width = 0.0;  // (q84 - q16) / 2, the one-sigma-equivalent spread
    double fraction_within_band = 0.0;
    double band_center = reference::kReidBGivenA;
    double band_half_width = reference::kReidHeadlineError;
    std::vector<double> products;  // accepted E^2_{B|A}, in draw order
};

/// Jitters each of the six variances by an independent Gaussian factor
/// (1 + relative_error * z) and re-runs reconstruction and the Reid product.
/// Draws that cannot be a physical state (inconsistent data or symplectic
/// eigenvalue below 1) are rejected.
inline PerturbationStudy perturbation_study(const MeasurementSet &ms, double relative_error, std::size_t draws,
                                            std::uint64_t seed) {
    if (!(relative_error >= 0.0 && relative_error < 1.0)) {
        throw std::invalid_argument("perturbation_study: relative_error must lie in [0, 1)");
    }
    if (draws == 0) throw std::invalid_argument("perturbation_study: draws must be > 0");
    PerturbationStudy study;
    study.relative_error = relative_error;
    study.draws = draws;
    const auto base = ms.values();
    for (std::size_t d = 0; d < draws; ++d) {
        std::mt19937_64 engine(splitmix64(seed + d));
        std::normal_distribution<double> normal;
        std::array<double, 6> v{};
        bool positive = true;
        for (std::size_t k = 0; k < 6; ++k) {
            v[k] = base[k] * (1.0 + relative_error * normal(engine));
            positive = positive && v[k] > 0.0;
        }
        if (!positive) continue;
        try {
            const auto rec = reconstruct(MeasurementSet::from_values(v, ms.relative_error));
            if (!rec.warnings.empty()) continue;
            study.products.push_back(reid_product(rec.gamma, Direction::BGivenA));
        } catch (const InconsistentDataError &) {
            continue;
        }
    }
    study.accepted = study.products.size();
    if (study.accepted == 0) return study;
    std::vector<double> sorted = study.products;
    std::sort(sorted.begin(), sorted.end());
    study.median = quantile_sorted(sorted, 0.5);
    study.q16 = quantile_sorted(sorted, 0.15865525393145707);
    study.q84 = quantile_sorted(sorted, 0.8413447460685429);
    study.half_width = 0.5 * (study.q84 - study.q16);
    const auto within = std::count_if(sorted.begin(), sorted.end(), [&](double x) {
        return std::abs(x - study.band_center) <= study.band_half_width;
    });
    study.fraction_within_band = static_cast<double>(within) / static_cast<double>(study.accepted);
    return study;
}

struct DarkNoiseStudy {
    double clearance_db = 0.0;
    double dark_noise = 0.0;
    std::size_t n_per_setting = 0;
    double reid_clean = 0.0;     // sampled, no dark noise
    double reid_dark = 0.0;      // sampled, same seed, with dark noise
    double shift_sampled = 0.0;  // reid_dark - reid_clean
    double shift_expected = 0.0; // exact: gamma + dark_noise * I vs gamma
};

/// Reruns the campaign with and without detector dark noise on the same seed.
inline DarkNoiseStudy dark_noise_study(const CovarianceMatrix &gamma, double clearance_db, std::size_t n,
                                       std::uint64_t seed) {
    DarkNoiseStudy s;
    s.clearance_db = clearance_db;
    s.dark_noise = dark_noise_from_clearance(clearance_db);
    s.n_per_setting = n;
    const auto clean = reconstruct(measure_campaign(gamma, n, seed, 0.0));
    const auto dark = reconstruct(measure_campaign(gamma, n, seed, s.dark_noise));
    s.reid_clean = reid_product(clean.gamma, Direction::BGivenA);
    s.reid_dark = reid_product(dark.gamma, Direction::BGivenA);
    s.shift_sampled = s.reid_dark - s.reid_clean;
    // Dark noise on every detector output is gamma -> gamma + d*I.
    CovarianceMatrix noisy = gamma;
    for (std::size_t m = 0; m < gamma.n_modes(); ++m) noisy = apply_loss(noisy, LossChannel{m, 1.0, s.dark_noise});
    s.shift_expected = reid_product(reconstruct(measure_exact(noisy)).gamma, Direction::BGivenA) -
                       reid_product(reconstruct(measure_exact(gamma)).gamma, Direction::BGivenA);
    return s;
}

struct ReproOptions {
    std::optional<double> dark_noise_db;
    std::optional<double> perturb;
    std::uint64_t seed = 0;
    std::size_t n = 1'000'000;
    std::size_t draws = 1000;
};

struct ReproReport {
    std::vector<ReproRow> rows;
    CriteriaReport criteria;
    LossFit fit;
    double eta_prep = 0.0;
    std::optional<DarkNoiseStudy> dark_noise;
    std::optional<PerturbationStudy> perturbation;

    bool all_pass() const {
        return std::all_of(rows.begin(), rows.end(), [](const ReproRow &r) { return r.pass(); });
    }
};

inline ReproReport run_repro(const ReproOptions &options = {}) {
    namespace ref = reference;
    ReproReport out;
    const MeasurementSet ms = ref::measurement_set();
    const Reconstruction rec = reconstruct(ms);
    const CovarianceMatrix published = ref::gamma();
    const double rec_error = (rec.gamma.entries() - published.entries()).cwiseAbs().maxCoeff();

    out.criteria = criteria_report(rec.gamma);
    out.fit = fit_efficiency(rec.gamma);
    out.eta_prep = budget_prep_efficiency(ref::kResonatorInternalLoss, ref::kPropagationLoss, ref::kFringeVisibility);
    const auto sq_db = out.fit.detected_squeezing_db();
    const auto &c = out.criteria;

    out.rows = {
        {"reconstruction max |delta| vs published", 0.0, rec_error, 1e-12},
        {"reid_b_given_a", ref::kReidBGivenA, c.reid_b_given_a, 0.001},
        {"reid_a_given_b", ref::kReidAGivenB, c.reid_a_given_b, 0.001},
        {"unit_gain_product (1,-1)", ref::kUnitGainProduct, c.unit_gain_product, 0.001},
        {"duan_sum", ref::kDuanSum, c.duan_sum, 0.01},
        {"optimal g_x B|A", ref::kGamma[0][2] / ref::kGamma[0][0], c.optimal_gains_b_given_a.g_x, 1e-12},
        {"optimal g_p B|A", ref::kGamma[1][3] / ref::kGamma[1][1], c.optimal_gains_b_given_a.g_p, 1e-12},
        {"optimal g_x A|B", ref::kGamma[0][2] / ref::kGamma[2][2], c.optimal_gains_a_given_b.g_x, 1e-12},
        {"optimal g_p A|B", ref::kGamma[1][3] / ref::kGamma[3][3], c.optimal_gains_a_given_b.g_p, 1e-12},
        {"conditional_uncertainty_ratio", ref::kConditionalUncertaintyRatio, c.conditional_uncertainty_ratio, 0.02},
        {"xi (overall efficiency)", ref::kOverallEfficiency, out.fit.xi, 0.04},
        {"eta (preparation budget)", ref::kPrepEfficiency, out.eta_prep, 0.01},
        {"xi/eta (detection efficiency)", ref::kDetectionEfficiency,
         efficiency_decomposition(ref::kOverallEfficiency, ref::kPrepEfficiency), 0.01},
        {"detected squeezing source 1 [dB]", ref::kDetectedSqueezingDb, sq_db[0], 1.0},
        {"detected squeezing source 2 [dB]", ref::kDetectedSqueezingDb, sq_db[1], 1.0},
    };

    if (options.dark_noise_db) {
        out.dark_noise = dark_noise_study(published, *options.dark_noise_db, options.n, options.seed);
        out.rows.push_back({"dark-noise reid shift (sampled vs exact)", out.dark_noise->shift_expected,
                            out.dark_noise->shift_sampled, 5e-4});
    }
    if (options.perturb) {
        out.perturbation = perturbation_study(ms, *options.perturb, options.draws, options.seed);
        // Spread must stay within twice the quoted +-0.005.
        out.rows.push_back({"perturbed reid half-width", ref::kReidHeadlineError, out.perturbation->half_width,
                            ref::kReidHeadlineError});
    }
    return out;
}

inline std::string format_repro_table(const ReproReport &report) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-42s %14s %14s %12s  %s\n", "quantity", "reference", "computed", "|delta|",
                  "status");
    out += line;
    out += std::string(92, '-') + "\n";
    for (const auto &r : report.rows) {
        std::snprintf(line, sizeof line, "%-42s %14.6g %14.6g %12.3g  %s\n", r.quantity.c_str(), r.reference,
                      r.computed, r.delta(), r.pass() ? "PASS" : "FAIL");
        out += line;
    }
    if (report.perturbation) {
        const auto &p = *report.perturbation;
        std::snprintf(line, sizeof line,
                      "perturbation: rel=%.3g accepted %zu/%zu, median %.4f, 68%% interval [%.4f, %.4f], "
                      "within %.3f+-%.3f: %.1f%%\n",
                      p.relative_error, p.accepted, p.draws, p.median, p.q16, p.q84, p.band_center, p.band_half_width,
                      100.0 * p.fraction_within_band);
        out += line;
    }
    if (report.dark_noise) {
        const auto &d = *report.dark_noise;
        std::snprintf(line, sizeof line,
                      "dark noise: %.1f dB clearance (variance %.5f), n=%zu: reid %.5f -> %.5f\n", d.clearance_db,
                      d.dark_noise, d.n_per_setting, d.reid_clean, d.reid_dark);
        out += line;
    }
    out += report.all_pass() ? "all rows within tolerance\n" : "FAILURES present\n";
    return out;
}

inline nlohmann::json repro_to_json(const ReproReport &report) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : report.rows) {
        rows.push_back({{"quantity", r.quantity},
                        {"reference", r.reference},
                        {"computed", r.computed},
                        {"abs_delta", r.delta()},
                        {"tolerance", r.tolerance},
                        {"pass", r.pass()}});
    }
    nlohmann::json j{{"rows", rows}, {"all_pass", report.all_pass()}};
    if (report.perturbation) {
        const auto &p = *report.perturbation;
        j["perturbation"] = {{"relative_error", p.relative_error}, {"draws", p.draws},
                             {"accepted", p.accepted},             {"median", p.median},
                             {"q16", p.q16},                       {"q84", p.q84},
                             {"half_width", p.half_width},         {"fraction_within_band", p.fraction_within_band}};
    }
    if (report.dark_noise) {
        const auto &d = *report.dark_noise;
        j["dark_noise"] = {{"clearance_db", d.clearance_db}, {"dark_noise", d.dark_noise},
                           {"n_per_setting", d.n_per_setting}, {"reid_clean", d.reid_clean},
                           {"reid_dark", d.reid_dark},         {"shift_sampled", d.shift_sampled},
                           {"shift_expected", d.shift_expected}};
    }
    return j;
}

}  // namespace cvsteer
