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

// Monte Carlo homodyne sampling.
//
// Determinism: a batch is split into fixed-size chunks of kChunkSize samples.
// Chunk k of a batch with seed s draws from std::mt19937_64 seeded by
// std::seed_seq{lo32(s), hi32(s), k}; normals come from Boost.Random's
// ziggurat normal_distribution. The result therefore does not depend on how
// many worker threads process the chunks.
//
// Campaign seeds: setting k (0..5, canonical order) of a campaign with seed s
// uses splitmix64(s + k + 1) as its batch seed.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/random/normal_distribution.hpp>

#include "cvsteer/gaussian.hpp"
#include "cvsteer/reconstruction.hpp"

namespace cvsteer {

inline constexpr std::size_t kChunkSize = std::size_t{1} << 16;

/// What a homodyne setting measures: a single rotated quadrature, or a
/// weighted combination of both detectors' outputs.
struct MeasurementSetting {
    enum class Kind { SingleQuadrature, JointCombination };

    Kind kind = Kind::SingleQuadrature;
    std::size_t mode = 0;
    double angle_a = 0.0;
    double angle_b = 0.0;
    double c_a = 1.0;
    double c_b = 0.0;
    std::string label;

    static MeasurementSetting single(std::size_t mode, double angle, std::string label = {}) {
        MeasurementSetting s;
        s.kind = Kind::SingleQuadrature;
        s.mode = mode;
        s.angle_a = angle;
        s.label = label.empty() ? "q" + std::to_string(mode) + "(" + std::to_string(angle) + ")" : std::move(label);
        return s;
    }

    static MeasurementSetting joint(double angle_a, double angle_b, double c_a, double c_b, std::string label = {}) {
        if (c_a == 0.0 && c_b == 0.0) {
            throw std::invalid_argument("MeasurementSetting: joint coefficients must not both be zero");
        }
        MeasurementSetting s;
        s.kind = Kind::JointCombination;
        s.angle_a = angle_a;
        s.angle_b = angle_b;
        s.c_a = c_a;
        s.c_b = c_b;
        s.label = label.empty() ? "joint(" + std::to_string(c_a) + "," + std::to_string(c_b) + ")" : std::move(label);
        return s;
    }

    /// Coefficient vector v such that the measured value is v^T q.
    Eigen::VectorXd linear_form(std::size_t n_modes) const {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n_modes));
        if (kind == Kind::SingleQuadrature) {
            detail::check_mode(mode, n_modes);
            v(x_index(mode)) = std::cos(angle_a);
            v(p_index(mode)) = std::sin(angle_a);
        } else {
            if (n_modes != 2) throw std::invalid_argument("MeasurementSetting: joint settings need two modes");
            v(x_index(0)) = c_a * std::cos(angle_a);
            v(p_index(0)) = c_a * std::sin(angle_a);
            v(x_index(1)) = c_b * std::cos(angle_b);
            v(p_index(1)) = c_b * std::sin(angle_b);
        }
        return v;
    }

    /// Squared weights of the detectors contributing dark noise.
    std::vector<double> detector_weights() const {
        if (kind == Kind::SingleQuadrature) return {1.0};
        std::vector<double> w;
        if (c_a != 0.0) w.push_back(c_a * c_a);
        if (c_b != 0.0) w.push_back(c_b * c_b);
        return w;
    }
};

/// The six settings of the reconstruction campaign, in MeasurementSet order.
inline std::array<MeasurementSetting, 6> canonical_settings() {
    constexpr double half_pi = std::numbers::pi / 2;
    return {MeasurementSetting::single(0, 0.0, "xa"),
            MeasurementSetting::single(0, half_pi, "pa"),
            MeasurementSetting::single(1, 0.0, "xb"),
            MeasurementSetting::single(1, half_pi, "pb"),
            MeasurementSetting::joint(0.0, 0.0, 1.0, -1.0, "xa-xb"),
            MeasurementSetting::joint(half_pi, half_pi, 1.0, 1.0, "pa+pb")};
}

struct SampleBatch {
    MeasurementSetting setting;
    std::vector<double> values;
    std::uint64_t seed = 0;
    std::size_t n = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t campaign_setting_seed(std::uint64_t campaign_seed, std::size_t setting_index) {
    return splitmix64(campaign_seed + setting_index + 1);
}

namespace detail {

inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::size_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffULL), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk)};
    return std::mt19937_64(seq);
}

/// Runs fn(chunk_index, begin, end) over all chunks of n samples.
template <typename Fn>
void for_each_chunk(std::size_t n, Fn &&fn) {
    const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), std::size_t{1}, std::max<std::size_t>(chunks, 1));
    auto work = [&](std::size_t w) {
        for (std::size_t c = w; c < chunks; c += workers) {
            fn(c, c * kChunkSize, std::min(n, (c + 1) * kChunkSize));
        }
    };
    if (workers == 1) {
        work(0);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
}

inline void require_physical_two_mode(const CovarianceMatrix &state, const char *what) {
    if (state.n_modes() != 2) {
        throw std::invalid_argument(std::string(what) + ": state must have two modes");
    }
    if (!is_physical(state)) {
        throw std::invalid_argument(std::string(what) + ": state violates the uncertainty principle");
    }
}

}  // namespace detail

/// Draws n homodyne outcomes of the setting's linear form, each with
/// independent detector dark noise of variance `dark_noise` per detector.
inline SampleBatch sample_quadratures(const CovarianceMatrix &state, const MeasurementSetting &setting,
                                      std::size_t n, std::uint64_t seed, double dark_noise = 0.0) {
    detail::require_physical_two_mode(state, "sample_quadratures");
    if (n < 2) throw std::invalid_argument("sample_quadratures: n must be >= 2");
    if (!(dark_noise >= 0.0) || !std::isfinite(dark_noise)) {
        throw std::invalid_argument("sample_quadratures: dark_noise must be finite and >= 0");
    }
    const double sigma = std::sqrt(linear_form_variance(state, setting.linear_form(state.n_modes())));
    std::vector<double> dark_sigma;
    if (dark_noise > 0.0) {
        for (double w : setting.detector_weights()) dark_sigma.push_back(std::sqrt(w * dark_noise));
    }

    SampleBatch batch{setting, std::vector<double>(n), seed, n};
    detail::for_each_chunk(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        // Dark noise has its own stream, so runs with and without it share
        // the signal draws for a given seed.
        auto engine = detail::chunk_engine(seed, chunk);
        auto dark_engine = detail::chunk_engine(splitmix64(~seed), chunk);
        boost::random::normal_distribution<double> normal;
        boost::random::normal_distribution<double> dark_normal;
        for (std::size_t i = begin; i < end; ++i) {
            double value = sigma * normal(engine);
            for (double ds : dark_sigma) value += ds * dark_normal(dark_engine);
            batch.values[i] = value;
        }
    });
    return batch;
}

/// Unbiased estimator sum (x - mean)^2 / (n - 1), two-pass.
inline double sample_variance(const std::vector<double> &values) {
    if (values.size() < 2) throw std::invalid_argument("sample_variance: need at least two samples");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(values.size() - 1);
}

inline double sample_variance(const SampleBatch &batch) { return sample_variance(batch.values); }

/// Symmetric square root gamma^{1/2} via the spectral decomposition.
inline Eigen::MatrixXd symmetric_sqrt(const CovarianceMatrix &state) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(state.entries());
    return solver.eigenvectors() * solver.eigenvalues().cwiseSqrt().asDiagonal() * solver.eigenvectors().transpose();
}

/// n joint draws of all 2N quadratures (rows), q = gamma^{1/2} z.
inline Eigen::MatrixXd sample_joint(const CovarianceMatrix &state, std::size_t n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("sample_joint: n must be >= 2");
    const Eigen::MatrixXd root = symmetric_sqrt(state);
    const auto dim = static_cast<Eigen::Index>(state.dim());
    Eigen::MatrixXd out(static_cast<Eigen::Index>(n), dim);
    detail::for_each_chunk(n, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
        auto engine = detail::chunk_engine(seed, chunk);
        boost::random::normal_distribution<double> normal;
        Eigen::VectorXd z(dim);
        for (std::size_t i = begin; i < end; ++i) {
            for (Eigen::Index k = 0; k < dim; ++k) z(k) = normal(engine);
            out.row(static_cast<Eigen::Index>(i)) = (root * z).transpose();
        }
    });
    return out;
}

/// Six batches of the canonical campaign, seeded per the counter scheme.
inline std::vector<SampleBatch> campaign_batches(const CovarianceMatrix &state, std::size_t n_per_setting,
                                                 std::uint64_t seed, double dark_noise = 0.0) {
    std::vector<SampleBatch> batches;
    const auto settings = canonical_settings();
    for (std::size_t k = 0; k < settings.size(); ++k) {
        batches.push_back(
            sample_quadratures(state, settings[k], n_per_setting, campaign_setting_seed(seed, k), dark_noise));
    }
    return batches;
}

inline MeasurementSet measurement_set_from_batches(const std::vector<SampleBatch> &batches, std::uint64_t seed,
                                                   double dark_noise) {
    if (batches.size() != 6) throw std::invalid_argument("measurement_set_from_batches: need six batches");
    std::array<double, 6> v{};
    for (std::size_t k = 0; k < 6; ++k) v[k] = sample_variance(batches[k]);
    const std::size_t n = batches.front().n;
    MeasurementSet ms = MeasurementSet::from_values(v, std::sqrt(2.0 / static_cast<double>(n)));
    ms.metadata = {{"seed", seed},
                   {"n_per_setting", n},
                   {"dark_noise", dark_noise},
                   {"fourier_frequency_hz", 5.0e6},
                   {"rbw_hz", 3.0e5},
                   {"vbw_hz", 300.0},
                   {"source", "monte_carlo"}};
    return ms;
}

/// Simulates the six-measurement campaign; relative_error = sqrt(2 / n).
inline MeasurementSet measure_campaign(const CovarianceMatrix &state, std::size_t n_per_setting, std::uint64_t seed,
                                       double dark_noise = 0.0) {
    return measurement_set_from_batches(campaign_batches(state, n_per_setting, seed, dark_noise), seed, dark_noise);
}

}  // namespace cvsteer
