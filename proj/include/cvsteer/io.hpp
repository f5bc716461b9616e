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

// JSON and CSV encodings of the domain types.
//
// Doubles are written in shortest round-trip form (at most 17 significant
// digits), so parsing a written file reproduces every value bit for bit.

#pragma once

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "cvsteer/criteria.hpp"
#include "cvsteer/gaussian.hpp"
#include "cvsteer/loss_model.hpp"
#include "cvsteer/reconstruction.hpp"
#include "cvsteer/sampler.hpp"
#include "cvsteer/source.hpp"
#include "json.hpp"

namespace cvsteer::io {

using nlohmann::json;

inline constexpr const char *kOrdering = "x1p1x2p2";

inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

namespace detail {

inline double number_field(const json &j, const std::string &type, const std::string &field) {
    if (!j.contains(field)) throw std::invalid_argument(type + "." + field + ": missing");
    const json &v = j.at(field);
    if (!v.is_number()) throw std::invalid_argument(type + "." + field + ": expected a number");
    return v.get<double>();
}

inline void reject_unknown(const json &j, const std::string &type, std::initializer_list<const char *> known) {
    for (const auto &[key, _] : j.items()) {
        bool ok = false;
        for (const char *k : known) ok = ok || key == k;
        if (!ok) throw std::invalid_argument(type + "." + key + ": unknown field");
    }
}

inline void require_object(const json &j, const std::string &type) {
    if (!j.is_object()) throw std::invalid_argument(type + ": expected a JSON object");
}

}  // namespace detail

// CovarianceMatrix: {"n_modes", "ordering", "entries"}.

inline json to_json(const CovarianceMatrix &g) {
    json entries = json::array();
    for (std::size_t i = 0; i < g.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < g.dim(); ++j) row.push_back(g(i, j));
        entries.push_back(std::move(row));
    }
    return {{"n_modes", g.n_modes()}, {"ordering", kOrdering}, {"entries", std::move(entries)}};
}

inline CovarianceMatrix covariance_from_json(const json &j) {
    detail::require_object(j, "CovarianceMatrix");
    if (!j.contains("entries") || !j.at("entries").is_array()) {
        throw std::invalid_argument("CovarianceMatrix.entries: expected an array of rows");
    }
    if (j.contains("ordering") && j.at("ordering") != kOrdering) {
        throw std::invalid_argument(std::string("CovarianceMatrix.ordering: only \"") + kOrdering + "\" is supported");
    }
    const json &rows = j.at("entries");
    const std::size_t dim = rows.size();
    if (j.contains("n_modes")) {
        const json &n = j.at("n_modes");
        if (!n.is_number_integer() || n.get<long long>() < 1 || static_cast<std::size_t>(n.get<long long>()) * 2 != dim) {
            throw std::invalid_argument("CovarianceMatrix.n_modes: must be a positive integer equal to half the row count");
        }
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        if (!rows[i].is_array() || rows[i].size() != dim) {
            throw std::invalid_argument("CovarianceMatrix.entries: row " + std::to_string(i) + " must have " +
                                        std::to_string(dim) + " numbers");
        }
        for (std::size_t k = 0; k < dim; ++k) {
            if (!rows[i][k].is_number()) {
                throw std::invalid_argument("CovarianceMatrix.entries: non-numeric value at row " +
                                            std::to_string(i) + ", column " + std::to_string(k));
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k].get<double>();
        }
    }
    return CovarianceMatrix(std::move(m));
}

inline json to_json(const Eigen::Matrix4d &m) {
    json rows = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int k = 0; k < 4; ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

// MeasurementSet.

inline json to_json(const MeasurementSet &ms) {
    return {{"var_xa", ms.var_xa},         {"var_pa", ms.var_pa},       {"var_xb", ms.var_xb},
            {"var_pb", ms.var_pb},         {"var_x_diff", ms.var_x_diff}, {"var_p_sum", ms.var_p_sum},
            {"relative_error", ms.relative_error}, {"metadata", ms.metadata}};
}

inline MeasurementSet measurement_set_from_json(const json &j) {
    detail::require_object(j, "MeasurementSet");
    detail::reject_unknown(j, "MeasurementSet",
                           {"var_xa", "var_pa", "var_xb", "var_pb", "var_x_diff", "var_p_sum", "relative_error",
                            "metadata"});
    MeasurementSet ms;
    std::array<double, 6> v{};
    for (std::size_t k = 0; k < 6; ++k) v[k] = detail::number_field(j, "MeasurementSet", MeasurementSet::kFieldNames[k]);
    ms = MeasurementSet::from_values(v);
    if (j.contains("relative_error")) ms.relative_error = detail::number_field(j, "MeasurementSet", "relative_error");
    if (j.contains("metadata")) {
        if (!j.at("metadata").is_object()) throw std::invalid_argument("MeasurementSet.metadata: expected an object");
        ms.metadata = j.at("metadata");
    }
    ms.validate();
    return ms;
}

inline std::string measurement_csv_header() {
    std::string h;
    for (std::size_t k = 0; k < 6; ++k) {
        if (k) h += ',';
        h += MeasurementSet::kFieldNames[k];
    }
    return h;
}

inline std::string to_csv(const MeasurementSet &ms) {
    std::string out = measurement_csv_header() + "\n";
    const auto v = ms.values();
    for (std::size_t k = 0; k < 6; ++k) {
        if (k) out += ',';
        out += format_double(v[k]);
    }
    return out + "\n";
}

namespace detail {

inline std::vector<std::string> split_csv_line(std::string line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t");
        const auto e = cell.find_last_not_of(" \t");
        cells.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    return cells;
}

inline double parse_double(const std::string &s, const std::string &what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument(what + ": cannot parse '" + s + "' as a number");
    }
    return v;
}

}  // namespace detail

/// Single-row CSV with the six-variance header; columns may come in any order.
inline MeasurementSet measurement_set_from_csv(std::istream &in, double relative_error = 0.05) {
    std::string header_line;
    std::string row_line;
    while (std::getline(in, header_line) && header_line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    while (std::getline(in, row_line) && row_line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    const auto header = detail::split_csv_line(header_line);
    const auto row = detail::split_csv_line(row_line);
    if (header.size() != 6 || row.size() != 6) {
        throw std::invalid_argument("MeasurementSet CSV: expected header " + measurement_csv_header() +
                                    " and one row of six values");
    }
    std::array<double, 6> v{};
    std::array<bool, 6> seen{};
    for (std::size_t c = 0; c < 6; ++c) {
        std::size_t k = 0;
        while (k < 6 && header[c] != MeasurementSet::kFieldNames[k]) ++k;
        if (k == 6) throw std::invalid_argument("MeasurementSet." + header[c] + ": unknown CSV column");
        if (seen[k]) throw std::invalid_argument("MeasurementSet." + header[c] + ": duplicate CSV column");
        seen[k] = true;
        v[k] = detail::parse_double(row[c], std::string("MeasurementSet.") + MeasurementSet::kFieldNames[k]);
    }
    MeasurementSet ms = MeasurementSet::from_values(v, relative_error);
    ms.validate();
    return ms;
}

/// Accepts either encoding; JSON is recognized by a leading '{'.
inline MeasurementSet measurement_set_from_text(const std::string &text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        return measurement_set_from_json(json::parse(text));
    }
    std::istringstream in(text);
    return measurement_set_from_csv(in);
}

// SampleBatch CSV: "setting,value".

inline void write_samples_csv(std::ostream &out, const std::vector<SampleBatch> &batches) {
    out << "setting,value\n";
    for (const auto &b : batches) {
        for (double v : b.values) out << b.setting.label << ',' << format_double(v) << '\n';
    }
}

// CriteriaReport.

inline json to_json(const GainPair &g) { return {{"g_x", g.g_x}, {"g_p", g.g_p}}; }

inline GainPair gain_pair_from_json(const json &j) {
    detail::require_object(j, "GainPair");
    return {detail::number_field(j, "GainPair", "g_x"), detail::number_field(j, "GainPair", "g_p")};
}

inline json to_json(const CriteriaReport &r) {
    const auto &cv = r.conditional_variances;
    return {{"reid_b_given_a", r.reid_b_given_a},
            {"reid_a_given_b", r.reid_a_given_b},
            {"duan_sum", r.duan_sum},
            {"unit_gain_product", r.unit_gain_product},
            {"gains_used", to_json(r.gains_used)},
            {"optimal_gains_b_given_a", to_json(r.optimal_gains_b_given_a)},
            {"optimal_gains_a_given_b", to_json(r.optimal_gains_a_given_b)},
            {"conditional_variances",
             {{"x_b_given_a", cv.x_b_given_a},
              {"p_b_given_a", cv.p_b_given_a},
              {"x_a_given_b", cv.x_a_given_b},
              {"p_a_given_b", cv.p_a_given_b}}},
            {"steering_b_given_a", r.steering_b_given_a},
            {"steering_a_given_b", r.steering_a_given_b},
            {"duan_inseparable", r.duan_inseparable},
            {"conditional_uncertainty_ratio", r.conditional_uncertainty_ratio}};
}

// LossFit.

inline json to_json(const LossFit &f) {
    return {{"xi", f.xi},         {"r1", f.r1}, {"r2", f.r2}, {"residual", f.residual}, {"iterations", f.iterations},
            {"converged", f.converged}};
}

inline LossFit loss_fit_from_json(const json &j) {
    detail::require_object(j, "LossFit");
    LossFit f;
    f.xi = detail::number_field(j, "LossFit", "xi");
    f.r1 = detail::number_field(j, "LossFit", "r1");
    f.r2 = detail::number_field(j, "LossFit", "r2");
    f.residual = detail::number_field(j, "LossFit", "residual");
    f.iterations = j.value("iterations", std::size_t{0});
    f.converged = j.value("converged", false);
    return f;
}

// SourceParams.

inline json to_json(const SourceParams &p) {
    return {{"r1", p.r1},
            {"r2", p.r2},
            {"relative_phase", p.relative_phase},
            {"transmittance", p.transmittance},
            {"eta_prep", p.eta_prep},
            {"eta_det_a", p.eta_det_a},
            {"eta_det_b", p.eta_det_b},
            {"dark_noise", p.dark_noise}};
}

/// Missing fields keep their defaults; unknown or non-numeric fields are errors.
inline SourceParams source_params_from_json(const json &j, SourceParams p = {}) {
    detail::require_object(j, "SourceParams");
    detail::reject_unknown(j, "SourceParams",
                           {"r1", "r2", "relative_phase", "transmittance", "eta_prep", "eta_det_a", "eta_det_b",
                            "dark_noise"});
    auto read = [&](const char *field, double &dst) {
        if (j.contains(field)) dst = detail::number_field(j, "SourceParams", field);
    };
    read("r1", p.r1);
    read("r2", p.r2);
    read("relative_phase", p.relative_phase);
    read("transmittance", p.transmittance);
    read("eta_prep", p.eta_prep);
    read("eta_det_a", p.eta_det_a);
    read("eta_det_b", p.eta_det_b);
    read("dark_noise", p.dark_noise);
    p.validate();
    return p;
}

/// Reconstruction output: the covariance JSON plus its uncertainties,
/// symplectic eigenvalues and physicality warnings.
inline json to_json(const Reconstruction &rec) {
    json j = to_json(rec.gamma);
    j["uncertainties"] = to_json(rec.uncertainties);
    j["symplectic_eigenvalues"] = rec.symplectic_eigenvalues;
    j["warnings"] = rec.warnings;
    return j;
}

}  // namespace cvsteer::io
