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

#pragma once

#include <stdexcept>
#include <string>

namespace cvsteer {

/// Raised when an estimator would divide by a vanishing variance.
class DegenerateInputError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Raised when a set of measured variances cannot come from any covariance
/// matrix (Cauchy-Schwarz violation beyond the propagated error band).
class InconsistentDataError : public std::runtime_error {
   public:
    InconsistentDataError(std::string entry, double margin, const std::string &what)
        : std::runtime_error(what), entry_(std::move(entry)), margin_(margin) {}

    /// Offending matrix entry, e.g. "(1,3)" in 1-based (row,col) notation.
    const std::string &entry() const noexcept { return entry_; }
    /// Amount by which |Cov| exceeds sqrt(Var1*Var2) plus the tolerance band.
    double margin() const noexcept { return margin_; }

   private:
    std::string entry_;
    double margin_;
};

}  // namespace cvsteer
