// Copyright 2026 The qvml Authors
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


/**
 * @file
 * Parameter-shift gradients of circuit expectation values and outcome
 * probabilities, with a central finite-difference oracle.
 *
 * Every occurrence of a symbol is shifted by +-pi/2 on its own and the
 * halved differences are summed, so symbols may be reused across layers.
 * Only rx/ry/rz may carry symbols.
 */

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qvml/channels.hpp"
#include "qvml/circuit.hpp"
#include "qvml/observable.hpp"

namespace qvml {

/// Flat real parameter store; names are optional labels.
struct ParamVector {
    Eigen::VectorXd values;
    std::vector<std::string> names;

    ParamVector() = default;
    explicit ParamVector(Eigen::VectorXd v) : values(std::move(v)) {}
    ParamVector(std::initializer_list<double> v) : values(Eigen::VectorXd::Map(v.begin(), static_cast<Eigen::Index>(v.size()))) {}

    Eigen::Index size() const { return values.size(); }
    std::span<const double> span() const { return {values.data(), static_cast<std::size_t>(values.size())}; }
};

class UnsupportedGeneratorError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Throws UnsupportedGeneratorError if a symbol drives anything but rx/ry/rz.
void check_shiftable(const Circuit& c);

/// Expectations of several observables from one execution. A present noise
/// model selects the density-matrix backend.
Eigen::VectorXd expectations(const Circuit& c, std::span<const double> angles,
                             std::span<const Observable> observables,
                             const std::optional<NoiseModel>& noise);

double expectation_value(const Circuit& c, std::span<const double> values, const Observable& obs,
                         const std::optional<NoiseModel>& noise = std::nullopt);

std::vector<double> shift_rule_gradient(const Circuit& c, const ParamVector& theta, const Observable& obs,
                                        const std::optional<NoiseModel>& noise = std::nullopt);

std::vector<double> finite_diff_gradient(const Circuit& c, const ParamVector& theta, const Observable& obs,
                                         const std::optional<NoiseModel>& noise, double h);

/// d<O_k>/d(symbol j) for every observable k (rows) and symbol j (columns).
/// A non-empty `wrt` restricts and orders the columns.
Eigen::MatrixXd shift_rule_jacobian(const Circuit& c, std::span<const double> values,
                                    std::span<const Observable> observables,
                                    const std::optional<NoiseModel>& noise = std::nullopt,
                                    std::span<const int> wrt = {});

/// Basis-outcome probabilities.
Eigen::VectorXd outcome_probabilities(const Circuit& c, std::span<const double> values,
                                      const std::optional<NoiseModel>& noise = std::nullopt);

/// d p_i / d(symbol j): rows are basis outcomes, columns symbols.
Eigen::MatrixXd shift_rule_probability_jacobian(const Circuit& c, std::span<const double> values,
                                                const std::optional<NoiseModel>& noise = std::nullopt,
                                                std::span<const int> wrt = {});

}  // namespace qvml
