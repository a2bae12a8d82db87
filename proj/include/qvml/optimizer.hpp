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


#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string_view>

#include "qvml/gradients.hpp"

namespace qvml {

enum class OptimizerKind { sgd, sgd_momentum, adaptive };

std::string_view optimizer_token(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view token);

/// Plain SGD, heavy-ball momentum (0.9), or first/second-moment adaptive
/// steps (decays 0.9 / 0.999, epsilon 1e-8, bias corrected).
struct OptimizerState {
    OptimizerKind kind = OptimizerKind::sgd;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    Eigen::VectorXd first_moment;
    Eigen::VectorXd second_moment;
    std::int64_t step_count = 0;

    OptimizerState() = default;
    OptimizerState(OptimizerKind k, double lr);
};

/// In-place descent step on `theta`.
void optimizer_step(OptimizerState& state, Eigen::Ref<Eigen::VectorXd> theta, const Eigen::Ref<const Eigen::VectorXd>& grad);

inline void optimizer_step(OptimizerState& state, ParamVector& theta, const Eigen::Ref<const Eigen::VectorXd>& grad) {
    optimizer_step(state, Eigen::Ref<Eigen::VectorXd>(theta.values), grad);
}

}  // namespace qvml
