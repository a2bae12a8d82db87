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


#include "qvml/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qvml {

std::string_view optimizer_token(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::sgd: return "sgd";
        case OptimizerKind::sgd_momentum: return "momentum";
        case OptimizerKind::adaptive: return "adaptive";
    }
    return "sgd";
}

OptimizerKind parse_optimizer_kind(std::string_view token) {
    if (token == "sgd") return OptimizerKind::sgd;
    if (token == "momentum") return OptimizerKind::sgd_momentum;
    if (token == "adaptive" || token == "adam") return OptimizerKind::adaptive;
    throw std::invalid_argument("unknown optimizer '" + std::string(token) + "'");
}

OptimizerState::OptimizerState(OptimizerKind k, double lr) : kind(k), learning_rate(lr) {
    if (!(lr > 0) || !std::isfinite(lr)) throw std::invalid_argument("learning rate must be positive");
}

void optimizer_step(OptimizerState& s, Eigen::Ref<Eigen::VectorXd> theta, const Eigen::Ref<const Eigen::VectorXd>& grad) {
    if (grad.size() != theta.size()) {
        throw std::invalid_argument("gradient length " + std::to_string(grad.size()) + " does not match " +
                                    std::to_string(theta.size()) + " parameters");
    }
    if (!grad.allFinite()) throw std::domain_error("non-finite gradient");
    if (!(s.learning_rate > 0)) throw std::invalid_argument("learning rate must be positive");

    switch (s.kind) {
        case OptimizerKind::sgd:
            theta -= s.learning_rate * grad;
            break;
        case OptimizerKind::sgd_momentum:
            if (s.first_moment.size() != theta.size()) s.first_moment = Eigen::VectorXd::Zero(theta.size());
            s.first_moment = s.momentum * s.first_moment + grad;
            theta -= s.learning_rate * s.first_moment;
            break;
        case OptimizerKind::adaptive: {
            if (s.first_moment.size() != theta.size()) {
                s.first_moment = Eigen::VectorXd::Zero(theta.size());
                s.second_moment = Eigen::VectorXd::Zero(theta.size());
            }
            s.first_moment = s.beta1 * s.first_moment + (1 - s.beta1) * grad;
            s.second_moment = s.beta2 * s.second_moment + (1 - s.beta2) * grad.cwiseAbs2();
            const double t = static_cast<double>(s.step_count + 1);
            const double c1 = 1 - std::pow(s.beta1, t);
            const double c2 = 1 - std::pow(s.beta2, t);
            theta.array() -= s.learning_rate * (s.first_moment.array() / c1) /
                             ((s.second_moment.array() / c2).sqrt() + s.epsilon);
            break;
        }
    }
    ++s.step_count;
    if (!theta.allFinite()) throw std::domain_error("optimizer produced non-finite parameters");
}

}  // namespace qvml
