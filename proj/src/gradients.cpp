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


#include "qvml/gradients.hpp"

#include <numbers>

namespace qvml {

namespace {

constexpr double kShift = std::numbers::pi / 2;

Eigen::VectorXd probabilities_at(const Circuit& c, std::span<const double> angles,
                                 const std::optional<NoiseModel>& noise) {
    if (noise) return simulate_density(c, angles, *noise).probabilities();
    return simulate_statevector(c, angles).probabilities();
}

/// Calls f(symbol, instruction) for every symbolic instruction.
template <typename F>
void for_each_occurrence(const Circuit& c, F&& f) {
    const auto& insts = c.instructions();
    for (std::size_t i = 0; i < insts.size(); ++i) {
        if (const auto* s = std::get_if<SymbolRef>(&insts[i].angle)) f(static_cast<Eigen::Index>(s->index), i);
    }
}

/// Generic shift-rule derivative of a vector-valued circuit function.
/// Column k is the derivative with respect to symbol wrt[k] (all symbols
/// when `wrt` is empty).
template <typename Eval>
Eigen::MatrixXd shift_jacobian(const Circuit& c, std::span<const double> values, std::span<const int> wrt,
                               Eigen::Index rows, Eval&& eval) {
    check_shiftable(c);
    std::vector<double> angles = resolve_angles(c, values);
    std::vector<Eigen::Index> column(c.num_symbols(), -1);
    if (wrt.empty()) {
        for (std::size_t j = 0; j < column.size(); ++j) column[j] = static_cast<Eigen::Index>(j);
    } else {
        for (std::size_t k = 0; k < wrt.size(); ++k) {
            if (wrt[k] < 0 || static_cast<std::size_t>(wrt[k]) >= column.size()) {
                throw std::out_of_range("differentiation symbol index out of range");
            }
            column[static_cast<std::size_t>(wrt[k])] = static_cast<Eigen::Index>(k);
        }
    }
    const auto cols = static_cast<Eigen::Index>(wrt.empty() ? c.num_symbols() : wrt.size());
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(rows, cols);
    for_each_occurrence(c, [&](Eigen::Index sym, std::size_t inst) {
        const Eigen::Index col = column[static_cast<std::size_t>(sym)];
        if (col < 0) return;
        const double base = angles[inst];
        angles[inst] = base + kShift;
        const Eigen::VectorXd plus = eval(std::span<const double>(angles));
        angles[inst] = base - kShift;
        const Eigen::VectorXd minus = eval(std::span<const double>(angles));
        angles[inst] = base;
        jac.col(col) += 0.5 * (plus - minus);
    });
    return jac;
}

}  // namespace

void check_shiftable(const Circuit& c) {
    for (const auto& inst : c.instructions()) {
        if (std::holds_alternative<SymbolRef>(inst.angle) && !is_rotation(inst.kind)) {
            throw UnsupportedGeneratorError("symbol '" + c.symbols()[std::get<SymbolRef>(inst.angle).index] +
                                            "' drives " + std::string(gate_token(inst.kind)) +
                                            "; the shift rule needs an rx/ry/rz generator");
        }
    }
}

Eigen::VectorXd expectations(const Circuit& c, std::span<const double> angles,
                             std::span<const Observable> observables, const std::optional<NoiseModel>& noise) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(observables.size()));
    if (noise) {
        const DensityMatrix rho = simulate_density(c, angles, *noise);
        for (std::size_t k = 0; k < observables.size(); ++k) out(static_cast<Eigen::Index>(k)) = expectation(rho, observables[k]);
    } else {
        const StateVector psi = simulate_statevector(c, angles);
        for (std::size_t k = 0; k < observables.size(); ++k) out(static_cast<Eigen::Index>(k)) = expectation(psi, observables[k]);
    }
    return out;
}

double expectation_value(const Circuit& c, std::span<const double> values, const Observable& obs,
                         const std::optional<NoiseModel>& noise) {
    const auto angles = resolve_angles(c, values);
    return expectations(c, angles, std::span<const Observable>(&obs, 1), noise)(0);
}

Eigen::MatrixXd shift_rule_jacobian(const Circuit& c, std::span<const double> values,
                                    std::span<const Observable> observables, const std::optional<NoiseModel>& noise,
                                    std::span<const int> wrt) {
    return shift_jacobian(c, values, wrt, static_cast<Eigen::Index>(observables.size()),
                          [&](std::span<const double> a) { return expectations(c, a, observables, noise); });
}

std::vector<double> shift_rule_gradient(const Circuit& c, const ParamVector& theta, const Observable& obs,
                                        const std::optional<NoiseModel>& noise) {
    const Eigen::MatrixXd jac = shift_rule_jacobian(c, theta.span(), std::span<const Observable>(&obs, 1), noise);
    return {jac.data(), jac.data() + jac.size()};
}

std::vector<double> finite_diff_gradient(const Circuit& c, const ParamVector& theta, const Observable& obs,
                                         const std::optional<NoiseModel>& noise, double h) {
    if (!(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
    std::vector<double> values(theta.values.data(), theta.values.data() + theta.values.size());
    std::vector<double> grad(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double base = values[j];
        values[j] = base + h;
        const double plus = expectation_value(c, values, obs, noise);
        values[j] = base - h;
        const double minus = expectation_value(c, values, obs, noise);
        values[j] = base;
        grad[j] = (plus - minus) / (2 * h);
    }
    return grad;
}

Eigen::VectorXd outcome_probabilities(const Circuit& c, std::span<const double> values,
                                      const std::optional<NoiseModel>& noise) {
    return probabilities_at(c, resolve_angles(c, values), noise);
}

Eigen::MatrixXd shift_rule_probability_jacobian(const Circuit& c, std::span<const double> values,
                                                const std::optional<NoiseModel>& noise, std::span<const int> wrt) {
    return shift_jacobian(c, values, wrt, Eigen::Index{1} << c.num_qubits(),
                          [&](std::span<const double> a) { return probabilities_at(c, a, noise); });
}

}  // namespace qvml
