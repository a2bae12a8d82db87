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
 * Parameterized circuit IR, its line-oriented text format, and execution on
 * the statevector and density-matrix backends.
 *
 * Text format (one instruction per line, `#` starts a comment):
 *
 *     qubits 2
 *     params theta          # optional; fixes symbol order
 *     h 0
 *     cx 0 1
 *     ry 1 theta
 *     cp 0 1 0.785398
 *     noise depol 0 0.05
 *     barrier               # layer boundary for per-layer noise
 */

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qvml/channels.hpp"
#include "qvml/qstate.hpp"

namespace qvml {

enum class GateKind { h, x, y, z, rx, ry, rz, cx, cz, cp, noise, barrier };

std::string_view gate_token(GateKind kind);
std::optional<GateKind> parse_gate_token(std::string_view token);
int gate_arity(GateKind kind);
bool gate_takes_angle(GateKind kind);
bool is_rotation(GateKind kind);

struct SymbolRef {
    int index;
    friend bool operator==(SymbolRef, SymbolRef) = default;
};

using Angle = std::variant<std::monostate, double, SymbolRef>;

struct Instruction {
    GateKind kind;
    std::array<int, 2> targets{0, 0};
    Angle angle{};
    // noise only
    ChannelKind channel = ChannelKind::bit_flip;
    double probability = 0.0;

    std::span<const int> target_span() const {
        return {targets.data(), static_cast<std::size_t>(gate_arity(kind))};
    }
    friend bool operator==(const Instruction&, const Instruction&) = default;
};

class CircuitError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class Circuit {
  public:
    explicit Circuit(int num_qubits);

    int num_qubits() const { return num_qubits_; }
    const std::vector<Instruction>& instructions() const { return instructions_; }
    const std::vector<std::string>& symbols() const { return symbols_; }
    std::size_t num_symbols() const { return symbols_.size(); }

    /// Registers `name` (or returns its existing index).
    SymbolRef symbol(std::string_view name);
    /// Registers `name`; throws if it already exists.
    SymbolRef declare_symbol(std::string_view name);
    std::optional<int> find_symbol(std::string_view name) const;

    Circuit& gate(GateKind kind, int target);
    Circuit& gate(GateKind kind, int a, int b);
    Circuit& rotation(GateKind kind, int target, Angle angle);
    Circuit& controlled_phase(int control, int target, Angle angle);
    Circuit& noise(ChannelKind kind, int target, double probability);
    Circuit& barrier();
    Circuit& append(const Instruction& inst);

    bool has_noise() const;

    friend bool operator==(const Circuit&, const Circuit&) = default;

  private:
    int num_qubits_;
    std::vector<Instruction> instructions_;
    std::vector<std::string> symbols_;
};

/// A circuit with a value for each of its symbols.
class BoundCircuit {
  public:
    BoundCircuit(Circuit circuit, std::vector<double> values);

    const Circuit& circuit() const { return circuit_; }
    const std::vector<double>& values() const { return values_; }

  private:
    Circuit circuit_;
    std::vector<double> values_;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(int line, int column, const std::string& message);
    int line() const { return line_; }
    int column() const { return column_; }

  private:
    int line_;
    int column_;
};

Circuit parse_circuit(std::string_view text);
std::string serialize_circuit(const Circuit& c);

/// Angle per instruction with symbols substituted; 0 where no angle applies.
std::vector<double> resolve_angles(const Circuit& c, std::span<const double> values);

class NoiseInIdealRunError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

struct IdealRunOptions {
    bool ignore_noise = false;
};

/// Statevector execution with one resolved angle per instruction.
StateVector simulate_statevector(const Circuit& c, std::span<const double> angles,
                                 IdealRunOptions options = {});
/// Density-matrix execution: inline noise instructions act where they stand,
/// model entries at barriers (per-layer) and at the end.
DensityMatrix simulate_density(const Circuit& c, std::span<const double> angles, const NoiseModel& nm);

StateVector run_ideal(const BoundCircuit& bc, IdealRunOptions options = {});
DensityMatrix run_noisy(const BoundCircuit& bc, const NoiseModel& nm);

/// Phase estimation of diag(1, e^{2 pi i phase}) with eigenstate |1> on qubit
/// `counting_qubits`; counting qubit j holds bit j of the estimate.
Circuit build_qpe(double eigenphase, int counting_qubits);
/// Appends the exact inverse QFT on qubits [0, m).
void append_inverse_qft(Circuit& c, int m);
/// Appends the exact QFT on qubits [0, m).
void append_qft(Circuit& c, int m);

}  // namespace qvml
