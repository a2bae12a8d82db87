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

#include <random>

#include "qvml/circuit.hpp"

namespace qvml {

struct RandomCircuitOptions {
    int max_qubits = 4;
    int max_gates = 30;
    /// Symbols drive rotations when > 0; each rotation picks one of them.
    int max_symbols = 0;
    /// Includes inline noise instructions.
    bool noise = false;
    /// Includes cp and barrier instructions.
    bool full_grammar = false;
};

/// Random circuit over the gate set; qubit count and gate count are drawn
/// uniformly from [1, max_qubits] and [0, max_gates].
Circuit random_circuit(std::mt19937_64& rng, const RandomCircuitOptions& options);

}  // namespace qvml
