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


#include "qvml/random_circuit.hpp"

#include <numbers>
#include <vector>

namespace qvml {

Circuit random_circuit(std::mt19937_64& rng, const RandomCircuitOptions& options) {
    auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int n = uniform_int(1, options.max_qubits);
    Circuit c(n);
    const int symbols = options.max_symbols > 0 ? uniform_int(1, options.max_symbols) : 0;
    for (int s = 0; s < symbols; ++s) c.declare_symbol("p" + std::to_string(s));

    std::vector<GateKind> kinds{GateKind::h, GateKind::x, GateKind::y, GateKind::z, GateKind::rx, GateKind::ry, GateKind::rz};
    if (n >= 2) {
        kinds.push_back(GateKind::cx);
        kinds.push_back(GateKind::cz);
        if (options.full_grammar) kinds.push_back(GateKind::cp);
    }
    if (options.noise) kinds.push_back(GateKind::noise);
    if (options.full_grammar) kinds.push_back(GateKind::barrier);

    const int gates = uniform_int(0, options.max_gates);
    for (int g = 0; g < gates; ++g) {
        const GateKind k = kinds[static_cast<std::size_t>(uniform_int(0, static_cast<int>(kinds.size()) - 1))];
        const int a = uniform_int(0, n - 1);
        if (k == GateKind::barrier) {
            c.barrier();
        } else if (k == GateKind::noise) {
            constexpr ChannelKind kChannels[] = {ChannelKind::bit_flip, ChannelKind::phase_flip,
                                                 ChannelKind::amplitude_damping, ChannelKind::depolarizing};
            c.noise(kChannels[uniform_int(0, 3)], a, unit(rng));
        } else if (gate_arity(k) == 2) {
            int b = uniform_int(0, n - 2);
            if (b >= a) ++b;
            if (k == GateKind::cp) {
                c.controlled_phase(a, b, angle(rng));
            } else {
                c.gate(k, a, b);
            }
        } else if (is_rotation(k)) {
            if (symbols > 0 && unit(rng) < 0.75) {
                c.rotation(k, a, SymbolRef{uniform_int(0, symbols - 1)});
            } else {
                c.rotation(k, a, angle(rng));
            }
        } else {
            c.gate(k, a);
        }
    }
    return c;
}

}  // namespace qvml
