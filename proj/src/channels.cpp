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


#include "qvml/channels.hpp"

namespace qvml {

std::string_view channel_token(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::bit_flip: return "bitflip";
        case ChannelKind::phase_flip: return "phaseflip";
        case ChannelKind::amplitude_damping: return "damp";
        case ChannelKind::depolarizing: return "depol";
        case ChannelKind::custom: return "custom";
    }
    return "custom";
}

ChannelKind parse_channel_kind(std::string_view token) {
    if (token == "bitflip") return ChannelKind::bit_flip;
    if (token == "phaseflip") return ChannelKind::phase_flip;
    if (token == "damp") return ChannelKind::amplitude_damping;
    if (token == "depol") return ChannelKind::depolarizing;
    throw std::invalid_argument("unknown channel kind '" + std::string(token) + "'");
}

std::string_view placement_token(NoisePlacement p) {
    return p == NoisePlacement::end_of_circuit ? "end" : "layer";
}

NoisePlacement parse_placement(std::string_view token) {
    if (token == "end") return NoisePlacement::end_of_circuit;
    if (token == "layer") return NoisePlacement::after_each_layer;
    throw std::invalid_argument("unknown noise placement '" + std::string(token) + "'");
}

NoiseModel::NoiseModel(std::vector<NoiseEntry> entries) : entries_(std::move(entries)) {
    channels_.reserve(entries_.size());
    for (const auto& e : entries_) {
        if (e.kind == ChannelKind::custom) throw std::invalid_argument("noise model entries need a named channel");
        channels_.push_back(make_channel(e.kind, e.parameter));
    }
}

NoiseModel NoiseModel::flip(double p, NoisePlacement placement) {
    return NoiseModel({{ChannelKind::bit_flip, p, placement, {}}, {ChannelKind::phase_flip, p, placement, {}}});
}

NoiseModel NoiseModel::single(ChannelKind kind, double p, NoisePlacement placement) {
    return NoiseModel({{kind, p, placement, {}}});
}

void NoiseModel::apply(DensityMatrix& rho, NoisePlacement placement) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.placement != placement) continue;
        if (e.qubits.empty()) {
            for (int q = 0; q < rho.num_qubits(); ++q) apply_channel_inplace(rho, channels_[i], q);
        } else {
            for (int q : e.qubits) apply_channel_inplace(rho, channels_[i], q);
        }
    }
}

}  // namespace qvml
