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


#include "qvml/circuit.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "qvml/gates.hpp"

namespace qvml {

namespace {

struct GateInfo {
    GateKind kind;
    std::string_view token;
    int arity;
    bool angle;
};

constexpr GateInfo kGates[] = {
    {GateKind::h, "h", 1, false},   {GateKind::x, "x", 1, false},   {GateKind::y, "y", 1, false},
    {GateKind::z, "z", 1, false},   {GateKind::rx, "rx", 1, true},  {GateKind::ry, "ry", 1, true},
    {GateKind::rz, "rz", 1, true},  {GateKind::cx, "cx", 2, false}, {GateKind::cz, "cz", 2, false},
    {GateKind::cp, "cp", 2, true},  {GateKind::noise, "noise", 1, false},
    {GateKind::barrier, "barrier", 0, false},
};

const GateInfo& info(GateKind kind) {
    for (const auto& g : kGates) {
        if (g.kind == kind) return g;
    }
    throw std::logic_error("unknown gate kind");
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    if (!alpha(s[0])) return false;
    for (char c : s) {
        if (!alpha(c) && !(c >= '0' && c <= '9') && c != '.') return false;
    }
    return true;
}

std::optional<double> parse_number(std::string_view s) {
    double v = 0;
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename State>
void apply_unitary(State& s, const Instruction& inst, double angle) {
    const auto t = inst.target_span();
    switch (inst.kind) {
        case GateKind::h: s.apply(gates::hadamard(), t); break;
        case GateKind::x: s.apply(gates::pauli_x(), t); break;
        case GateKind::y: s.apply(gates::pauli_y(), t); break;
        case GateKind::z: s.apply(gates::pauli_z(), t); break;
        case GateKind::rx: s.apply(gates::rx(angle), t); break;
        case GateKind::ry: s.apply(gates::ry(angle), t); break;
        case GateKind::rz: s.apply(gates::rz(angle), t); break;
        case GateKind::cx: s.apply(gates::cx(), t); break;
        case GateKind::cz: s.apply(gates::cz(), t); break;
        case GateKind::cp: s.apply(gates::cp(angle), t); break;
        case GateKind::noise:
        case GateKind::barrier: break;
    }
}

void check_angles(const Circuit& c, std::span<const double> angles) {
    if (angles.size() != c.instructions().size()) {
        throw CircuitError("expected " + std::to_string(c.instructions().size()) +
                           " resolved angles, got " + std::to_string(angles.size()));
    }
}

}  // namespace

std::string_view gate_token(GateKind kind) { return info(kind).token; }

std::optional<GateKind> parse_gate_token(std::string_view token) {
    for (const auto& g : kGates) {
        if (g.token == token) return g.kind;
    }
    return std::nullopt;
}

int gate_arity(GateKind kind) { return info(kind).arity; }
bool gate_takes_angle(GateKind kind) { return info(kind).angle; }
bool is_rotation(GateKind kind) {
    return kind == GateKind::rx || kind == GateKind::ry || kind == GateKind::rz;
}

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw SizeError("circuit supports 1.." + std::to_string(kMaxQubits) + " qubits, got " +
                        std::to_string(num_qubits));
    }
}

SymbolRef Circuit::symbol(std::string_view name) {
    if (auto i = find_symbol(name)) return {*i};
    return declare_symbol(name);
}

SymbolRef Circuit::declare_symbol(std::string_view name) {
    if (!is_identifier(name)) throw CircuitError("invalid symbol name '" + std::string(name) + "'");
    if (find_symbol(name)) throw CircuitError("symbol '" + std::string(name) + "' declared twice");
    symbols_.emplace_back(name);
    return {static_cast<int>(symbols_.size()) - 1};
}

std::optional<int> Circuit::find_symbol(std::string_view name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i] == name) return static_cast<int>(i);
    }
    return std::nullopt;
}

Circuit& Circuit::append(const Instruction& inst) {
    const int arity = gate_arity(inst.kind);
    detail::check_targets(inst.target_span(), num_qubits_);
    if (arity == 2 && inst.targets[0] == inst.targets[1]) {
        throw CircuitError("two-qubit gate needs distinct targets");
    }
    const bool has_angle = !std::holds_alternative<std::monostate>(inst.angle);
    if (has_angle != gate_takes_angle(inst.kind)) {
        throw CircuitError(std::string(gate_token(inst.kind)) +
                           (has_angle ? " takes no angle" : " needs an angle"));
    }
    if (const auto* s = std::get_if<SymbolRef>(&inst.angle)) {
        if (s->index < 0 || static_cast<std::size_t>(s->index) >= symbols_.size()) {
            throw CircuitError("instruction references unknown symbol");
        }
    }
    if (inst.kind == GateKind::noise) (void)make_channel(inst.channel, inst.probability);
    instructions_.push_back(inst);
    return *this;
}

Circuit& Circuit::gate(GateKind kind, int target) {
    return append(Instruction{kind, {target, 0}, {}});
}

Circuit& Circuit::gate(GateKind kind, int a, int b) { return append(Instruction{kind, {a, b}, {}}); }

Circuit& Circuit::rotation(GateKind kind, int target, Angle angle) {
    if (!is_rotation(kind)) throw CircuitError("rotation() needs rx, ry or rz");
    return append(Instruction{kind, {target, 0}, angle});
}

Circuit& Circuit::controlled_phase(int control, int target, Angle angle) {
    return append(Instruction{GateKind::cp, {control, target}, angle});
}

Circuit& Circuit::noise(ChannelKind kind, int target, double probability) {
    Instruction inst{GateKind::noise, {target, 0}, {}};
    inst.channel = kind;
    inst.probability = probability;
    return append(inst);
}

Circuit& Circuit::barrier() { return append(Instruction{GateKind::barrier, {0, 0}, {}}); }

bool Circuit::has_noise() const {
    for (const auto& i : instructions_) {
        if (i.kind == GateKind::noise) return true;
    }
    return false;
}

BoundCircuit::BoundCircuit(Circuit circuit, std::vector<double> values)
    : circuit_(std::move(circuit)), values_(std::move(values)) {
    if (values_.size() != circuit_.num_symbols()) {
        throw CircuitError("circuit has " + std::to_string(circuit_.num_symbols()) + " symbols but " +
                           std::to_string(values_.size()) + " values were bound");
    }
}

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         message),
      line_(line),
      column_(column) {}

Circuit parse_circuit(std::string_view text) {
    struct Token {
        std::string_view text;
        int column;
    };
    std::optional<Circuit> circuit;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        std::vector<Token> toks;
        for (std::size_t i = 0; i < line.size();) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            const std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i > start) toks.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
        }
        if (toks.empty()) {
            if (end == text.size()) break;
            continue;
        }

        auto fail = [&](const Token& t, const std::string& msg) -> ParseError {
            return ParseError(line_no, t.column, msg);
        };
        auto parse_index = [&](const Token& t, int limit) {
            int v = -1;
            const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || v < 0) {
                throw fail(t, "expected a qubit index, got '" + std::string(t.text) + "'");
            }
            if (v >= limit) {
                throw fail(t, "qubit " + std::to_string(v) + " out of range for " + std::to_string(limit) +
                                  " declared qubits");
            }
            return v;
        };

        if (!circuit) {
            if (toks[0].text != "qubits") throw fail(toks[0], "missing 'qubits N' header");
            if (toks.size() != 2) throw fail(toks[0], "'qubits' takes exactly one count");
            int n = -1;
            const auto& t = toks[1];
            const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
            if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || n < 1 || n > kMaxQubits) {
                throw fail(t, "qubit count must be an integer in 1.." + std::to_string(kMaxQubits));
            }
            circuit.emplace(n);
            continue;
        }
        Circuit& c = *circuit;
        const int n = c.num_qubits();

        if (toks[0].text == "qubits") throw fail(toks[0], "duplicate 'qubits' header");
        if (toks[0].text == "params") {
            for (std::size_t i = 1; i < toks.size(); ++i) {
                if (!is_identifier(toks[i].text)) {
                    throw fail(toks[i], "invalid symbol name '" + std::string(toks[i].text) + "'");
                }
                if (c.find_symbol(toks[i].text)) {
                    throw fail(toks[i], "symbol '" + std::string(toks[i].text) + "' already declared");
                }
                c.declare_symbol(toks[i].text);
            }
            continue;
        }

        const auto kind = parse_gate_token(toks[0].text);
        if (!kind) throw fail(toks[0], "unknown gate '" + std::string(toks[0].text) + "'");

        if (*kind == GateKind::noise) {
            if (toks.size() != 4) throw fail(toks[0], "noise takes <kind> <target> <probability>");
            ChannelKind ck;
            try {
                ck = parse_channel_kind(toks[1].text);
            } catch (const std::invalid_argument&) {
                throw fail(toks[1], "unknown channel '" + std::string(toks[1].text) + "'");
            }
            const int q = parse_index(toks[2], n);
            const auto p = parse_number(toks[3].text);
            if (!p || *p < 0.0 || *p > 1.0) throw fail(toks[3], "noise probability must be a number in [0, 1]");
            c.noise(ck, q, *p);
            continue;
        }

        const int arity = gate_arity(*kind);
        const std::size_t expected = 1 + static_cast<std::size_t>(arity) + (gate_takes_angle(*kind) ? 1 : 0);
        if (toks.size() != expected) {
            throw fail(toks[0], std::string(gate_token(*kind)) + " expects " + std::to_string(expected - 1) +
                                    " argument(s), got " + std::to_string(toks.size() - 1));
        }
        Instruction inst{*kind, {0, 0}, {}};
        for (int a = 0; a < arity; ++a) inst.targets[a] = parse_index(toks[1 + a], n);
        if (arity == 2 && inst.targets[0] == inst.targets[1]) {
            throw fail(toks[2], "two-qubit gate needs distinct targets");
        }
        if (gate_takes_angle(*kind)) {
            const auto& t = toks.back();
            if (auto v = parse_number(t.text)) {
                inst.angle = *v;
            } else if (is_identifier(t.text)) {
                inst.angle = c.symbol(t.text);
            } else {
                throw fail(t, "expected an angle literal or symbol, got '" + std::string(t.text) + "'");
            }
        }
        c.append(inst);
    }
    if (!circuit) throw ParseError(line_no, 1, "missing 'qubits N' header");
    return std::move(*circuit);
}

std::string serialize_circuit(const Circuit& c) {
    std::ostringstream out;
    out << "qubits " << c.num_qubits() << '\n';
    if (!c.symbols().empty()) {
        out << "params";
        for (const auto& s : c.symbols()) out << ' ' << s;
        out << '\n';
    }
    for (const auto& inst : c.instructions()) {
        out << gate_token(inst.kind);
        if (inst.kind == GateKind::noise) {
            out << ' ' << channel_token(inst.channel) << ' ' << inst.targets[0] << ' '
                << format_real(inst.probability) << '\n';
            continue;
        }
        for (int t : inst.target_span()) out << ' ' << t;
        if (const auto* v = std::get_if<double>(&inst.angle)) out << ' ' << format_real(*v);
        if (const auto* s = std::get_if<SymbolRef>(&inst.angle)) out << ' ' << c.symbols()[s->index];
        out << '\n';
    }
    return out.str();
}

std::vector<double> resolve_angles(const Circuit& c, std::span<const double> values) {
    if (values.size() != c.num_symbols()) {
        throw CircuitError("circuit has " + std::to_string(c.num_symbols()) + " symbols but " +
                           std::to_string(values.size()) + " values were given");
    }
    std::vector<double> out(c.instructions().size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const auto& a = c.instructions()[i].angle;
        if (const auto* v = std::get_if<double>(&a)) out[i] = *v;
        if (const auto* s = std::get_if<SymbolRef>(&a)) out[i] = values[static_cast<std::size_t>(s->index)];
    }
    return out;
}

StateVector simulate_statevector(const Circuit& c, std::span<const double> angles, IdealRunOptions options) {
    check_angles(c, angles);
    if (!options.ignore_noise && c.has_noise()) {
        throw NoiseInIdealRunError("circuit contains noise instructions; run it on the noisy backend "
                                   "or set ignore_noise");
    }
    StateVector s = StateVector::zero(c.num_qubits());
    const auto& insts = c.instructions();
    for (std::size_t i = 0; i < insts.size(); ++i) apply_unitary(s, insts[i], angles[i]);
    return s;
}

DensityMatrix simulate_density(const Circuit& c, std::span<const double> angles, const NoiseModel& nm) {
    check_angles(c, angles);
    DensityMatrix rho = DensityMatrix::zero(c.num_qubits());
    const auto& insts = c.instructions();
    for (std::size_t i = 0; i < insts.size(); ++i) {
        const auto& inst = insts[i];
        if (inst.kind == GateKind::noise) {
            apply_channel_inplace(rho, make_channel(inst.channel, inst.probability), inst.targets[0]);
        } else if (inst.kind == GateKind::barrier) {
            nm.apply(rho, NoisePlacement::after_each_layer);
        } else {
            apply_unitary(rho, inst, angles[i]);
        }
    }
    if (insts.empty() || insts.back().kind != GateKind::barrier) {
        nm.apply(rho, NoisePlacement::after_each_layer);
    }
    nm.apply(rho, NoisePlacement::end_of_circuit);
    return rho;
}

StateVector run_ideal(const BoundCircuit& bc, IdealRunOptions options) {
    return simulate_statevector(bc.circuit(), resolve_angles(bc.circuit(), bc.values()), options);
}

DensityMatrix run_noisy(const BoundCircuit& bc, const NoiseModel& nm) {
    return simulate_density(bc.circuit(), resolve_angles(bc.circuit(), bc.values()), nm);
}

namespace {

std::vector<Instruction> qft_instructions(int m) {
    std::vector<Instruction> out;
    auto cx = [&](int a, int b) { out.push_back(Instruction{GateKind::cx, {a, b}, {}}); };
    for (int j = m - 1; j >= 0; --j) {
        out.push_back(Instruction{GateKind::h, {j, 0}, {}});
        for (int l = j - 1; l >= 0; --l) {
            out.push_back(Instruction{GateKind::cp, {l, j}, std::numbers::pi / std::ldexp(1.0, j - l)});
        }
    }
    for (int j = 0; j < m / 2; ++j) {
        const int k = m - 1 - j;
        cx(j, k);
        cx(k, j);
        cx(j, k);
    }
    return out;
}

}  // namespace

void append_qft(Circuit& c, int m) {
    for (const auto& inst : qft_instructions(m)) c.append(inst);
}

void append_inverse_qft(Circuit& c, int m) {
    auto insts = qft_instructions(m);
    for (auto it = insts.rbegin(); it != insts.rend(); ++it) {
        Instruction inst = *it;
        if (auto* v = std::get_if<double>(&inst.angle)) *v = -*v;
        c.append(inst);
    }
}

Circuit build_qpe(double eigenphase, int counting_qubits) {
    if (counting_qubits < 1 || counting_qubits > 8) {
        throw std::out_of_range("QPE supports 1..8 counting qubits, got " + std::to_string(counting_qubits));
    }
    if (!(eigenphase >= 0.0 && eigenphase < 1.0)) {
        throw std::out_of_range("eigenphase must lie in [0, 1)");
    }
    const int m = counting_qubits;
    Circuit c(m + 1);
    c.gate(GateKind::x, m);
    for (int j = 0; j < m; ++j) c.gate(GateKind::h, j);
    for (int j = 0; j < m; ++j) {
        const double lambda = 2.0 * std::numbers::pi * std::fmod(eigenphase * std::ldexp(1.0, j), 1.0);
        c.controlled_phase(j, m, lambda);
    }
    append_inverse_qft(c, m);
    return c;
}

}  // namespace qvml
