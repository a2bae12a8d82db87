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

#include "qvml/observable.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace qvml {

PauliString& PauliString::set(int qubit, Pauli p) {
    if (qubit < 0 || qubit >= 63) throw std::out_of_range("Pauli qubit index out of range");
    const std::size_t bit = std::size_t{1} << qubit;
    if (at(qubit) == Pauli::Y) --y_count_;
    x_mask_ &= ~bit;
    z_mask_ &= ~bit;
    switch (p) {
        case Pauli::I: break;
        case Pauli::X: x_mask_ |= bit; break;
        case Pauli::Z: z_mask_ |= bit; break;
        case Pauli::Y:
            x_mask_ |= bit;
            z_mask_ |= bit;
            ++y_count_;
            break;
    }
    return *this;
}

Pauli PauliString::at(int qubit) const {
    const bool x = (x_mask_ >> qubit) & 1;
    const bool z = (z_mask_ >> qubit) & 1;
    if (x && z) return Pauli::Y;
    if (x) return Pauli::X;
    if (z) return Pauli::Z;
    return Pauli::I;
}

int PauliString::max_qubit() const {
    const std::size_t m = x_mask_ | z_mask_;
    return m == 0 ? -1 : static_cast<int>(std::bit_width(m)) - 1;
}

std::string PauliString::to_string() const {
    std::string out;
    for (int q = 0; q <= max_qubit(); ++q) {
        const Pauli p = at(q);
        if (p == Pauli::I) continue;
        if (!out.empty()) out += ' ';
        out += "IXYZ"[static_cast<int>(p)];
        out += std::to_string(q);
    }
    return out.empty() ? "I" : out;
}

Observable Observable::z(int qubit) { return Observable(PauliString().set(qubit, Pauli::Z)); }

Observable Observable::zz(int a, int b) {
    return Observable(PauliString().set(a, Pauli::Z).set(b, Pauli::Z));
}

Observable Observable::parse(std::string_view text) {
    PauliString p;
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        const std::string_view ops = "IXYZ";
        const auto kind = ops.find(static_cast<char>(std::toupper(static_cast<unsigned char>(tok[0]))));
        if (kind == std::string_view::npos || tok.size() < 2) {
            throw std::invalid_argument("bad Pauli factor '" + tok + "'");
        }
        int q = -1;
        const auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), q);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || q < 0 || q >= 63) {
            throw std::invalid_argument("bad Pauli factor '" + tok + "'");
        }
        if (p.at(q) != Pauli::I) throw std::invalid_argument("qubit repeated in Pauli product '" + tok + "'");
        p.set(q, static_cast<Pauli>(kind));
    }
    return Observable(p);
}

int Observable::max_qubit() const {
    int m = -1;
    for (const auto& t : terms_) m = std::max(m, t.pauli.max_qubit());
    return m;
}

Observable& Observable::operator+=(const Observable& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

}  // namespace qvml
