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

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qvml {

enum class Pauli : std::uint8_t { I, X, Y, Z };

/// Tensor product of single-qubit Paulis, stored as bit masks.
/// X and Y set the flip mask; Z and Y set the sign mask.
class PauliString {
  public:
    PauliString() = default;

    PauliString& set(int qubit, Pauli p);

    std::size_t x_mask() const { return x_mask_; }
    std::size_t z_mask() const { return z_mask_; }
    int y_count() const { return y_count_; }
    /// Highest qubit acted on non-trivially, -1 for the identity.
    int max_qubit() const;
    Pauli at(int qubit) const;

    /// e.g. "X0 Z2"; "I" for the identity.
    std::string to_string() const;

    friend bool operator==(const PauliString&, const PauliString&) = default;

  private:
    std::size_t x_mask_ = 0;
    std::size_t z_mask_ = 0;
    int y_count_ = 0;
};

/// Real linear combination of Pauli strings.
class Observable {
  public:
    struct Term {
        double coefficient;
        PauliString pauli;
    };

    Observable() = default;
    explicit Observable(PauliString p, double coefficient = 1.0) { terms_.push_back({coefficient, p}); }

    static Observable z(int qubit);
    static Observable zz(int a, int b);
    /// Parses "Z0 Z1" style products; factors are whitespace-separated
    /// `<I|X|Y|Z><qubit>` tokens.
    static Observable parse(std::string_view text);

    const std::vector<Term>& terms() const { return terms_; }
    int max_qubit() const;

    Observable& operator+=(const Observable& other);
    friend Observable operator+(Observable a, const Observable& b) { return a += b; }
    friend Observable operator*(double s, Observable o) {
        for (auto& t : o.terms_) t.coefficient *= s;
        return o;
    }

  private:
    std::vector<Term> terms_;
};

}  // namespace qvml
