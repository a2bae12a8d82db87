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
 * Built-in gate matrices. Two-qubit matrices use local index b0 + 2*b1,
 * where b0 is the bit of the first target; for cx/cp the first target is
 * the control.
 */

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>

namespace qvml::gates {

template <typename Real = double>
using Matrix2 = Eigen::Matrix<std::complex<Real>, 2, 2>;
template <typename Real = double>
using Matrix4 = Eigen::Matrix<std::complex<Real>, 4, 4>;

template <typename Real = double>
Matrix2<Real> identity() {
    return Matrix2<Real>::Identity();
}

template <typename Real = double>
Matrix2<Real> hadamard() {
    const Real s = Real{1} / std::sqrt(Real{2});
    Matrix2<Real> m;
    m << s, s, s, -s;
    return m;
}

template <typename Real = double>
Matrix2<Real> pauli_x() {
    Matrix2<Real> m;
    m << 0, 1, 1, 0;
    return m;
}

template <typename Real = double>
Matrix2<Real> pauli_y() {
    using C = std::complex<Real>;
    Matrix2<Real> m;
    m << C{0, 0}, C{0, -1}, C{0, 1}, C{0, 0};
    return m;
}

template <typename Real = double>
Matrix2<Real> pauli_z() {
    Matrix2<Real> m;
    m << 1, 0, 0, -1;
    return m;
}

/// exp(-i theta X / 2)
template <typename Real = double>
Matrix2<Real> rx(Real theta) {
    using C = std::complex<Real>;
    const Real c = std::cos(theta / 2), s = std::sin(theta / 2);
    Matrix2<Real> m;
    m << C{c, 0}, C{0, -s}, C{0, -s}, C{c, 0};
    return m;
}

/// exp(-i theta Y / 2)
template <typename Real = double>
Matrix2<Real> ry(Real theta) {
    const Real c = std::cos(theta / 2), s = std::sin(theta / 2);
    Matrix2<Real> m;
    m << c, -s, s, c;
    return m;
}

/// exp(-i theta Z / 2)
template <typename Real = double>
Matrix2<Real> rz(Real theta) {
    Matrix2<Real> m;
    m << std::polar(Real{1}, -theta / 2), 0, 0, std::polar(Real{1}, theta / 2);
    return m;
}

template <typename Real = double>
Matrix4<Real> cx() {
    Matrix4<Real> m = Matrix4<Real>::Zero();
    // control = bit 0, target = bit 1
    m(0, 0) = 1;
    m(2, 2) = 1;
    m(3, 1) = 1;
    m(1, 3) = 1;
    return m;
}

template <typename Real = double>
Matrix4<Real> cz() {
    Matrix4<Real> m = Matrix4<Real>::Identity();
    m(3, 3) = -1;
    return m;
}

/// diag(1, 1, 1, e^{i lambda})
template <typename Real = double>
Matrix4<Real> cp(Real lambda) {
    Matrix4<Real> m = Matrix4<Real>::Identity();
    m(3, 3) = std::polar(Real{1}, lambda);
    return m;
}

}  // namespace qvml::gates
