// Copyright 2026 The zzfb Authors
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

#include <cmath>
#include <numbers>

#include "zzfb/density_matrix.hpp"

namespace zzfb {

using Axis = Eigen::Vector3d;

namespace axes {
inline const Axis x{1, 0, 0};
inline const Axis y{0, 1, 0};
inline const Axis z{0, 0, 1};
/// (X + Z)/sqrt(2); a pi rotation about it is the Hadamard gate up to phase.
inline const Axis hadamard{std::numbers::sqrt2 / 2, 0, std::numbers::sqrt2 / 2};
}  // namespace axes

/// Rotation of one physical qubit by `angle` about the unit Bloch axis `axis`:
/// U = exp(-i angle (axis . sigma) / 2). With this convention a rotation by
/// theta about y maps the Bloch pair (x, z) to
/// (x cos(theta) + z sin(theta), z cos(theta) - x sin(theta)).
struct QubitRotation {
    Axis axis = axes::z;
    double angle = 0.0;

    bool is_identity() const {
        return angle == 0.0;
    }

    Matrix2 unitary() const {
        Axis n = axis.normalized();
        Matrix2 generator = n.x() * pauli_matrix(Pauli::X) + n.y() * pauli_matrix(Pauli::Y) +
                            n.z() * pauli_matrix(Pauli::Z);
        const Complex i{0, 1};
        return std::cos(angle / 2) * Matrix2::Identity() - i * std::sin(angle / 2) * generator;
    }
};

/// A local rotation on each physical qubit, applied between measurement steps.
struct ControlAction {
    QubitRotation first;
    QubitRotation second;

    static ControlAction identity() {
        return {};
    }
    static ControlAction on_first(const Axis &axis, double angle) {
        return {{axis, angle}, {}};
    }
    static ControlAction on_second(const Axis &axis, double angle) {
        return {{}, {axis, angle}};
    }

    bool is_identity() const {
        return first.is_identity() && second.is_identity();
    }

    /// Negated angles. The two factors act on different qubits and commute,
    /// so reversing the order is implicit.
    ControlAction inverse() const {
        return {{first.axis, -first.angle}, {second.axis, -second.angle}};
    }

    Matrix4 unitary() const {
        return kron(first.unitary(), second.unitary());
    }
};

inline Matrix4 conjugate(const Matrix4 &rho, const Matrix4 &u) {
    return u * rho * u.adjoint();
}

inline DensityMatrix apply_local_rotation(const DensityMatrix &rho, const ControlAction &action) {
    if (action.is_identity()) {
        return rho;
    }
    Matrix4 out = conjugate(rho.matrix(), action.unitary());
    // Unitary conjugation preserves the invariants; re-symmetrize rounding.
    out = (out + out.adjoint()) / 2.0;
    return DensityMatrix::assume_valid(out);
}

inline const Matrix4 &hadamard_pair() {
    static const Matrix4 hh = [] {
        Matrix2 h;
        h << 1, 1, 1, -1;
        h /= std::sqrt(2.0);
        return kron(h, h);
    }();
    return hh;
}

/// Conjugation by H (x) H. On Pauli coefficients this swaps X and Z labels on
/// each factor and negates each Y factor. It is an involution.
inline DensityMatrix hadamard_frame_toggle(const DensityMatrix &rho) {
    const Matrix4 &hh = hadamard_pair();
    Matrix4 out = hh * rho.matrix() * hh;
    out = (out + out.adjoint()) / 2.0;
    return DensityMatrix::assume_valid(out);
}

}  // namespace zzfb
