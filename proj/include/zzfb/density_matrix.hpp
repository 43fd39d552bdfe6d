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

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "zzfb/pauli.hpp"

namespace zzfb {

inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kPositivitySlack = 1e-9;

/// Raised when a matrix fails the density-matrix checks.
struct InvalidState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// 4x4 Hermitian, unit-trace, positive semidefinite conditional state.
///
/// Construction through `from_matrix` validates all three properties. The
/// integrators build states through `sanitize`, which establishes them by
/// projection and uses `assume_valid`.
class DensityMatrix {
   public:
    DensityMatrix() : m_(Matrix4::Identity() / 4.0) {
    }

    static DensityMatrix from_matrix(const Matrix4 &m) {
        double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (herm > kAlgebraTol) {
            throw InvalidState("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
        }
        Complex tr = m.trace();
        if (std::abs(tr - Complex{1, 0}) > kAlgebraTol) {
            throw InvalidState("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
        }
        Matrix4 h = (m + m.adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<Matrix4> es(h, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPositivitySlack) {
            throw InvalidState("density matrix has eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
        }
        return DensityMatrix(m);
    }

    /// Skips validation. Callers guarantee the invariants.
    static DensityMatrix assume_valid(const Matrix4 &m) {
        return DensityMatrix(m);
    }

    static DensityMatrix maximally_mixed() {
        return DensityMatrix(Matrix4::Identity() / 4.0);
    }

    static DensityMatrix from_pure(const Eigen::Vector4cd &psi) {
        Eigen::Vector4cd v = psi / psi.norm();
        return DensityMatrix(v * v.adjoint());
    }

    /// (|00><00| + |11><11|)/2, fully mixed inside D+.
    static DensityMatrix classically_correlated() {
        Matrix4 m = Matrix4::Zero();
        m(0, 0) = 0.5;
        m(3, 3) = 0.5;
        return DensityMatrix(m);
    }

    /// (|00> + |11>)/sqrt(2).
    static DensityMatrix phi_plus() {
        Eigen::Vector4cd v(1, 0, 0, 1);
        return from_pure(v);
    }

    const Matrix4 &matrix() const {
        return m_;
    }
    Complex operator()(int row, int col) const {
        return m_(row, col);
    }

   private:
    explicit DensityMatrix(const Matrix4 &m) : m_(m) {
    }
    Matrix4 m_;
};

/// Coefficients r(s) = Tr[s rho] for all 16 two-qubit Pauli strings,
/// stored row-major over (first, second) with label order I,X,Y,Z.
class PauliTable {
   public:
    PauliTable() {
        r_.fill(0.0);
        r_[0] = 1.0;
    }

    double operator[](PauliString s) const {
        return r_[s.index()];
    }
    double &operator[](PauliString s) {
        return r_[s.index()];
    }
    const std::array<double, 16> &values() const {
        return r_;
    }
    std::array<double, 16> &values() {
        return r_;
    }

    friend bool operator==(const PauliTable &, const PauliTable &) = default;

   private:
    std::array<double, 16> r_;
};

namespace detail {

inline PauliTable expand_unchecked(const Matrix4 &m) {
    PauliTable t;
    const auto &mono = monomial_table();
    for (int k = 0; k < 16; ++k) {
        // Tr[s m] = sum_a s(a, col(a)) m(col(a), a)
        Complex acc{0, 0};
        for (int a = 0; a < 4; ++a) {
            acc += mono[k].value[a] * m(mono[k].column[a], a);
        }
        t.values()[k] = acc.real();
    }
    return t;
}

}  // namespace detail

inline PauliTable pauli_expand(const DensityMatrix &rho) {
    return detail::expand_unchecked(rho.matrix());
}

/// Expands a raw matrix. Throws InvalidState when the trace is not 1, which
/// indicates a normalization bug upstream.
inline PauliTable pauli_expand(const Matrix4 &m) {
    Complex tr = m.trace();
    if (std::abs(tr - Complex{1, 0}) > kAlgebraTol) {
        throw InvalidState("pauli_expand: trace is " + std::to_string(tr.real()) + ", expected 1");
    }
    return detail::expand_unchecked(m);
}

/// rho = sum_s r(s) s / 4 as a raw matrix (no positivity check).
inline Matrix4 pauli_reconstruct_matrix(const PauliTable &table) {
    Matrix4 m = Matrix4::Zero();
    const auto &mono = monomial_table();
    for (int k = 0; k < 16; ++k) {
        double r = table.values()[k];
        if (r == 0.0) continue;
        for (int a = 0; a < 4; ++a) {
            m(a, mono[k].column[a]) += r * mono[k].value[a];
        }
    }
    return m / 4.0;
}

/// Inverse of pauli_expand. Requires r(II) = 1; the result is validated.
inline DensityMatrix pauli_reconstruct(const PauliTable &table) {
    if (std::abs(table[strings::II] - 1.0) > kAlgebraTol) {
        throw InvalidState("pauli_reconstruct: r(II) must be 1");
    }
    return DensityMatrix::from_matrix(pauli_reconstruct_matrix(table));
}

inline double expectation(const DensityMatrix &rho, PauliString s) {
    const auto &mono = monomial_table()[s.index()];
    Complex acc{0, 0};
    for (int a = 0; a < 4; ++a) {
        acc += mono.value[a] * rho(mono.column[a], a);
    }
    return acc.real();
}

enum class EncodedQubit { one, two };

/// Bloch vector of one of the two encoded qubits.
///   one: (x, y, z) = (r(XZ), r(YI), r(ZZ)), the "which subspace" qubit.
///   two: (x, y, z) = (r(XX), r(XY), r(IZ)), the qubit protected inside D+.
struct EncodedBloch {
    EncodedQubit which = EncodedQubit::one;
    double x = 0;
    double y = 0;
    double z = 0;

    double length_squared() const {
        return x * x + y * y + z * z;
    }
};

inline EncodedBloch encoded_bloch(const PauliTable &t, EncodedQubit which) {
    using namespace strings;
    if (which == EncodedQubit::one) {
        return {which, t[XZ], t[YI], t[ZZ]};
    }
    return {which, t[XX], t[XY], t[IZ]};
}

}  // namespace zzfb
