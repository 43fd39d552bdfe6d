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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

#include "zzfb/density_matrix.hpp"
#include "zzfb/sme.hpp"

namespace zzfb {

/// Tr[rho^2].
inline double purity(const DensityMatrix &rho) {
    // Tr[rho^2] = sum_ab |rho_ab|^2 for Hermitian rho.
    return rho.matrix().squaredNorm();
}

/// Sum of r(s)^2 over the nine strings with both factors in {X, Y, Z}.
/// 0 for uncorrelated states, at most 1 for product states, 3 for Bell states.
inline double r2_squared(const PauliTable &t) {
    double acc = 0.0;
    for (int a = 1; a < 4; ++a) {
        for (int b = 1; b < 4; ++b) {
            double r = t.values()[4 * a + b];
            acc += r * r;
        }
    }
    return acc;
}

/// Purity increment in Pauli-coefficient form, with y = ZZ:
///
///   8k ( sum_c (r[ZZ*c] - r[ZZ] r[c])^2 - sum_m (1 - r[ZZ]^2) r[m]^2 ) dt
///   + 4 sqrt(2k) ( sum_c (r[ZZ*c] - r[ZZ] r[c]) r[c] - sum_m r[m]^2 r[ZZ] ) dW
///
/// where c runs over the 8 strings commuting with ZZ, m over the 8
/// anticommuting ones, and r[ZZ*c] is the signed coefficient of the product.
///
/// Evaluated exactly as written. Note that this expression equals
/// d(sum_s r(s)^2) = 4 dP, not dP: the Ito expansion of Tr[rho^2] gives the same
/// bracketed sums with prefactors 2k and sqrt(2k). See purity_increment().
inline double purity_increment_pauli_form(const PauliTable &t, double k, double dt, double dW) {
    using strings::ZZ;
    const double rzz = t[ZZ];
    double drift_c = 0.0;
    double drift_m = 0.0;
    double noise_c = 0.0;
    double noise_m = 0.0;
    for (PauliString s : all_pauli_strings()) {
        double r = t[s];
        if (commutes_with(s, ZZ)) {
            SignedPauliProduct p = pauli_product(ZZ, s);
            double shifted = p.sign() * t[p.string] - rzz * r;
            drift_c += shifted * shifted;
            noise_c += shifted * r;
        } else {
            drift_m += (1.0 - rzz * rzz) * r * r;
            noise_m += r * r * rzz;
        }
    }
    return 8.0 * k * (drift_c - drift_m) * dt + 4.0 * std::sqrt(2.0 * k) * (noise_c - noise_m) * dW;
}

/// Ito increment of Tr[rho^2] itself: the Pauli form divided by the dimension.
inline double purity_increment(const PauliTable &t, double k, double dt, double dW) {
    return purity_increment_pauli_form(t, k, dt, dW) / 4.0;
}

struct DfsWeights {
    double plus = 0;   // Tr[P+ rho], P+ projects on span{|00>, |11>}
    double minus = 0;  // Tr[P- rho], P- projects on span{|01>, |10>}
};

inline DfsWeights dfs_weights(const PauliTable &t) {
    double rzz = t[strings::ZZ];
    return {(1.0 + rzz) / 2.0, (1.0 - rzz) / 2.0};
}

inline double encoded_purity(const EncodedBloch &b) {
    return (1.0 + b.length_squared()) / 2.0;
}

/// Wootters concurrence, clipped to [0, 1].
inline double concurrence(const DensityMatrix &rho) {
    const Matrix4 &m = rho.matrix();
    Matrix4 yy = pauli_matrix(strings::YY);
    Matrix4 flipped = yy * m.conjugate() * yy;

    Eigen::SelfAdjointEigenSolver<Matrix4> es(m);
    Eigen::Vector4d w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Matrix4 root = es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    Matrix4 inner = root * flipped * root;
    inner = (inner + inner.adjoint()) / 2.0;

    Eigen::SelfAdjointEigenSolver<Matrix4> es2(inner, Eigen::EigenvaluesOnly);
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) {
        lam[i] = std::sqrt(std::max(0.0, es2.eigenvalues()[i]));
    }
    std::sort(lam.begin(), lam.end(), std::greater<>());
    double c = lam[0] - lam[1] - lam[2] - lam[3];
    return std::clamp(c, 0.0, 1.0);
}

/// Largest overlap <B|rho|B> over the four Bell states.
inline double bell_fidelity(const DensityMatrix &rho) {
    const Matrix4 &m = rho.matrix();
    // Bell states live on the pairs (|00>,|11>) and (|01>,|10>):
    // <B|rho|B> = (rho_aa + rho_bb)/2 +- Re rho_ab.
    double phi = (m(0, 0).real() + m(3, 3).real()) / 2.0;
    double psi = (m(1, 1).real() + m(2, 2).real()) / 2.0;
    double phi_c = m(0, 3).real();
    double psi_c = m(1, 2).real();
    return std::max({phi + phi_c, phi - phi_c, psi + psi_c, psi - psi_c});
}

/// Per-sample diagnostics of one trajectory.
struct MetricsRow {
    double tau = 0;
    double purity = 0;
    double r2_squared = 0;
    double rzz = 0;
    double enc1_purity = 0;
    double enc2_purity = 0;
    double dfs_weight_plus = 0;
    double concurrence = 0;
    double bell_fidelity = 0;
    double warnings = 0;

    friend bool operator==(const MetricsRow &, const MetricsRow &) = default;
};

/// Field accessors in a fixed order, for aggregation.
inline constexpr std::array<double MetricsRow::*, 9> kMetricFields = {
    &MetricsRow::purity,          &MetricsRow::r2_squared,    &MetricsRow::rzz,
    &MetricsRow::enc1_purity,     &MetricsRow::enc2_purity,   &MetricsRow::dfs_weight_plus,
    &MetricsRow::concurrence,     &MetricsRow::bell_fidelity, &MetricsRow::warnings,
};

inline MetricsRow compute_metrics(const DensityMatrix &rho, double tau, uint64_t warnings = 0) {
    PauliTable t = pauli_expand(rho);
    MetricsRow row;
    row.tau = tau;
    row.purity = purity(rho);
    row.r2_squared = r2_squared(t);
    row.rzz = t[strings::ZZ];
    row.enc1_purity = encoded_purity(encoded_bloch(t, EncodedQubit::one));
    row.enc2_purity = encoded_purity(encoded_bloch(t, EncodedQubit::two));
    row.dfs_weight_plus = dfs_weights(t).plus;
    row.concurrence = concurrence(rho);
    row.bell_fidelity = bell_fidelity(rho);
    row.warnings = static_cast<double>(warnings);
    return row;
}

inline MetricsRow compute_metrics(const TrajectoryState &s) {
    return compute_metrics(s.rho, s.tau, s.warnings);
}

}  // namespace zzfb
