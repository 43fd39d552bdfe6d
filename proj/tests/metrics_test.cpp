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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

#include "test_util.hpp"
#include "zzfb/local_ops.hpp"
#include "zzfb/metrics.hpp"
#include "zzfb/sme.hpp"

using namespace zzfb;
using namespace zzfb::strings;

namespace {

// Ito increment of Tr[rho^2] computed directly from the matrix SME:
// dP = 2 Tr[rho drho] + Tr[B^2] dt with drho = A dt + B dW.
double ito_purity_oracle(const DensityMatrix &rho, double k, double dt, double dW) {
    MeasurementModel m(ZZ, k);
    Matrix4 a = drift_term(rho, m);
    Matrix4 b = innovation_term(rho, m);
    Matrix4 drho = a * dt + b * dW;
    return 2.0 * (rho.matrix() * drho).trace().real() + (b * b).trace().real() * dt;
}

DensityMatrix werner(double p) {
    return DensityMatrix::from_matrix(p * DensityMatrix::phi_plus().matrix() + (1 - p) * Matrix4::Identity() / 4.0);
}

DensityMatrix product_00() {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(0) = 1;
    return DensityMatrix::from_pure(v);
}

}  // namespace

TEST(purity, examples) {
    EXPECT_DOUBLE_EQ(purity(DensityMatrix::maximally_mixed()), 0.25);
    EXPECT_DOUBLE_EQ(purity(DensityMatrix::classically_correlated()), 0.5);
    EXPECT_NEAR(purity(DensityMatrix::phi_plus()), 1.0, 1e-15);
}

TEST(purity, equals_quarter_sum_of_squared_coefficients) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        auto rho = test::random_state(rng);
        auto t = pauli_expand(rho);
        double sum = 0;
        for (double r : t.values()) sum += r * r;
        EXPECT_NEAR(purity(rho), sum / 4.0, 1e-12);
        EXPECT_GE(purity(rho), 0.25 - 1e-9);
        EXPECT_LE(purity(rho), 1.0 + 1e-9);
    }
}

TEST(r2_squared, examples) {
    EXPECT_NEAR(r2_squared(pauli_expand(DensityMatrix::phi_plus())), 3.0, 1e-14);
    EXPECT_EQ(r2_squared(pauli_expand(DensityMatrix::maximally_mixed())), 0.0);
    EXPECT_NEAR(r2_squared(pauli_expand(product_00())), 1.0, 1e-15);
}

TEST(r2_squared, bounds_and_local_invariance) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        auto rho = i % 3 ? test::random_state(rng) : test::random_pure_state(rng);
        double r2 = r2_squared(pauli_expand(rho));
        EXPECT_GE(r2, -1e-9);
        EXPECT_LE(r2, 3.0 + 1e-9);
        ControlAction a{{Axis(n(rng), n(rng), n(rng)).normalized(), n(rng)},
                        {Axis(n(rng), n(rng), n(rng)).normalized(), n(rng)}};
        EXPECT_NEAR(r2_squared(pauli_expand(apply_local_rotation(rho, a))), r2, 1e-10);
    }
}

TEST(r2_squared, at_most_one_for_product_states) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        // Tensor product of two random single-qubit states.
        auto a = test::random_state(rng).matrix().topLeftCorner<2, 2>().eval();
        auto b = test::random_state(rng).matrix().bottomRightCorner<2, 2>().eval();
        a /= a.trace();
        b /= b.trace();
        Matrix4 m;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) m.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
        auto rho = DensityMatrix::from_matrix((m + m.adjoint()) / 2.0);
        EXPECT_LE(r2_squared(pauli_expand(rho)), 1.0 + 1e-12);
        EXPECT_LT(concurrence(rho), 1e-7);
    }
}

TEST(purity_increment, dfs_states_do_not_change) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 20; ++i) {
        auto t = pauli_expand(test::random_dfs_plus_state(rng));
        for (double dW : {-0.01, 0.0, 0.02}) {
            EXPECT_NEAR(purity_increment_pauli_form(t, 1.0, 1e-4, dW), 0.0, 1e-14);
            EXPECT_NEAR(purity_increment(t, 1.0, 1e-4, dW), 0.0, 1e-14);
        }
    }
}

TEST(purity_increment, maximally_mixed_example) {
    auto t = pauli_expand(DensityMatrix::maximally_mixed());
    // Literal Pauli form: 8k dt, no innovation.
    EXPECT_NEAR(purity_increment_pauli_form(t, 1.0, 1e-4, 0.0), 8e-4, 1e-18);
    EXPECT_NEAR(purity_increment_pauli_form(t, 2.0, 1e-4, 0.05), 16e-4, 1e-18);
    // The direct Ito oracle gives 2k dt.
    EXPECT_NEAR(ito_purity_oracle(DensityMatrix::maximally_mixed(), 1.0, 1e-4, 0.0), 2e-4, 1e-18);
    EXPECT_NEAR(purity_increment(t, 1.0, 1e-4, 0.0), 2e-4, 1e-18);
}

TEST(purity_increment, pauli_form_is_four_times_the_ito_oracle) {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    const double dt = 1e-6;
    for (int i = 0; i < 1000; ++i) {
        auto rho = test::random_state(rng);
        auto t = pauli_expand(rho);
        double k = 0.5 + std::abs(n(rng));
        double dW = std::sqrt(dt) * n(rng);
        double oracle = ito_purity_oracle(rho, k, dt, dW);
        ASSERT_LE(std::abs(purity_increment(t, k, dt, dW) - oracle), 1e-8 * std::abs(oracle) + 1e-18);
        ASSERT_LE(std::abs(purity_increment_pauli_form(t, k, dt, dW) - 4.0 * oracle), 4e-8 * std::abs(oracle) + 1e-18);
    }
}

TEST(purity_increment, drift_and_noise_parts_separately) {
    std::mt19937_64 rng(6);
    for (int i = 0; i < 100; ++i) {
        auto rho = test::random_state(rng);
        auto t = pauli_expand(rho);
        double drift = ito_purity_oracle(rho, 1.0, 1.0, 0.0);
        double noise = ito_purity_oracle(rho, 1.0, 0.0, 1.0);
        EXPECT_NEAR(purity_increment(t, 1.0, 1.0, 0.0), drift, 1e-12);
        EXPECT_NEAR(purity_increment(t, 1.0, 0.0, 1.0), noise, 1e-12);
    }
}

TEST(purity_increment, finite_step_residual_is_three_halves_order) {
    std::mt19937_64 rng(7);
    std::bernoulli_distribution coin;
    MeasurementModel m(ZZ, 1.0);
    double coarse = 0, fine = 0;
    for (int i = 0; i < 200; ++i) {
        TrajectoryState s;
        s.rho = test::random_state(rng);
        auto t = pauli_expand(s.rho);
        double sign = coin(rng) ? 1.0 : -1.0;
        for (double dt : {1e-5, 5e-6}) {
            double dW = sign * std::sqrt(dt);
            double actual = purity(em_step(s, m, dt, dW).rho) - purity(s.rho);
            double res = std::abs(actual - purity_increment(t, 1.0, dt, dW));
            (dt == 1e-5 ? coarse : fine) += res;
        }
    }
    EXPECT_GE(coarse / fine, 2.5);
}

TEST(dfs_weights, examples) {
    PauliTable t;
    t[ZZ] = 1.0;
    EXPECT_EQ(dfs_weights(t).plus, 1.0);
    EXPECT_EQ(dfs_weights(t).minus, 0.0);
    auto mm = dfs_weights(pauli_expand(DensityMatrix::maximally_mixed()));
    EXPECT_EQ(mm.plus, 0.5);
    EXPECT_EQ(mm.minus, 0.5);
    t[ZZ] = 0.6;
    EXPECT_DOUBLE_EQ(dfs_weights(t).plus, 0.8);
    EXPECT_DOUBLE_EQ(dfs_weights(t).minus, 0.2);
}

TEST(dfs_weights, are_projector_traces_and_sum_to_one) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 100; ++i) {
        auto rho = test::random_state(rng);
        auto w = dfs_weights(pauli_expand(rho));
        EXPECT_EQ(w.plus + w.minus, 1.0);
        double p = rho(0, 0).real() + rho(3, 3).real();
        EXPECT_NEAR(w.plus, p, 1e-14);
    }
}

TEST(encoded_purity, examples) {
    EXPECT_EQ(encoded_purity({EncodedQubit::one, 0, 0, 0}), 0.5);
    EXPECT_EQ(encoded_purity({EncodedQubit::one, 1, 0, 0}), 1.0);
    EXPECT_NEAR(encoded_purity({EncodedQubit::two, 0.6, 0, 0.8}), 1.0, 1e-15);
}

TEST(concurrence, examples) {
    EXPECT_NEAR(concurrence(DensityMatrix::phi_plus()), 1.0, 1e-7);
    EXPECT_NEAR(concurrence(product_00()), 0.0, 1e-7);
    EXPECT_NEAR(concurrence(DensityMatrix::classically_correlated()), 0.0, 1e-12);
    EXPECT_EQ(concurrence(DensityMatrix::maximally_mixed()), 0.0);
}

TEST(concurrence, pure_state_closed_form) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        Eigen::Vector4cd v;
        for (int j = 0; j < 4; ++j) v(j) = Complex{n(rng), n(rng)};
        v.normalize();
        double expected = 2.0 * std::abs(v(0) * v(3) - v(1) * v(2));
        EXPECT_NEAR(concurrence(DensityMatrix::from_pure(v)), expected, 1e-6);
    }
}

TEST(concurrence, werner_states) {
    for (double p : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0}) {
        EXPECT_NEAR(concurrence(werner(p)), std::max(0.0, (3 * p - 1) / 2), 1e-7) << p;
    }
}

TEST(concurrence, pure_states_satisfy_r2_equals_one_plus_twice_c_squared) {
    std::mt19937_64 rng(10);
    for (int i = 0; i < 1000; ++i) {
        auto rho = test::random_pure_state(rng);
        double c = concurrence(rho);
        EXPECT_NEAR(r2_squared(pauli_expand(rho)), 1.0 + 2.0 * c * c, 1e-6);
    }
}

TEST(concurrence, mixed_entangled_state_can_have_r2_below_one) {
    // p Phi+ + (1 - p)|01><01| has C = p and R2^2 = 6p^2 - 4p + 1.
    const double p = 1.0 / 3.0;
    Matrix4 m = p * DensityMatrix::phi_plus().matrix();
    m(1, 1) += 1.0 - p;
    auto rho = DensityMatrix::from_matrix(m);
    EXPECT_NEAR(concurrence(rho), p, 1e-7);
    EXPECT_NEAR(r2_squared(pauli_expand(rho)), 1.0 / 3.0, 1e-14);
}

TEST(concurrence, entanglement_implies_r2_above_one_inside_the_stage2_manifold) {
    // States on span{Phi+, Psi+}: the manifold the stage-2 controller keeps.
    std::mt19937_64 rng(12);
    std::normal_distribution<double> n(0.0, 1.0);
    const double s = 1.0 / std::numbers::sqrt2;
    Eigen::Vector4cd phi, psi;
    phi << s, 0, 0, s;
    psi << 0, s, s, 0;
    int entangled = 0;
    for (int i = 0; i < 1000; ++i) {
        Eigen::Matrix2cd g;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) g(a, b) = Complex{n(rng), n(rng)};
        Eigen::Matrix2cd small = g * g.adjoint();
        small /= small.trace();
        Eigen::Matrix<Complex, 4, 2> basis;
        basis << phi, psi;
        Matrix4 m = basis * small * basis.adjoint();
        auto rho = DensityMatrix::from_matrix((m + m.adjoint()) / 2.0);
        if (concurrence(rho) > 1e-6) {
            ++entangled;
            EXPECT_GT(r2_squared(pauli_expand(rho)), 1.0);
        }
    }
    EXPECT_GT(entangled, 100);
}

TEST(bell_fidelity, examples) {
    EXPECT_NEAR(bell_fidelity(DensityMatrix::phi_plus()), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(bell_fidelity(DensityMatrix::maximally_mixed()), 0.25);
    EXPECT_DOUBLE_EQ(bell_fidelity(DensityMatrix::classically_correlated()), 0.5);
}

TEST(bell_fidelity, matches_explicit_overlaps) {
    const double s = 1.0 / std::numbers::sqrt2;
    std::array<Eigen::Vector4cd, 4> bells;
    bells[0] << s, 0, 0, s;
    bells[1] << s, 0, 0, -s;
    bells[2] << 0, s, s, 0;
    bells[3] << 0, s, -s, 0;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        auto rho = test::random_state(rng);
        double best = 0;
        for (const auto &b : bells) best = std::max(best, (b.adjoint() * rho.matrix() * b)(0, 0).real());
        EXPECT_NEAR(bell_fidelity(rho), best, 1e-14);
    }
}

TEST(compute_metrics, row_for_phi_plus) {
    auto row = compute_metrics(DensityMatrix::phi_plus(), 0.25, 3);
    EXPECT_EQ(row.tau, 0.25);
    EXPECT_NEAR(row.purity, 1.0, 1e-15);
    EXPECT_NEAR(row.r2_squared, 3.0, 1e-14);
    EXPECT_NEAR(row.rzz, 1.0, 1e-15);
    EXPECT_NEAR(row.enc1_purity, 1.0, 1e-15);
    EXPECT_NEAR(row.enc2_purity, 1.0, 1e-15);
    EXPECT_NEAR(row.dfs_weight_plus, 1.0, 1e-15);
    EXPECT_NEAR(row.concurrence, 1.0, 1e-7);
    EXPECT_NEAR(row.bell_fidelity, 1.0, 1e-15);
    EXPECT_EQ(row.warnings, 3.0);
}
