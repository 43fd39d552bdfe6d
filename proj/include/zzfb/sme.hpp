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
#include <cstdint>
#include <stdexcept>
#include <string>

#include "zzfb/density_matrix.hpp"

namespace zzfb {

/// Largest k*dt accepted by the steppers.
inline constexpr double kMaxStepRate = 1e-2;

/// Weak measurement of a Pauli-string observable y at strength k.
struct MeasurementModel {
    PauliString observable = strings::ZZ;
    double strength = 1.0;

    MeasurementModel() = default;
    MeasurementModel(PauliString y, double k) : observable(y), strength(k) {
        if (!(k > 0.0)) {
            throw std::invalid_argument("measurement strength must be positive");
        }
        if (y.is_identity()) {
            throw std::invalid_argument("measuring the identity carries no information");
        }
    }
};

enum class StepperKind { euler_maruyama, measurement_operator };

/// Position of a trajectory within a feedback schedule.
enum class Stage : uint8_t { stage1, hold, stage2, done };

struct ScheduleMarker {
    Stage stage = Stage::stage1;
    uint64_t steps_in_stage = 0;
    bool entered = false;

    friend bool operator==(const ScheduleMarker &, const ScheduleMarker &) = default;
};

struct TrajectoryState {
    DensityMatrix rho;
    double tau = 0.0;      // k * t
    double record = 0.0;   // integrated measurement record r(t)
    uint64_t steps = 0;
    uint64_t warnings = 0; // eigenvalue clips performed by sanitize
    ScheduleMarker marker;
};

/// The integrator produced a matrix with non-positive trace.
struct TrajectoryAborted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// y * m for a monomial y.
inline Matrix4 left_apply(const MonomialPauli &y, const Matrix4 &m) {
    Matrix4 out;
    for (int a = 0; a < 4; ++a) {
        out.row(a) = y.value[a] * m.row(y.column[a]);
    }
    return out;
}

// m * y for a monomial y.
inline Matrix4 right_apply(const Matrix4 &m, const MonomialPauli &y) {
    Matrix4 out;
    for (int c = 0; c < 4; ++c) {
        out.col(y.column[c]) = m.col(c) * y.value[c];
    }
    return out;
}

inline void check_step(const MeasurementModel &model, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("time step must be positive");
    }
    if (model.strength * dt > kMaxStepRate) {
        throw std::invalid_argument("k*dt = " + std::to_string(model.strength * dt) + " exceeds the stability guard " +
                                    std::to_string(kMaxStepRate));
    }
}

}  // namespace detail

/// -k [y, [y, rho]] = -2k (rho - y rho y), using y^2 = 1.
inline Matrix4 drift_term(const DensityMatrix &rho, const MeasurementModel &model) {
    const auto &y = monomial_table()[model.observable.index()];
    Matrix4 yry = detail::right_apply(detail::left_apply(y, rho.matrix()), y);
    return -2.0 * model.strength * (rho.matrix() - yry);
}

/// sqrt(2k) (y rho + rho y - 2 <y> rho).
inline Matrix4 innovation_term(const DensityMatrix &rho, const MeasurementModel &model) {
    const auto &y = monomial_table()[model.observable.index()];
    double mean = expectation(rho, model.observable);
    Matrix4 anti = detail::left_apply(y, rho.matrix()) + detail::right_apply(rho.matrix(), y);
    return std::sqrt(2.0 * model.strength) * (anti - 2.0 * mean * rho.matrix());
}

/// dr = <y> dt + dW / sqrt(8k).
inline double record_increment(double expectation_value, const MeasurementModel &model, double dt, double dW) {
    return expectation_value * dt + dW / std::sqrt(8.0 * model.strength);
}

struct SanitizeResult {
    DensityMatrix rho;
    bool clipped = false;
};

/// Projects a raw integrator output back onto the density matrices:
/// Hermitize, renormalize, and clip eigenvalues below -kPositivitySlack.
/// Throws TrajectoryAborted when the trace is not positive.
inline SanitizeResult sanitize(const Matrix4 &raw) {
    Matrix4 h = (raw + raw.adjoint()) / 2.0;
    double tr = h.trace().real();
    if (!(tr > 0.0) || !std::isfinite(tr)) {
        throw TrajectoryAborted("state trace collapsed to " + std::to_string(tr));
    }
    h /= tr;

    // rho + slack*I positive definite <=> every eigenvalue exceeds -slack.
    Eigen::LLT<Matrix4> llt(h + kPositivitySlack * Matrix4::Identity());
    if (llt.info() == Eigen::Success) {
        return {DensityMatrix::assume_valid(h), false};
    }
    Eigen::SelfAdjointEigenSolver<Matrix4> es(h);
    Eigen::Vector4d w = es.eigenvalues();
    if (w.minCoeff() >= -kPositivitySlack) {
        return {DensityMatrix::assume_valid(h), false};
    }
    w = w.cwiseMax(0.0);
    double sum = w.sum();
    if (!(sum > 0.0)) {
        throw TrajectoryAborted("no positive spectral weight left after clipping");
    }
    Matrix4 v = es.eigenvectors();
    Matrix4 clipped = v * (w / sum).cast<Complex>().asDiagonal() * v.adjoint();
    clipped = (clipped + clipped.adjoint()) / 2.0;
    return {DensityMatrix::assume_valid(clipped), true};
}

namespace detail {

inline TrajectoryState advance(const TrajectoryState &state, const Matrix4 &raw, const MeasurementModel &model,
                               double mean, double dt, double dW) {
    SanitizeResult s = sanitize(raw);
    TrajectoryState next = state;
    next.rho = s.rho;
    next.tau = state.tau + model.strength * dt;
    next.record = state.record + record_increment(mean, model, dt, dW);
    next.steps = state.steps + 1;
    next.warnings = state.warnings + (s.clipped ? 1 : 0);
    return next;
}

}  // namespace detail

/// Euler-Maruyama step of drho = -k[y,[y,rho]] dt + sqrt(2k)(y rho + rho y - 2<y> rho) dW.
inline TrajectoryState em_step(const TrajectoryState &state, const MeasurementModel &model, double dt, double dW) {
    detail::check_step(model, dt);
    double mean = expectation(state.rho, model.observable);
    Matrix4 raw = state.rho.matrix() + drift_term(state.rho, model) * dt + innovation_term(state.rho, model) * dW;
    return detail::advance(state, raw, model, mean, dt, dW);
}

/// Measurement-operator step: with rbar = <y> + dW / (sqrt(8k) dt), apply
/// A = exp(-2k dt (rbar - y)^2) and renormalize. Since y^2 = 1 the operator is
/// proportional to cosh(e) + sinh(e) y with e = 4k dt rbar; the scalar
/// prefactor cancels in the normalization.
inline TrajectoryState kraus_step(const TrajectoryState &state, const MeasurementModel &model, double dt, double dW) {
    detail::check_step(model, dt);
    const auto &y = monomial_table()[model.observable.index()];
    double mean = expectation(state.rho, model.observable);
    double rbar = mean + dW / (std::sqrt(8.0 * model.strength) * dt);
    double t = std::tanh(4.0 * model.strength * dt * rbar);
    // A / cosh(e) = 1 + t y
    const Matrix4 &r = state.rho.matrix();
    Matrix4 yr = detail::left_apply(y, r);
    Matrix4 ry = detail::right_apply(r, y);
    Matrix4 yry = detail::right_apply(yr, y);
    Matrix4 raw = r + t * (yr + ry) + (t * t) * yry;
    return detail::advance(state, raw, model, mean, dt, dW);
}

inline TrajectoryState step(StepperKind kind, const TrajectoryState &state, const MeasurementModel &model, double dt,
                            double dW) {
    return kind == StepperKind::euler_maruyama ? em_step(state, model, dt, dW) : kraus_step(state, model, dt, dW);
}

}  // namespace zzfb
