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
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "zzfb/local_ops.hpp"
#include "zzfb/metrics.hpp"
#include "zzfb/sme.hpp"

namespace zzfb {

enum class PolicyKind { none, stage1, stage2, full_schedule, dfs_hold, local_purify_demo };

inline std::string_view to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::none: return "none";
        case PolicyKind::stage1: return "stage1";
        case PolicyKind::stage2: return "stage2";
        case PolicyKind::full_schedule: return "full_schedule";
        case PolicyKind::dfs_hold: return "dfs_hold";
        case PolicyKind::local_purify_demo: return "local_purify_demo";
    }
    return "?";
}

inline std::optional<PolicyKind> parse_policy_kind(std::string_view s) {
    for (auto k : {PolicyKind::none, PolicyKind::stage1, PolicyKind::stage2, PolicyKind::full_schedule,
                   PolicyKind::dfs_hold, PolicyKind::local_purify_demo}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

/// Largest stage-1 exit impurity that still leaves an encoded Bloch length of
/// 0.9, the precondition of stage1_finalize: (1 - 0.9^2) / 2.
inline constexpr double kMaxStage1Impurity = 0.095;

struct StageSchedule {
    double stage1_impurity = 0.005;  // exit when 1 - encoded-1 purity <= this
    double hold_tau = 0.0;           // DFS hold duration between the stages
    double stage2_r2sq = 2.9;        // stage-2 exit threshold on R2^2

    void validate() const {
        if (!(stage1_impurity > 0.0 && stage1_impurity < 1.0)) {
            throw std::invalid_argument("stage1 impurity threshold must lie in (0, 1)");
        }
        if (stage1_impurity > kMaxStage1Impurity) {
            throw std::invalid_argument("stage1 impurity threshold above 0.095 exits before the encoded Bloch "
                                        "length reaches 0.9");
        }
        if (!(hold_tau >= 0.0) || !std::isfinite(hold_tau)) {
            throw std::invalid_argument("hold duration must be non-negative");
        }
        if (!(stage2_r2sq > 1.0 && stage2_r2sq < 3.0)) {
            throw std::invalid_argument("stage2 R2^2 threshold must lie in (1, 3)");
        }
    }

    friend bool operator==(const StageSchedule &, const StageSchedule &) = default;
};

struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Angle about Y on qubit 1 that puts the encoded-1 Bloch vector on +x.
inline double stage1_angle(const EncodedBloch &b) {
    if (b.which != EncodedQubit::one) {
        throw std::invalid_argument("stage1_angle needs the encoded-1 Bloch vector");
    }
    if (b.x == 0.0 && b.z == 0.0) {
        return 0.0;
    }
    return std::atan2(b.z, b.x);
}

inline ControlAction stage1_action(const PauliTable &t) {
    return ControlAction::on_first(axes::y, stage1_angle(encoded_bloch(t, EncodedQubit::one)));
}

inline constexpr double kFinalizeMinLength = 0.9;

/// Quarter turn about Y on qubit 1 taking the encoded-1 vector (x, 0, 0) to
/// (0, 0, x), i.e. into D+ with weight (1 + x) / 2.
inline DensityMatrix stage1_finalize(const DensityMatrix &rho) {
    EncodedBloch b = encoded_bloch(pauli_expand(rho), EncodedQubit::one);
    if (b.x < kFinalizeMinLength) {
        throw PreconditionError("stage1_finalize: encoded-1 x component " + std::to_string(b.x) +
                                " below 0.9, stage 1 exited early");
    }
    return apply_local_rotation(rho, ControlAction::on_first(axes::y, -std::numbers::pi / 2));
}

/// Angle about X on qubit 2 that zeroes r(ZZ) and leaves r(ZY) >= 0.
/// Expects the table in the stage-2 (post-Hadamard) frame.
inline double stage2_angle(const PauliTable &t) {
    double kept = t[strings::ZY];
    double measured = t[strings::ZZ];
    if (kept == 0.0 && measured == 0.0) {
        return 0.0;
    }
    // Rotation by phi about x: (y, z) -> (y cos - z sin, y sin + z cos).
    return std::atan2(-measured, kept);
}

inline ControlAction stage2_action(const PauliTable &t) {
    return ControlAction::on_second(axes::x, stage2_angle(t));
}

/// Rotation about Z on qubit 2 holding the transverse encoded-2 component
/// (r(XX), r(XY)) on +XX. It commutes with an I(x)Z measurement and maps D+
/// onto itself; no local rotation can tilt the encoded-2 vector off the IZ
/// axis without leaving D+.
inline ControlAction local_purify_action(const PauliTable &t) {
    double x = t[strings::XX];
    double y = t[strings::XY];
    if (x == 0.0 && y == 0.0) {
        return ControlAction::identity();
    }
    return ControlAction::on_second(axes::z, std::atan2(-y, x));
}

/// What the controller does after a measurement step. Applied in order:
/// rotation, finalize, frame toggle.
struct PolicyDecision {
    ControlAction action;
    bool finalize = false;
    bool toggle = false;
    ScheduleMarker next;
};

/// Context the policy needs beyond the state itself.
struct PolicyContext {
    PolicyKind kind = PolicyKind::none;
    StageSchedule schedule;
    bool feedback = true;  // false suppresses corrective rotations, keeps frame changes
    double dt_k = 1e-4;    // k * dt, to convert hold durations to steps
};

inline uint64_t hold_steps(const PolicyContext &ctx) {
    return static_cast<uint64_t>(std::llround(ctx.schedule.hold_tau / ctx.dt_k));
}

/// Control law. Called once on the initial state (entry call) and once after
/// every measurement step. Pure in (context, state).
inline PolicyDecision policy_step(const PolicyContext &ctx, const TrajectoryState &state) {
    PolicyDecision d;
    d.next = state.marker;
    const bool entry = !state.marker.entered;
    d.next.entered = true;

    switch (ctx.kind) {
        case PolicyKind::none:
            return d;

        case PolicyKind::stage1:
            if (ctx.feedback) d.action = stage1_action(pauli_expand(state.rho));
            return d;

        case PolicyKind::stage2:
            // The measurement frame is switched once, before the first step.
            if (entry) {
                d.toggle = true;
                d.next.stage = Stage::stage2;
                return d;
            }
            if (ctx.feedback) d.action = stage2_action(pauli_expand(state.rho));
            return d;

        case PolicyKind::local_purify_demo:
            if (ctx.feedback) d.action = local_purify_action(pauli_expand(state.rho));
            return d;

        case PolicyKind::dfs_hold: {
            if (entry) {
                d.next.stage = Stage::hold;
                d.next.steps_in_stage = 0;
            } else if (state.marker.stage == Stage::hold) {
                d.next.steps_in_stage = state.marker.steps_in_stage + 1;
            }
            if (d.next.stage == Stage::hold && d.next.steps_in_stage >= hold_steps(ctx)) {
                d.toggle = true;
                d.next.stage = Stage::done;
            }
            return d;
        }

        case PolicyKind::full_schedule:
            break;
    }

    PauliTable t = pauli_expand(state.rho);
    switch (state.marker.stage) {
        case Stage::stage1: {
            if (ctx.feedback) d.action = stage1_action(t);
            // Rotations about Y on qubit 1 preserve the encoded-1 length.
            double impurity = 1.0 - encoded_purity(encoded_bloch(t, EncodedQubit::one));
            if (impurity <= ctx.schedule.stage1_impurity) {
                // Without feedback the measurement alone leaves the state on the
                // ZZ axis, already inside D+ or D-.
                d.finalize = ctx.feedback;
                d.next.steps_in_stage = 0;
                if (hold_steps(ctx) > 0) {
                    d.next.stage = Stage::hold;
                } else {
                    d.toggle = true;
                    d.next.stage = Stage::stage2;
                }
            }
            return d;
        }
        case Stage::hold:
            d.next.steps_in_stage = state.marker.steps_in_stage + 1;
            if (d.next.steps_in_stage >= hold_steps(ctx)) {
                d.toggle = true;
                d.next.stage = Stage::stage2;
                d.next.steps_in_stage = 0;
            }
            return d;
        case Stage::stage2:
            if (ctx.feedback) d.action = stage2_action(t);
            // R2^2 is invariant under local rotations.
            if (r2_squared(t) >= ctx.schedule.stage2_r2sq) {
                d.next.stage = Stage::done;
            }
            return d;
        case Stage::done:
            return d;
    }
    return d;
}

inline TrajectoryState apply_decision(const TrajectoryState &state, const PolicyDecision &d) {
    TrajectoryState next = state;
    next.rho = apply_local_rotation(state.rho, d.action);
    if (d.finalize) next.rho = stage1_finalize(next.rho);
    if (d.toggle) next.rho = hadamard_frame_toggle(next.rho);
    next.marker = d.next;
    return next;
}

}  // namespace zzfb
