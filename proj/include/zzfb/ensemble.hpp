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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "zzfb/feedback.hpp"
#include "zzfb/metrics.hpp"
#include "zzfb/rng.hpp"
#include "zzfb/sme.hpp"

namespace zzfb {

/// Initial conditional state: a named state or explicit Pauli coefficients
/// (r(II) = 1 implied).
struct InitialState {
    std::string name = "maximally_mixed";
    std::map<std::string, double> pauli;  // used when name == "pauli"

    static InitialState named(std::string n) {
        return {std::move(n), {}};
    }
    static InitialState from_pauli(std::map<std::string, double> coefficients) {
        return {"pauli", std::move(coefficients)};
    }

    DensityMatrix build() const {
        if (name == "maximally_mixed") return DensityMatrix::maximally_mixed();
        if (name == "classically_correlated") return DensityMatrix::classically_correlated();
        if (name == "phi_plus") return DensityMatrix::phi_plus();
        if (name == "product_00") return DensityMatrix::from_pure(Eigen::Vector4cd(1, 0, 0, 0));
        if (name == "pauli") {
            PauliTable t;
            for (const auto &[label, value] : pauli) {
                PauliString s = PauliString::parse(label);
                if (s.is_identity()) {
                    throw InvalidState("initial state: r(II) is fixed to 1");
                }
                t[s] = value;
            }
            return pauli_reconstruct(t);
        }
        throw InvalidState("unknown initial state '" + name + "'");
    }

    friend bool operator==(const InitialState &, const InitialState &) = default;
};

/// Desk-scale guard on the number of steps per trajectory.
inline constexpr uint64_t kMaxSteps = 10'000'000;

struct ExperimentConfig {
    std::string preset = "custom";
    PolicyKind policy = PolicyKind::none;
    bool feedback = true;
    bool compare_feedback = false;  // run a feedback arm and a no-feedback arm
    StageSchedule schedule;
    PauliString observable = strings::ZZ;
    double dt_k = 1e-4;
    double tau_total = 1.0;
    uint64_t n_traj = 1000;
    uint64_t seed = 0;
    StepperKind stepper = StepperKind::euler_maruyama;
    InitialState initial;
    uint64_t stride = 100;
    bool emit_trajectories = false;

    uint64_t total_steps() const {
        return static_cast<uint64_t>(std::llround(tau_total / dt_k));
    }

    /// Throws std::invalid_argument (or InvalidState) naming the offending field.
    void validate() const {
        if (n_traj < 1) throw std::invalid_argument("n_traj: must be at least 1");
        if (!(dt_k > 0.0)) throw std::invalid_argument("dt_k: must be positive");
        if (dt_k > kMaxStepRate) {
            throw std::invalid_argument("dt_k: " + std::to_string(dt_k) + " exceeds the stability guard " +
                                        std::to_string(kMaxStepRate));
        }
        if (!(tau_total > 0.0) || !std::isfinite(tau_total)) {
            throw std::invalid_argument("tau_total: must be positive");
        }
        if (tau_total / dt_k > static_cast<double>(kMaxSteps)) {
            throw std::invalid_argument("tau_total: more than 1e7 steps per trajectory");
        }
        uint64_t steps = total_steps();
        if (std::abs(static_cast<double>(steps) * dt_k - tau_total) > 1e-9 * tau_total) {
            throw std::invalid_argument("tau_total: not an integer number of steps of dt_k");
        }
        if (stride < 1) throw std::invalid_argument("stride: must be at least 1");
        if (steps % stride != 0) {
            throw std::invalid_argument("stride: must divide the step count " + std::to_string(steps));
        }
        if (observable.is_identity()) throw std::invalid_argument("observable: II carries no information");
        schedule.validate();
        try {
            (void)initial.build();
        } catch (const std::exception &e) {
            throw std::invalid_argument(std::string("initial_state: ") + e.what());
        }
    }

    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

/// Offset between the feedback and no-feedback arm seeds, so that the two arms
/// are statistically independent.
inline constexpr uint64_t kArmSeedOffset = 0x9E3779B97F4A7C15ull;

/// The configurations actually run: one, or the feedback/no-feedback pair.
inline std::vector<ExperimentConfig> experiment_arms(const ExperimentConfig &config) {
    if (!config.compare_feedback) {
        return {config};
    }
    ExperimentConfig on = config;
    on.compare_feedback = false;
    on.feedback = true;
    ExperimentConfig off = on;
    off.feedback = false;
    off.seed = config.seed + kArmSeedOffset;
    return {on, off};
}

struct TimeSeries {
    uint64_t index = 0;
    std::vector<MetricsRow> rows;
};

struct TrajectoryFailure : std::runtime_error {
    TrajectoryFailure(uint64_t idx, const std::string &what)
        : std::runtime_error("trajectory " + std::to_string(idx) + ": " + what), index(idx) {
    }
    uint64_t index;
};

/// Integrates one trajectory. Per step: measurement, then control, then
/// (every `stride` steps) a metrics sample. Deterministic in (config, index).
inline TimeSeries run_trajectory(const ExperimentConfig &config, uint64_t index) {
    const MeasurementModel model(config.observable, 1.0);
    const PolicyContext ctx{config.policy, config.schedule, config.feedback, config.dt_k};
    const uint64_t steps = config.total_steps();
    NoiseStream noise(config.seed, index);

    TimeSeries out;
    out.index = index;
    out.rows.reserve(steps / config.stride + 1);
    try {
        TrajectoryState s;
        s.rho = config.initial.build();
        s = apply_decision(s, policy_step(ctx, s));
        out.rows.push_back(compute_metrics(s.rho, 0.0, s.warnings));
        for (uint64_t n = 1; n <= steps; ++n) {
            double dW = noise.next_increment(config.dt_k);
            s = step(config.stepper, s, model, config.dt_k, dW);
            s = apply_decision(s, policy_step(ctx, s));
            if (n % config.stride == 0) {
                out.rows.push_back(compute_metrics(s.rho, static_cast<double>(n) * config.dt_k, s.warnings));
            }
        }
    } catch (const TrajectoryAborted &e) {
        throw TrajectoryFailure(index, e.what());
    } catch (const PreconditionError &e) {
        throw TrajectoryFailure(index, e.what());
    }
    return out;
}

struct Moments {
    double mean = 0;
    double sd = 0;   // sample standard deviation, n - 1 denominator
    double sem = 0;  // standard error, std / sqrt(n)

    friend bool operator==(const Moments &, const Moments &) = default;
};

struct StatsBin {
    double tau = 0;
    uint64_t count = 0;
    std::array<Moments, kMetricFields.size()> fields{};

    const Moments &operator[](double MetricsRow::*field) const {
        for (size_t i = 0; i < kMetricFields.size(); ++i) {
            if (kMetricFields[i] == field) return fields[i];
        }
        throw std::out_of_range("unknown metrics field");
    }

    friend bool operator==(const StatsBin &, const StatsBin &) = default;
};

struct EnsembleStats {
    std::vector<StatsBin> bins;

    friend bool operator==(const EnsembleStats &, const EnsembleStats &) = default;
};

/// Bin-wise moments, folded in the order of `series`.
inline EnsembleStats aggregate(const std::vector<TimeSeries> &series) {
    EnsembleStats stats;
    if (series.empty()) return stats;
    const size_t nbins = series.front().rows.size();
    for (const auto &s : series) {
        if (s.rows.size() != nbins) {
            throw std::invalid_argument("aggregate: time series lengths differ");
        }
    }
    const auto n = static_cast<double>(series.size());
    stats.bins.resize(nbins);
    for (size_t b = 0; b < nbins; ++b) {
        StatsBin &bin = stats.bins[b];
        bin.tau = series.front().rows[b].tau;
        bin.count = series.size();
        for (const auto &s : series) {
            if (s.rows[b].tau != bin.tau) {
                throw std::invalid_argument("aggregate: time grids differ");
            }
        }
        for (size_t f = 0; f < kMetricFields.size(); ++f) {
            auto field = kMetricFields[f];
            double sum = 0.0;
            for (const auto &s : series) sum += s.rows[b].*field;
            double mean = sum / n;
            double ss = 0.0;
            for (const auto &s : series) {
                double d = s.rows[b].*field - mean;
                ss += d * d;
            }
            double sd = series.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
            bin.fields[f] = {mean, sd, sd / std::sqrt(n)};
        }
    }
    return stats;
}

struct EnsembleResult {
    EnsembleStats stats;
    std::vector<TimeSeries> trajectories;  // filled when keep_trajectories
};

struct EnsembleFailure : std::runtime_error {
    EnsembleFailure(std::vector<uint64_t> idx, const std::string &what)
        : std::runtime_error(what), indices(std::move(idx)) {
    }
    std::vector<uint64_t> indices;
};

inline unsigned default_worker_count() {
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs `config.n_traj` trajectories on `workers` threads. Results are stored by
/// trajectory index and folded sequentially, so the output does not depend on
/// the worker count or completion order.
inline EnsembleResult run_ensemble(const ExperimentConfig &config, unsigned workers = default_worker_count(),
                                   bool keep_trajectories = false) {
    config.validate();
    const uint64_t n = config.n_traj;
    std::vector<TimeSeries> results(n);
    std::vector<uint64_t> failed;
    std::string first_error;
    std::mutex error_mutex;
    std::atomic<uint64_t> next{0};

    auto work = [&] {
        for (uint64_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                results[i] = run_trajectory(config, i);
            } catch (const std::exception &e) {
                std::lock_guard lock(error_mutex);
                failed.push_back(i);
                if (first_error.empty()) first_error = e.what();
            }
        }
    };

    workers = static_cast<unsigned>(std::clamp<uint64_t>(workers, 1, n));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto &t : pool) t.join();
    }

    if (!failed.empty()) {
        std::sort(failed.begin(), failed.end());
        std::string list;
        for (size_t i = 0; i < failed.size() && i < 20; ++i) {
            list += (i ? "," : "") + std::to_string(failed[i]);
        }
        if (failed.size() > 20) list += ",...";
        throw EnsembleFailure(failed, std::to_string(failed.size()) + " trajectories aborted (indices " + list +
                                          "); first error: " + first_error);
    }

    EnsembleResult out;
    out.stats = aggregate(results);
    if (keep_trajectories) out.trajectories = std::move(results);
    return out;
}

struct WelchResult {
    double t = 0;
    double df = 0;
    double p_two_sided = 1;
    double p_greater = 1;  // H1: mean_a > mean_b
};

/// Welch's unequal-variance two-sample t test from summary statistics.
inline WelchResult welch_test(const Moments &a, uint64_t na, const Moments &b, uint64_t nb) {
    WelchResult r;
    double va = a.sd * a.sd / static_cast<double>(na);
    double vb = b.sd * b.sd / static_cast<double>(nb);
    double diff = a.mean - b.mean;
    double se2 = va + vb;
    if (se2 == 0.0) {
        r.t = diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
        r.df = static_cast<double>(na + nb - 2);
        r.p_two_sided = diff == 0.0 ? 1.0 : 0.0;
        r.p_greater = diff > 0.0 ? 0.0 : 1.0;
        return r;
    }
    r.t = diff / std::sqrt(se2);
    double denom = 0.0;
    if (na > 1) denom += va * va / static_cast<double>(na - 1);
    if (nb > 1) denom += vb * vb / static_cast<double>(nb - 1);
    r.df = denom > 0.0 ? se2 * se2 / denom : static_cast<double>(na + nb - 2);
    boost::math::students_t dist(r.df);
    double upper = boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
    r.p_two_sided = std::min(1.0, 2.0 * upper);
    r.p_greater = r.t >= 0 ? upper : 1.0 - upper;
    return r;
}

}  // namespace zzfb
