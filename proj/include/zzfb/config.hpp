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
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "zzfb/ensemble.hpp"

namespace zzfb {

inline constexpr int kConfigSchema = 1;

/// Configuration problem; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string_view to_string(StepperKind k) {
    return k == StepperKind::euler_maruyama ? "em" : "kraus";
}

inline const std::vector<std::string> &preset_names() {
    static const std::vector<std::string> names = {"stage1", "stage2", "full", "dfs-hold", "purify-demo", "fig1"};
    return names;
}

/// Named experiment templates. All use k*dt = 1e-4, seed 0, the EM stepper and
/// a sample every 100 steps.
inline ExperimentConfig preset(std::string_view name) {
    ExperimentConfig c;
    c.preset = std::string(name);
    if (name == "stage1") {
        c.policy = PolicyKind::stage1;
        c.initial = InitialState::named("maximally_mixed");
        c.tau_total = 0.6;
    } else if (name == "stage2") {
        c.policy = PolicyKind::stage2;
        c.initial = InitialState::named("classically_correlated");
        c.tau_total = 0.5;
    } else if (name == "full") {
        c.policy = PolicyKind::full_schedule;
        c.initial = InitialState::named("maximally_mixed");
        c.tau_total = 1.2;
    } else if (name == "dfs-hold") {
        c.policy = PolicyKind::dfs_hold;
        c.initial = InitialState::named("classically_correlated");
        c.schedule.hold_tau = 0.2;
        c.tau_total = 0.4;
        c.n_traj = 100;
    } else if (name == "purify-demo") {
        c.policy = PolicyKind::local_purify_demo;
        c.observable = strings::IZ;
        c.initial = InitialState::named("classically_correlated");
        c.tau_total = 1.0;
        c.n_traj = 500;
    } else if (name == "fig1") {
        c.policy = PolicyKind::stage2;
        c.compare_feedback = true;
        c.initial = InitialState::named("classically_correlated");
        c.tau_total = 0.6;
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

inline nlohmann::json to_json(const ExperimentConfig &c) {
    nlohmann::json j;
    j["schema"] = kConfigSchema;
    j["preset"] = c.preset;
    j["policy"] = std::string(to_string(c.policy));
    j["feedback"] = c.feedback;
    j["compare_feedback"] = c.compare_feedback;
    j["observable"] = c.observable.name();
    j["dt_k"] = c.dt_k;
    j["tau_total"] = c.tau_total;
    j["n_traj"] = c.n_traj;
    j["seed"] = c.seed;
    j["stepper"] = std::string(to_string(c.stepper));
    if (c.initial.name == "pauli") {
        j["initial_state"] = {{"pauli", c.initial.pauli}};
    } else {
        j["initial_state"] = c.initial.name;
    }
    j["schedule"] = {{"stage1_impurity", c.schedule.stage1_impurity},
                     {"hold_tau", c.schedule.hold_tau},
                     {"stage2_r2sq", c.schedule.stage2_r2sq}};
    j["stride"] = c.stride;
    j["emit_trajectories"] = c.emit_trajectories;
    return j;
}

namespace detail {

inline void reject_unknown(const nlohmann::json &obj, const std::set<std::string> &allowed, const std::string &where) {
    for (const auto &item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("unknown field '" + where + item.key() + "'");
        }
    }
}

template <typename T>
T field(const nlohmann::json &obj, const std::string &key, const std::string &where) {
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw ConfigError("field '" + where + key + "' has the wrong type");
    }
}

inline uint64_t unsigned_field(const nlohmann::json &obj, const std::string &key) {
    const auto &v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<int64_t>() < 0)) {
        throw ConfigError("field '" + key + "' must be a non-negative integer");
    }
    return v.get<uint64_t>();
}

inline size_t line_of_offset(std::string_view text, size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

}  // namespace detail

/// Applies the fields present in `j` on top of `c`.
inline void apply_json(ExperimentConfig &c, const nlohmann::json &j) {
    using detail::field;
    static const std::set<std::string> top = {"schema",   "preset", "policy",  "feedback",      "compare_feedback",
                                              "observable", "dt_k", "tau_total", "n_traj",      "seed",
                                              "stepper",  "initial_state", "schedule", "stride", "emit_trajectories"};
    detail::reject_unknown(j, top, "");

    if (j.contains("policy")) {
        auto kind = parse_policy_kind(field<std::string>(j, "policy", ""));
        if (!kind) throw ConfigError("field 'policy' has an unknown value");
        c.policy = *kind;
    }
    if (j.contains("feedback")) c.feedback = field<bool>(j, "feedback", "");
    if (j.contains("compare_feedback")) c.compare_feedback = field<bool>(j, "compare_feedback", "");
    if (j.contains("observable")) {
        try {
            c.observable = PauliString::parse(field<std::string>(j, "observable", ""));
        } catch (const std::invalid_argument &e) {
            throw ConfigError(std::string("field 'observable': ") + e.what());
        }
    }
    if (j.contains("dt_k")) c.dt_k = field<double>(j, "dt_k", "");
    if (j.contains("tau_total")) c.tau_total = field<double>(j, "tau_total", "");
    if (j.contains("n_traj")) c.n_traj = detail::unsigned_field(j, "n_traj");
    if (j.contains("seed")) c.seed = detail::unsigned_field(j, "seed");
    if (j.contains("stride")) c.stride = detail::unsigned_field(j, "stride");
    if (j.contains("stepper")) {
        auto s = field<std::string>(j, "stepper", "");
        if (s == "em") {
            c.stepper = StepperKind::euler_maruyama;
        } else if (s == "kraus") {
            c.stepper = StepperKind::measurement_operator;
        } else {
            throw ConfigError("field 'stepper' must be \"em\" or \"kraus\"");
        }
    }
    if (j.contains("emit_trajectories")) c.emit_trajectories = field<bool>(j, "emit_trajectories", "");
    if (j.contains("initial_state")) {
        const auto &init = j.at("initial_state");
        if (init.is_string()) {
            c.initial = InitialState::named(init.get<std::string>());
        } else if (init.is_object()) {
            detail::reject_unknown(init, {"pauli"}, "initial_state.");
            if (!init.contains("pauli") || !init.at("pauli").is_object()) {
                throw ConfigError("field 'initial_state.pauli' must be an object of coefficients");
            }
            std::map<std::string, double> coeffs;
            for (const auto &item : init.at("pauli").items()) {
                if (!item.value().is_number()) {
                    throw ConfigError("field 'initial_state.pauli." + item.key() + "' must be a number");
                }
                coeffs[item.key()] = item.value().get<double>();
            }
            c.initial = InitialState::from_pauli(std::move(coeffs));
        } else {
            throw ConfigError("field 'initial_state' must be a name or {\"pauli\": {...}}");
        }
    }
    if (j.contains("schedule")) {
        const auto &s = j.at("schedule");
        if (!s.is_object()) throw ConfigError("field 'schedule' must be an object");
        detail::reject_unknown(s, {"stage1_impurity", "hold_tau", "stage2_r2sq"}, "schedule.");
        if (s.contains("stage1_impurity")) c.schedule.stage1_impurity = field<double>(s, "stage1_impurity", "schedule.");
        if (s.contains("hold_tau")) c.schedule.hold_tau = field<double>(s, "hold_tau", "schedule.");
        if (s.contains("stage2_r2sq")) c.schedule.stage2_r2sq = field<double>(s, "stage2_r2sq", "schedule.");
    }
}

/// Parses and validates a JSON configuration. A `preset` field selects the
/// template; every other field present overrides it.
inline ExperimentConfig parse_config(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError("line " + std::to_string(detail::line_of_offset(text, e.byte)) + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    if (j.contains("schema")) {
        if (!j.at("schema").is_number_integer() || j.at("schema").get<int>() != kConfigSchema) {
            throw ConfigError("field 'schema' must be " + std::to_string(kConfigSchema));
        }
    }

    ExperimentConfig c;
    if (j.contains("preset")) {
        if (!j.at("preset").is_string()) throw ConfigError("field 'preset' must be a string");
        auto name = j.at("preset").get<std::string>();
        if (std::find(preset_names().begin(), preset_names().end(), name) != preset_names().end()) {
            c = preset(name);
        } else if (name != "custom") {
            throw ConfigError("field 'preset': unknown preset '" + name + "'");
        }
    }
    apply_json(c, j);

    try {
        c.validate();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
    }
    return c;
}

inline std::string serialize(const ExperimentConfig &c) {
    return to_json(c).dump(2) + "\n";
}

}  // namespace zzfb
