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

// Command-line driver: runs a preset or a JSON configuration and writes the
// ensemble time series as CSV.
//
// Exit codes: 0 success, 1 runtime or I/O failure, 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "zzfb/zzfb.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::string read_text(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw zzfb::ConfigError("cannot read config file " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string output_stem(const zzfb::ExperimentConfig &c) {
    return c.preset.empty() ? "custom" : c.preset;
}

void report_comparison(const zzfb::EnsembleStats &on, const zzfb::EnsembleStats &off) {
    // Smallest separation over the interior bins, as a quick console summary.
    double worst_p = 0.0;
    double worst_tau = 0.0;
    size_t bins = std::min(on.bins.size(), off.bins.size());
    for (size_t b = 1; b + 1 < bins; ++b) {
        auto r = zzfb::welch_test(on.bins[b][&zzfb::MetricsRow::r2_squared], on.bins[b].count,
                                  off.bins[b][&zzfb::MetricsRow::r2_squared], off.bins[b].count);
        if (r.p_greater >= worst_p) {
            worst_p = r.p_greater;
            worst_tau = on.bins[b].tau;
        }
    }
    std::printf("feedback vs no feedback (mean R2^2): largest one-sided Welch p = %.3g at tau = %.3f\n", worst_p,
                worst_tau);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Continuous ZZ parity measurement with local feedback: trajectory ensembles"};
    app.name("simulate");

    std::string config_path;
    std::string preset_name;
    std::string out_dir = ".";
    std::optional<uint64_t> seed;
    std::optional<uint64_t> n_traj;
    std::string feedback;
    std::string stepper;
    bool emit = false;
    unsigned threads = zzfb::default_worker_count();
    bool print_config = false;

    auto *source = app.add_option_group("source");
    source->add_option("--config", config_path, "JSON configuration file");
    source->add_option("--preset", preset_name, "Named preset")
        ->check(CLI::IsMember(zzfb::preset_names()));
    source->require_option(1);
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--seed", seed, "Base seed");
    app.add_option("--n-traj", n_traj, "Number of trajectories");
    app.add_option("--feedback", feedback, "Feedback arm")->check(CLI::IsMember({"on", "off"}));
    app.add_option("--stepper", stepper, "Integrator")->check(CLI::IsMember({"em", "kraus"}));
    app.add_flag("--emit-trajectories", emit, "Also write per-trajectory CSV");
    app.add_option("--threads", threads, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    app.add_flag("--print-config", print_config, "Print the resolved configuration as JSON and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    zzfb::ExperimentConfig config;
    try {
        if (!config_path.empty()) {
            config = zzfb::parse_config(read_text(config_path));
        } else {
            config = zzfb::preset(preset_name);
        }
        if (seed) config.seed = *seed;
        if (n_traj) config.n_traj = *n_traj;
        if (!feedback.empty()) {
            config.compare_feedback = false;
            config.feedback = feedback == "on";
        }
        if (stepper == "em") config.stepper = zzfb::StepperKind::euler_maruyama;
        if (stepper == "kraus") config.stepper = zzfb::StepperKind::measurement_operator;
        if (emit) config.emit_trajectories = true;
        config.validate();
    } catch (const zzfb::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    if (print_config) {
        std::cout << zzfb::serialize(config);
        return 0;
    }

    try {
        std::filesystem::create_directories(out_dir);
        const std::string stem = output_stem(config);
        auto arms = zzfb::experiment_arms(config);
        std::vector<zzfb::EnsembleStats> stats;
        for (const auto &arm : arms) {
            auto result = zzfb::run_ensemble(arm, threads, arm.emit_trajectories);
            std::string suffix;
            if (config.compare_feedback) suffix = arm.feedback ? "_feedback" : "_nofeedback";
            auto path = std::filesystem::path(out_dir) / (stem + suffix + ".csv");
            zzfb::write_file(path, [&](std::ostream &os) { zzfb::write_timeseries_csv(result.stats, os); });
            std::cout << "wrote " << path.string() << "\n";
            if (arm.emit_trajectories) {
                auto tpath = std::filesystem::path(out_dir) / (stem + suffix + "_trajectories.csv");
                zzfb::write_file(tpath,
                                 [&](std::ostream &os) { zzfb::write_trajectories_csv(result.trajectories, os); });
                std::cout << "wrote " << tpath.string() << "\n";
            }
            stats.push_back(std::move(result.stats));
        }
        if (stats.size() == 2) report_comparison(stats[0], stats[1]);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
