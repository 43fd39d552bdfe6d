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
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zzfb/ensemble.hpp"

namespace zzfb {

inline constexpr const char *kTimeseriesHeader =
    "tau,mean_purity,std_purity,mean_r2sq,std_r2sq,mean_rzz,mean_enc1_purity,mean_enc2_purity,"
    "mean_concurrence,mean_bell_fidelity,n";

/// Fixed-point rendering with 9 significant digits (zero prints as 0.00000000).
inline std::string format_sig9(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    if (v == 0.0 || !std::isfinite(v)) {
        return std::isfinite(v) ? "0.00000000" : (std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf"));
    }
    char buf[64];
    // Round to 9 significant digits first so that the exponent is final.
    std::snprintf(buf, sizeof buf, "%.8e", v);
    const char *e = std::strchr(buf, 'e');
    int exponent = std::atoi(e + 1);
    int decimals = std::max(0, 8 - exponent);
    std::vector<char> out(static_cast<size_t>(decimals) + 32);
    std::snprintf(out.data(), out.size(), "%.*f", decimals, v);
    return out.data();
}

inline std::string format_tau(double tau) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", tau);
    return buf;
}

namespace detail {

inline void write_stats_row(std::ostream &os, const StatsBin &b) {
    os << format_tau(b.tau) << ',' << format_sig9(b[&MetricsRow::purity].mean) << ','
       << format_sig9(b[&MetricsRow::purity].sd) << ',' << format_sig9(b[&MetricsRow::r2_squared].mean) << ','
       << format_sig9(b[&MetricsRow::r2_squared].sd) << ',' << format_sig9(b[&MetricsRow::rzz].mean) << ','
       << format_sig9(b[&MetricsRow::enc1_purity].mean) << ',' << format_sig9(b[&MetricsRow::enc2_purity].mean) << ','
       << format_sig9(b[&MetricsRow::concurrence].mean) << ',' << format_sig9(b[&MetricsRow::bell_fidelity].mean)
       << ',' << b.count << '\n';
}

}  // namespace detail

/// Ensemble time series: one row per tau bin, LF line endings, no metadata.
inline void write_timeseries_csv(const EnsembleStats &stats, std::ostream &os) {
    os << kTimeseriesHeader << '\n';
    for (const auto &b : stats.bins) {
        detail::write_stats_row(os, b);
    }
}

/// Per-trajectory dump: a leading trajectory index column, then the ensemble
/// schema with std 0 and n 1.
inline void write_trajectories_csv(const std::vector<TimeSeries> &series, std::ostream &os) {
    os << "trajectory," << kTimeseriesHeader << '\n';
    for (const auto &s : series) {
        for (const auto &row : s.rows) {
            EnsembleStats one = aggregate({TimeSeries{s.index, {row}}});
            os << s.index << ',';
            detail::write_stats_row(os, one.bins.front());
        }
    }
}

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename Writer>
void write_file(const std::filesystem::path &path, Writer &&writer) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    writer(f);
    f.flush();
    if (!f) throw IoError("write to " + path.string() + " failed");
}

}  // namespace zzfb
