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
#include <cstdint>
#include <numbers>

namespace zzfb {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11).
///
/// Output is a pure function of (counter, key); there is no hidden state, which
/// is what makes per-trajectory streams independent of scheduling.
class Philox4x32 {
   public:
    using Counter = std::array<uint32_t, 4>;
    using Key = std::array<uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

   private:
    static constexpr uint32_t kMul0 = 0xD2511F53u;
    static constexpr uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter &c, const Key &k) {
        uint64_t p0 = static_cast<uint64_t>(kMul0) * c[0];
        uint64_t p1 = static_cast<uint64_t>(kMul1) * c[2];
        auto hi0 = static_cast<uint32_t>(p0 >> 32);
        auto lo0 = static_cast<uint32_t>(p0);
        auto hi1 = static_cast<uint32_t>(p1 >> 32);
        auto lo1 = static_cast<uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Gaussian increments for one trajectory.
///
/// Key = base seed, counter = (block index, trajectory ordinal). Each Philox
/// block yields two uniforms with 53-bit resolution and, via Box-Muller, two
/// standard normals. The sequence depends only on (seed, stream).
class NoiseStream {
   public:
    NoiseStream(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {
    }

    uint64_t seed() const {
        return seed_;
    }
    uint64_t stream() const {
        return stream_;
    }

    /// Standard normal variate.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        auto words = Philox4x32::generate(
            {static_cast<uint32_t>(block_), static_cast<uint32_t>(block_ >> 32), static_cast<uint32_t>(stream_),
             static_cast<uint32_t>(stream_ >> 32)},
            {static_cast<uint32_t>(seed_), static_cast<uint32_t>(seed_ >> 32)});
        ++block_;
        // u1 in (0, 1] keeps the logarithm finite.
        double u1 = (static_cast<double>(to_53(words[0], words[1])) + 1.0) * 0x1.0p-53;
        double u2 = static_cast<double>(to_53(words[2], words[3])) * 0x1.0p-53;
        double radius = std::sqrt(-2.0 * std::log(u1));
        double phase = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(phase);
        have_spare_ = true;
        return radius * std::cos(phase);
    }

    /// Wiener increment with variance dt.
    double next_increment(double dt) {
        return std::sqrt(dt) * next_normal();
    }

   private:
    static uint64_t to_53(uint32_t lo, uint32_t hi) {
        return ((static_cast<uint64_t>(hi) << 32) | lo) >> 11;
    }

    uint64_t seed_;
    uint64_t stream_;
    uint64_t block_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace zzfb
