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
#include <cstdint>
#include <set>

#include "gtest/gtest.h"

#include "zzfb/rng.hpp"

using zzfb::NoiseStream;
using zzfb::Philox4x32;

// Known-answer vectors for Philox4x32 with 10 rounds.
TEST(philox, known_answer_zero) {
    auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(philox, known_answer_all_ones) {
    auto out = Philox4x32::generate({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(philox, known_answer_pi_digits) {
    auto out =
        Philox4x32::generate({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdcceb, 0x5001e420u, 0x24126ea1u}));
}

TEST(philox, is_constexpr) {
    constexpr auto out = Philox4x32::generate({0, 0, 0, 0}, {0, 0});
    static_assert(out[0] == 0x6627e8d5u);
    SUCCEED();
}

TEST(noise_stream, pure_function_of_seed_and_stream) {
    NoiseStream a(42, 7);
    NoiseStream b(42, 7);
    for (int i = 0; i < 1001; ++i) {
        ASSERT_EQ(a.next_normal(), b.next_normal());
    }
    NoiseStream c(42, 8);
    NoiseStream d(43, 7);
    NoiseStream e(42, 7);
    int same_c = 0, same_d = 0;
    for (int i = 0; i < 100; ++i) {
        double x = e.next_normal();
        same_c += x == c.next_normal();
        same_d += x == d.next_normal();
    }
    EXPECT_EQ(same_c, 0);
    EXPECT_EQ(same_d, 0);
}

TEST(noise_stream, high_stream_bits_matter) {
    NoiseStream a(1, 0);
    NoiseStream b(1, uint64_t{1} << 40);
    EXPECT_NE(a.next_normal(), b.next_normal());
    NoiseStream c(uint64_t{1} << 40, 0);
    NoiseStream d(0, 0);
    EXPECT_NE(c.next_normal(), d.next_normal());
}

TEST(noise_stream, standard_normal_moments) {
    NoiseStream s(2024, 0);
    const int n = 400000;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    int beyond3 = 0;
    for (int i = 0; i < n; ++i) {
        double x = s.next_normal();
        ASSERT_TRUE(std::isfinite(x));
        m1 += x;
        m2 += x * x;
        m3 += x * x * x;
        m4 += x * x * x * x;
        beyond3 += std::abs(x) > 3.0;
    }
    m1 /= n;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    // Standard errors: 1/sqrt(n), sqrt(2/n), sqrt(15/n), sqrt(96/n); allow 5 of them.
    EXPECT_NEAR(m1, 0.0, 5.0 / std::sqrt(n));
    EXPECT_NEAR(m2, 1.0, 5.0 * std::sqrt(2.0 / n));
    EXPECT_NEAR(m3, 0.0, 5.0 * std::sqrt(15.0 / n));
    EXPECT_NEAR(m4, 3.0, 5.0 * std::sqrt(96.0 / n));
    // P(|x| > 3) = 0.0026998
    EXPECT_NEAR(beyond3 / double(n), 0.0026998, 5.0 * std::sqrt(0.0027 / n));
}

TEST(noise_stream, successive_draws_uncorrelated) {
    NoiseStream s(5, 3);
    const int n = 200000;
    double prev = s.next_normal();
    double lag1 = 0;
    for (int i = 0; i < n; ++i) {
        double x = s.next_normal();
        lag1 += prev * x;
        prev = x;
    }
    EXPECT_NEAR(lag1 / n, 0.0, 5.0 / std::sqrt(n));
}

TEST(noise_stream, streams_uncorrelated) {
    const int n = 100000;
    NoiseStream a(9, 0);
    NoiseStream b(9, 1);
    double c = 0;
    for (int i = 0; i < n; ++i) c += a.next_normal() * b.next_normal();
    EXPECT_NEAR(c / n, 0.0, 5.0 / std::sqrt(n));
}

TEST(noise_stream, increment_variance_is_dt) {
    NoiseStream s(11, 0);
    const double dt = 1e-4;
    const int n = 200000;
    double m2 = 0;
    for (int i = 0; i < n; ++i) {
        double dw = s.next_increment(dt);
        m2 += dw * dw;
    }
    EXPECT_NEAR(m2 / n / dt, 1.0, 5.0 * std::sqrt(2.0 / n));
}
