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
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace zzfb {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

/// Single-qubit Pauli label. The numeric value is the storage index (I,X,Y,Z order).
enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr std::array<Pauli, 4> kPaulis = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

constexpr char pauli_char(Pauli p) {
    return "IXYZ"[static_cast<int>(p)];
}

/// Two-qubit Pauli string `first (x) second`.
struct PauliString {
    Pauli first = Pauli::I;
    Pauli second = Pauli::I;

    /// Row-major index over (first, second), 0..15.
    constexpr int index() const {
        return 4 * static_cast<int>(first) + static_cast<int>(second);
    }
    static constexpr PauliString from_index(int k) {
        return {static_cast<Pauli>(k / 4), static_cast<Pauli>(k % 4)};
    }
    constexpr bool is_identity() const {
        return first == Pauli::I && second == Pauli::I;
    }
    std::string name() const {
        return {pauli_char(first), pauli_char(second)};
    }
    /// Parses labels such as "ZZ" or "XY". Throws std::invalid_argument.
    static PauliString parse(std::string_view text) {
        auto one = [&](char c) {
            switch (c) {
                case 'I': return Pauli::I;
                case 'X': return Pauli::X;
                case 'Y': return Pauli::Y;
                case 'Z': return Pauli::Z;
                default: break;
            }
            throw std::invalid_argument("bad Pauli label '" + std::string(text) + "'");
        };
        if (text.size() != 2) {
            throw std::invalid_argument("Pauli string must have two labels: '" + std::string(text) + "'");
        }
        return {one(text[0]), one(text[1])};
    }

    friend constexpr bool operator==(PauliString, PauliString) = default;
};

namespace strings {
inline constexpr PauliString II{Pauli::I, Pauli::I};
inline constexpr PauliString IX{Pauli::I, Pauli::X};
inline constexpr PauliString IY{Pauli::I, Pauli::Y};
inline constexpr PauliString IZ{Pauli::I, Pauli::Z};
inline constexpr PauliString XI{Pauli::X, Pauli::I};
inline constexpr PauliString XX{Pauli::X, Pauli::X};
inline constexpr PauliString XY{Pauli::X, Pauli::Y};
inline constexpr PauliString XZ{Pauli::X, Pauli::Z};
inline constexpr PauliString YI{Pauli::Y, Pauli::I};
inline constexpr PauliString YX{Pauli::Y, Pauli::X};
inline constexpr PauliString YY{Pauli::Y, Pauli::Y};
inline constexpr PauliString YZ{Pauli::Y, Pauli::Z};
inline constexpr PauliString ZI{Pauli::Z, Pauli::I};
inline constexpr PauliString ZX{Pauli::Z, Pauli::X};
inline constexpr PauliString ZY{Pauli::Z, Pauli::Y};
inline constexpr PauliString ZZ{Pauli::Z, Pauli::Z};
}  // namespace strings

inline constexpr std::array<PauliString, 16> all_pauli_strings() {
    std::array<PauliString, 16> out{};
    for (int k = 0; k < 16; ++k) {
        out[k] = PauliString::from_index(k);
    }
    return out;
}

/// Phase is i^power, power in 0..3, so {+1, +i, -1, -i}.
struct SignedPauliProduct {
    uint8_t power = 0;
    PauliString string;

    Complex phase() const {
        static constexpr std::array<Complex, 4> table = {
            Complex{1, 0}, Complex{0, 1}, Complex{-1, 0}, Complex{0, -1}};
        return table[power & 3];
    }
    /// Real sign for Hermitian products; only meaningful when power is even.
    int sign() const {
        return (power & 2) ? -1 : 1;
    }
    bool is_real() const {
        return (power & 1) == 0;
    }

    friend constexpr bool operator==(const SignedPauliProduct &, const SignedPauliProduct &) = default;
};

namespace detail {

struct SingleProduct {
    uint8_t power;
    Pauli label;
};

// XY = iZ, YZ = iX, ZX = iY and the reversed orders pick up -i.
constexpr SingleProduct single_product(Pauli a, Pauli b) {
    if (a == Pauli::I) return {0, b};
    if (b == Pauli::I) return {0, a};
    if (a == b) return {0, Pauli::I};
    int ia = static_cast<int>(a);
    int ib = static_cast<int>(b);
    auto third = static_cast<Pauli>(6 - ia - ib);
    bool cyclic = (ib - ia + 3) % 3 == 1;
    return {static_cast<uint8_t>(cyclic ? 1 : 3), third};
}

}  // namespace detail

/// Exact product a*b of two Pauli strings.
constexpr SignedPauliProduct pauli_product(PauliString a, PauliString b) {
    auto p1 = detail::single_product(a.first, b.first);
    auto p2 = detail::single_product(a.second, b.second);
    return {static_cast<uint8_t>((p1.power + p2.power) & 3), {p1.label, p2.label}};
}

/// True iff a*b == b*a, i.e. an even number of factors anticommute.
constexpr bool commutes_with(PauliString a, PauliString b) {
    auto anti = [](Pauli p, Pauli q) { return p != Pauli::I && q != Pauli::I && p != q; };
    return (anti(a.first, b.first) + anti(a.second, b.second)) % 2 == 0;
}

inline Matrix2 pauli_matrix(Pauli p) {
    Matrix2 m;
    const Complex i{0, 1};
    switch (p) {
        case Pauli::I: m << 1, 0, 0, 1; break;
        case Pauli::X: m << 0, 1, 1, 0; break;
        case Pauli::Y: m << 0, -i, i, 0; break;
        case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

inline Matrix4 kron(const Matrix2 &a, const Matrix2 &b) {
    Matrix4 out;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            out.block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
        }
    }
    return out;
}

/// Dense 4x4 matrix of a Pauli string in the computational basis |q1 q2>.
inline Matrix4 pauli_matrix(PauliString s) {
    return kron(pauli_matrix(s.first), pauli_matrix(s.second));
}

/// Monomial form of a Pauli string: row a has its single nonzero entry
/// `value[a]` in column `column[a]`.
struct MonomialPauli {
    std::array<int, 4> column{};
    std::array<Complex, 4> value{};
};

inline const std::array<MonomialPauli, 16> &monomial_table() {
    static const std::array<MonomialPauli, 16> table = [] {
        std::array<MonomialPauli, 16> t{};
        for (int k = 0; k < 16; ++k) {
            Matrix4 m = pauli_matrix(PauliString::from_index(k));
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    if (m(a, b) != Complex{0, 0}) {
                        t[k].column[a] = b;
                        t[k].value[a] = m(a, b);
                    }
                }
            }
        }
        return t;
    }();
    return table;
}

}  // namespace zzfb
