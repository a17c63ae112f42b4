// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spin.hpp
 * @brief Total-spin quantum number and basis indexing for the symmetric
 *        (2J+1)-dimensional sector.
 *
 * Basis ordering is descending in M: index 0 <-> M = J, index 2J <-> M = -J.
 * Every module shares this convention.
 */

#pragma once

#include <cmath>
#include <compare>
#include <stdexcept>
#include <string>

namespace tact {

/// Raised for violated preconditions on inputs (bad J, mismatched dimensions, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Total spin J stored as the integer 2J, so half-integers are exact.
 */
class Spin {
public:
    /// J = 1/2.
    constexpr Spin() noexcept = default;

    /// From twice the spin value (2J = N, the particle count).
    static Spin from_twice(int twice_j) {
        if (twice_j < 1) {
            throw InvalidArgument("spin must satisfy J >= 1/2, got 2J = " + std::to_string(twice_j));
        }
        return Spin(twice_j);
    }

    /// From a real value; rejects anything that is not a positive multiple of 1/2.
    static Spin from_value(double j) {
        const double twice = 2.0 * j;
        if (!std::isfinite(twice) || std::abs(twice - std::round(twice)) > 1e-9) {
            throw InvalidArgument("J must be a half-integer, got " + std::to_string(j));
        }
        return from_twice(static_cast<int>(std::lround(twice)));
    }

    [[nodiscard]] constexpr int twice() const noexcept { return twice_; }
    [[nodiscard]] constexpr double value() const noexcept { return 0.5 * twice_; }
    [[nodiscard]] constexpr int dim() const noexcept { return twice_ + 1; }
    [[nodiscard]] constexpr bool is_integer() const noexcept { return twice_ % 2 == 0; }

    /// Magnetic quantum number at basis index i (i = J - M).
    [[nodiscard]] constexpr double m_at(int index) const noexcept { return 0.5 * twice_ - index; }

    /// Basis index of M; M must be a valid level of this spin.
    [[nodiscard]] int index_of(double m) const {
        const double k = value() - m;
        const long i = std::lround(k);
        if (std::abs(k - static_cast<double>(i)) > 1e-9 || i < 0 || i > twice_) {
            throw InvalidArgument("M = " + std::to_string(m) + " is not a level of J = " + std::to_string(value()));
        }
        return static_cast<int>(i);
    }

    constexpr auto operator<=>(const Spin&) const = default;

private:
    constexpr explicit Spin(int twice_j) noexcept : twice_(twice_j) {}
    int twice_ = 1;
};

/// Throws unless both spins agree.
inline void require_same_spin(Spin a, Spin b, const char* what) {
    if (a != b) {
        throw InvalidArgument(std::string(what) + ": spin mismatch (J = " + std::to_string(a.value()) +
                              " vs J = " + std::to_string(b.value()) + ")");
    }
}

} // namespace tact
