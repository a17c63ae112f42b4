// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spin_state.hpp
 * @brief Pure state of a collective spin in the |J,M> basis.
 */

#pragma once

#include <tact/spin.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>

namespace tact {

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Allowed deviation of the squared norm from one.
template <typename Real>
constexpr Real kNormTolerance = Real(1e-12);

/**
 * Normalized amplitude vector over M = J, J-1, ..., -J.
 *
 * Immutable after construction. `is_real()` marks states whose amplitudes have
 * exactly zero imaginary parts; it is metadata only and may be false for a
 * state that happens to be real.
 */
template <typename Real = double>
class BasicSpinState {
public:
    using Scalar = std::complex<Real>;
    using Vector = ComplexVector<Real>;

    /// Validates length, normalization and (if requested) reality.
    BasicSpinState(Spin j, Vector amplitudes, bool real_flag = false)
        : j_(j), amplitudes_(std::move(amplitudes)), real_(real_flag) {
        if (amplitudes_.size() != j_.dim()) {
            throw InvalidArgument("amplitude vector has length " + std::to_string(amplitudes_.size()) +
                                  ", expected 2J+1 = " + std::to_string(j_.dim()));
        }
        const Real dev = std::abs(amplitudes_.squaredNorm() - Real(1));
        if (!(dev <= kNormTolerance<Real>)) {
            throw InvalidArgument("state is not normalized (|norm^2 - 1| = " + std::to_string(double(dev)) + ")");
        }
        if (real_ && !amplitudes_.imag().isZero(Real(0))) {
            throw InvalidArgument("real_flag set on a state with nonzero imaginary parts");
        }
    }

    /// Rescales to unit norm first; the vector must be nonzero and finite.
    static BasicSpinState normalized(Spin j, Vector amplitudes) {
        const Real n = amplitudes.norm();
        if (!(n > Real(0)) || !std::isfinite(double(n))) {
            throw InvalidArgument("cannot normalize a zero or non-finite amplitude vector");
        }
        amplitudes /= n;
        const bool real = amplitudes.imag().isZero(Real(0));
        return BasicSpinState(j, std::move(amplitudes), real);
    }

    /// Basis state |J,M>.
    static BasicSpinState basis(Spin j, double m) {
        Vector v = Vector::Zero(j.dim());
        v(j.index_of(m)) = Scalar(1);
        return BasicSpinState(j, std::move(v), true);
    }

    [[nodiscard]] Spin spin() const noexcept { return j_; }
    [[nodiscard]] int dim() const noexcept { return j_.dim(); }
    [[nodiscard]] const Vector& amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] bool is_real() const noexcept { return real_; }

    /// Amplitude <J,M|psi>.
    [[nodiscard]] Scalar amplitude(double m) const { return amplitudes_(j_.index_of(m)); }

private:
    Spin j_;
    Vector amplitudes_;
    bool real_;
};

using SpinState = BasicSpinState<double>;

} // namespace tact
