// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file states.hpp
 * @brief Factories for the special states: coherent, equally-weighted,
 *        twin-Fock and cat.
 */

#pragma once

#include <tact/dynamics.hpp>
#include <tact/spin_state.hpp>

#include <cmath>
#include <numbers>

namespace tact {

/// Bloch-sphere direction of a coherent spin state.
struct CoherentSpinParams {
    double alpha = 0.0; ///< azimuth, [0, 2pi)
    double beta = 0.0;  ///< polar angle, [0, pi]

    /// Equivalent direction with alpha in [0, 2pi) and beta in [0, pi].
    [[nodiscard]] CoherentSpinParams canonical() const {
        constexpr double two_pi = 2 * std::numbers::pi;
        double a = alpha;
        double b = std::fmod(beta, two_pi);
        if (b < 0) b += two_pi;
        if (b > std::numbers::pi) {
            b = two_pi - b;
            a += std::numbers::pi;
        }
        a = std::fmod(a, two_pi);
        if (a < 0) a += two_pi;
        if (a >= two_pi) a = 0.0;
        return {a, b};
    }
};

/**
 * Log-magnitudes of the coherent-state coefficients
 * sqrt(C(2J, k)) cos^{2J-k}(beta/2) sin^k(beta/2), k = J - M.
 *
 * Entries are -inf where the coefficient vanishes (0^k with k > 0).
 */
template <typename Real = double>
RealVector<Real> css_log_magnitudes(Spin j, Real beta) {
    const int n = j.twice();
    const Real c = std::cos(beta / 2);
    const Real s = std::sin(beta / 2);
    const Real log_c = std::log(std::abs(c));
    const Real log_s = std::log(std::abs(s));
    const Real lg_n = std::lgamma(Real(n + 1));
    RealVector<Real> out(j.dim());
    for (int k = 0; k <= n; ++k) {
        Real v = Real(0.5) * (lg_n - std::lgamma(Real(k + 1)) - std::lgamma(Real(n - k + 1)));
        if (n - k > 0) v += Real(n - k) * log_c;
        if (k > 0) v += Real(k) * log_s;
        out(k) = v;
    }
    return out;
}

/// Coherent spin state along (alpha, beta), expanded in |J,M> with binomials in log space.
template <typename Real = double>
BasicSpinState<Real> make_css(Spin j, CoherentSpinParams params) {
    const auto p = params.canonical();
    const auto logs = css_log_magnitudes<Real>(j, Real(p.beta));
    ComplexVector<Real> amp(j.dim());
    for (int k = 0; k < j.dim(); ++k) {
        const Real mag = std::exp(logs(k));
        if (k == 0 || p.alpha == 0.0) {
            amp(k) = std::complex<Real>(mag, Real(0));
        } else {
            const Real phase = Real(k) * Real(p.alpha);
            amp(k) = std::complex<Real>(mag * std::cos(phase), mag * std::sin(phase));
        }
    }
    return BasicSpinState<Real>::normalized(j, std::move(amp));
}

/// Uniform amplitude 1/sqrt(2J+1) on every level.
template <typename Real = double>
BasicSpinState<Real> make_ewss(Spin j) {
    ComplexVector<Real> amp = ComplexVector<Real>::Constant(j.dim(), Real(1) / std::sqrt(Real(j.dim())));
    return BasicSpinState<Real>::normalized(j, std::move(amp));
}

/// exp(-i pi/2 Jx) |J,0>; J must be an integer.
template <typename Real = double>
BasicSpinState<Real> make_twin_fock(Spin j, const PropagatorConfig& cfg = {}) {
    if (!j.is_integer()) throw InvalidArgument("twin-Fock requires integer J");
    return rotate(BasicSpinState<Real>::basis(j, 0.0), Axis::x, std::numbers::pi / 2, cfg);
}

/// (|J,J> + |J,-J>)/sqrt(2).
template <typename Real = double>
BasicSpinState<Real> make_cat(Spin j) {
    ComplexVector<Real> amp = ComplexVector<Real>::Zero(j.dim());
    amp(0) = Real(1);
    amp(j.dim() - 1) = Real(1);
    return BasicSpinState<Real>::normalized(j, std::move(amp));
}

} // namespace tact
