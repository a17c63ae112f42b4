// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file observables.hpp
 * @brief Fidelity, level populations, the coherent-state quasi-probability
 *        distribution, spin moments and the field-estimation precision bounds.
 */

#pragma once

#include <tact/banded_operator.hpp>
#include <tact/spin_state.hpp>
#include <tact/states.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace tact {

/// |<a|b>|^2, symmetric in its arguments.
template <typename Real>
Real fidelity(const BasicSpinState<Real>& a, const BasicSpinState<Real>& b) {
    require_same_spin(a.spin(), b.spin(), "fidelity");
    return std::min(Real(1), std::norm(a.amplitudes().dot(b.amplitudes())));
}

/// P(M) = |<J,M|psi>|^2 in basis order (index 0 <-> M = J).
template <typename Real>
RealVector<Real> prob_distribution(const BasicSpinState<Real>& s) {
    return s.amplitudes().cwiseAbs2();
}

/**
 * Q(phi, theta) = |<CSS(phi, theta)|psi>|^2 sampled on a uniform grid with
 * phi_i = 2 pi i / n_phi (i < n_phi) and theta_k = pi k / (n_theta - 1).
 */
struct QpdGrid {
    double j = 0.0;
    int n_phi = 0;
    int n_theta = 0;
    Eigen::MatrixXd values; ///< n_phi x n_theta

    [[nodiscard]] double phi(int i) const { return 2 * std::numbers::pi * i / n_phi; }
    [[nodiscard]] double theta(int k) const { return std::numbers::pi * k / (n_theta - 1); }

    /// Grid indices closest to (phi, theta); phi is taken modulo 2 pi.
    [[nodiscard]] std::pair<int, int> nearest(double phi_value, double theta_value) const {
        const double two_pi = 2 * std::numbers::pi;
        double p = std::fmod(phi_value, two_pi);
        if (p < 0) p += two_pi;
        const int i = static_cast<int>(std::lround(p / two_pi * n_phi)) % n_phi;
        const int k = std::clamp(static_cast<int>(std::lround(theta_value / std::numbers::pi * (n_theta - 1))), 0,
                                 n_theta - 1);
        return {i, k};
    }

    /// Throws unless dimensions match and every value lies in [0, 1].
    void validate() const {
        if (n_phi < 2 || n_theta < 2) throw InvalidArgument("QPD grid resolutions must be >= 2");
        if (values.rows() != n_phi || values.cols() != n_theta) throw InvalidArgument("QPD grid shape mismatch");
        if (!((values.array() >= 0.0).all() && (values.array() <= 1.0).all())) {
            throw InvalidArgument("QPD values must lie in [0, 1]");
        }
    }
};

namespace detail {

// sum_k c_k e^{-i k phi} by Horner's rule in z = e^{-i phi}.
template <typename Real>
std::complex<Real> horner_phase(const ComplexVector<Real>& c, Real phi) {
    const std::complex<Real> z = std::polar(Real(1), -phi);
    std::complex<Real> acc(0);
    for (Eigen::Index k = c.size() - 1; k >= 0; --k) acc = acc * z + c(k);
    return acc;
}

template <typename Real>
ComplexVector<Real> weighted_css_coefficients(const BasicSpinState<Real>& s, Real theta) {
    const auto logs = css_log_magnitudes<Real>(s.spin(), theta);
    ComplexVector<Real> c(s.dim());
    for (int k = 0; k < s.dim(); ++k) c(k) = std::exp(logs(k)) * s.amplitudes()(k);
    return c;
}

} // namespace detail

/// Q at a single point.
template <typename Real>
Real qpd_value(const BasicSpinState<Real>& s, double phi, double theta) {
    const auto c = detail::weighted_css_coefficients(s, Real(theta));
    return std::min(Real(1), std::norm(detail::horner_phase(c, Real(phi))));
}

template <typename Real>
QpdGrid qpd(const BasicSpinState<Real>& s, int n_phi = 360, int n_theta = 180) {
    if (n_phi < 2 || n_theta < 2) throw InvalidArgument("QPD grid resolutions must be >= 2");
    QpdGrid grid;
    grid.j = s.spin().value();
    grid.n_phi = n_phi;
    grid.n_theta = n_theta;
    grid.values.resize(n_phi, n_theta);
    for (int k = 0; k < n_theta; ++k) {
        const auto c = detail::weighted_css_coefficients(s, Real(grid.theta(k)));
        for (int i = 0; i < n_phi; ++i) {
            grid.values(i, k) = static_cast<double>(std::min(Real(1), std::norm(detail::horner_phase(c, Real(grid.phi(i))))));
        }
    }
    return grid;
}

struct SpinMoments {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero(); ///< (<Jx>, <Jy>, <Jz>)
    double variance_x = 0.0;
    double variance_y = 0.0;
    double variance_z = 0.0;
};

/// <J_k> and <dJ_k^2> = <J_k^2> - <J_k>^2; variances are clamped at zero.
template <typename Real>
SpinMoments spin_moments(const BasicSpinState<Real>& s) {
    const Spin j = s.spin();
    const auto& psi = s.amplitudes();
    SpinMoments out;

    Real mz = 0;
    Real mz2 = 0;
    for (int k = 0; k < j.dim(); ++k) {
        const Real p = std::norm(psi(k));
        const Real m = Real(j.m_at(k));
        mz += m * p;
        mz2 += m * m * p;
    }
    out.mean.z() = static_cast<double>(mz);
    out.variance_z = std::max(0.0, static_cast<double>(mz2 - mz * mz));

    auto transverse = [&](SpinOperatorKind kind, double& mean, double& variance) {
        const auto v = build_operator<Real>(j, kind).apply(psi);
        const Real m = psi.dot(v).real();
        mean = static_cast<double>(m);
        variance = std::max(0.0, static_cast<double>(v.squaredNorm() - m * m));
    };
    transverse(SpinOperatorKind::Jx, out.mean.x(), out.variance_x);
    transverse(SpinOperatorKind::Jy, out.mean.y(), out.variance_y);
    return out;
}

/// Magnetic-field estimation setup: H_B = -gamma_s B Jz applied for time t.
struct FieldEstimationParams {
    double gamma_s = 1.0;
    double t = 1.0;

    void validate() const {
        if (!(gamma_s > 0.0) || !(t > 0.0) || !std::isfinite(gamma_s) || !std::isfinite(t)) {
            throw InvalidArgument("gamma_s and t must be finite and strictly positive");
        }
    }
};

/**
 * Upper bound on the Fisher information for B and the matching lower bound on
 * the estimator standard deviation. Both are bounds, not achieved values.
 */
struct FisherBound {
    double fisher_upper = 0.0; ///< 4 (gamma_s t)^2 <dJz^2>
    double sigma_lower = 0.0;  ///< 1 / sqrt(fisher_upper); +inf when the variance is zero
};

inline FisherBound fisher_bound(double variance_z, const FieldEstimationParams& p) {
    p.validate();
    if (!(variance_z >= 0.0) || !std::isfinite(variance_z)) {
        throw InvalidArgument("variance_z must be finite and non-negative");
    }
    const double gt = p.gamma_s * p.t;
    FisherBound out;
    out.fisher_upper = 4.0 * gt * gt * variance_z;
    out.sigma_lower = out.fisher_upper == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::sqrt(out.fisher_upper);
    return out;
}

} // namespace tact
