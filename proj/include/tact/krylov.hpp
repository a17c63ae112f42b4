// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file krylov.hpp
 * @brief Action of exp(tA) on a vector through an Arnoldi basis with adaptive
 *        time substepping (Sidje's Expokit scheme).
 *
 * Each substep builds an m-dimensional Krylov basis, exponentiates the small
 * Hessenberg matrix augmented for the local error estimate, and advances the
 * solution. Local errors are budgeted in proportion to the step length so the
 * accumulated estimate stays below the requested tolerance.
 */

#pragma once

#include <tact/expm.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tact {

/// Propagation could not reach the requested accuracy.
class PropagationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct KrylovOptions {
    double tolerance = 1e-10;
    int max_substeps = 100000;
    int subspace_dim = 30;
    int max_rejections = 10;
};

struct KrylovStats {
    int substeps = 0;
    int rejections = 0;
    double error_estimate = 0.0;
};

namespace detail {

/// Rounds up to two significant digits.
inline double round_step(double step) {
    const double s = std::pow(10.0, std::floor(std::log10(step)) - 1.0);
    return std::ceil(step / s) * s;
}

} // namespace detail

/**
 * Returns exp(t A) v where `apply(x)` computes A x.
 *
 * `anorm` is any upper bound on a norm of A; it only seeds the first step size
 * and the breakdown threshold. Vector is an Eigen column vector (real or
 * complex); with a real operator and a real vector all arithmetic stays real.
 */
template <typename Vector, typename ApplyFn>
Vector krylov_expv(ApplyFn&& apply, double anorm, double t, const Vector& v, const KrylovOptions& opt,
                   KrylovStats* stats = nullptr) {
    using Scalar = typename Vector::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using RealScalar = typename Eigen::NumTraits<Scalar>::Real;

    KrylovStats local;
    const auto n = v.size();
    const double beta0 = static_cast<double>(v.norm());
    if (t == 0.0 || anorm == 0.0 || beta0 == 0.0 || n == 0) {
        if (stats) *stats = local;
        return v;
    }
    if (!std::isfinite(t)) throw std::invalid_argument("krylov_expv: non-finite time");

    const int m = static_cast<int>(std::min<Eigen::Index>(n, std::max(2, opt.subspace_dim)));
    const double tol = opt.tolerance;
    const double t_out = std::abs(t);
    const double sgn = t < 0 ? -1.0 : 1.0;
    const double btol = 1e-14 * std::max(1.0, anorm);
    const double rndoff = anorm * std::numeric_limits<double>::epsilon();
    constexpr double gamma = 0.9;
    constexpr double delta = 1.2;

    double xm = 1.0 / m;
    const double fact = std::pow((m + 1) / std::exp(1.0), m + 1) * std::sqrt(2.0 * M_PI * (m + 1));
    double t_new = (1.0 / anorm) * std::pow((fact * tol) / (4.0 * beta0 * anorm), xm);
    t_new = detail::round_step(t_new);

    Vector w = v;
    double beta = beta0;
    double t_now = 0.0;

    Matrix basis(n, m + 1);
    Matrix hess(m + 2, m + 2);

    while (t_now < t_out) {
        if (local.substeps >= opt.max_substeps) {
            throw PropagationError("Krylov propagation exceeded " + std::to_string(opt.max_substeps) +
                                   " substeps at t = " + std::to_string(t_now) + " of " + std::to_string(t_out));
        }
        ++local.substeps;
        double t_step = std::min(t_out - t_now, t_new);

        basis.setZero();
        hess.setZero();
        basis.col(0) = w / Scalar(RealScalar(beta));
        int mb = m;
        bool breakdown = false;
        for (int j = 0; j < m; ++j) {
            Vector p = apply(Vector(basis.col(j)));
            for (int i = 0; i <= j; ++i) {
                const Scalar h = basis.col(i).dot(p);
                hess(i, j) = h;
                p -= h * basis.col(i);
            }
            const double s = static_cast<double>(p.norm());
            if (s < btol) {
                breakdown = true;
                mb = j + 1;
                t_step = t_out - t_now;
                break;
            }
            hess(j + 1, j) = Scalar(RealScalar(s));
            basis.col(j + 1) = p / Scalar(RealScalar(s));
        }

        double avnorm = 0.0;
        if (!breakdown) {
            hess(m + 1, m) = Scalar(1);
            avnorm = static_cast<double>(apply(Vector(basis.col(m))).norm());
        }

        Matrix expo;
        double err_loc = 0.0;
        for (int reject = 0;; ++reject) {
            const int mx = mb + (breakdown ? 0 : 2);
            expo = expm(Matrix(Scalar(RealScalar(sgn * t_step)) * hess.topLeftCorner(mx, mx)));
            if (breakdown) {
                err_loc = btol;
                break;
            }
            const double phi1 = std::abs(beta * static_cast<double>(std::abs(expo(m, 0))));
            const double phi2 = std::abs(beta * static_cast<double>(std::abs(expo(m + 1, 0))) * avnorm);
            if (phi1 > 10.0 * phi2) {
                err_loc = phi2;
                xm = 1.0 / m;
            } else if (phi1 > phi2) {
                err_loc = (phi1 * phi2) / (phi1 - phi2);
                xm = 1.0 / m;
            } else {
                err_loc = phi1;
                xm = 1.0 / (m - 1);
            }
            const double budget = tol * t_step / t_out;
            if (err_loc <= delta * budget) break;
            if (reject >= opt.max_rejections) {
                throw PropagationError("Krylov propagation cannot meet tolerance " + std::to_string(tol) +
                                       " (local error " + std::to_string(err_loc) + ")");
            }
            ++local.rejections;
            t_step = detail::round_step(gamma * t_step * std::pow(budget / err_loc, xm));
        }

        const int mx = mb + (breakdown ? 0 : 1);
        w = basis.leftCols(mx) * (Scalar(RealScalar(beta)) * expo.col(0).head(mx));
        beta = static_cast<double>(w.norm());
        t_now += t_step;
        if (err_loc > 0.0) {
            t_new = detail::round_step(gamma * t_step * std::pow((tol * t_step / t_out) / err_loc, xm));
        }
        local.error_estimate += std::max(err_loc, rndoff);
    }

    if (stats) *stats = local;
    return w;
}

} // namespace tact
