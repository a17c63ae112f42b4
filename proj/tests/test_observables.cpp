// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracle.hpp"

#include <tact/dynamics.hpp>
#include <tact/observables.hpp>
#include <tact/states.hpp>

#include <cmath>
#include <numbers>

using namespace tact;
using std::numbers::pi;

TEST_CASE("fidelity examples") {
    const auto j = Spin::from_value(4);
    const auto c = make_css(j, {0.3, 1.1});
    CHECK(fidelity(c, c) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fidelity(SpinState::basis(j, 4), SpinState::basis(j, -4)) == 0.0);
    CHECK(fidelity(make_cat(j), SpinState::basis(j, 4)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(fidelity(c, make_ewss(Spin::from_value(3))), InvalidArgument);
}

TEST_CASE("probability distribution examples") {
    const auto p = prob_distribution(make_ewss(Spin::from_value(1)));
    for (int k = 0; k < 3; ++k) CHECK(p(k) == doctest::Approx(1.0 / 3).epsilon(1e-15));
    const auto q = prob_distribution(make_cat(Spin::from_value(1)));
    CHECK(q(0) == doctest::Approx(0.5));
    CHECK(q(1) == 0.0);
    CHECK(q(2) == doctest::Approx(0.5));
}

TEST_CASE("QPD of the top state") {
    const auto g = qpd(SpinState::basis(Spin::from_value(3), 3), 16, 9);
    CHECK(g.n_phi == 16);
    CHECK(g.n_theta == 9);
    for (int i = 0; i < g.n_phi; ++i) {
        CHECK(g.values(i, 0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(g.values(i, g.n_theta - 1) < 1e-30);
        for (int k = 0; k < g.n_theta; ++k) {
            const double expected = std::pow(std::cos(g.theta(k) / 2), 12);
            CHECK(std::abs(g.values(i, k) - expected) < 1e-14);
        }
    }
}

TEST_CASE("QPD single point for the J = 1 uniform state") {
    // |sum_k conj(c_k) psi_k|^2 with c = (1/2, 1/sqrt2, 1/2) and psi_k = 1/sqrt3.
    const double expected = std::pow(1.0 + 1.0 / std::sqrt(2.0), 2) / 3.0;
    CHECK(std::abs(qpd_value(make_ewss(Spin::from_value(1)), 0.0, pi / 2) - expected) < 1e-14);
}

TEST_CASE("QPD agrees with the dense coherent-state oracle") {
    const auto j = Spin::from_value(5);
    const auto s = make_sss(j, 0.1, TwistProtocol{});
    for (double phi : {0.0, 1.0, 3.5}) {
        for (double theta : {0.2, 1.4, 2.9}) {
            const Eigen::VectorXcd c = oracle::css(5.0, phi, theta);
            const double ref = std::norm(c.dot(s.amplitudes()));
            CHECK(std::abs(qpd_value(s, phi, theta) - ref) < 1e-13);
        }
    }
}

TEST_CASE("QPD bounded by one") {
    for (double jv : {0.5, 2.0, 10.0}) {
        const auto j = Spin::from_value(jv);
        for (const auto& s : {make_ewss(j), make_cat(j), make_sss(j, 0.1, TwistProtocol{})}) {
            CHECK(qpd(s, 24, 13).values.maxCoeff() <= 1.0 + 1e-14);
            CHECK(qpd(s, 24, 13).values.minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("QPD resolution of identity") {
    // (2J+1)/(4 pi) * integral Q dOmega = 1, midpoint rule in theta, uniform in phi.
    for (double jv : {0.5, 1.0, 5.0, 12.5, 20.0}) {
        const auto j = Spin::from_value(jv);
        for (const auto& s : {make_ewss(j), make_sss(j, 0.05, TwistProtocol{}), make_css(j, {1.0, 2.0})}) {
            const int n = 256;
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                const double phi = 2 * pi * i / n;
                for (int k = 0; k < n; ++k) {
                    const double theta = pi * (k + 0.5) / n;
                    sum += qpd_value(s, phi, theta) * std::sin(theta);
                }
            }
            const double integral = sum * (2 * pi / n) * (pi / n) * j.dim() / (4 * pi);
            CAPTURE(jv);
            CHECK(std::abs(integral - 1.0) < 1e-3);
        }
    }
}

TEST_CASE("QPD grid validation and nearest lookup") {
    CHECK_THROWS_AS(qpd(make_ewss(Spin::from_value(1)), 0, 10), InvalidArgument);
    CHECK_THROWS_AS(qpd(make_ewss(Spin::from_value(1)), 10, 1), InvalidArgument);
    const auto g = qpd(make_ewss(Spin::from_value(1)), 8, 5);
    const auto [i, k] = g.nearest(pi, pi / 2);
    CHECK(i == 4);
    CHECK(k == 2);
    const auto [i2, k2] = g.nearest(2 * pi - 0.01, 0.0);
    CHECK(i2 == 0);
    CHECK(k2 == 0);
}

TEST_CASE("analytic variances") {
    for (double jv : {1.0, 2.0, 10.0, 50.0}) {
        const auto j = Spin::from_value(jv);
        CAPTURE(jv);
        CHECK(std::abs(spin_moments(make_ewss(j)).variance_z - jv * (jv + 1) / 3) < 1e-10);
        CHECK(std::abs(spin_moments(make_twin_fock(j)).variance_z - jv * (jv + 1) / 2) < 1e-10);
        CHECK(std::abs(spin_moments(make_cat(j)).variance_z - jv * jv) < 1e-10);
        const auto x = spin_moments(make_css(j, {0.0, pi / 2}));
        CHECK(std::abs(x.variance_z - jv / 2) < 1e-10);
        CHECK(std::abs(x.variance_y - jv / 2) < 1e-10);
        CHECK(x.variance_x < 1e-10);
        CHECK(std::abs(x.mean.x() - jv) < 1e-10);
    }
}

TEST_CASE("moments agree with dense oracle") {
    const auto j = Spin::from_value(7);
    const auto s = make_sss(j, 0.08, TwistProtocol{});
    const auto o = oracle::dense_ops(7.0);
    const auto m = spin_moments(s);
    CHECK(std::abs(m.variance_x - oracle::variance(s.amplitudes(), o.jx)) < 1e-11);
    CHECK(std::abs(m.variance_y - oracle::variance(s.amplitudes(), o.jy)) < 1e-11);
    CHECK(std::abs(m.variance_z - oracle::variance(s.amplitudes(), o.jz)) < 1e-11);
}

TEST_CASE("Fisher bound") {
    const FieldEstimationParams unit{1.0, 1.0};
    for (double jv : {1.0, 10.0, 50.0}) {
        CHECK(fisher_bound(jv * jv, unit).sigma_lower == doctest::Approx(1.0 / (2 * jv)));
        CHECK(fisher_bound(jv / 2, unit).sigma_lower == doctest::Approx(1.0 / std::sqrt(2 * jv)));
    }
    CHECK(std::isinf(fisher_bound(0.0, unit).sigma_lower));
    CHECK(fisher_bound(2.0, FieldEstimationParams{2.0, 0.5}).fisher_upper == doctest::Approx(8.0));
    CHECK_THROWS_AS(fisher_bound(-1.0, unit), InvalidArgument);
    CHECK_THROWS_AS(fisher_bound(1.0, FieldEstimationParams{0.0, 1.0}), InvalidArgument);
}
