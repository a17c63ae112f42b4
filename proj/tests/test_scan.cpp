// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracle.hpp"

#include <tact/scan.hpp>
#include <tact/states.hpp>

#include <cmath>
#include <numbers>

using namespace tact;

TEST_CASE("metric names") {
    for (Metric m : kAllMetrics) CHECK(parse_metric(to_string(m)) == m);
    CHECK_THROWS_AS(parse_metric("fid_cat"), InvalidArgument);
    CHECK(is_maximization(Metric::fid_ewss));
    CHECK_FALSE(is_maximization(Metric::var_y_min));
}

TEST_CASE("J = 1 closed-form scan") {
    // Before the rotation the state is cos t|1,1> + sin t|1,-1>. The rotation
    // maps Jz to Jx, <Jx> = 0 by parity and <Jx^2> = (1 + sin 2t) / 2, so the
    // standard deviation is sqrt((1 + sin 2t) / 2), maximal (= 1) at t = pi/4.
    ScanSpec spec{Spin::from_value(1), Metric::var_z_max, 0.0, std::numbers::pi / 2};
    spec.refine_tol = 1e-9;
    const auto r = scan_tau(spec);
    CHECK(std::abs(r.tau_star - std::numbers::pi / 4) < 1e-6);
    CHECK(std::abs(r.value_star - 1.0) < 1e-10);
    for (std::size_t i = 0; i < r.grid_taus.size(); ++i) {
        CHECK(std::abs(r.grid_values[i] - std::sqrt((1 + std::sin(2 * r.grid_taus[i])) / 2)) < 1e-10);
    }
}

TEST_CASE("metric evaluator against the dense oracle") {
    const double jv = 6.0;
    const auto o = oracle::dense_ops(jv);
    const Eigen::VectorXcd ewss = Eigen::VectorXcd::Constant(13, 1.0 / std::sqrt(13.0));
    const Eigen::VectorXcd tfs = oracle::rotation(o.jx, std::numbers::pi / 2) * oracle::basis(jv, 6);
    const Spin j = Spin::from_value(jv);
    const MetricEvaluator f_ewss(j, Metric::fid_ewss), f_tfs(j, Metric::fid_tfs), vz(j, Metric::var_z_max),
        vy(j, Metric::var_y_min);
    for (double tau : {0.0, 0.03, 0.11, 0.4}) {
        const Eigen::VectorXcd s = oracle::sss(jv, tau);
        CAPTURE(tau);
        CHECK(std::abs(f_ewss(tau) - std::norm(ewss.dot(s))) < 1e-10);
        CHECK(std::abs(f_tfs(tau) - std::norm(tfs.dot(s))) < 1e-10);
        CHECK(std::abs(vz(tau) - std::sqrt(oracle::variance(s, o.jz))) < 1e-10);
        CHECK(std::abs(vy(tau) - std::sqrt(oracle::variance(s, o.jy))) < 1e-10);
    }
}

TEST_CASE("refinement never falls below the coarse grid and is deterministic") {
    for (Metric m : kAllMetrics) {
        auto spec = ScanSpec::with_default_window(Spin::from_value(8), m);
        spec.n_grid = 32;
        const auto a = scan_tau(spec);
        const auto b = scan_tau(spec);
        CHECK(a.tau_star == b.tau_star);
        CHECK(a.value_star == b.value_star);
        CHECK(a.grid_values == b.grid_values);
        const double sign = is_maximization(m) ? 1.0 : -1.0;
        for (double v : a.grid_values) CHECK(sign * a.value_star >= sign * v - 1e-12);
        CHECK(a.tau_star >= spec.tau_min);
        CHECK(a.tau_star <= spec.tau_max);
    }
}

TEST_CASE("scan validation") {
    ScanSpec spec{Spin::from_value(2), Metric::fid_ewss, 0.5, 0.1};
    spec.refine_tol = 1e-6;
    CHECK_THROWS_AS(scan_tau(spec), InvalidArgument);
    spec = ScanSpec::with_default_window(Spin::from_value(2.5), Metric::fid_tfs);
    CHECK_THROWS_WITH_AS(scan_tau(spec), doctest::Contains("integer J"), InvalidArgument);
    spec = ScanSpec::with_default_window(Spin::from_value(2), Metric::fid_ewss);
    spec.n_grid = 3;
    CHECK_THROWS_AS(scan_tau(spec), InvalidArgument);
}

TEST_CASE("default window covers the reference optima") {
    for (double jv : {5.0, 50.0, 400.0}) {
        const double tmax = default_tau_max(Spin::from_value(jv));
        CHECK(tmax == doctest::Approx(3 * std::log(25.2 * jv) / (3.93 * jv)));
        CHECK(std::log(1.10 * jv) / (4.02 * jv) < tmax / 2);
        CHECK(std::log(11.5 * jv) / (3.94 * jv) < tmax / 2);
    }
}

TEST_CASE("sweep rows: order, closed form and per-row failure") {
    const std::vector<double> js{1.0, 1.5, 3.0};
    const Metric metrics[] = {Metric::var_z_max, Metric::fid_tfs};
    SweepOptions opt;
    opt.n_grid = 64;
    opt.threads = 3;
    const auto rows = scaling_sweep(js, metrics, {}, opt);
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].j == js[i / 2]);
        CHECK(rows[i].metric == metrics[i % 2]);
    }
    CHECK(rows[0].ok);
    CHECK(std::abs(rows[0].value_star - 1.0) < 1e-8);
    CHECK(std::abs(rows[0].tau_star - std::numbers::pi / 4) < 1e-3);
    CHECK(rows[2].ok);
    CHECK_FALSE(rows[3].ok);
    CHECK(rows[3].error.find("integer J") != std::string::npos);
    CHECK(rows[5].ok);

    opt.threads = 1;
    const auto serial = scaling_sweep(js, metrics, {}, opt);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(serial[i].tau_star == rows[i].tau_star);
}

TEST_CASE("sigma_max grows with J") {
    const std::vector<double> js{10, 20, 50};
    const Metric metrics[] = {Metric::var_z_max};
    SweepOptions opt;
    opt.n_grid = 128;
    const auto rows = scaling_sweep(js, metrics, {}, opt);
    CHECK(rows[0].value_star < rows[1].value_star);
    CHECK(rows[1].value_star < rows[2].value_star);
    CHECK(std::abs(rows[2].value_star / (0.799 * 50.453) - 1.0) < 0.02);
}
