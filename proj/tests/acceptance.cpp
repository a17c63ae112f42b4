// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, each followed by its
// sub-checks with the measured value and the pinned tolerance.
//
// Usage: acceptance [--expect-fail ID ...]
// Exit status is 0 iff the set of failing sub-check IDs equals the expected
// set exactly, so a known failure stays visible without masking regressions
// elsewhere (or an unexpected pass).

#include "oracle.hpp"

#include <tact/tact.hpp>
#include <tact/fit.hpp>
#include <tact/scan.hpp>
#include <tact/states.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

using namespace tact;
using std::numbers::pi;

namespace {

struct SubCheck {
    std::string id;
    bool passed;
    std::string detail;
};

struct Criterion {
    std::string id;
    std::string title;
    std::vector<SubCheck> checks;
    std::vector<std::string> notes;
    double seconds = 0.0;

    void check(const std::string& sub, bool ok, const char* fmt, auto... args) {
        char buf[512];
        std::snprintf(buf, sizeof buf, fmt, args...);
        checks.push_back({id + "." + sub, ok, buf});
    }
    [[nodiscard]] bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const SubCheck& c) { return c.passed; });
    }
};

double rel_dev(double v, double ref) { return std::abs(v / ref - 1.0); }

double tau_law(double a, double b, double j) { return std::log(a * j) / (b * j); }

// Shared sweep over J in {20, 30, 50, 70, 100, 140, 200}, all four metrics.
class SweepData {
public:
    SweepData() {
        const std::vector<double> js{20, 30, 50, 70, 100, 140, 200};
        rows_ = scaling_sweep(js, kAllMetrics, {}, SweepOptions{512, 1e-6, 0, false});
        for (const auto& r : rows_) index_[{r.j, r.metric}] = &r;
    }
    [[nodiscard]] const SweepRow& at(double j, Metric m) const { return *index_.at({j, m}); }
    [[nodiscard]] const std::vector<SweepRow>& rows() const { return rows_; }

private:
    std::vector<SweepRow> rows_;
    std::map<std::pair<double, Metric>, const SweepRow*> index_;
};

void c1_closed_form(Criterion& c) {
    const auto j = Spin::from_value(1);
    const auto gen = tact_generator(j, 1.0, 0.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double tau = 0.1 + 0.25 * i;
        for (auto method : {PropagationMethod::dense_expm, PropagationMethod::krylov}) {
            const auto s = evolve(SpinState::basis(j, 1), gen, tau, PropagatorConfig{method});
            Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(3);
            expected(0) = std::cos(tau);
            expected(2) = std::sin(tau);
            worst = std::max(worst, (s.amplitudes() - expected).cwiseAbs().maxCoeff());
        }
    }
    c.check("state", worst <= 1e-10, "20 taus x 2 methods: max |psi - (cos t, 0, sin t)| = %.3g (tol 1e-10)", worst);

    const double var = spin_moments(make_sss(j, pi / 4, TwistProtocol{})).variance_z;
    c.check("var_at_pi_over_4", std::abs(var - 1.0) <= 1e-8, "<dJz^2>(pi/4) = %.15g (target 1, tol 1e-8)", var);

    ScanSpec spec{j, Metric::var_z_max, 0.0, pi / 2};
    spec.refine_tol = 1e-9;
    const auto r = scan_tau(spec);
    const double vmax = r.value_star * r.value_star;
    c.check("scan_max", std::abs(vmax - 1.0) <= 1e-8 && std::abs(r.tau_star - pi / 4) <= 1e-4,
            "scanned max <dJz^2> = %.15g at tau = %.9f (target 1 at pi/4; tol 1e-8, tau tol 1e-4)", vmax, r.tau_star);
}

void c2_variances(Criterion& c) {
    for (double jv : {1.0, 2.0, 10.0, 50.0}) {
        const auto j = Spin::from_value(jv);
        const double ewss = spin_moments(make_ewss(j)).variance_z;
        const double tfs = spin_moments(make_twin_fock(j)).variance_z;
        const double cat = spin_moments(make_cat(j)).variance_z;
        const double css = spin_moments(make_css(j, {0.0, pi / 2})).variance_z;
        const double e1 = std::abs(ewss - jv * (jv + 1) / 3), e2 = std::abs(tfs - jv * (jv + 1) / 2),
                     e3 = std::abs(cat - jv * jv), e4 = std::abs(css - jv / 2);
        const double worst = std::max({e1, e2, e3, e4});
        c.check("J" + std::to_string(static_cast<int>(jv)), worst <= 1e-10,
                "J=%g: |err| ewss %.2g, twin-Fock %.2g, cat %.2g, x-CSS %.2g (tol 1e-10)", jv, e1, e2, e3, e4);
    }
}

void c3_fidelity(Criterion& c, const SweepData& d) {
    const double f_tfs = d.at(50, Metric::fid_tfs).value_star;
    const double ref = std::pow(0.0743 / 50 + 0.932, 2);
    c.check("fid_tfs", std::abs(f_tfs - ref) <= 0.01, "max F_TFS(J=50) = %.6f vs %.6f (tol 0.01)", f_tfs, ref);
    const double f_ewss = d.at(50, Metric::fid_ewss).value_star;
    c.check("fid_ewss", f_ewss > 0.98 && f_ewss < 1.0, "max F_EWSS(J=50) = %.6f (band (0.98, 1.0))", f_ewss);
}

void c4_times(Criterion& c, const SweepData& d) {
    for (double j : {20.0, 50.0, 100.0}) {
        const std::string at = "J" + std::to_string(static_cast<int>(j));
        const double te = d.at(j, Metric::fid_ewss).tau_star;
        const double tt = d.at(j, Metric::fid_tfs).tau_star;
        const double tz = d.at(j, Metric::var_z_max).tau_star;
        const double ty = d.at(j, Metric::var_y_min).tau_star;
        const double re = tau_law(1.10, 4.02, j), rt = tau_law(25.2, 3.93, j), rz = tau_law(11.5, 3.94, j);
        c.check("tau_ewss_" + at, rel_dev(te, re) <= 0.05, "J=%g tau_EWSS %.6f vs %.6f (rel %.4f, tol 0.05)", j, te,
                re, rel_dev(te, re));
        c.check("tau_tfs_" + at, rel_dev(tt, rt) <= 0.05, "J=%g tau_TFS %.6f vs %.6f (rel %.4f, tol 0.05)", j, tt, rt,
                rel_dev(tt, rt));
        c.check("tau_dJz_" + at, rel_dev(tz, rz) <= 0.05, "J=%g tau_dJz %.6f vs %.6f (rel %.4f, tol 0.05)", j, tz, rz,
                rel_dev(tz, rz));
        c.check("order_vary_ewss_" + at, ty < te, "J=%g tau(min dJy) %.6f < tau_EWSS %.6f", j, ty, te);
        c.check("order_ewss_tfs_" + at, te < tt, "J=%g tau_EWSS %.6f < tau_TFS %.6f", j, te, tt);
        char buf[160];
        std::snprintf(buf, sizeof buf, "recorded: J=%g tau_dJz %.6f %s tau_TFS %.6f", j, tz, tz < tt ? "<" : ">=", tt);
        c.notes.emplace_back(buf);
    }
}

void c5_scaling(Criterion& c, const SweepData& d) {
    std::vector<double> js, smax, s_tfs, s_ewss;
    for (const auto& r : d.rows()) {
        if (r.metric != Metric::var_z_max) continue;
        const Spin spin = Spin::from_value(r.j);
        js.push_back(r.j);
        smax.push_back(r.value_star);
        s_tfs.push_back(std::sqrt(spin_moments(make_sss(spin, d.at(r.j, Metric::fid_tfs).tau_star, TwistProtocol{})).variance_z));
        s_ewss.push_back(std::sqrt(spin_moments(make_sss(spin, d.at(r.j, Metric::fid_ewss).tau_star, TwistProtocol{})).variance_z));
    }
    const auto f15 = fit(FitFamily::shifted_power, js, smax);
    const auto f14 = fit(FitFamily::shifted_power, js, s_tfs);
    const auto f13 = fit(FitFamily::shifted_power, js, s_ewss);
    const auto& p15 = f15.model.params;
    const auto& p14 = f14.model.params;
    const auto& p13 = f13.model.params;
    c.check("max_exponent", f15.converged && std::abs(p15(2) - 1.0) <= 0.05,
            "max sigma: exponent %.5f (target 1.00, tol 0.05) [%s]", p15(2), std::string(to_string(f15.status)).c_str());
    c.check("max_prefactor", f15.converged && rel_dev(p15(0), 0.799) <= 0.03,
            "max sigma: prefactor %.5f vs 0.799 (rel %.4f, tol 0.03)", p15(0), rel_dev(p15(0), 0.799));
    c.check("tfs_prefactor", f14.converged && rel_dev(p14(0), 0.775) <= 0.03,
            "sigma at tau_TFS: prefactor %.5f vs 0.775 (rel %.4f, tol 0.03), exponent %.5f", p14(0),
            rel_dev(p14(0), 0.775), p14(2));
    c.check("ewss_prefactor", f13.converged && rel_dev(p13(0), 0.557) <= 0.10,
            "sigma at tau_EWSS: prefactor %.5f vs 0.557 (rel %.4f, tol 0.10), exponent %.5f", p13(0),
            rel_dev(p13(0), 0.557), p13(2));
    c.notes.emplace_back("fits over J in {20, 30, 50, 70, 100, 140, 200}");
}

void c6_propagators(Criterion& c) {
    double worst = 0.0;
    for (int twice = 1; twice <= 20; ++twice) {
        const Spin j = Spin::from_twice(twice);
        const double tau_max = default_tau_max(Spin::from_value(std::max(1.0, j.value())));
        for (int i = 0; i <= 32; ++i) {
            const double tau = tau_max * i / 32.0;
            const auto a = make_sss(j, tau, TwistProtocol{}, PropagatorConfig{PropagationMethod::dense_expm});
            const auto b = make_sss(j, tau, TwistProtocol{}, PropagatorConfig{PropagationMethod::krylov});
            worst = std::max(worst, (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff());
        }
    }
    c.check("krylov_vs_dense", worst <= 1e-9, "J <= 10, 33 taus over the window: max amplitude diff %.3g (tol 1e-9)",
            worst);

    for (double jv : {50.0, 200.0}) {
        const Spin j = Spin::from_value(jv);
        const auto gen = tact_generator(j, 1.0, 0.0);
        const auto spec = ScanSpec::with_default_window(j, Metric::var_z_max);
        const Eigen::VectorXd top = Eigen::VectorXd::Unit(j.dim(), 0);
        double norm_err = 0.0, odd = 0.0, rot_err = 0.0;
        for (int i = 0; i < spec.n_grid; ++i) {
            const double tau = spec.tau_max * i / (spec.n_grid - 1);
            const Eigen::VectorXd v = detail::propagate(gen, tau, top, PropagatorConfig{});
            norm_err = std::max(norm_err, std::abs(v.norm() - 1.0));
            for (int k = 1; k < j.dim(); k += 2) odd = std::max(odd, std::abs(v(k)));
            const SpinState twisted(j, (v / v.norm()).cast<std::complex<double>>(), true);
            const auto rotated = rotate(twisted, Axis::y, pi / 2);
            rot_err = std::max(rot_err, std::abs(rotated.amplitudes().norm() - 1.0));
        }
        c.check("invariants_J" + std::to_string(static_cast<int>(jv)), norm_err <= 1e-10 && odd == 0.0 && rot_err <= 1e-10,
                "J=%g, %d taus: |norm-1| twist %.2g, rotation %.2g (tol 1e-10); max odd-parity amplitude %.2g (must be 0)",
                jv, spec.n_grid, norm_err, rot_err, odd);
    }
}

void c7_qpd(Criterion& c, const SweepData& d) {
    const Spin j = Spin::from_value(50);
    const double tau = d.at(50, Metric::fid_tfs).tau_star;
    const auto s = make_sss(j, tau, TwistProtocol{});
    const auto g = qpd(s, 360, 181);
    const auto [ip, kc] = g.nearest(pi, pi / 2);
    const auto [i0, k0] = g.nearest(0.0, pi / 2);
    // Along the phi = pi meridian the density rises on both sides of the equator.
    const int dk = 17; // 17 degrees
    const double centre = g.values(ip, kc), north = g.values(ip, kc - dk), south = g.values(ip, kc + dk);
    const double opposite = g.values(i0, k0);
    c.check("qpd_gap", centre < north && centre < south && centre < opposite,
            "Q(pi, pi/2) = %.3g < Q(pi, pi/2 -+ 17deg) = %.3g, %.3g and Q(0, pi/2) = %.3g", centre, north, south,
            opposite);

    const auto p = prob_distribution(s);
    const int m0 = j.index_of(0), mp = j.index_of(2), mm = j.index_of(-2);
    c.check("pm_dip", p(m0) < p(mp) && p(m0) < p(mm), "P(0) = %.8g < P(+2) = %.8g, P(-2) = %.8g", p(m0), p(mp), p(mm));
    char buf[96];
    std::snprintf(buf, sizeof buf, "state at tau_TFS = %.6f", tau);
    c.notes.emplace_back(buf);
}

void c8_fit_engine(Criterion& c) {
    struct Case {
        FitFamily family;
        std::vector<double> params;
        std::vector<double> js;
    };
    std::vector<double> j10_100, j5_400;
    for (int j = 10; j <= 100; j += 10) j10_100.push_back(j);
    for (int j = 5; j <= 400; j += 15) j5_400.push_back(j);
    const Case cases[] = {{FitFamily::shifted_power, {0.5, 1.0, 1.0}, j10_100},
                          {FitFamily::log_over_linear, {2.0, 4.0}, j10_100},
                          {FitFamily::sq_power_offset, {0.0298, 0.621, 0.995}, j5_400}};
    for (const auto& k : cases) {
        FitModel truth{k.family, Eigen::Map<const Eigen::VectorXd>(k.params.data(), k.params.size())};
        std::vector<double> ys;
        for (double j : k.js) ys.push_back(evaluate(truth, j));
        const auto r = fit(k.family, k.js, ys);
        const double err = (r.model.params - truth.params).cwiseAbs().maxCoeff();
        c.check(std::string("recover_") + std::string(to_string(k.family)), r.converged && err <= 1e-6,
                "%s: max |param error| %.3g (tol 1e-6), rss %.3g", std::string(to_string(k.family)).c_str(), err, r.rss);
    }

    double worst = 0.0;
    const FitModel models[] = {{FitFamily::sq_power_offset, Eigen::Vector3d(0.0743, 1.0, 0.932)},
                               {FitFamily::shifted_power, Eigen::Vector3d(0.799, 0.453, 1.0)},
                               {FitFamily::log_over_linear, Eigen::Vector2d(11.5, 3.94)}};
    for (const auto& m : models) {
        for (double j : {3.0, 37.0, 250.0}) {
            const Eigen::VectorXd g = model_gradient(m, j);
            for (Eigen::Index k = 0; k < m.params.size(); ++k) {
                const double h = 1e-5 * std::max(1.0, std::abs(m.params(k)));
                FitModel up = m, dn = m;
                up.params(k) += h;
                dn.params(k) -= h;
                const double fd = (evaluate(up, j) - evaluate(dn, j)) / (2 * h);
                worst = std::max(worst, std::abs(fd - g(k)) / std::max(std::abs(g(k)), 1e-12));
            }
        }
    }
    c.check("jacobian_fd", worst <= 1e-6, "max relative |analytic - central difference| = %.3g (tol 1e-6)", worst);
}

} // namespace

int main(int argc, char** argv) {
    std::set<std::string> expected;
    for (int i = 1; i < argc; ++i) {
        if (std::string(argv[i]) == "--expect-fail") continue;
        expected.insert(argv[i]);
    }

    std::vector<Criterion> criteria;
    auto run = [&](const char* id, const char* title, const std::function<void(Criterion&)>& body) {
        Criterion c{id, title, {}, {}, 0.0};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            body(c);
        } catch (const std::exception& e) {
            c.checks.push_back({c.id + ".exception", false, e.what()});
        }
        c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        criteria.push_back(std::move(c));
    };

    run("C1", "closed-form J=1 oracle", c1_closed_form);
    if (criteria.back().seconds >= 1.0) criteria.back().check("runtime", false, "%.3f s (limit 1 s)", criteria.back().seconds);
    run("C2", "analytic variances", c2_variances);

    const auto t0 = std::chrono::steady_clock::now();
    const SweepData sweep;
    const double sweep_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    run("C3", "fidelity maxima at J=50", [&](Criterion& c) { c3_fidelity(c, sweep); });
    run("C4", "optimal times and ordering", [&](Criterion& c) { c4_times(c, sweep); });
    run("C5", "variance scaling fits", [&](Criterion& c) { c5_scaling(c, sweep); });
    run("C6", "propagator cross-validation and invariants", c6_propagators);
    run("C7", "QPD and P(M) structure at J=50", [&](Criterion& c) { c7_qpd(c, sweep); });
    run("C8", "fit engine", c8_fit_engine);

    std::set<std::string> failing;
    for (const auto& c : criteria) {
        std::printf("[%s] %s %s (%.2f s)\n", c.passed() ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), c.seconds);
        for (const auto& s : c.checks) {
            std::printf("    %-4s %-28s %s\n", s.passed ? "ok" : "FAIL", s.id.c_str(), s.detail.c_str());
            if (!s.passed) failing.insert(s.id);
        }
        for (const auto& n : c.notes) std::printf("    note %s\n", n.c_str());
    }
    std::printf("shared sweep (J = 20..200, 4 metrics): %.1f s\n", sweep_seconds);

    const int passed = static_cast<int>(std::count_if(criteria.begin(), criteria.end(), [](const Criterion& c) { return c.passed(); }));
    std::printf("%d/%zu criteria passed\n", passed, criteria.size());
    if (failing == expected) {
        if (!expected.empty()) std::printf("failing sub-checks match the expected list (%zu)\n", expected.size());
        return 0;
    }
    for (const auto& f : failing) {
        if (!expected.count(f)) std::printf("unexpected failure: %s\n", f.c_str());
    }
    for (const auto& e : expected) {
        if (!failing.count(e)) std::printf("expected failure did not occur: %s\n", e.c_str());
    }
    return 1;
}
