// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <tact/fit.hpp>

#include <tact/spin.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace tact {

FitFamily parse_fit_family(std::string_view name) {
    if (name == "sq_power_offset") return FitFamily::sq_power_offset;
    if (name == "shifted_power") return FitFamily::shifted_power;
    if (name == "log_over_linear") return FitFamily::log_over_linear;
    throw InvalidArgument("unknown fit family '" + std::string(name) + "'");
}

std::string_view to_string(FitFamily f) {
    switch (f) {
    case FitFamily::sq_power_offset: return "sq_power_offset";
    case FitFamily::shifted_power: return "shifted_power";
    case FitFamily::log_over_linear: return "log_over_linear";
    }
    return "?";
}

std::string_view to_string(FitStatus s) {
    switch (s) {
    case FitStatus::converged: return "converged";
    case FitStatus::max_iterations: return "max_iterations";
    case FitStatus::rank_deficient: return "rank_deficient";
    case FitStatus::stalled: return "stalled";
    }
    return "?";
}

int parameter_count(FitFamily f) { return f == FitFamily::log_over_linear ? 2 : 3; }

namespace {

void check_param_count(const FitModel& m) {
    if (m.params.size() != parameter_count(m.family)) {
        throw InvalidArgument(std::string(to_string(m.family)) + " expects " +
                              std::to_string(parameter_count(m.family)) + " parameters");
    }
}

} // namespace

bool in_domain(const FitModel& m, double j) {
    if (m.params.size() != parameter_count(m.family) || !m.params.allFinite() || !std::isfinite(j)) return false;
    const auto& p = m.params;
    switch (m.family) {
    case FitFamily::sq_power_offset: return j > 0.0;
    case FitFamily::shifted_power: return j + p(1) > 0.0;
    case FitFamily::log_over_linear: return p(0) * j > 0.0 && p(1) * j != 0.0;
    }
    return false;
}

double evaluate(const FitModel& m, double j) {
    check_param_count(m);
    if (!in_domain(m, j)) {
        throw InvalidArgument("J = " + std::to_string(j) + " is outside the domain of " +
                              std::string(to_string(m.family)));
    }
    const auto& p = m.params;
    switch (m.family) {
    case FitFamily::sq_power_offset: {
        const double u = p(0) * std::pow(j, -p(1)) + p(2);
        return u * u;
    }
    case FitFamily::shifted_power: return p(0) * std::pow(j + p(1), p(2));
    case FitFamily::log_over_linear: return std::log(p(0) * j) / (p(1) * j);
    }
    return 0.0;
}

double asymptote(const FitModel& m) {
    check_param_count(m);
    const auto& p = m.params;
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (m.family) {
    case FitFamily::sq_power_offset:
        if (p(1) > 0.0) return p(2) * p(2);
        if (p(1) == 0.0) return (p(0) + p(2)) * (p(0) + p(2));
        return p(0) == 0.0 ? p(2) * p(2) : inf;
    case FitFamily::shifted_power:
        if (p(2) > 0.0) return p(0) > 0.0 ? inf : (p(0) < 0.0 ? -inf : 0.0);
        if (p(2) == 0.0) return p(0);
        return 0.0;
    case FitFamily::log_over_linear: return 0.0;
    }
    return 0.0;
}

Eigen::VectorXd model_gradient(const FitModel& m, double j) {
    check_param_count(m);
    if (!in_domain(m, j)) throw InvalidArgument("gradient requested outside the model domain");
    const auto& p = m.params;
    Eigen::VectorXd g(p.size());
    switch (m.family) {
    case FitFamily::sq_power_offset: {
        const double jb = std::pow(j, -p(1));
        const double u = p(0) * jb + p(2);
        g << 2.0 * u * jb, -2.0 * u * p(0) * jb * std::log(j), 2.0 * u;
        break;
    }
    case FitFamily::shifted_power: {
        const double base = j + p(1);
        const double pw = std::pow(base, p(2));
        g << pw, p(0) * p(2) * std::pow(base, p(2) - 1.0), p(0) * pw * std::log(base);
        break;
    }
    case FitFamily::log_over_linear: {
        g << 1.0 / (p(0) * p(1) * j), -std::log(p(0) * j) / (p(1) * p(1) * j);
        break;
    }
    }
    return g;
}

namespace {

struct Line {
    double intercept = 0.0;
    double slope = 0.0;
};

Line regress(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    Line l;
    l.slope = sxx > 0 ? sxy / sxx : 0.0;
    l.intercept = my - l.slope * mx;
    return l;
}

void validate_data(std::span<const double> js, std::span<const double> ys) {
    if (js.size() != ys.size()) throw InvalidArgument("fit: J and y lists differ in length");
    if (js.size() < 3) throw InvalidArgument("fit needs at least 3 data points");
    std::vector<double> sorted(js.begin(), js.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i] > 0.0) || !std::isfinite(sorted[i])) throw InvalidArgument("fit: J values must be positive");
        if (i > 0 && sorted[i] == sorted[i - 1]) throw InvalidArgument("fit: J values must be distinct");
    }
    for (double y : ys) {
        if (!std::isfinite(y)) throw InvalidArgument("fit: y values must be finite");
    }
}

} // namespace

Eigen::VectorXd auto_initial_guess(FitFamily family, std::span<const double> js, std::span<const double> ys) {
    validate_data(js, ys);
    const std::size_t n = js.size();
    Eigen::VectorXd p(parameter_count(family));

    switch (family) {
    case FitFamily::log_over_linear: {
        // tau J = log(a)/b + (1/b) log J
        std::vector<double> x(n), z(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::log(js[i]);
            z[i] = ys[i] * js[i];
        }
        const Line l = regress(x, z);
        const double b = l.slope != 0.0 ? 1.0 / l.slope : 1.0;
        p << std::exp(l.intercept * b), b;
        break;
    }
    case FitFamily::shifted_power: {
        // log y = log a + c log J with b = 0
        const bool positive = std::all_of(ys.begin(), ys.end(), [](double y) { return y > 0.0; });
        const bool negative = std::all_of(ys.begin(), ys.end(), [](double y) { return y < 0.0; });
        if (!positive && !negative) {
            double mean = 0;
            for (double y : ys) mean += y;
            p << mean / n, 0.0, 1.0;
            break;
        }
        const double sign = positive ? 1.0 : -1.0;
        std::vector<double> x(n), z(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::log(js[i]);
            z[i] = std::log(sign * ys[i]);
        }
        const Line l = regress(x, z);
        p << sign * std::exp(l.intercept), 0.0, l.slope;
        break;
    }
    case FitFamily::sq_power_offset: {
        // c from the largest-J point, then log(|sqrt(y) - c|) = log|a| - b log J,
        // iterated a few times to remove the a/J^b bias in c.
        std::size_t last = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (js[i] > js[last]) last = i;
        }
        std::vector<double> root(n);
        for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(std::max(0.0, ys[i]));
        double a = 0.0, b = 1.0, c = root[last];
        for (int pass = 0; pass < 4; ++pass) {
            std::vector<double> x, z, s;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = root[i] - c;
                if (d == 0.0) continue;
                x.push_back(std::log(js[i]));
                z.push_back(std::log(std::abs(d)));
                s.push_back(d > 0 ? 1.0 : -1.0);
            }
            const bool consistent = x.size() >= 2 && std::all_of(s.begin(), s.end(), [&](double v) { return v == s[0]; });
            if (!consistent) {
                if (pass == 0) {
                    std::size_t first = 0;
                    for (std::size_t i = 1; i < n; ++i) {
                        if (js[i] < js[first]) first = i;
                    }
                    a = (root[first] - c) * js[first];
                    b = 1.0;
                }
                break;
            }
            const Line l = regress(x, z);
            a = s[0] * std::exp(l.intercept);
            b = -l.slope;
            c = root[last] - a * std::pow(js[last], -b);
        }
        p << a, b, c;
        break;
    }
    }
    return p;
}

FitResult fit(FitFamily family, std::span<const double> js, std::span<const double> ys,
              const std::optional<Eigen::VectorXd>& init, const FitOptions& options) {
    validate_data(js, ys);
    const int n = static_cast<int>(js.size());
    const int np = parameter_count(family);

    FitModel model{family, init ? *init : auto_initial_guess(family, js, ys)};
    check_param_count(model);
    for (double j : js) {
        if (!in_domain(model, j)) throw InvalidArgument("fit: initial parameters are outside the model domain");
    }

    auto residuals = [&](const FitModel& m, Eigen::VectorXd& r) {
        r.resize(n);
        for (int i = 0; i < n; ++i) {
            if (!in_domain(m, js[i])) return false;
            r(i) = evaluate(m, js[i]) - ys[i];
            if (!std::isfinite(r(i))) return false;
        }
        return true;
    };
    auto jacobian = [&](const FitModel& m) {
        Eigen::MatrixXd jac(n, np);
        for (int i = 0; i < n; ++i) jac.row(i) = model_gradient(m, js[i]).transpose();
        return jac;
    };
    auto cosine = [&](const Eigen::MatrixXd& jac, const Eigen::VectorXd& r) {
        const double rn = r.norm();
        if (rn == 0.0) return 0.0;
        double worst = 0.0;
        for (int k = 0; k < np; ++k) {
            const double cn = jac.col(k).norm();
            if (cn == 0.0) continue;
            worst = std::max(worst, std::abs(jac.col(k).dot(r)) / (cn * rn));
        }
        return worst;
    };

    double y_scale = 0.0;
    for (double y : ys) y_scale += y * y;
    const double exact_rss = 1e-26 * std::max(y_scale, std::numeric_limits<double>::min());

    Eigen::VectorXd r;
    residuals(model, r);
    double rss = r.squaredNorm();

    FitResult out;
    out.n_points = n;
    double mu = 1e-3;
    double nu = 2.0;
    bool stalled = false;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        const Eigen::MatrixXd jac = jacobian(model);
        if (rss <= exact_rss || cosine(jac, r) <= 1e-15) break;
        const Eigen::MatrixXd a = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        Eigen::VectorXd diag = a.diagonal();
        const double floor = std::max(diag.maxCoeff() * 1e-30, std::numeric_limits<double>::min());
        diag = diag.cwiseMax(floor);

        // The damped step solves [J; sqrt(mu D)] h = [-r; 0] by QR rather than
        // the normal equations, which square the conditioning of J.
        Eigen::MatrixXd aug(n + np, np);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + np);
        aug.topRows(n) = jac;
        rhs.head(n) = -r;
        bool accepted = false;
        while (!accepted) {
            aug.bottomRows(np) = (mu * diag).cwiseSqrt().asDiagonal();
            const Eigen::VectorXd h = aug.colPivHouseholderQr().solve(rhs);
            if (!h.allFinite() || h.norm() <= 1e-15 * (model.params.norm() + 1e-15) || mu > 1e30) {
                stalled = true;
                break;
            }
            FitModel trial{family, model.params + h};
            Eigen::VectorXd rt;
            if (residuals(trial, rt)) {
                const double rss_t = rt.squaredNorm();
                const double predicted = h.dot(mu * diag.cwiseProduct(h) - g);
                const double rho = predicted > 0 ? (rss - rss_t) / predicted : -1.0;
                if (rho > 0.0) {
                    model = std::move(trial);
                    r = std::move(rt);
                    rss = rss_t;
                    mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
                    nu = 2.0;
                    accepted = true;
                    continue;
                }
            }
            mu *= nu;
            nu *= 2.0;
        }
        if (stalled) break;
    }

    const Eigen::MatrixXd jac = jacobian(model);
    out.model = model;
    out.rss = rss;
    out.iterations = iter;
    out.gradient_cosine = rss <= exact_rss ? 0.0 : cosine(jac, r);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
    qr.setThreshold(options.rank_tol);
    const bool full_rank = qr.rank() == np;

    out.param_se = Eigen::VectorXd::Zero(np);
    if (full_rank && n > np) {
        const Eigen::MatrixXd cov = (jac.transpose() * jac).inverse() * (rss / (n - np));
        out.param_se = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    }

    if (!full_rank) {
        out.status = FitStatus::rank_deficient;
    } else if (out.gradient_cosine <= options.gradient_tol) {
        out.status = FitStatus::converged;
    } else if (iter >= options.max_iterations) {
        out.status = FitStatus::max_iterations;
    } else {
        out.status = FitStatus::stalled;
    }
    out.converged = out.status == FitStatus::converged;
    return out;
}

} // namespace tact
