// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <tact/scan.hpp>

#include <tact/observables.hpp>
#include <tact/states.hpp>

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <thread>

namespace tact {

Metric parse_metric(std::string_view name) {
    if (name == "fid_ewss") return Metric::fid_ewss;
    if (name == "fid_tfs") return Metric::fid_tfs;
    if (name == "var_z_max") return Metric::var_z_max;
    if (name == "var_y_min") return Metric::var_y_min;
    throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(Metric m) {
    switch (m) {
    case Metric::fid_ewss: return "fid_ewss";
    case Metric::fid_tfs: return "fid_tfs";
    case Metric::var_z_max: return "var_z_max";
    case Metric::var_y_min: return "var_y_min";
    }
    return "?";
}

bool is_maximization(Metric m) { return m != Metric::var_y_min; }

double default_tau_max(Spin j) {
    const double jj = j.value();
    return 3.0 * std::log(25.2 * jj) / (3.93 * jj);
}

ScanSpec ScanSpec::with_default_window(Spin j, Metric metric) {
    ScanSpec spec{j, metric};
    spec.tau_max = default_tau_max(j);
    spec.refine_tol = 1e-6 * spec.tau_max;
    return spec;
}

void ScanSpec::validate() const {
    if (!(tau_min >= 0.0 && tau_min < tau_max) || !std::isfinite(tau_max)) {
        throw InvalidArgument("scan window must satisfy 0 <= tau_min < tau_max");
    }
    if (n_grid < 8) throw InvalidArgument("scan grid needs at least 8 points");
    if (!(refine_tol > 0.0)) throw InvalidArgument("refine_tol must be positive");
    if (metric == Metric::fid_tfs && !j.is_integer()) {
        throw InvalidArgument("metric fid_tfs is undefined for half-integer J (twin-Fock requires integer J)");
    }
    protocol.validate();
}

MetricEvaluator::MetricEvaluator(Spin j, Metric metric, TwistProtocol protocol, PropagatorConfig cfg)
    : j_(j), metric_(metric), protocol_(protocol), cfg_(cfg) {
    if (metric_ == Metric::fid_ewss) target_ = make_ewss(j_);
    if (metric_ == Metric::fid_tfs) target_ = make_twin_fock(j_, cfg_);
}

double MetricEvaluator::operator()(double tau) const {
    const auto state = make_sss(j_, tau, protocol_, cfg_);
    switch (metric_) {
    case Metric::fid_ewss:
    case Metric::fid_tfs: return fidelity(*target_, state);
    case Metric::var_z_max: return std::sqrt(spin_moments(state).variance_z);
    case Metric::var_y_min: return std::sqrt(spin_moments(state).variance_y);
    }
    return 0.0;
}

namespace {

constexpr double kTieTolerance = 1e-12;

// Golden-section search for the maximum of `score` on [lo, hi]; returns the
// best point evaluated.
template <typename Score>
std::pair<double, double> golden_maximize(Score&& score, double lo, double hi, double tol, int& evaluations) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = score(c);
    double fd = score(d);
    evaluations += 2;
    double best_x = fc >= fd ? c : d;
    double best_f = std::max(fc, fd);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = score(c);
            ++evaluations;
            if (fc > best_f) {
                best_f = fc;
                best_x = c;
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = score(d);
            ++evaluations;
            if (fd > best_f) {
                best_f = fd;
                best_x = d;
            }
        }
    }
    return {best_x, best_f};
}

} // namespace

ScanResult scan_tau(const ScanSpec& spec, const PropagatorConfig& cfg) {
    spec.validate();
    cfg.validate();
    const MetricEvaluator metric(spec.j, spec.metric, spec.protocol, cfg);
    const double sign = is_maximization(spec.metric) ? 1.0 : -1.0;
    auto score = [&](double tau) { return sign * metric(tau); };

    ScanResult out;
    out.spec = spec;
    out.grid_taus.resize(spec.n_grid);
    out.grid_values.resize(spec.n_grid);
    const double step = (spec.tau_max - spec.tau_min) / (spec.n_grid - 1);
    for (int i = 0; i < spec.n_grid; ++i) {
        const double tau = i + 1 == spec.n_grid ? spec.tau_max : spec.tau_min + i * step;
        out.grid_taus[i] = tau;
        out.grid_values[i] = metric(tau);
    }
    out.evaluations = spec.n_grid;

    double best = -std::numeric_limits<double>::infinity();
    for (double v : out.grid_values) best = std::max(best, sign * v);
    int best_i = 0;
    while (sign * out.grid_values[best_i] < best - kTieTolerance) ++best_i;

    const double lo = out.grid_taus[std::max(0, best_i - 1)];
    const double hi = out.grid_taus[std::min(spec.n_grid - 1, best_i + 1)];
    const auto [x, f] = golden_maximize(score, lo, hi, spec.refine_tol, out.evaluations);

    if (f > sign * out.grid_values[best_i]) {
        out.tau_star = x;
        out.value_star = sign * f;
    } else {
        out.tau_star = out.grid_taus[best_i];
        out.value_star = out.grid_values[best_i];
    }
    return out;
}

std::vector<SweepRow> scaling_sweep(std::span<const double> j_list, std::span<const Metric> metrics,
                                    const PropagatorConfig& cfg, const SweepOptions& options) {
    if (j_list.empty() || metrics.empty()) throw InvalidArgument("scaling_sweep needs nonempty J and metric lists");

    std::vector<SweepRow> rows(j_list.size() * metrics.size());
    for (std::size_t a = 0; a < j_list.size(); ++a) {
        for (std::size_t b = 0; b < metrics.size(); ++b) {
            auto& row = rows[a * metrics.size() + b];
            row.j = j_list[a];
            row.metric = metrics[b];
            row.grid_size = options.n_grid;
        }
    }

    auto run_row = [&](SweepRow& row) {
        try {
            ScanSpec spec = ScanSpec::with_default_window(Spin::from_value(row.j), row.metric);
            spec.n_grid = options.n_grid;
            spec.refine_tol = options.refine_rel_tol * spec.tau_max;
            row.tol = spec.refine_tol;
            auto result = scan_tau(spec, cfg);
            row.tau_star = result.tau_star;
            row.value_star = result.value_star;
            row.ok = true;
            if (options.keep_traces) row.result = std::move(result);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
        }
    };

    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(rows.size()));
    if (threads <= 1) {
        for (auto& row : rows) run_row(row);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < rows.size(); i = next++) run_row(rows[i]);
        });
    }
    pool.clear();
    return rows;
}

} // namespace tact
