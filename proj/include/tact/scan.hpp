// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file scan.hpp
 * @brief Search over the twisting time tau for the optimum of a state metric,
 *        and sweeps of that search over J.
 *
 * A scan samples the metric on a uniform coarse grid, brackets the best grid
 * point (the smallest tau wins ties within 1e-12) and refines it by
 * golden-section search.
 */

#pragma once

#include <tact/dynamics.hpp>
#include <tact/spin.hpp>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tact {

/// Metric optimized over tau. Variance metrics report the standard deviation <dJ^2>^{1/2}.
enum class Metric {
    fid_ewss,  ///< fidelity to the equally-weighted superposition state (max)
    fid_tfs,   ///< fidelity to the twin-Fock state (max), integer J only
    var_z_max, ///< <dJz^2>^{1/2} (max)
    var_y_min, ///< <dJy^2>^{1/2} (min)
};

Metric parse_metric(std::string_view name);
std::string_view to_string(Metric m);
bool is_maximization(Metric m);
inline constexpr Metric kAllMetrics[] = {Metric::fid_ewss, Metric::fid_tfs, Metric::var_z_max, Metric::var_y_min};

/// Default upper end of the tau window: three times log(25.2 J) / (3.93 J).
double default_tau_max(Spin j);

struct ScanSpec {
    Spin j;
    Metric metric;
    double tau_min = 0.0;
    double tau_max = 0.0;
    int n_grid = 512;
    double refine_tol = 0.0;
    TwistProtocol protocol{};

    /// Window [0, default_tau_max(j)], 512 points, refine_tol = 1e-6 tau_max.
    static ScanSpec with_default_window(Spin j, Metric metric);

    void validate() const;
};

struct ScanResult {
    ScanSpec spec;
    std::vector<double> grid_taus;
    std::vector<double> grid_values;
    double tau_star = 0.0;
    double value_star = 0.0;
    int evaluations = 0;
};

/// Metric value of the squeezed state at one tau.
class MetricEvaluator {
public:
    MetricEvaluator(Spin j, Metric metric, TwistProtocol protocol = {}, PropagatorConfig cfg = {});
    double operator()(double tau) const;

private:
    Spin j_;
    Metric metric_;
    TwistProtocol protocol_;
    PropagatorConfig cfg_;
    std::optional<BasicSpinState<double>> target_;
};

ScanResult scan_tau(const ScanSpec& spec, const PropagatorConfig& cfg = {});

struct SweepOptions {
    int n_grid = 512;
    double refine_rel_tol = 1e-6; ///< refine_tol = refine_rel_tol * tau_max
    unsigned threads = 0;         ///< 0 = hardware concurrency
    bool keep_traces = true;
};

/// One (J, metric) row. Failed rows carry ok = false and the error message.
struct SweepRow {
    double j = 0.0;
    Metric metric = Metric::fid_ewss;
    double tau_star = 0.0;
    double value_star = 0.0;
    int grid_size = 0;
    double tol = 0.0;
    bool ok = false;
    std::string error;
    std::optional<ScanResult> result;
};

/// Rows ordered by j (outer) then metric (inner), independent of scheduling.
std::vector<SweepRow> scaling_sweep(std::span<const double> j_list, std::span<const Metric> metrics,
                                    const PropagatorConfig& cfg = {}, const SweepOptions& options = {});

} // namespace tact
