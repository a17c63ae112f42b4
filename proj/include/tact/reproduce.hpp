// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file reproduce.hpp
 * @brief End-to-end pipeline: sweep every metric over a J list, fit the eight
 *        reference scaling laws, compare coefficients and run threshold checks.
 */

#pragma once

#include <tact/fit.hpp>
#include <tact/scan.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tact {

/// Which sweep-derived series a scaling law is fitted to.
enum class FitQuantity {
    fid_ewss_max, ///< max F_EWSS
    fid_tfs_max,  ///< max F_TFS
    sigma_at_ewss, ///< <dJz^2>^{1/2} at tau_EWSS
    sigma_at_tfs,  ///< <dJz^2>^{1/2} at tau_TFS
    sigma_max,     ///< max over tau of <dJz^2>^{1/2}
    tau_ewss,
    tau_tfs,
    tau_sigma_max,
};

std::string_view to_string(FitQuantity q);

struct ReferenceLaw {
    std::string_view label;
    FitFamily family;
    FitQuantity quantity;
    std::array<double, 3> params; ///< unused trailing entries are zero for two-parameter families
};

/// The eight laws the report compares against, in report order.
const std::vector<ReferenceLaw>& reference_laws();

struct ReproduceOptions {
    std::vector<double> j_list{5, 10, 20, 50, 100, 200, 400};
    double fit_j_min = 50.0; ///< fits use sweep rows with J >= fit_j_min
    SweepOptions sweep{};
};

struct LawFit {
    ReferenceLaw law;
    std::vector<double> js;
    std::vector<double> ys;
    std::optional<FitResult> result;
    std::string error; ///< set when the fit stage failed for this law
};

struct SigmaRow {
    double j = 0.0;
    double at_tau_ewss = 0.0;
    double at_tau_tfs = 0.0;
};

struct Check {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string note;
};

struct StageError {
    std::string stage;
    std::string message;
};

struct ReproduceReport {
    ReproduceOptions options;
    std::vector<SweepRow> sweep;
    std::vector<SigmaRow> sigma;
    std::vector<LawFit> fits;
    std::vector<Check> checks;
    std::vector<std::string> observations; ///< recorded, never asserted
    std::vector<StageError> errors;

    /// True iff no stage failed and every check passed.
    [[nodiscard]] bool ok() const;
};

/// Requires an ascending, integer-valued J list (the twin-Fock metric needs integer J).
ReproduceReport reproduce(const ReproduceOptions& options, const PropagatorConfig& cfg = {});

/**
 * Writes sweep.csv, sweep.json, sigma.csv, fits.json, report.csv, checks.csv
 * and report.txt into `dir`.
 */
void write_report(const ReproduceReport& report, const std::filesystem::path& dir);

/// Human-readable summary (the content of report.txt).
std::string format_report(const ReproduceReport& report);

} // namespace tact
