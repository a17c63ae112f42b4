// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file io.hpp
 * @brief JSON and CSV encodings of states, QPD grids, scan results, sweep
 *        tables and fits. Doubles are written with 17 significant digits.
 */

#pragma once

#include <tact/fit.hpp>
#include <tact/observables.hpp>
#include <tact/scan.hpp>
#include <tact/spin_state.hpp>

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace tact::io {

using Json = nlohmann::json;

/// "%.17g"; non-finite values as "inf", "-inf", "nan".
std::string format_double(double v);

/// {"j": 1.5, "amplitudes": [[re, im], ...]}
Json to_json(const SpinState& s);
/// Re-validates length and normalization.
SpinState state_from_json(const Json& j);

/// Rows "M,P" in basis order, with header.
std::string prob_distribution_csv(const SpinState& s);

/// Rows "phi,theta,value", phi-major, with header.
std::string to_csv(const QpdGrid& g);
Json to_json(const QpdGrid& g, const std::string& description = {});
QpdGrid qpd_from_json(const Json& j);

Json to_json(const ScanSpec& s);
ScanSpec scan_spec_from_json(const Json& j);
Json to_json(const ScanResult& r);
ScanResult scan_result_from_json(const Json& j);

/// Header: j,metric,tau_star,value_star,grid_size,tol,status,error
std::string sweep_csv(const std::vector<SweepRow>& rows);
Json to_json(const std::vector<SweepRow>& rows);
std::vector<SweepRow> sweep_from_json(const Json& j);

Json to_json(const FitResult& f);
FitResult fit_result_from_json(const Json& j);

/// Minimal CSV table: header names plus string cells (no quoting support).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] int column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::filesystem::path& path);
std::vector<SweepRow> sweep_from_csv(const CsvTable& table);

std::string read_text(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_text(const std::filesystem::path& path, const std::string& content);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

} // namespace tact::io
