// Copyright 2026 The tactsim Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fit.hpp
 * @brief Nonlinear least-squares fits of J-scaling data to three model families.
 *
 *   sq_power_offset  F(J) = (a / J^b + c)^2
 *   shifted_power    V(J) = a (J + b)^c
 *   log_over_linear  tau(J) = log(a J) / (b J)
 *
 * Fitting is unweighted, by Levenberg-Marquardt with Marquardt's diagonal
 * scaling, so rescaling a parameter rescales the iterates exactly.
 */

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace tact {

enum class FitFamily { sq_power_offset, shifted_power, log_over_linear };

FitFamily parse_fit_family(std::string_view name);
std::string_view to_string(FitFamily f);
int parameter_count(FitFamily f);

struct FitModel {
    FitFamily family = FitFamily::shifted_power;
    Eigen::VectorXd params; ///< (a, b[, c])
};

/// Model value at J; throws InvalidArgument outside the family's domain.
double evaluate(const FitModel& model, double j);

/// Limit of the model as J -> infinity (may be +/-inf).
double asymptote(const FitModel& model);

/// d model / d params at J.
Eigen::VectorXd model_gradient(const FitModel& model, double j);

/// Whether (params, J) lies in the family's domain.
bool in_domain(const FitModel& model, double j);

enum class FitStatus { converged, max_iterations, rank_deficient, stalled };
std::string_view to_string(FitStatus s);

struct FitResult {
    FitModel model;
    double rss = 0.0;
    Eigen::VectorXd param_se;
    int n_points = 0;
    int iterations = 0;
    bool converged = false;
    FitStatus status = FitStatus::stalled;
    /// max_k |J_k . r| / (|J_k| |r|); zero for an exact fit.
    double gradient_cosine = 0.0;
};

struct FitOptions {
    int max_iterations = 1000;
    double gradient_tol = 1e-8; ///< bound on gradient_cosine for `converged`
    double rank_tol = 1e-12;    ///< relative pivot threshold for rank detection
};

/// Linearization-based starting point for each family.
Eigen::VectorXd auto_initial_guess(FitFamily family, std::span<const double> js, std::span<const double> ys);

/**
 * Least-squares fit. Needs >= 3 points with distinct positive J. Failures to
 * converge and rank deficiency are reported through `status`, never thrown.
 */
FitResult fit(FitFamily family, std::span<const double> js, std::span<const double> ys,
              const std::optional<Eigen::VectorXd>& init = std::nullopt, const FitOptions& options = {});

} // namespace tact
