#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace sesf {

struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    /// Improper integrals are truncated here at the latest, and reported non-converged if the tail is not small.
    double max_horizon = 500.0;
    /// Largest panel of the composite Gauss-Kronrod rule.
    double panel_width = std::numbers::pi / 8.0;
    /// Length of the windows used to estimate the local decay rate of the integrand.
    double tail_window = 8.0;
    /// Known decay rate of the log-integrand; replaces the fitted one in the tail bound when set.
    std::optional<double> tail_rate;
    int max_depth = 40;
};

/// Throws InvalidArgument unless tolerances, horizon, panel width and window are positive.
void validate(const QuadratureConfig& q);

struct IntegralReport {
    /// exp(log_value); +inf when the integral overflows a double.
    double value = 0.0;
    double log_value = -std::numeric_limits<double>::infinity();
    /// Upper end of the integrated range.
    double truncation_T = 0.0;
    /// Bound on the omitted tail (0 for proper integrals, +inf when no decay was found).
    double tail_bound = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;
    /// Reason for non-convergence, empty otherwise.
    std::string note;
};

/// log of the integrand as a function of the integration variable.
using LogIntegrand = std::function<double(double)>;
/// Points in (lo, hi) where the integrand is not smooth.
using BreakFn = std::function<std::vector<double>(double lo, double hi)>;

/// Integral of exp(f) over [a, b] by adaptive Gauss-Kronrod panels, accumulated in log space.
/// Panels on which f is affine are integrated exactly, so steep piecewise-linear log-integrands need no
/// refinement.
IntegralReport integrate_log(const LogIntegrand& f, double a, double b, const BreakFn& breaks,
                             const QuadratureConfig& q);

/// Integral of exp(f) over [a, infinity), truncated once the bounded tail falls below tolerance.
IntegralReport integrate_log_tail(const LogIntegrand& f, double a, const BreakFn& breaks, const QuadratureConfig& q);

}  // namespace sesf
