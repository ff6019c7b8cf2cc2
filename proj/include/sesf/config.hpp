#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sesf/gallery.hpp"
#include "sesf/grid.hpp"
#include "sesf/quadrature.hpp"
#include "sesf/stability.hpp"

namespace sesf {

/// One task of an analysis run. Parameters are stored in canonical text form, defaults included.
struct TaskSpec {
    /// classify, check:<CLASS>, fit:<CLASS>, datko, rolewicz, bv-datko, barbashin or proposition.
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;

    const std::string& param(const std::string& key) const;
    double number(const std::string& key) const;
    bool operator==(const TaskSpec&) const = default;
};

/// A parsed analysis specification with every default filled in.
///
/// Text format: whitespace-separated `key=value` tokens, `#` starts a comment. A `task=<name>` token starts
/// a task; the parameter tokens following it on the same line belong to that task. Every other token sets
/// a global key. See README.md for the full key list.
struct AnalysisConfig {
    std::string system;
    /// Inline systems only: log u definition, ratio form and semiflow.
    std::string logu;
    std::string form = "plain";
    std::string semiflow = "translation";

    double horizon = 200.0;
    int log_points = 96;
    double log_min = 0.01;
    double uniform_step = 2.0;
    double band = 0.0;
    int n_max = 40;
    std::vector<double> x_samples{0.0};
    int directions = 16;
    std::vector<double> s_grid;
    std::vector<double> t_grid;
    unsigned long long seed = 0;

    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    double max_horizon = 500.0;
    double panel_width = 0.39269908169872414;
    double tail_window = 8.0;

    double log_n_cap = 50.0;
    double rate_cap = 100.0;
    double alpha_min = 1e-3;
    double check_tol = 1e-9;

    std::vector<std::string> formats{"json", "table", "plot"};
    std::string out = ".";

    std::vector<TaskSpec> tasks;

    AnalysisConfig();
    bool operator==(const AnalysisConfig&) const = default;
};

/// Throws ConfigError (with line and field) on syntax errors, unknown keys or tasks, and range violations.
AnalysisConfig parse_config(const std::string& text);

/// Canonical text form listing every key explicitly; parse_config(echo_config(c)) == c.
std::string echo_config(const AnalysisConfig& c);

/// Shortest decimal text that reads back to the same double ("inf", "-inf", "nan" for non-finite values).
std::string format_double(double v);

/// Builds the configured system. Throws ConfigError when the system cannot be built.
GallerySystem build_system(const AnalysisConfig& c);
GridSpec grid_spec(const AnalysisConfig& c);
/// Grid for classification and certificate tasks, including the system's witness family up to n_max.
SampleGrid build_grid(const AnalysisConfig& c, const GallerySystem& g);
QuadratureConfig quadrature_config(const AnalysisConfig& c);
FitConfig fit_config(const AnalysisConfig& c);

}  // namespace sesf
