#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sesf/config.hpp"

namespace sesf {

inline constexpr const char* kToolVersion = "1.0.0";

/// Two-column numeric series written as a plot-data file.
struct PlotSeries {
    std::string name;
    std::string x_label;
    std::string y_label;
    std::vector<std::pair<double, double>> points;
};

struct TaskOutcome {
    TaskSpec task;
    bool completed = false;
    std::string error;
    nlohmann::ordered_json result;
    std::vector<PlotSeries> plots;
    double millis = 0.0;
};

struct RunReport {
    AnalysisConfig config;
    nlohmann::ordered_json system;
    std::vector<TaskOutcome> tasks;
    double total_millis = 0.0;

    bool all_completed() const;
};

/// Runs every task in listed order (concurrently when parallel is set; results keep the listed order).
/// Task failures are recorded in the report. Throws ConfigError when the system cannot be built.
RunReport run(const AnalysisConfig& config, bool parallel = false);

/// JSON number for finite values, a string ("inf", "-inf", "nan") otherwise.
nlohmann::ordered_json json_number(double v);

/// Everything except timing.
nlohmann::ordered_json results_json(const RunReport& r);
/// results_json plus a separate "timing" section.
nlohmann::ordered_json to_json(const RunReport& r);
std::string to_table(const RunReport& r);
std::string format_series(const PlotSeries& s);

/// Writes the formats selected in the config to dir; returns the written paths in order.
std::vector<std::filesystem::path> emit(const RunReport& r, const std::filesystem::path& dir);

}  // namespace sesf
