#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sesf/errors.hpp"
#include "sesf/report.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kEvaluationError = 3;

int config_error(const sesf::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability analysis of skew-evolution semiflows"};
    std::string config_path;
    std::optional<unsigned long long> seed;
    std::optional<std::string> out_dir;
    bool parallel = false;
    app.add_option("config", config_path, "Analysis config file")->required();
    app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--out", out_dir, "Output directory (overrides the config's out key)");
    app.add_flag("--parallel", parallel, "Run tasks concurrently");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "config error: cannot read " << config_path << "\n";
        return kConfigError;
    }
    std::stringstream text;
    text << in.rdbuf();

    sesf::AnalysisConfig config;
    try {
        config = sesf::parse_config(text.str());
    } catch (const sesf::ConfigError& e) {
        return config_error(e);
    }
    if (seed) config.seed = *seed;
    if (out_dir) config.out = *out_dir;

    sesf::RunReport report;
    try {
        report = sesf::run(config, parallel);
    } catch (const sesf::ConfigError& e) {
        return config_error(e);
    } catch (const std::exception& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return kEvaluationError;
    }

    try {
        for (const auto& p : sesf::emit(report, config.out)) std::cout << p.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "output error: " << e.what() << "\n";
        return kEvaluationError;
    }
    for (const auto& t : report.tasks)
        if (!t.completed) std::cerr << "task " << t.task.name << " failed: " << t.error << "\n";
    return report.all_completed() ? 0 : kEvaluationError;
}
