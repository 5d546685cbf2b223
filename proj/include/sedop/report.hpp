#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "sedop/measure.hpp"

namespace sedop {

struct ExperimentConfig {
    std::vector<Potential1D> factors;  // one per coordinate, after replication
    int K = 6;
    int N = 4;
    std::vector<std::string> tasks;  // canonical execution order
    std::uint64_t seed = 0;
    std::int64_t mcSamples = 200000;
    std::vector<double> minusWeights;  // one per coordinate
    std::map<std::string, double> tolerances;
    std::string outDir;  // empty: environment SEDOP_OUT_DIR, then "."
    nlohmann::ordered_json echo;
};

// Tolerance names understood by the runner, with their defaults.
const std::map<std::string, double>& default_tolerances();

// Throws ConfigError with a field path on any shape, type, or range problem.
ExperimentConfig parse_config(const nlohmann::ordered_json& j);
ExperimentConfig load_config(const std::string& path);

struct RunResult {
    int exitCode = 0;  // 0 all checks pass, 2 a check or hypothesis failed, 1 error
    nlohmann::ordered_json report;
    std::vector<std::string> writtenFiles;
};

// Runs the curvature gate and the configured tasks, writes report.json and
// spectrum CSVs into the output directory. The report is deterministic for a
// fixed (config, seed) apart from the meta block.
RunResult run_experiment(const ExperimentConfig& cfg);

// Formats a stored report for reading; no recomputation.
std::string explain_report(const nlohmann::ordered_json& report);

} // namespace sedop
