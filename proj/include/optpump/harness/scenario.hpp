#pragma once

#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "optpump/harness/config.hpp"
#include "optpump/spectrum.hpp"

namespace optpump::harness {

struct MethodSummary {
    std::string label;
    std::optional<Doublet> doublet;
    double band_weight = 0.0; // |omega| < 0.5
};

struct PairComparison {
    std::string a;
    std::string b;
    ShapeDifference diff;
    double tolerance = 0.0;
    bool shape_pass = false;
    bool peaks_match = false; // both doublet peaks within one grid spacing
};

// Cross-method comparison of peak-normalized |S|^2 on one frequency grid.
struct ComparisonReport {
    std::vector<MethodSummary> methods;
    std::vector<PairComparison> pairs;
    // Verdict of the gating pair (trajectory vs qrt).
    bool pass = false;

    std::string render() const;
};

inline constexpr double kQrtVsAnalyticTolerance = 0.02;
inline constexpr double kCrossMethodTolerance = 0.05;

ComparisonReport compare_methods(const SpectrumResult& analytic, const SpectrumResult& qrt,
                                 const SpectrumResult& trajectory);

// A file produced by a run, held in memory until the whole run succeeded.
struct Artifact {
    std::string name;
    std::string contents;
};

struct RunResult {
    std::vector<Artifact> artifacts;
    std::optional<ComparisonReport> report;
    std::string summary; // short human-readable digest for stdout
};

// Computes every output of the scenario without touching the file system.
RunResult compute_scenario(const ScenarioConfig& cfg);

// compute_scenario, then writes all artifacts into cfg.output.dir (created
// if missing). Returns the written paths.
std::vector<std::filesystem::path> write_artifacts(const ScenarioConfig& cfg, const RunResult& result);

// 0 success, 2 validation, 3 numerical convergence, 4 I/O; 1 otherwise.
int exit_code_for(const std::exception& e);

// OPTPUMP_THREADS, or 1 when unset. Throws ConfigError on a malformed value.
unsigned worker_threads_from_env();

} // namespace optpump::harness
