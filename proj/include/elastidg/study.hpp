#pragma once

#include "elastidg/analysis.hpp"
#include "elastidg/solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace elastidg {

enum class OutputFormat { csv, md, both };

struct DiagnosticToggles {
    bool infsup = false;
    bool kellipticity = false;
    bool lifting = false;

    [[nodiscard]] bool any() const { return infsup || kellipticity || lifting; }
};

struct StudyConfig {
    int dim = 2;
    int k = 0;  // displacement degree; stress uses k + 1
    std::vector<int> levels{4, 8, 16, 32};
    double eta = 1.0;
    double mu = 0.5;
    double lambda = 1.0;
    SolverMethod solver = SolverMethod::direct;
    OutputFormat format = OutputFormat::both;
    std::string out;
    DiagnosticToggles diagnostics;
    bool record_timing = true;   // false writes solve_seconds as 0
    std::string dump_mesh_dir;   // empty: no mesh listing
    int max_threads = 0;         // 0: ELASTIDG_THREADS or hardware concurrency
    int diagnostics_max_dofs = 6000;
};

/// Throws std::invalid_argument on k < 0, non-increasing levels or eta <= 0.
void validate(const StudyConfig& config);

struct DiagnosticsResult {
    std::optional<double> infsup;
    std::optional<double> kellipticity;
    std::optional<double> lifting;
    bool skipped = false;
};

struct LevelResult {
    int one_over_h = 0;
    bool ok = false;
    std::string failure;
    ErrorReport errors;
    double solve_seconds = 0.0;
    double residual = 0.0;
    std::string solver_method;
    DiagnosticsResult diagnostics;
};

struct StudyResult {
    StudyConfig config;
    std::vector<LevelResult> levels;       // completed levels in order, up to the first failure
    std::optional<LevelResult> failed;     // first failing level
    std::optional<ConvergenceReport> report;

    [[nodiscard]] bool ok() const { return !failed.has_value(); }
};

/// Solves one refinement level of the manufactured problem matching config.dim.
[[nodiscard]] LevelResult run_level(const StudyConfig& config, int one_over_h);

/// Runs every level (possibly concurrently) and computes orders.
[[nodiscard]] StudyResult run_study(const StudyConfig& config);

[[nodiscard]] std::string format_csv(const StudyResult& result);
[[nodiscard]] std::string format_markdown(const StudyResult& result);

/// Writes files for config.out per config.format; returns the paths written.
std::vector<std::string> write_outputs(const StudyResult& result);

/// Worker cap: explicit value, else ELASTIDG_THREADS, else hardware threads.
[[nodiscard]] int worker_count(int requested, int jobs);

}  // namespace elastidg
