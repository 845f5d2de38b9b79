#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ep/ep.hpp"

namespace ep::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitSolverFailure = 1,
    kExitUsage = 2,
};

// gen --------------------------------------------------------------------------

struct GenOptions {
    std::string kind;  // nash-cournot | integral-vip | toy
    Eigen::Index m = 100;
    Eigen::Index l = 10;
    double tau = 0.001;
    std::uint64_t seed = 0;
    double x0 = 1.0;
    double x1 = 1.0;
    std::filesystem::path out;
};

/// The problem file text for `options`; deterministic in its arguments.
std::string generate_problem_text(const GenOptions& options);
int cmd_gen(const GenOptions& options, std::ostream& log);

// run ----------------------------------------------------------------------------

struct RunManifest {
    SolverConfig config;
    std::filesystem::path problem_path;
    /// Writes <prefix>.csv and <prefix>.json.
    std::filesystem::path out_prefix;
    std::int64_t report_every = 100;

    void validate() const;
};

/// Per-iteration CSV: n,lambda_n,theta_n,step_norm,D,E,elapsed_s with
/// 17-significant-digit floats; D and E are blank when not recorded.
std::string trace_csv(const SolverTrace& trace);

/// Summary document: status, iteration count, hypotheses, certificate and fits.
std::string summary_json(const SolverTrace& trace, const ProblemInstance& problem,
                         const SolverConfig& config, const std::string* failure = nullptr);

int cmd_run(const RunManifest& manifest, std::ostream& log);

// compare -------------------------------------------------------------------------

struct CompareOptions {
    std::filesystem::path problem_path;
    std::vector<Algorithm> algorithms;
    std::vector<StepsizeSchedule> schedules;
    double theta = 0.3;
    std::vector<double> tolerances;
    StopMetric metric = StopMetric::residual_D;
    std::int64_t max_iters = 5000;
    double qp_tolerance = 1e-9;
    std::int64_t qp_max_iters = 200000;
    double residual_lambda = 1.0;
    bool parallel = true;
    std::filesystem::path out;  // CSV; empty writes to the log stream

    void validate() const;
};

struct CompareRow {
    Algorithm algorithm = Algorithm::ira;
    std::string schedule;
    double theta = 0.0;
    double tol = 0.0;
    std::optional<std::int64_t> iterations;  // empty when the tolerance was not reached
    double wall_s = 0.0;
    std::string status;  // reached | not_reached | failed: <message>
};

/// One row per (schedule, algorithm, tolerance), in that nesting order.
std::vector<CompareRow> compare(const CompareOptions& options, const ProblemInstance& problem);
std::string compare_csv(const std::vector<CompareRow>& rows);
int cmd_compare(const CompareOptions& options, std::ostream& log);

// check ----------------------------------------------------------------------------

int cmd_check(const std::filesystem::path& problem_path, long samples, std::uint64_t seed,
              std::ostream& out);

/// Full command-line entry point (argument parsing included).
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

std::string format_double(double v);
std::string schedule_label(const StepsizeSchedule& s);

} // namespace ep::cli
