#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ep/problems.hpp"

namespace ep {

/// x_{n-1}, x_n and the extrapolated point w_n of the most recent step.
struct IterateState {
    std::int64_t n = 1;
    WeightedVector x_prev;
    WeightedVector x_curr;
    WeightedVector w;
};

/// n = 1, x_prev = x0, x_curr = x1, w = x1.
IterateState initial_state(const ProblemInstance& problem);

/// w = x_n + theta (x_n - x_{n-1});  x_{n+1} = prox_{lambda f(w, .)}(w).
IterateState ira_step(const IterateState& state, const ProblemInstance& problem, double lambda,
                      double theta, const QpSettings& qp = {});

/// Two-prox extragradient baseline:
/// y = prox_{lambda f(x_n, .)}(x_n);  x_{n+1} = prox_{lambda f(y, .)}(x_n).
IterateState egm_step(const IterateState& state, const ProblemInstance& problem, double lambda,
                      const QpSettings& qp = {});

enum class TerminalStatus { converged, max_iters, exact_fixed_point };
std::string_view to_string(TerminalStatus s) noexcept;

enum class Check { holds, fails, unknown, not_applicable };
std::string_view to_string(Check c) noexcept;

/// Which step-size / inertia hypotheses the configured schedules satisfy.
/// H1: lambda_n -> 0. H2: sum lambda_n = inf. H3: theta_n non-decreasing in [0, theta*],
/// theta* < 1/3. H4/H5: the constant-parameter conditions of the linear-rate result.
struct HypothesisReport {
    Check h1 = Check::unknown;
    Check h2 = Check::unknown;
    Check h3 = Check::unknown;
    Check h4 = Check::unknown;
    Check h5 = Check::unknown;
    std::optional<double> h5_bound;
    std::vector<std::string> notes;
};

HypothesisReport validate_hypotheses(const SolverConfig& config,
                                     const std::optional<AssumptionConstants>& constants);

struct IterationRecord {
    std::int64_t n = 0;
    double lambda = 0.0;
    double theta = 0.0;
    double step_norm = 0.0;  // ||x_{n+1} - w_n||
    double move_norm = 0.0;  // ||x_{n+1} - x_n||
    std::optional<double> residual;  // D(x_{n+1})
    std::optional<double> error;     // E(x_{n+1})
    double elapsed_s = 0.0;
};

struct SolverTrace {
    Algorithm algorithm = Algorithm::ira;
    bool baseline = false;
    std::string provenance;
    double residual_lambda = 1.0;
    StopMetric stop_metric = StopMetric::residual_D;
    double stop_tol = 0.0;
    HypothesisReport hypotheses;

    WeightedVector x0;
    WeightedVector x1;
    std::optional<double> initial_error;  // E(x1)

    std::vector<IterationRecord> records;
    /// x_{n+1} for each record when SolverConfig::record_iterates is set.
    std::vector<WeightedVector> iterates;
    WeightedVector final_point;
    TerminalStatus status = TerminalStatus::max_iters;
    double wall_s = 0.0;

    std::size_t iterations() const noexcept { return records.size(); }
};

/// Step failure during run(); carries everything recorded before it.
class SolverFailure : public Error {
public:
    SolverFailure(const Error& cause, SolverTrace partial)
        : Error(cause.code(), cause.what()), partial_(std::move(partial)) {}
    const SolverTrace& partial_trace() const noexcept { return partial_; }

private:
    SolverTrace partial_;
};

using RecordObserver = std::function<void(const IterationRecord&)>;

/// Iterates the configured algorithm from (x0, x1) until the stop metric of
/// x_{n+1} drops to stop_tol, x_{n+1} = w_n, or max_iters steps are taken.
/// Step n (starting at 1) uses lambda_n and theta_n.
SolverTrace run(const SolverConfig& config, const ProblemInstance& problem,
                const RecordObserver& observer = {});

} // namespace ep
