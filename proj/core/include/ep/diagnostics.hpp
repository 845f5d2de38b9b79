#pragma once

#include <optional>
#include <span>
#include <string>

#include "ep/solver.hpp"

namespace ep {

/// D(x) = ||x - prox_{lambda f(x, .)}(x)||^2. Zero exactly at solutions.
double residual_D(const ProblemInstance& problem, const WeightedVector& x, double lambda = 1.0,
                  const QpSettings& qp = {});

/// E(x) = ||x - x*||^2.
double error_E(const WeightedVector& x, const WeightedVector& x_star);

/// Linear-rate certificate for constant lambda and theta.
///
/// With kappa = 1 + lambda (2 gamma - L sqrt(lambda)):
///   A = (1 + theta) / kappa
///   B = (1 - theta)(1 - L sqrt(lambda)) / kappa
///   C = theta [1 + theta + (1 - theta)(1 - L sqrt(lambda))] / kappa
///   alpha = sqrt(A)
/// and ||x_{n+1} - x*|| <= M alpha^n with M^2 = ||x1 - x*||^2 + B ||x1 - x0||^2
/// whenever H4 and H5 hold.
struct RateCertificate {
    double gamma = 0.0;
    double L = 0.0;
    double lambda = 0.0;
    double theta = 0.0;

    double alpha = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C_coef = 0.0;

    bool h4_ok = false;
    bool h5_ok = false;
    double h4_bound = 0.0;  // min{4 gamma^2 / L^2, 1 / L^2}
    double h5_bound = 0.0;  // min{lambda(2gamma - L sqrt(lambda)), (1 - L sqrt(lambda)) / (3 - L sqrt(lambda) + 2 lambda(2gamma - L sqrt(lambda)))}

    std::optional<double> M_bound;
    std::string note;

    bool guaranteed() const noexcept { return h4_ok && h5_ok; }
};

RateCertificate theorem2_certificate(double gamma, double L, double lambda, double theta);

/// Fills in M from the starting points and the solution.
void attach_start(RateCertificate& cert, const WeightedVector& x0, const WeightedVector& x1,
                  const WeightedVector& x_star);

/// Least-squares slope of log ||x_n - x*|| over the trailing `tail_fraction`
/// of records, exponentiated. Throws InsufficientData when fewer than ten
/// tail records carry a strictly positive error.
double fit_empirical_rate(const SolverTrace& trace, double tail_fraction = 0.5);

/// Same fit on a raw sequence of squared errors E_0, E_1, ...
double fit_geometric_rate(std::span<const double> squared_errors, double tail_fraction = 0.5);

struct BoundCheck {
    bool holds = true;
    std::int64_t first_violation = -1;  // iteration index n, or -1
    double worst_ratio = 0.0;           // max lhs / rhs
};

/// ||x_{n+1} - x*||^2 < ||x_1 - x*||^2 / (1 + gamma sum_{i=1}^n lambda_i) for every record.
BoundCheck check_decay_bound(const SolverTrace& trace, double gamma);

/// ||x_{n+1} - x*|| <= M alpha^n (1 + rel_slack) for every record.
BoundCheck check_rate_envelope(const SolverTrace& trace, const RateCertificate& cert,
                               double rel_slack = 1e-6);

/// Per-iteration estimate
///   (1 + l(2g - L sqrt l)) |x+ - x*|^2 <= (1 + t)|x - x*|^2 - t|x- - x*|^2
///                                         - M_n |x+ - x|^2 + N_n |x - x-|^2
/// with M_n = (1 - t)(1 - L sqrt l), N_n = t [1 + t + (1 - t)(1 - L sqrt l)].
/// Requires recorded iterates. Violations beyond slack_scale * (1 + ||x_n||^2) fail;
/// worst_ratio here is the largest (lhs - rhs) / slack.
BoundCheck check_step_estimate(const SolverTrace& trace, const WeightedVector& x_star,
                        const AssumptionConstants& constants, double slack_scale = 1e-6);

/// True when E(x_n) is non-increasing over the trace.
bool error_monotone(const SolverTrace& trace);

} // namespace ep
