#include <algorithm>
#include <cmath>
#include <vector>

#include "ep/diagnostics.hpp"

namespace ep {

double residual_D(const ProblemInstance& problem, const WeightedVector& x, double lambda,
                  const QpSettings& qp) {
    if (!(lambda > 0.0)) throw InvalidArgument("residual_D: lambda must be positive");
    return squared_distance(x, problem.prox(x, lambda, qp));
}

double error_E(const WeightedVector& x, const WeightedVector& x_star) {
    return squared_distance(x, x_star);
}

RateCertificate theorem2_certificate(double gamma, double L, double lambda, double theta) {
    if (!(gamma > 0.0)) throw InvalidArgument("certificate: gamma must be positive");
    if (!(L > 0.0)) throw InvalidArgument("certificate: L must be positive");
    if (!(lambda > 0.0)) throw InvalidArgument("certificate: lambda must be positive");
    if (!(theta >= 0.0)) throw InvalidArgument("certificate: theta must be nonnegative");

    RateCertificate c;
    c.gamma = gamma;
    c.L = L;
    c.lambda = lambda;
    c.theta = theta;

    const double ls = L * std::sqrt(lambda);
    const double gain = lambda * (2.0 * gamma - ls);
    const double kappa = 1.0 + gain;

    c.A = (1.0 + theta) / kappa;
    c.B = (1.0 - theta) * (1.0 - ls) / kappa;
    c.C_coef = theta * (1.0 + theta + (1.0 - theta) * (1.0 - ls)) / kappa;
    c.alpha = c.A >= 0.0 ? std::sqrt(c.A) : std::nan("");

    c.h4_bound = std::min(4.0 * gamma * gamma / (L * L), 1.0 / (L * L));
    c.h4_ok = lambda < c.h4_bound;
    c.h5_bound = std::min(gain, (1.0 - ls) / (3.0 - ls + 2.0 * gain));
    c.h5_ok = theta < c.h5_bound;

    if (!c.guaranteed()) {
        c.note = "alpha is not guaranteed: ";
        c.note += !c.h4_ok ? "lambda violates H4" : "theta violates H5";
    } else {
        c.note = "alpha grows with theta; observed runs with diminishing steps often favour "
                 "larger theta, so compare against the fitted rate";
    }
    return c;
}

void attach_start(RateCertificate& cert, const WeightedVector& x0, const WeightedVector& x1,
                  const WeightedVector& x_star) {
    cert.M_bound = std::sqrt(squared_distance(x1, x_star) + cert.B * squared_distance(x1, x0));
}

double fit_geometric_rate(std::span<const double> squared_errors, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw InvalidArgument("fit: tail_fraction must lie in (0, 1]");
    }
    const auto total = squared_errors.size();
    const auto count = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(total)));
    if (count < 10) {
        throw InsufficientData("fit: need at least 10 tail entries, have " + std::to_string(count));
    }
    const auto first = total - count;

    // Least squares of 0.5 log E_k against k.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = first; k < total; ++k) {
        const double e = squared_errors[k];
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw InsufficientData("fit: tail contains a zero or non-finite error");
        }
        const double x = static_cast<double>(k);
        const double y = 0.5 * std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double nn = static_cast<double>(count);
    const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    return std::exp(slope);
}

double fit_empirical_rate(const SolverTrace& trace, double tail_fraction) {
    std::vector<double> errs;
    errs.reserve(trace.records.size());
    for (const auto& r : trace.records) {
        if (!r.error) throw InsufficientData("fit: trace has no error records (x* unknown)");
        errs.push_back(*r.error);
    }
    return fit_geometric_rate(errs, tail_fraction);
}

BoundCheck check_decay_bound(const SolverTrace& trace, double gamma) {
    if (!trace.initial_error) throw InsufficientData("decay bound: x* unknown");
    BoundCheck out;
    double lambda_sum = 0.0;
    for (const auto& r : trace.records) {
        if (!r.error) throw InsufficientData("decay bound: missing error record");
        lambda_sum += r.lambda;
        const double rhs = *trace.initial_error / (1.0 + gamma * lambda_sum);
        const double lhs = *r.error;
        out.worst_ratio = std::max(out.worst_ratio, rhs > 0.0 ? lhs / rhs : kInf);
        if (!(lhs < rhs) && !(lhs == 0.0 && rhs == 0.0) && out.holds) {
            out.holds = false;
            out.first_violation = r.n;
        }
    }
    return out;
}

BoundCheck check_rate_envelope(const SolverTrace& trace, const RateCertificate& cert,
                               double rel_slack) {
    if (!cert.M_bound) throw InvalidArgument("rate envelope: certificate has no M (call attach_start)");
    BoundCheck out;
    for (const auto& r : trace.records) {
        if (!r.error) throw InsufficientData("rate envelope: missing error record");
        const double lhs = std::sqrt(*r.error);
        const double rhs = *cert.M_bound * std::pow(cert.alpha, static_cast<double>(r.n));
        out.worst_ratio = std::max(out.worst_ratio, rhs > 0.0 ? lhs / rhs : kInf);
        if (lhs > rhs * (1.0 + rel_slack) && out.holds) {
            out.holds = false;
            out.first_violation = r.n;
        }
    }
    return out;
}

BoundCheck check_step_estimate(const SolverTrace& trace, const WeightedVector& x_star,
                        const AssumptionConstants& constants, double slack_scale) {
    if (trace.iterates.size() != trace.records.size()) {
        throw InsufficientData("step estimate: trace was recorded without iterates");
    }
    const double gamma = constants.gamma;
    const double L = constants.L;
    BoundCheck out;
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        const auto& r = trace.records[k];
        const WeightedVector& x_prev = k == 0 ? trace.x0 : (k == 1 ? trace.x1 : trace.iterates[k - 2]);
        const WeightedVector& x_curr = k == 0 ? trace.x1 : trace.iterates[k - 1];
        const WeightedVector& x_next = trace.iterates[k];

        const double lam = r.lambda;
        const double th = r.theta;
        const double ls = L * std::sqrt(lam);
        const double Mn = (1.0 - th) * (1.0 - ls);
        const double Nn = th * (1.0 + th + (1.0 - th) * (1.0 - ls));

        const double lhs = (1.0 + lam * (2.0 * gamma - ls)) * squared_distance(x_next, x_star);
        const double rhs = (1.0 + th) * squared_distance(x_curr, x_star) -
                           th * squared_distance(x_prev, x_star) -
                           Mn * squared_distance(x_next, x_curr) +
                           Nn * squared_distance(x_curr, x_prev);
        const double slack = slack_scale * (1.0 + inner(x_curr, x_curr));
        const double excess = lhs - rhs;
        out.worst_ratio = std::max(out.worst_ratio, excess / slack);
        if (excess > slack && out.holds) {
            out.holds = false;
            out.first_violation = r.n;
        }
    }
    return out;
}

bool error_monotone(const SolverTrace& trace) {
    std::optional<double> prev = trace.initial_error;
    for (const auto& r : trace.records) {
        if (!r.error) return false;
        if (prev && *r.error > *prev) return false;
        prev = r.error;
    }
    return true;
}

} // namespace ep
