#include <chrono>
#include <cmath>

#include "ep/diagnostics.hpp"
#include "ep/solver.hpp"

namespace ep {

std::string_view to_string(TerminalStatus s) noexcept {
    switch (s) {
    case TerminalStatus::converged: return "converged";
    case TerminalStatus::max_iters: return "max_iters";
    case TerminalStatus::exact_fixed_point: return "exact_fixed_point";
    }
    return "?";
}

std::string_view to_string(Check c) noexcept {
    switch (c) {
    case Check::holds: return "holds";
    case Check::fails: return "fails";
    case Check::unknown: return "unknown";
    case Check::not_applicable: return "not_applicable";
    }
    return "?";
}

IterateState initial_state(const ProblemInstance& problem) {
    return IterateState{1, problem.x0(), problem.x1(), problem.x1()};
}

IterateState ira_step(const IterateState& state, const ProblemInstance& problem, double lambda,
                      double theta, const QpSettings& qp) {
    if (!(lambda > 0.0)) throw InvalidArgument("ira_step: lambda must be positive");
    if (!(theta >= 0.0 && theta < 1.0)) throw InvalidArgument("ira_step: theta must lie in [0, 1)");

    IterateState next;
    next.n = state.n + 1;
    next.w = theta == 0.0 ? state.x_curr : state.x_curr + theta * (state.x_curr - state.x_prev);
    next.x_curr = problem.prox(next.w, lambda, qp);
    next.x_prev = state.x_curr;
    return next;
}

IterateState egm_step(const IterateState& state, const ProblemInstance& problem, double lambda,
                      const QpSettings& qp) {
    if (!(lambda > 0.0)) throw InvalidArgument("egm_step: lambda must be positive");

    const WeightedVector y = problem.prox(state.x_curr, lambda, qp);
    IterateState next;
    next.n = state.n + 1;
    next.w = state.x_curr;
    next.x_curr = problem.prox(y, state.x_curr, lambda, qp);
    next.x_prev = state.x_curr;
    return next;
}

HypothesisReport validate_hypotheses(const SolverConfig& config,
                                     const std::optional<AssumptionConstants>& constants) {
    HypothesisReport r;
    const bool inertial = config.algorithm == Algorithm::ira || config.algorithm == Algorithm::vip_ira;
    const auto& step = config.stepsize;

    if (step.kind() == StepsizeSchedule::Kind::power) {
        r.h1 = Check::holds;
        r.h2 = Check::holds;  // p in (0, 1]
    } else {
        r.h1 = Check::fails;
        r.h2 = Check::holds;
    }

    const double theta_max = inertial ? config.inertia.upper_bound() : 0.0;
    r.h3 = theta_max < 1.0 / 3.0 ? Check::holds : Check::fails;
    if (r.h3 == Check::fails) {
        r.notes.push_back("theta exceeds the 1/3 cap required for convergence without constants");
    }

    const bool constant_params =
        step.kind() == StepsizeSchedule::Kind::constant &&
        (!inertial || config.inertia.kind() == InertialSchedule::Kind::constant);
    if (!constant_params) {
        r.h4 = Check::not_applicable;
        r.h5 = Check::not_applicable;
    } else if (!constants) {
        r.h4 = Check::unknown;
        r.h5 = Check::unknown;
    } else {
        const auto cert = theorem2_certificate(constants->gamma, constants->L, step.lambda(),
                                               inertial ? config.inertia.theta() : 0.0);
        r.h4 = cert.h4_ok ? Check::holds : Check::fails;
        r.h5 = cert.h5_ok ? Check::holds : Check::fails;
        r.h5_bound = cert.h5_bound;
        if (!cert.guaranteed()) {
            r.notes.push_back("linear rate not certified for these parameters");
        }
    }
    if (config.algorithm == Algorithm::egm) {
        r.notes.push_back("H1-H5 are stated for the inertial regularized iteration; "
                          "EGM is reported as a baseline");
    }
    return r;
}

SolverTrace run(const SolverConfig& config, const ProblemInstance& problem,
                const RecordObserver& observer) {
    config.validate();
    if (config.algorithm == Algorithm::vip_ira && !problem.is_vip()) {
        throw InvalidArgument("VIP-IRA needs a problem given by an operator");
    }
    const auto& x_star = problem.known_solution();
    if (config.stop_metric == StopMetric::error_E && !x_star) {
        throw InvalidArgument("stop metric E needs a problem with known solution");
    }

    SolverTrace trace;
    trace.algorithm = config.algorithm;
    trace.baseline = config.algorithm == Algorithm::egm;
    switch (config.algorithm) {
    case Algorithm::ira:
        trace.provenance = "inertial regularized iteration: w = x_n + theta_n (x_n - x_{n-1}), "
                           "x_{n+1} = prox_{lambda_n f(w,.)}(w)";
        break;
    case Algorithm::ra:
        trace.provenance = "regularized iteration (theta = 0): x_{n+1} = prox_{lambda_n f(x_n,.)}(x_n)";
        break;
    case Algorithm::vip_ira:
        trace.provenance = "inertial projection iteration: x_{n+1} = P_C(w - lambda_n A w)";
        break;
    case Algorithm::egm:
        trace.provenance = "baseline, standard two-prox extragradient: y = prox_{lambda f(x,.)}(x), "
                           "x+ = prox_{lambda f(y,.)}(x)";
        break;
    }
    trace.residual_lambda = config.residual_lambda;
    trace.stop_metric = config.stop_metric;
    trace.stop_tol = config.stop_tol;
    trace.hypotheses = validate_hypotheses(config, problem.constants());
    trace.x0 = problem.x0();
    trace.x1 = problem.x1();
    if (x_star) trace.initial_error = error_E(problem.x1(), *x_star);
    trace.records.reserve(static_cast<std::size_t>(std::min<std::int64_t>(config.max_iters, 1 << 16)));

    const QpSettings qp{config.qp_tolerance, static_cast<long>(config.qp_max_iters), 1.0};
    const bool want_residual = config.record_residual || config.stop_metric == StopMetric::residual_D;

    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    IterateState state = initial_state(problem);
    trace.final_point = state.x_curr;

    for (std::int64_t k = 0; k < config.max_iters; ++k) {
        const std::int64_t n = state.n;
        IterationRecord rec;
        rec.n = n;
        rec.lambda = config.stepsize.at(n);
        rec.theta = config.effective_theta(n);

        IterateState next;
        try {
            next = config.algorithm == Algorithm::egm
                       ? egm_step(state, problem, rec.lambda, qp)
                       : ira_step(state, problem, rec.lambda, rec.theta, qp);
            rec.step_norm = distance(next.x_curr, next.w);
            rec.move_norm = distance(next.x_curr, state.x_curr);
            if (want_residual) {
                rec.residual = residual_D(problem, next.x_curr, config.residual_lambda, qp);
            }
            if (x_star) rec.error = error_E(next.x_curr, *x_star);
        } catch (const Error& e) {
            trace.wall_s = std::chrono::duration<double>(clock::now() - start).count();
            throw SolverFailure(e, std::move(trace));
        }
        rec.elapsed_s = std::chrono::duration<double>(clock::now() - start).count();

        trace.records.push_back(rec);
        if (config.record_iterates) trace.iterates.push_back(next.x_curr);
        if (observer) observer(rec);

        const double w_norm = norm(next.w);
        state = std::move(next);
        trace.final_point = state.x_curr;

        if (rec.step_norm <= config.fixed_point_tol * (1.0 + w_norm)) {
            trace.status = TerminalStatus::exact_fixed_point;
            break;
        }
        const double metric = [&] {
            switch (config.stop_metric) {
            case StopMetric::residual_D: return *rec.residual;
            case StopMetric::error_E: return *rec.error;
            case StopMetric::step_norm: return rec.step_norm;
            }
            return kInf;
        }();
        if (metric <= config.stop_tol) {
            trace.status = TerminalStatus::converged;
            break;
        }
    }
    trace.wall_s = std::chrono::duration<double>(clock::now() - start).count();
    return trace;
}

} // namespace ep
