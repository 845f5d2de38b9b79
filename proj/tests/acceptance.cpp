// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ep/cli/commands.hpp"
#include "ep/ep.hpp"

using namespace ep;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "FAILED ") + what;
    }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// First iteration whose error reaches tol, if any.
std::optional<std::int64_t> first_below(const SolverTrace& t, double tol, bool use_error) {
    for (const auto& r : t.records) {
        const double v = use_error ? *r.error : *r.residual;
        if (v <= tol) return r.n;
    }
    return std::nullopt;
}

std::string iters_str(const std::optional<std::int64_t>& n) {
    return n ? std::to_string(*n) : std::string("none");
}

Outcome integral_vip_counts() {
    Outcome o;
    const auto problem = build_integral_vip(0.001).to_problem();
    struct Case {
        double p;
        double tol;
        double expected;
        double lo, hi;
    };
    const std::vector<Case> cases{
        {0.1, 1e-5, 8, 4, 12},
        {0.1, 1e-7, 10, 6, 14},
        {1.0, 1e-5, 38, 38 * 0.7, 38 * 1.3},
        {1.0, 1e-7, 55, 55 * 0.7, 55 * 1.3},
    };
    for (double p : {0.1, 1.0}) {
        SolverConfig c;
        c.algorithm = Algorithm::ira;
        c.stepsize = StepsizeSchedule::power(p);
        c.inertia = InertialSchedule::constant(0.3);
        c.stop_metric = StopMetric::error_E;
        c.stop_tol = 1e-7;
        c.max_iters = 5000;
        c.record_residual = false;
        const auto t0 = std::chrono::steady_clock::now();
        const auto trace = run(c, problem);
        const double secs = seconds_since(t0);
        for (const auto& k : cases) {
            if (k.p != p) continue;
            const auto n = first_below(trace, k.tol, true);
            const bool ok = n && *n >= k.lo && *n <= k.hi;
            o.require(ok, "p=" + fmt("%g", p) + " E<=" + fmt("%g", k.tol) + ": " + iters_str(n) +
                              " iters (want " + fmt("%g", k.expected) + ", range [" + fmt("%.1f", k.lo) +
                              ", " + fmt("%.1f", k.hi) + "])");
        }
        o.require(secs < 30.0, "p=" + fmt("%g", p) + " runtime " + fmt("%.3f", secs) + " s");
    }
    return o;
}

Outcome toy_rate_soundness() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto cert = theorem2_certificate(1.0, 1.0, 0.25, 0.1);
    SolverConfig c;
    c.algorithm = Algorithm::ira;
    c.stepsize = StepsizeSchedule::constant(0.25);
    c.inertia = InertialSchedule::constant(0.1);
    c.stop_metric = StopMetric::error_E;
    c.stop_tol = 0.0;
    c.fixed_point_tol = 0.0;  // keep all 200 iterations
    c.max_iters = 200;
    const auto trace = run(c, make_toy_problem());
    const double fitted = fit_empirical_rate(trace);
    const double secs = seconds_since(t0);
    o.require(std::abs(cert.alpha - 0.89443) <= 5e-6, "alpha " + fmt("%.6f", cert.alpha));
    o.require(cert.guaranteed(), "H4/H5 satisfied");
    o.require(trace.iterations() == 200, std::to_string(trace.iterations()) + " iterations");
    o.require(fitted <= cert.alpha, "fitted " + fmt("%.6f", fitted) + " <= alpha");
    o.require(std::abs(fitted - 0.7206) <= 0.005, "|fitted - 0.7206| = " + fmt("%.2e", std::abs(fitted - 0.7206)));
    o.require(secs < 1.0, "runtime " + fmt("%.4f", secs) + " s");
    return o;
}

Outcome toy_decay_bound() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto problem = make_toy_problem();
    SolverConfig c;
    c.algorithm = Algorithm::ra;
    c.stepsize = StepsizeSchedule::power(1.0);
    c.stop_metric = StopMetric::error_E;
    c.stop_tol = 0.0;
    c.fixed_point_tol = 0.0;
    c.max_iters = 10000;
    const auto trace = run(c, problem);
    // ||x_{n+1}||^2 < ||x_0||^2 / (1 + sum_{i=0}^n lambda_i)
    const double e0 = squared_distance(problem.x0(), *problem.known_solution());
    double lambda_sum = c.stepsize.at(0);
    std::int64_t violations = 0, first = -1;
    for (const auto& r : trace.records) {
        lambda_sum += r.lambda;
        if (!(*r.error < e0 / (1.0 + lambda_sum))) {
            if (first < 0) first = r.n;
            ++violations;
        }
    }
    const double secs = seconds_since(t0);
    o.require(trace.iterations() == 10000, std::to_string(trace.iterations()) + " iterations");
    o.require(violations == 0, std::to_string(violations) + " violations (first n=" + std::to_string(first) + ")");
    o.require(check_decay_bound(trace, 1.0).holds, "bound from x1 also holds");
    o.require(secs < 1.0, "runtime " + fmt("%.4f", secs) + " s");
    return o;
}

Outcome toy_no_linear_rate() {
    Outcome o;
    SolverConfig c;
    c.algorithm = Algorithm::ira;
    c.stepsize = StepsizeSchedule::power(1.0);
    c.inertia = InertialSchedule::constant(0.0);
    c.stop_metric = StopMetric::error_E;
    c.stop_tol = 0.0;
    c.fixed_point_tol = 0.0;
    c.max_iters = 5000;
    c.record_iterates = true;
    const auto trace = run(c, make_toy_problem());
    double worst_gap = 0.0, min_late_ratio = 1.0;
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        const auto& r = trace.records[k];
        const double prev = k == 0 ? trace.x1[0] : trace.iterates[k - 1][0];
        const double ratio = std::abs(trace.iterates[k][0]) / std::abs(prev);
        worst_gap = std::max(worst_gap, std::abs(ratio - std::abs(1.0 - r.lambda)));
        if (r.n >= 1000) min_late_ratio = std::min(min_late_ratio, ratio);
    }
    o.require(worst_gap <= 1e-15, "max |ratio - |1-lambda_n|| = " + fmt("%.1e", worst_gap));
    o.require(min_late_ratio > 0.999, "min ratio for n>=1000 = " + fmt("%.7f", min_late_ratio));
    return o;
}

// Runs RA with a constant step and a tight QP tolerance until the iterate stops moving.
WeightedVector solve_reference(const ProblemInstance& p) {
    SolverConfig c;
    c.algorithm = Algorithm::ra;
    c.stepsize = StepsizeSchedule::constant(0.5);
    c.stop_metric = StopMetric::step_norm;
    c.stop_tol = 1e-13;
    c.qp_tolerance = 1e-13;
    c.max_iters = 5000;
    c.record_residual = false;
    return run(c, p).final_point;
}

Outcome step_estimate_suite() {
    Outcome o;
    SolverConfig c;
    c.algorithm = Algorithm::ira;
    c.stepsize = StepsizeSchedule::power(0.5);
    c.inertia = InertialSchedule::constant(0.1);
    c.stop_metric = StopMetric::step_norm;
    c.stop_tol = 0.0;
    c.fixed_point_tol = 0.0;
    c.record_iterates = true;
    c.record_residual = false;

    const auto toy = make_toy_problem(1.0, 0.7);
    c.max_iters = 2000;
    const auto tt = run(c, toy);
    const auto bt = check_step_estimate(tt, *toy.known_solution(), *toy.constants());
    o.require(bt.holds, "toy " + std::to_string(tt.iterations()) + " iters, worst excess/slack " +
                            fmt("%.2e", bt.worst_ratio));

    NashCournotOptions opt;
    opt.t_eigenvalues = Vector::Constant(20, -1.0);
    const auto inst = generate_nash_cournot(20, 5, 11, opt);
    auto problem = inst.to_problem();
    const auto x_star = solve_reference(problem);
    const double d_star = residual_D(problem, x_star, 1.0, QpSettings{1e-13, 200000, 1.0});
    o.require(d_star <= 1e-20, "reference D(x*) = " + fmt("%.1e", d_star));
    problem = problem.with_known_solution(x_star);
    c.max_iters = 300;
    const auto tn = run(c, problem);
    const auto bn = check_step_estimate(tn, x_star, inst.constants);
    o.require(bn.holds, "nash-cournot " + std::to_string(tn.iterations()) + " iters, worst excess/slack " +
                            fmt("%.2e", bn.worst_ratio));
    return o;
}

Outcome prox_oracle() {
    Outcome o;
    const auto inst = generate_nash_cournot(30, 5, 2024);
    const auto problem = inst.to_problem();
    std::mt19937_64 rng(99);
    std::normal_distribution<double> noise(0.0, 0.5);
    std::uniform_real_distribution<double> lam(0.05, 2.0);
    long ineq_fail = 0, mc_fail = 0;
    double worst = -kInf;
    for (int call = 0; call < 50; ++call) {
        Vector wv = sample_feasible(problem.set(), problem.x0(), rng).values();
        for (Eigen::Index i = 0; i < wv.size(); ++i) wv[i] += noise(rng);
        const auto w = problem.point(wv);
        const double lambda = lam(rng);
        const auto p = problem.prox(w, lambda);
        const auto qp = quadratic_prox_qp(inst.f, inst.set, wv, wv, lambda);
        const double best = qp.objective(p.values());
        for (int k = 0; k < 100; ++k) {
            const auto y = sample_feasible(problem.set(), w, rng);
            const double gap = inner(w - p, y - p) - lambda * (problem.evaluate(w, y) - problem.evaluate(w, p));
            worst = std::max(worst, gap);
            if (gap > 1e-6) ++ineq_fail;
        }
        for (int k = 0; k < 1000; ++k) {
            const auto y = sample_feasible(problem.set(), w, rng);
            if (best > qp.objective(y.values())) ++mc_fail;
        }
    }
    o.require(ineq_fail == 0, std::to_string(ineq_fail) + "/5000 inequality violations (worst gap " +
                                  fmt("%.2e", worst) + ")");
    o.require(mc_fail == 0, std::to_string(mc_fail) + "/50000 samples beat the prox objective");
    return o;
}

Outcome nash_cournot_trend() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int ordered = 0;
    bool ira_beats_ra = true;
    std::string table;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto problem = generate_nash_cournot(50, 10, seed).to_problem();
        cli::CompareOptions opts;
        opts.algorithms = {Algorithm::ira, Algorithm::ra, Algorithm::egm};
        opts.schedules = {StepsizeSchedule::power(1.0)};
        opts.theta = 0.3;
        opts.tolerances = {1e-4};
        opts.max_iters = 5000;
        const auto rows = cli::compare(opts, problem);
        const auto n = [&](std::size_t i) { return rows[i].iterations.value_or(1 << 30); };
        if (!(n(0) < n(1))) ira_beats_ra = false;
        if (n(0) < n(1) && n(1) < n(2)) ++ordered;
        table += (seed ? " " : "") + std::to_string(seed) + ":" + iters_str(rows[0].iterations) + "/" +
                 iters_str(rows[1].iterations) + "/" + iters_str(rows[2].iterations);
    }
    const double secs = seconds_since(t0);
    o.require(ira_beats_ra, "IRA<RA on every seed [IRA/RA/EGM " + table + "]");
    o.require(ordered >= 4, std::to_string(ordered) + "/5 seeds ordered IRA<RA<EGM");
    o.require(secs < 300.0, "runtime " + fmt("%.1f", secs) + " s");
    return o;
}

std::string strip_elapsed(const std::string& csv) {
    std::istringstream in(csv);
    std::string out;
    for (std::string l; std::getline(in, l);) out += l.substr(0, l.rfind(',')) + "\n";
    return out;
}

Outcome run_determinism() {
    Outcome o;
    const fs::path dir = fs::temp_directory_path() / "ep_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ostringstream log;

    struct Manifest {
        std::string name;
        std::string problem_text;
        SolverConfig config;
    };
    std::vector<Manifest> manifests;
    {
        SolverConfig c;
        c.algorithm = Algorithm::ira;
        c.stepsize = StepsizeSchedule::power(1.0);
        c.max_iters = 80;
        c.stop_tol = 1e-8;
        manifests.push_back({"nash-cournot", problem_to_json(generate_nash_cournot(25, 5, 8)), c});
        c.algorithm = Algorithm::egm;
        manifests.push_back({"nash-cournot-egm", manifests.back().problem_text, c});
    }
    {
        SolverConfig c;
        c.algorithm = Algorithm::vip_ira;
        c.stepsize = StepsizeSchedule::power(0.1);
        c.stop_metric = StopMetric::error_E;
        c.stop_tol = 1e-9;
        manifests.push_back({"integral-vip", problem_to_json(build_integral_vip(0.001)), c});
    }
    {
        SolverConfig c;
        c.algorithm = Algorithm::ira;
        c.stepsize = StepsizeSchedule::constant(0.25);
        c.inertia = InertialSchedule::sequence(0.2);
        c.stop_metric = StopMetric::error_E;
        c.stop_tol = 1e-12;
        manifests.push_back({"toy", toy_problem_json(1.0, 0.5), c});
    }

    for (const auto& m : manifests) {
        const fs::path problem_path = dir / (m.name + ".json");
        write_text_file(problem_path, m.problem_text);
        std::string csv[2];
        bool ok = true;
        for (int rep = 0; rep < 2; ++rep) {
            cli::RunManifest man;
            man.config = m.config;
            man.problem_path = problem_path;
            man.out_prefix = dir / (m.name + "_run" + std::to_string(rep));
            ok = ok && cli::cmd_run(man, log) == cli::kExitOk;
            csv[rep] = read_text_file(man.out_prefix.string() + ".csv");
        }
        o.require(ok && strip_elapsed(csv[0]) == strip_elapsed(csv[1]) && csv[0].size() > 60,
                  m.name + " CSV identical");
    }
    fs::remove_all(dir);
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 integral-VIP iteration counts (IRA, theta=0.3)", integral_vip_counts},
        {"2 toy linear-rate certificate vs fitted rate", toy_rate_soundness},
        {"3 toy RA decay bound", toy_decay_bound},
        {"4 toy vanishing-step ratio", toy_no_linear_rate},
        {"5 per-iteration estimate (toy, isotropic Nash-Cournot)", step_estimate_suite},
        {"6 QP-backed prox oracle", prox_oracle},
        {"7 Nash-Cournot ordering IRA<RA<EGM", nash_cournot_trend},
        {"8 cmd_run determinism", run_determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failures;
        std::printf("[%s] criterion %s :: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
