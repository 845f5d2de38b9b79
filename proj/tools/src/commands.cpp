#include "ep/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace ep::cli {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string schedule_label(const StepsizeSchedule& s) {
    std::ostringstream ss;
    if (s.kind() == StepsizeSchedule::Kind::power) {
        ss << "(n+1)^-" << s.exponent();
    } else {
        ss << "const " << s.lambda();
    }
    return ss.str();
}

// gen ---------------------------------------------------------------------------

std::string generate_problem_text(const GenOptions& o) {
    if (o.kind == "nash-cournot") {
        if (o.m < 2 || o.l < 1) throw InvalidArgument("gen: need m >= 2 and l >= 1");
        return problem_to_json(generate_nash_cournot(o.m, o.l, o.seed));
    }
    if (o.kind == "integral-vip") return problem_to_json(build_integral_vip(o.tau));
    if (o.kind == "toy") return toy_problem_json(o.x0, o.x1);
    throw InvalidArgument("gen: unknown problem kind '" + o.kind +
                          "' (expected nash-cournot, integral-vip or toy)");
}

int cmd_gen(const GenOptions& options, std::ostream& log) {
    try {
        if (options.out.empty()) throw InvalidArgument("gen: --out is required");
        write_text_file(options.out, generate_problem_text(options));
        log << "wrote " << options.kind << " problem to " << options.out.string() << "\n";
        return kExitOk;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

// run ----------------------------------------------------------------------------

void RunManifest::validate() const {
    config.validate();
    if (problem_path.empty()) throw InvalidArgument("run: --problem is required");
    if (out_prefix.empty()) throw InvalidArgument("run: --out is required");
    if (report_every < 1) throw InvalidArgument("run: report cadence must be at least 1");
}

std::string trace_csv(const SolverTrace& trace) {
    std::string s = "n,lambda_n,theta_n,step_norm,D,E,elapsed_s\n";
    for (const auto& r : trace.records) {
        s += std::to_string(r.n);
        s += ',';
        s += format_double(r.lambda);
        s += ',';
        s += format_double(r.theta);
        s += ',';
        s += format_double(r.step_norm);
        s += ',';
        if (r.residual) s += format_double(*r.residual);
        s += ',';
        if (r.error) s += format_double(*r.error);
        s += ',';
        s += format_double(r.elapsed_s);
        s += '\n';
    }
    return s;
}

namespace {

json hypotheses_json(const HypothesisReport& h) {
    json j = {{"H1", to_string(h.h1)}, {"H2", to_string(h.h2)}, {"H3", to_string(h.h3)},
              {"H4", to_string(h.h4)}, {"H5", to_string(h.h5)}};
    j["h5_bound"] = h.h5_bound ? json(*h.h5_bound) : json(nullptr);
    j["notes"] = h.notes;
    return j;
}

json certificate_json(const RateCertificate& c) {
    json j = {{"gamma", c.gamma}, {"L", c.L},         {"lambda", c.lambda},
              {"theta", c.theta}, {"alpha", c.alpha}, {"A", c.A},
              {"B", c.B},         {"C", c.C_coef},    {"h4_ok", c.h4_ok},
              {"h5_ok", c.h5_ok}, {"h4_bound", c.h4_bound}, {"h5_bound", c.h5_bound}};
    j["M"] = c.M_bound ? json(*c.M_bound) : json(nullptr);
    j["note"] = c.note;
    return j;
}

} // namespace

std::string summary_json(const SolverTrace& trace, const ProblemInstance& problem,
                         const SolverConfig& config, const std::string* failure) {
    json j;
    j["status"] = failure ? std::string("failed") : std::string(to_string(trace.status));
    j["iters"] = trace.iterations();
    j["wall_s"] = trace.wall_s;
    j["problem"] = problem.kind();
    j["algorithm"] = to_string(trace.algorithm);
    j["baseline"] = trace.baseline;
    j["provenance"] = trace.provenance;
    j["stepsize"] = schedule_label(config.stepsize);
    j["stop_metric"] = to_string(trace.stop_metric);
    j["stop_tol"] = trace.stop_tol;
    j["residual_lambda"] = trace.residual_lambda;
    if (failure) j["error"] = *failure;
    if (!trace.records.empty()) {
        const auto& last = trace.records.back();
        j["final_D"] = last.residual ? json(*last.residual) : json(nullptr);
        j["final_E"] = last.error ? json(*last.error) : json(nullptr);
    }
    j["hypotheses"] = hypotheses_json(trace.hypotheses);

    const auto& constants = problem.constants();
    const auto& x_star = problem.known_solution();
    if (constants && config.stepsize.kind() == StepsizeSchedule::Kind::constant) {
        const bool inertial =
            config.algorithm == Algorithm::ira || config.algorithm == Algorithm::vip_ira;
        auto cert = theorem2_certificate(constants->gamma, constants->L, config.stepsize.lambda(),
                                         inertial ? config.inertia.upper_bound() : 0.0);
        if (x_star) attach_start(cert, problem.x0(), problem.x1(), *x_star);
        j["certificate"] = certificate_json(cert);
        if (cert.guaranteed() && cert.M_bound && !trace.records.empty() && !trace.baseline) {
            const auto env = check_rate_envelope(trace, cert);
            j["rate_envelope_holds"] = env.holds;
        }
    } else {
        j["certificate"] = nullptr;
        j["certificate_note"] = constants ? "linear-rate certificate needs a constant stepsize"
                                          : "assumption constants unknown";
    }

    if (x_star && !trace.records.empty()) {
        j["error_monotone"] = error_monotone(trace);
        try {
            j["rate_fit"] = fit_empirical_rate(trace);
        } catch (const InsufficientData&) {
            j["rate_fit"] = nullptr;
        }
        if (constants && config.algorithm == Algorithm::ra) {
            const auto b = check_decay_bound(trace, constants->gamma);
            j["decay_bound"] = {{"holds", b.holds}, {"worst_ratio", b.worst_ratio}};
        }
    }
    return j.dump(2) + "\n";
}

int cmd_run(const RunManifest& manifest, std::ostream& log) {
    std::optional<ProblemFile> file;
    try {
        manifest.validate();
        file = load_problem_file(manifest.problem_path);
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const ProblemInstance& problem = file->problem;
    const auto csv_path = std::filesystem::path(manifest.out_prefix.string() + ".csv");
    const auto json_path = std::filesystem::path(manifest.out_prefix.string() + ".json");

    auto observer = [&](const IterationRecord& r) {
        if (r.n % manifest.report_every != 0) return;
        log << "n=" << r.n << " lambda=" << r.lambda << " step=" << r.step_norm;
        if (r.residual) log << " D=" << *r.residual;
        if (r.error) log << " E=" << *r.error;
        log << "\n";
    };

    try {
        const SolverTrace trace = run(manifest.config, problem, observer);
        write_text_file(csv_path, trace_csv(trace));
        write_text_file(json_path, summary_json(trace, problem, manifest.config));
        log << to_string(trace.status) << " after " << trace.iterations() << " iterations\n";
        return kExitOk;
    } catch (const SolverFailure& f) {
        const std::string msg = f.what();
        try {
            write_text_file(csv_path, trace_csv(f.partial_trace()));
            write_text_file(json_path, summary_json(f.partial_trace(), problem, manifest.config, &msg));
        } catch (const Error& e) {
            log << "error: " << e.what() << "\n";
        }
        log << "solver failure: " << msg << "\n";
        return kExitSolverFailure;
    } catch (const IoError& e) {
        log << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
}

// compare -------------------------------------------------------------------------

void CompareOptions::validate() const {
    if (algorithms.size() < 2) throw InvalidArgument("compare: need at least two algorithms");
    if (schedules.empty()) throw InvalidArgument("compare: need at least one stepsize schedule");
    if (tolerances.empty()) throw InvalidArgument("compare: need at least one tolerance");
    for (double t : tolerances) {
        if (!(t >= 0.0)) throw InvalidArgument("compare: tolerances must be nonnegative");
    }
    if (max_iters <= 0) throw InvalidArgument("compare: max_iters must be positive");
}

namespace {

struct CompareJob {
    Algorithm algorithm;
    StepsizeSchedule schedule;
};

std::vector<CompareRow> run_job(const CompareJob& job, const CompareOptions& o,
                                const ProblemInstance& problem) {
    SolverConfig cfg;
    cfg.algorithm = job.algorithm;
    cfg.stepsize = job.schedule;
    cfg.inertia = InertialSchedule::constant(o.theta);
    cfg.max_iters = o.max_iters;
    cfg.stop_metric = o.metric;
    cfg.stop_tol = *std::min_element(o.tolerances.begin(), o.tolerances.end());
    cfg.qp_tolerance = o.qp_tolerance;
    cfg.qp_max_iters = o.qp_max_iters;
    cfg.residual_lambda = o.residual_lambda;
    cfg.record_residual = o.metric == StopMetric::residual_D;

    const bool inertial = job.algorithm == Algorithm::ira || job.algorithm == Algorithm::vip_ira;
    std::vector<CompareRow> rows;
    auto make_row = [&](double tol) {
        CompareRow r;
        r.algorithm = job.algorithm;
        r.schedule = schedule_label(job.schedule);
        r.theta = inertial ? o.theta : 0.0;
        r.tol = tol;
        return r;
    };

    try {
        const SolverTrace trace = run(cfg, problem);
        for (double tol : o.tolerances) {
            CompareRow row = make_row(tol);
            row.status = "not_reached";
            for (std::size_t k = 0; k < trace.records.size(); ++k) {
                const auto& rec = trace.records[k];
                const double metric = o.metric == StopMetric::residual_D ? *rec.residual
                                      : o.metric == StopMetric::error_E  ? *rec.error
                                                                         : rec.step_norm;
                const bool exact = k + 1 == trace.records.size() &&
                                   trace.status == TerminalStatus::exact_fixed_point;
                if (metric <= tol || exact) {
                    row.iterations = static_cast<std::int64_t>(k + 1);
                    row.wall_s = rec.elapsed_s;
                    row.status = "reached";
                    break;
                }
            }
            if (!row.iterations) row.wall_s = trace.wall_s;
            rows.push_back(std::move(row));
        }
    } catch (const Error& e) {
        for (double tol : o.tolerances) {
            CompareRow row = make_row(tol);
            row.status = std::string("failed: ") + e.what();
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace

std::vector<CompareRow> compare(const CompareOptions& options, const ProblemInstance& problem) {
    options.validate();
    std::vector<CompareJob> jobs;
    for (const auto& s : options.schedules) {
        for (auto a : options.algorithms) jobs.push_back({a, s});
    }

    std::vector<std::vector<CompareRow>> results(jobs.size());
    if (options.parallel) {
        std::vector<std::future<std::vector<CompareRow>>> futures;
        futures.reserve(jobs.size());
        for (const auto& job : jobs) {
            futures.push_back(std::async(std::launch::async,
                                         [&, job] { return run_job(job, options, problem); }));
        }
        for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = run_job(jobs[i], options, problem);
    }

    std::vector<CompareRow> rows;
    for (auto& r : results) {
        for (auto& row : r) rows.push_back(std::move(row));
    }
    return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::string s = "algorithm,schedule,theta,tol,iterations,wall_s,status\n";
    for (const auto& r : rows) {
        s += std::string(to_string(r.algorithm)) + ',' + r.schedule + ',' + format_double(r.theta) +
             ',' + format_double(r.tol) + ',' +
             (r.iterations ? std::to_string(*r.iterations) : std::string()) + ',' +
             format_double(r.wall_s) + ',';
        // status may carry an error message; keep the column CSV-safe
        std::string status = r.status;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        s += status + '\n';
    }
    return s;
}

int cmd_compare(const CompareOptions& options, std::ostream& log) {
    std::optional<ProblemFile> file;
    try {
        options.validate();
        file = load_problem_file(options.problem_path);
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const auto rows = compare(options, file->problem);
    const std::string csv = compare_csv(rows);
    try {
        if (options.out.empty()) {
            log << csv;
        } else {
            write_text_file(options.out, csv);
            log << "wrote " << rows.size() << " rows to " << options.out.string() << "\n";
        }
    } catch (const Error& e) {
        log << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const bool any_failed = std::any_of(rows.begin(), rows.end(), [](const CompareRow& r) {
        return r.status.rfind("failed", 0) == 0;
    });
    return any_failed ? kExitSolverFailure : kExitOk;
}

// check ------------------------------------------------------------------------------

int cmd_check(const std::filesystem::path& problem_path, long samples, std::uint64_t seed,
              std::ostream& out) {
    try {
        const auto file = load_problem_file(problem_path);
        const auto report = check_assumptions(file.problem, samples, seed);
        json j;
        j["problem"] = file.kind;
        j["samples"] = samples;
        j["pairs_used"] = report.pairs_used;
        j["triples_used"] = report.triples_used;
        j["gamma_hat"] = report.pairs_used > 0 ? json(report.gamma_hat) : json(nullptr);
        j["L_hat"] = report.triples_used > 0 ? json(report.L_hat) : json(nullptr);
        if (const auto& c = file.problem.constants()) {
            j["declared"] = {{"gamma", c->gamma}, {"L", c->L}};
        } else {
            j["declared"] = nullptr;
        }
        j["violations"] = report.violations;
        out << j.dump(2) << "\n";
        return kExitOk;
    } catch (const Error& e) {
        out << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

// entry point --------------------------------------------------------------------------

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Solvers and benchmarks for strongly pseudomonotone equilibrium problems"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a problem file");
    gen_cmd->add_option("kind", gen.kind, "nash-cournot | integral-vip | toy")->required();
    gen_cmd->add_option("--m", gen.m, "Nash-Cournot dimension");
    gen_cmd->add_option("--l", gen.l, "Nash-Cournot constraint rows");
    gen_cmd->add_option("--tau", gen.tau, "Integral-VIP grid spacing");
    gen_cmd->add_option("--seed", gen.seed, "Random seed");
    gen_cmd->add_option("--x0", gen.x0, "Toy starting point x0");
    gen_cmd->add_option("--x1", gen.x1, "Toy starting point x1");
    gen_cmd->add_option("--out", gen.out, "Output problem file")->required();

    struct RunFlags {
        std::string problem, algo = "IRA", metric = "D", out;
        std::optional<double> p, lambda, theta, theta_star;
        double tol = 1e-6, qp_tol = 1e-9, residual_lambda = 1.0;
        std::int64_t max_iters = 1000, qp_max_iters = 200000, report_every = 100;
        std::uint64_t seed = 0;
    } rf;
    auto* run_cmd = app.add_subcommand("run", "Run one solver and write CSV trace + JSON summary");
    run_cmd->add_option("--problem", rf.problem, "Problem file")->required();
    run_cmd->add_option("--algo", rf.algo, "IRA | RA | EGM | VIP-IRA");
    auto* p_opt = run_cmd->add_option("--p", rf.p, "Stepsize exponent: lambda_n = (n+1)^-p");
    run_cmd->add_option("--lambda", rf.lambda, "Constant stepsize")->excludes(p_opt);
    auto* theta_opt = run_cmd->add_option("--theta", rf.theta, "Constant inertial parameter");
    run_cmd->add_option("--theta-star", rf.theta_star, "Non-decreasing inertia capped at theta*")
        ->excludes(theta_opt);
    run_cmd->add_option("--tol", rf.tol, "Stopping tolerance");
    run_cmd->add_option("--metric", rf.metric, "Stop metric: D | E | step");
    run_cmd->add_option("--max-iters", rf.max_iters, "Iteration cap");
    run_cmd->add_option("--seed", rf.seed, "Seed recorded in the configuration");
    run_cmd->add_option("--qp-tol", rf.qp_tol, "Inner QP tolerance");
    run_cmd->add_option("--qp-max-iters", rf.qp_max_iters, "Inner QP iteration cap");
    run_cmd->add_option("--residual-lambda", rf.residual_lambda, "lambda used inside D(x)");
    run_cmd->add_option("--out", rf.out, "Output prefix (<prefix>.csv, <prefix>.json)")->required();
    run_cmd->add_option("--report-every", rf.report_every, "Progress line cadence");

    struct CompareFlags {
        std::string problem, metric = "D", out;
        std::vector<std::string> algos{"IRA", "RA", "EGM"};
        std::vector<double> p, lambda, tol{1e-4};
        double theta = 0.3, qp_tol = 1e-9, residual_lambda = 1.0;
        std::int64_t max_iters = 5000, qp_max_iters = 200000;
        bool serial = false;
    } cf;
    auto* cmp_cmd = app.add_subcommand("compare", "Run several algorithms and tabulate iterations");
    cmp_cmd->add_option("--problem", cf.problem, "Problem file")->required();
    cmp_cmd->add_option("--algo", cf.algos, "Algorithms (comma separated)")->delimiter(',');
    cmp_cmd->add_option("--p", cf.p, "Stepsize exponents (comma separated)")->delimiter(',');
    cmp_cmd->add_option("--lambda", cf.lambda, "Constant stepsizes (comma separated)")->delimiter(',');
    cmp_cmd->add_option("--theta", cf.theta, "Inertial parameter for IRA");
    cmp_cmd->add_option("--tol", cf.tol, "Tolerances (comma separated)")->delimiter(',');
    cmp_cmd->add_option("--metric", cf.metric, "Stop metric: D | E | step");
    cmp_cmd->add_option("--max-iters", cf.max_iters, "Iteration cap per run");
    cmp_cmd->add_option("--qp-tol", cf.qp_tol, "Inner QP tolerance");
    cmp_cmd->add_option("--qp-max-iters", cf.qp_max_iters, "Inner QP iteration cap");
    cmp_cmd->add_option("--residual-lambda", cf.residual_lambda, "lambda used inside D(x)");
    cmp_cmd->add_flag("--serial", cf.serial, "Run algorithms one after another");
    cmp_cmd->add_option("--out", cf.out, "Output CSV (stdout when omitted)");

    std::string check_problem;
    long check_samples = 1000;
    std::uint64_t check_seed = 0;
    auto* check_cmd = app.add_subcommand("check", "Sample-based check of the monotonicity constants");
    check_cmd->add_option("--problem", check_problem, "Problem file")->required();
    check_cmd->add_option("--samples", check_samples, "Number of sampled pairs/triples");
    check_cmd->add_option("--seed", check_seed, "Sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    if (gen_cmd->parsed()) return cmd_gen(gen, err);

    if (run_cmd->parsed()) {
        RunManifest m;
        try {
            m.problem_path = rf.problem;
            m.out_prefix = rf.out;
            m.report_every = rf.report_every;
            auto& c = m.config;
            c.algorithm = parse_algorithm(rf.algo);
            c.stepsize = rf.lambda ? StepsizeSchedule::constant(*rf.lambda)
                                   : StepsizeSchedule::power(rf.p.value_or(1.0));
            c.inertia = rf.theta_star ? InertialSchedule::sequence(*rf.theta_star)
                                      : InertialSchedule::constant(rf.theta.value_or(0.3));
            c.stop_tol = rf.tol;
            c.stop_metric = parse_stop_metric(rf.metric);
            c.max_iters = rf.max_iters;
            c.qp_tolerance = rf.qp_tol;
            c.qp_max_iters = rf.qp_max_iters;
            c.residual_lambda = rf.residual_lambda;
            c.seed = rf.seed;
        } catch (const Error& e) {
            err << "usage error: " << e.what() << "\n";
            return kExitUsage;
        }
        return cmd_run(m, err);
    }

    if (cmp_cmd->parsed()) {
        CompareOptions o;
        try {
            o.problem_path = cf.problem;
            for (const auto& a : cf.algos) o.algorithms.push_back(parse_algorithm(a));
            for (double p : cf.p) o.schedules.push_back(StepsizeSchedule::power(p));
            for (double l : cf.lambda) o.schedules.push_back(StepsizeSchedule::constant(l));
            if (o.schedules.empty()) o.schedules.push_back(StepsizeSchedule::power(1.0));
            o.theta = cf.theta;
            InertialSchedule::constant(o.theta);
            o.tolerances = cf.tol;
            o.metric = parse_stop_metric(cf.metric);
            o.max_iters = cf.max_iters;
            o.qp_tolerance = cf.qp_tol;
            o.qp_max_iters = cf.qp_max_iters;
            o.residual_lambda = cf.residual_lambda;
            o.parallel = !cf.serial;
            o.out = cf.out;
        } catch (const Error& e) {
            err << "usage error: " << e.what() << "\n";
            return kExitUsage;
        }
        return cmd_compare(o, o.out.empty() ? out : err);
    }

    if (check_cmd->parsed()) return cmd_check(check_problem, check_samples, check_seed, out);
    return kExitUsage;
}

} // namespace ep::cli
