#include <benchmark/benchmark.h>

#include "ep/ep.hpp"

using namespace ep;

static void BM_QpSolveNashCournotProx(benchmark::State& state) {
    const auto m = static_cast<Eigen::Index>(state.range(0));
    const auto inst = generate_nash_cournot(m, 10, 1);
    const Vector w = Vector::Ones(m);
    const auto qp = quadratic_prox_qp(inst.f, inst.set, w, w, 0.5);
    long admm_iters = 0;
    for (auto _ : state) {
        const auto s = qp_solve(qp);
        admm_iters = s.iterations;
        benchmark::DoNotOptimize(s.y.data());
    }
    state.counters["admm_iters"] = static_cast<double>(admm_iters);
}
BENCHMARK(BM_QpSolveNashCournotProx)->Arg(20)->Arg(50)->Arg(100)->Unit(benchmark::kMicrosecond);

static void BM_WeightedBallProjection(benchmark::State& state) {
    const auto inst = build_integral_vip(1.0 / static_cast<double>(state.range(0)));
    const auto z = 3.0 * inst.default_start();
    for (auto _ : state) {
        auto p = project(inst.set, z);
        benchmark::DoNotOptimize(p.values().data());
    }
}
BENCHMARK(BM_WeightedBallProjection)->Arg(1000)->Arg(10000);

static void BM_IntegralOperatorApply(benchmark::State& state) {
    const auto inst = build_integral_vip(1.0 / static_cast<double>(state.range(0)));
    const auto x = inst.default_start();
    for (auto _ : state) {
        auto y = inst.apply(x);
        benchmark::DoNotOptimize(y.values().data());
    }
}
BENCHMARK(BM_IntegralOperatorApply)->Arg(1000)->Arg(10000);

static void BM_IraIntegralVip(benchmark::State& state) {
    const auto problem = build_integral_vip(0.001).to_problem();
    SolverConfig c;
    c.algorithm = Algorithm::ira;
    c.stepsize = StepsizeSchedule::power(state.range(0) == 0 ? 0.1 : 1.0);
    c.stop_metric = StopMetric::error_E;
    c.stop_tol = 1e-7;
    c.record_residual = false;
    std::size_t iters = 0;
    for (auto _ : state) {
        const auto t = run(c, problem);
        iters = t.iterations();
        benchmark::DoNotOptimize(t.final_point.values().data());
    }
    state.counters["iters"] = static_cast<double>(iters);
}
BENCHMARK(BM_IraIntegralVip)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

static void BM_IraNashCournot(benchmark::State& state) {
    const auto problem = generate_nash_cournot(50, 10, 0).to_problem();
    SolverConfig c;
    c.algorithm = state.range(0) == 0 ? Algorithm::ira : Algorithm::ra;
    c.stop_tol = 1e-4;
    for (auto _ : state) {
        const auto t = run(c, problem);
        benchmark::DoNotOptimize(t.final_point.values().data());
    }
}
BENCHMARK(BM_IraNashCournot)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
