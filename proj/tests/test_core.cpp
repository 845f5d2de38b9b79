#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ep/core.hpp"

using namespace ep;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

} // namespace

TEST(WeightedVector, InnerExamples) {
    EXPECT_DOUBLE_EQ(inner(WeightedVector(vec({1, 2})), WeightedVector(vec({3, 4}))), 11.0);
    EXPECT_DOUBLE_EQ(inner(WeightedVector(vec({0, 0, 0})), WeightedVector(vec({0, 0, 0}))), 0.0);

    const Vector w = vec({0.5, 0.5});
    const WeightedVector x(vec({1, 1}), w);
    EXPECT_DOUBLE_EQ(inner(x, x.with_values(vec({1, 1}))), 1.0);
}

TEST(WeightedVector, RejectsBadWeights) {
    EXPECT_THROW(WeightedVector(vec({1, 2}), vec({1, 0})), InvalidArgument);
    EXPECT_THROW(WeightedVector(vec({1, 2}), vec({1})), InvalidArgument);
    EXPECT_THROW(WeightedVector(vec({1, 2}), vec({1, -2})), InvalidArgument);
}

TEST(WeightedVector, MismatchedSpacesThrow) {
    const WeightedVector a(vec({1, 2}));
    EXPECT_THROW(inner(a, WeightedVector(vec({1, 2, 3}))), InvalidArgument);
    EXPECT_THROW(inner(a, WeightedVector(vec({1, 2}), vec({1, 1}))), InvalidArgument);
    EXPECT_THROW((void)(a + WeightedVector(vec({1}))), InvalidArgument);
}

TEST(WeightedVector, DerivedVectorsShareWeights) {
    const WeightedVector a(vec({1, 2}), vec({0.25, 0.75}));
    const auto b = 2.0 * a - a;
    EXPECT_EQ(a.weights().get(), b.weights().get());
    EXPECT_TRUE(a.same_space(b));
    EXPECT_DOUBLE_EQ(norm(b), std::sqrt(0.25 + 0.75 * 4));
}

TEST(WeightedVector, CauchySchwarzOnRandomInputs) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.1, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + trial % 9;
        Vector w(m), xv(m), yv(m);
        for (int i = 0; i < m; ++i) {
            w[i] = ud(rng);
            xv[i] = nd(rng);
            yv[i] = nd(rng);
        }
        const WeightedVector x(xv, w);
        const auto y = x.with_values(yv);
        const double xy = inner(x, y);
        EXPECT_LE(xy * xy, inner(x, x) * inner(y, y) * (1 + 1e-12));
        EXPECT_NEAR(xy, inner(y, x), 1e-14 * (1 + std::abs(xy)));
    }
}

TEST(WeightedVector, ConvexCombinationIdentity) {
    // ||a x + (1-a) y||^2 = a||x||^2 + (1-a)||y||^2 - a(1-a)||x-y||^2
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vector xv(6), yv(6), w(6);
        for (int i = 0; i < 6; ++i) {
            xv[i] = nd(rng);
            yv[i] = nd(rng);
            w[i] = 0.5 + ua(rng);
        }
        const WeightedVector x(xv, w);
        const auto y = x.with_values(yv);
        const double a = ua(rng);
        const double lhs = inner(a * x + (1 - a) * y, a * x + (1 - a) * y);
        const double rhs = a * inner(x, x) + (1 - a) * inner(y, y) - a * (1 - a) * squared_distance(x, y);
        EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
    }
}

TEST(StepsizeSchedule, Examples) {
    EXPECT_DOUBLE_EQ(StepsizeSchedule::power(1).at(0), 1.0);
    EXPECT_NEAR(StepsizeSchedule::power(0.5).at(99), 0.1, 1e-15);
    // 40-digit reference: 0.56531157058569116348...
    EXPECT_NEAR(StepsizeSchedule::power(0.1).at(299), 0.5653115705856911, 1e-15);
    EXPECT_DOUBLE_EQ(StepsizeSchedule::constant(0.25).at(0), 0.25);
    EXPECT_DOUBLE_EQ(StepsizeSchedule::constant(0.25).at(12345), 0.25);
}

TEST(StepsizeSchedule, PowerIsDecreasingWithDivergentSum) {
    for (double p : {0.1, 0.5, 1.0}) {
        const auto s = StepsizeSchedule::power(p);
        for (std::int64_t n = 0; n < 1000; ++n) EXPECT_GT(s.at(n), s.at(n + 1));
    }
    const auto s = StepsizeSchedule::power(1.0);
    double sum = 0;
    for (std::int64_t n = 0; n <= 1000000; ++n) sum += s.at(n);
    EXPECT_GT(sum, 13.0);
    EXPECT_NEAR(sum, 14.392727722864734, 1e-9);
}

TEST(StepsizeSchedule, RejectsBadParameters) {
    EXPECT_THROW(StepsizeSchedule::power(0), InvalidArgument);
    EXPECT_THROW(StepsizeSchedule::power(1.5), InvalidArgument);
    EXPECT_THROW(StepsizeSchedule::constant(0), InvalidArgument);
    EXPECT_THROW(StepsizeSchedule::constant(-1), InvalidArgument);
}

TEST(InertialSchedule, Examples) {
    const auto c = InertialSchedule::constant(0.3);
    for (std::int64_t n : {0, 1, 7, 1000}) EXPECT_DOUBLE_EQ(c.at(n), 0.3);
    EXPECT_DOUBLE_EQ(InertialSchedule::constant(0).at(5), 0.0);

    const auto s = InertialSchedule::sequence(0.25);
    EXPECT_LE(s.at(0), 0.25);
    double prev = -1;
    for (std::int64_t n = 0; n < 500; ++n) {
        EXPECT_GE(s.at(n), prev);
        EXPECT_LE(s.at(n), 0.25);
        prev = s.at(n);
    }
}

TEST(InertialSchedule, RejectsBadParameters) {
    EXPECT_THROW(InertialSchedule::constant(1.0), InvalidArgument);
    EXPECT_THROW(InertialSchedule::constant(-0.1), InvalidArgument);
    EXPECT_THROW(InertialSchedule::sequence(1.0 / 3.0), InvalidArgument);
}

TEST(SolverConfig, RaForcesZeroInertia) {
    SolverConfig c;
    c.algorithm = Algorithm::ra;
    c.inertia = InertialSchedule::constant(0.3);
    EXPECT_DOUBLE_EQ(c.effective_theta(1), 0.0);
    c.algorithm = Algorithm::ira;
    EXPECT_DOUBLE_EQ(c.effective_theta(1), 0.3);
}

TEST(SolverConfig, Validation) {
    SolverConfig c;
    EXPECT_NO_THROW(c.validate());
    c.max_iters = 0;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = SolverConfig{};
    c.stop_tol = -1;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = SolverConfig{};
    c.qp_tolerance = 0;
    EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Names, RoundTrip) {
    for (auto a : {Algorithm::ira, Algorithm::ra, Algorithm::egm, Algorithm::vip_ira}) {
        EXPECT_EQ(parse_algorithm(to_string(a)), a);
    }
    for (auto m : {StopMetric::residual_D, StopMetric::error_E, StopMetric::step_norm}) {
        EXPECT_EQ(parse_stop_metric(to_string(m)), m);
    }
    EXPECT_EQ(parse_algorithm("vip-ira"), Algorithm::vip_ira);
    EXPECT_THROW(parse_algorithm("M-EGM"), InvalidArgument);
    EXPECT_THROW(parse_stop_metric("gap"), InvalidArgument);
}
