#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ep/problems.hpp"
#include "overloaded.hpp"

namespace ep {

using detail::overloaded;

// ProblemInstance -------------------------------------------------------------

ProblemInstance::ProblemInstance(std::string kind, Form form, FeasibleSet set, WeightedVector x0,
                                 WeightedVector x1, std::optional<AssumptionConstants> constants,
                                 std::optional<WeightedVector> known_solution)
    : kind_(std::move(kind)), form_(std::move(form)), set_(std::move(set)), x0_(std::move(x0)),
      x1_(std::move(x1)), constants_(constants), solution_(std::move(known_solution)) {
    require_same_space(x0_, x1_, "problem starting points");
    if (set_.dim() != x0_.dim()) {
        throw InvalidArgument("problem: starting points do not match the feasible set dimension");
    }
    if (solution_) require_same_space(x0_, *solution_, "problem known solution");
    if (constants_ && !(constants_->gamma > 0.0 && constants_->L > 0.0)) {
        throw InvalidArgument("assumption constants gamma and L must be positive");
    }
    if (const auto* q = std::get_if<QuadraticBifunction>(&form_); q && q->dim() != x0_.dim()) {
        throw InvalidArgument("problem: bifunction dimension does not match starting points");
    }
    if (std::holds_alternative<ScalarToyForm>(form_) && x0_.dim() != 1) {
        throw InvalidArgument("problem: scalar form requires dimension 1");
    }
    if (const auto* v = std::get_if<VipForm>(&form_); v && !v->apply) {
        throw InvalidArgument("problem: VIP operator is empty");
    }
}

double ProblemInstance::evaluate(const WeightedVector& x, const WeightedVector& y) const {
    require_same_space(x, x0_, "evaluate");
    require_same_space(y, x0_, "evaluate");
    return std::visit(overloaded{
                          [&](const QuadraticBifunction& f) { return f(x.values(), y.values()); },
                          [&](const VipForm& f) { return inner(f.apply(x), y - x); },
                          [&](const ScalarToyForm&) { return x[0] * (y[0] - x[0]); },
                      },
                      form_);
}

WeightedVector ProblemInstance::prox(const WeightedVector& anchor, const WeightedVector& center,
                                     double lambda, const QpSettings& qp) const {
    require_same_space(anchor, x0_, "prox anchor");
    require_same_space(center, x0_, "prox center");
    if (!(lambda > 0.0)) throw InvalidArgument("prox: lambda must be positive");
    return std::visit(
        overloaded{
            [&](const QuadraticBifunction& f) {
                return prox_quadratic_bifunction(f, set_, anchor, center, lambda, qp);
            },
            [&](const VipForm& f) { return prox_vip(f.apply, set_, anchor, center, lambda, qp); },
            // argmin lambda a (y - a) + 1/2 (y - x)^2 = x - lambda a, then onto C.
            [&](const ScalarToyForm&) {
                return project(set_, center - lambda * anchor, qp);
            },
        },
        form_);
}

ProblemInstance ProblemInstance::with_start(WeightedVector x0, WeightedVector x1) const {
    return ProblemInstance(kind_, form_, set_, std::move(x0), std::move(x1), constants_, solution_);
}

ProblemInstance ProblemInstance::with_known_solution(WeightedVector x_star) const {
    return ProblemInstance(kind_, form_, set_, x0_, x1_, constants_, std::move(x_star));
}

// Nash-Cournot ------------------------------------------------------------------

namespace {

Matrix random_orthogonal(Eigen::Index m, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) g(i, j) = normal(rng);
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(m, m);
}

Vector uniform_vector(Eigen::Index n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double x = u(rng);
        // open interval: uniform_real_distribution may return lo
        while (x == lo) x = u(rng);
        v[i] = x;
    }
    return v;
}

Matrix symmetric_from_spectrum(const Matrix& U, const Vector& eig) {
    Matrix S = U.transpose() * eig.asDiagonal() * U;
    return 0.5 * (S + S.transpose());
}

} // namespace

Eigen::Index NashCournotInstance::l() const noexcept {
    const auto* p = set.as<Polyhedron>();
    return p ? p->A.rows() : 0;
}

ProblemInstance NashCournotInstance::to_problem() const {
    const WeightedVector ones(Vector::Ones(m()));
    return ProblemInstance("nash-cournot", f, set, ones, ones, constants);
}

NashCournotInstance generate_nash_cournot(Eigen::Index m, Eigen::Index l, std::uint64_t seed,
                                          const NashCournotOptions& options) {
    if (m < 2) throw InvalidArgument("nash-cournot: m must be at least 2");
    if (l < 1) throw InvalidArgument("nash-cournot: l must be at least 1");

    std::mt19937_64 rng(seed);
    Vector t_eig = uniform_vector(m, -2.0, 0.0, rng);
    if (options.t_eigenvalues) {
        if (options.t_eigenvalues->size() != m || !(options.t_eigenvalues->array() < 0.0).all()) {
            throw InvalidArgument("nash-cournot: forced eigenvalues must be m negative numbers");
        }
        t_eig = *options.t_eigenvalues;
    }
    const Vector q_eig = uniform_vector(m, 0.0, 2.0, rng);
    const Matrix U1 = random_orthogonal(m, rng);
    const Matrix U2 = random_orthogonal(m, rng);
    const Vector q = uniform_vector(m, -2.0, 2.0, rng);
    const Matrix A = [&] {
        Matrix a(l, m);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (Eigen::Index j = 0; j < m; ++j) {
            for (Eigen::Index i = 0; i < l; ++i) a(i, j) = u(rng);
        }
        return a;
    }();
    const Vector zeta = uniform_vector(l, 0.0, 1.0, rng);

    NashCournotInstance inst{
        .f = {},
        .set = FeasibleSet::whole_space(m),
        .constants = {},
        .seed = seed,
        .t_eigenvalues = t_eig,
        .q_eigenvalues = q_eig,
    };
    const Matrix Q = symmetric_from_spectrum(U2, q_eig);
    const Matrix T = symmetric_from_spectrum(U1, t_eig);
    inst.f = QuadraticBifunction{Q - T, Q, q};

    const Vector ones = Vector::Ones(m);
    Vector b = A * ones + zeta.cwiseAbs();
    inst.set = FeasibleSet::polyhedron(A, std::move(b), ones);

    const Vector abs_t = t_eig.cwiseAbs();
    inst.constants = AssumptionConstants{abs_t.minCoeff(), abs_t.maxCoeff()};
    return inst;
}

// Integral VIP ------------------------------------------------------------------

namespace {

// 2 / (e sqrt(e^2 - 1)); F(t,s) = kappa phi(t) phi(s) and g = kappa phi with phi(t) = t e^t.
double integral_kappa() {
    constexpr double e = std::numbers::e;
    return 2.0 / (e * std::sqrt(e * e - 1.0));
}

} // namespace

double integral_kernel(double t, double s) {
    return integral_kappa() * t * s * std::exp(t + s);
}

double integral_forcing(double t) { return integral_kappa() * t * std::exp(t); }

WeightedVector IntegralVipInstance::apply(const WeightedVector& x) const {
    if (x.dim() != points()) throw InvalidArgument("integral operator: dimension mismatch");
    const Vector& w = *weights;
    // The kernel is rank one, so the quadrature sum collapses to one scalar.
    const double s = (w.array() * phi.array() * x.values().array().cos()).sum();
    const double kappa = integral_kappa();
    return WeightedVector(x.values() + kappa * (1.0 - s) * phi, weights);
}

WeightedVector IntegralVipInstance::zero() const {
    return WeightedVector(Vector::Zero(points()), weights);
}

WeightedVector IntegralVipInstance::default_start() const {
    return WeightedVector((grid.array() + 0.5 * grid.array().cos()).matrix(), weights);
}

ProblemInstance IntegralVipInstance::to_problem() const {
    auto self = std::make_shared<const IntegralVipInstance>(*this);
    VipForm form{[self](const WeightedVector& x) { return self->apply(x); }};
    const WeightedVector start = default_start();
    return ProblemInstance("integral-vip", std::move(form), set, start, start, std::nullopt, zero());
}

IntegralVipInstance build_integral_vip(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw InvalidArgument("integral-vip: tau must be positive");
    }
    const double inv = 1.0 / tau;
    const double n_real = std::round(inv);
    if (n_real < 1.0 || std::abs(inv - n_real) > 1e-9 * n_real) {
        throw InvalidArgument("integral-vip: 1/tau must be a positive integer");
    }
    const auto n = static_cast<Eigen::Index>(n_real);

    IntegralVipInstance inst;
    inst.tau = 1.0 / n_real;
    inst.grid.resize(n + 1);
    Vector w(n + 1);
    for (Eigen::Index i = 0; i <= n; ++i) {
        inst.grid[i] = static_cast<double>(i) / n_real;
        w[i] = (i == 0 || i == n) ? 0.5 * inst.tau : inst.tau;
    }
    inst.weights = std::make_shared<const Vector>(std::move(w));
    inst.phi = (inst.grid.array() * inst.grid.array().exp()).matrix();
    inst.set = FeasibleSet::ball(Vector::Zero(n + 1), 1.0);
    return inst;
}

// Toy ----------------------------------------------------------------------------

ProblemInstance make_toy_problem(double x0, double x1) {
    return ProblemInstance("toy", ScalarToyForm{}, FeasibleSet::whole_space(1),
                           WeightedVector(Vector::Constant(1, x0)),
                           WeightedVector(Vector::Constant(1, x1)), AssumptionConstants{1.0, 1.0},
                           WeightedVector(Vector::Zero(1)));
}

// Sampling and assumption checks -----------------------------------------------------

WeightedVector sample_feasible(const FeasibleSet& set, const WeightedVector& like,
                               std::mt19937_64& rng, double spread) {
    const auto m = set.dim();
    if (like.dim() != m) throw InvalidArgument("sample_feasible: dimension mismatch");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto uniform_in = [&](double lo, double hi) {
        Vector v(m);
        for (Eigen::Index i = 0; i < m; ++i) v[i] = lo + (hi - lo) * unit(rng);
        return v;
    };

    return std::visit(
        overloaded{
            [&](const Ball& s) {
                Vector d(m);
                for (Eigen::Index i = 0; i < m; ++i) d[i] = normal(rng);
                const double dn = norm(like.with_values(d));
                const double r = s.radius * unit(rng);
                return like.with_values(s.center + (r / dn) * d);
            },
            [&](const Box& s) {
                Vector v(m);
                for (Eigen::Index i = 0; i < m; ++i) {
                    const double lo = std::isfinite(s.lower[i]) ? s.lower[i] : s.upper[i] - spread;
                    const double hi = std::isfinite(s.upper[i]) ? s.upper[i] : lo + spread;
                    v[i] = lo + (hi - lo) * unit(rng);
                }
                return like.with_values(v);
            },
            [&](const NonNegative&) { return like.with_values(uniform_in(0.0, spread)); },
            [&](const Polyhedron& s) {
                // Walk from the witness towards a random orthant point, stopping
                // uniformly inside the feasible part of the segment.
                const Vector d = uniform_in(0.0, spread) - s.witness;
                double t_max = 1.0;
                for (Eigen::Index i = 0; i < m; ++i) {
                    if (d[i] < 0.0) t_max = std::min(t_max, -s.witness[i] / d[i]);
                }
                const Vector slack = s.b - s.A * s.witness;
                const Vector Ad = s.A * d;
                for (Eigen::Index j = 0; j < Ad.size(); ++j) {
                    if (Ad[j] > 0.0) t_max = std::min(t_max, slack[j] / Ad[j]);
                }
                t_max = std::max(t_max, 0.0);
                return like.with_values(s.witness + unit(rng) * t_max * d);
            },
            [&](const WholeSpace&) {
                Vector v(m);
                for (Eigen::Index i = 0; i < m; ++i) v[i] = spread * normal(rng);
                return like.with_values(v);
            },
        },
        set.shape());
}

AssumptionReport check_assumptions(const ProblemInstance& problem, long samples,
                                   std::uint64_t seed, double tolerance) {
    if (samples < 1) throw InvalidArgument("check_assumptions: samples must be positive");
    std::mt19937_64 rng(seed);
    AssumptionReport report;
    const auto& like = problem.x0();
    auto draw = [&] { return sample_feasible(problem.set(), like, rng); };

    for (long k = 0; k < samples; ++k) {
        WeightedVector x = draw();
        WeightedVector y = draw();
        const double d2 = squared_distance(x, y);
        if (d2 > 0.0) {
            double fxy = problem.evaluate(x, y);
            if (fxy < 0.0) {
                std::swap(x, y);
                fxy = problem.evaluate(x, y);
            }
            if (fxy >= 0.0) {
                report.gamma_hat = std::min(report.gamma_hat, -problem.evaluate(y, x) / d2);
                ++report.pairs_used;
            }
        }

        const WeightedVector z = draw();
        const double dxy = distance(x, y);
        const double dyz = distance(y, z);
        if (dxy > 0.0 && dyz > 0.0) {
            const double gap =
                problem.evaluate(x, z) - problem.evaluate(x, y) - problem.evaluate(y, z);
            report.L_hat = std::max(report.L_hat, gap / (dxy * dyz));
            ++report.triples_used;
        }
    }

    if (const auto& c = problem.constants()) {
        if (report.pairs_used > 0 && report.gamma_hat < c->gamma * (1.0 - tolerance) - tolerance) {
            report.violations.push_back("strong pseudomonotonicity: sampled modulus " +
                                        std::to_string(report.gamma_hat) + " below declared gamma " +
                                        std::to_string(c->gamma));
        }
        if (report.triples_used > 0 && report.L_hat > c->L * (1.0 + tolerance) + tolerance) {
            report.violations.push_back("Lipschitz-type condition: sampled constant " +
                                        std::to_string(report.L_hat) + " above declared L " +
                                        std::to_string(c->L));
        }
    }
    return report;
}

} // namespace ep
