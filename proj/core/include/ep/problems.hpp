#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "ep/prox.hpp"

namespace ep {

/// gamma: strong pseudomonotonicity modulus. L: Lipschitz-type constant.
struct AssumptionConstants {
    double gamma;
    double L;
};

/// f(x, y) = <A x, y - x>; the prox is a projected step.
struct VipForm {
    Operator apply;
};

/// f(x, y) = x (y - x) on the real line; the prox is x+ = center - lambda * anchor.
struct ScalarToyForm {};

/// An equilibrium problem EP(f, C) together with the starting points and
/// whatever is known about it (constants, exact solution).
class ProblemInstance {
public:
    using Form = std::variant<QuadraticBifunction, VipForm, ScalarToyForm>;

    ProblemInstance(std::string kind, Form form, FeasibleSet set, WeightedVector x0,
                    WeightedVector x1, std::optional<AssumptionConstants> constants = {},
                    std::optional<WeightedVector> known_solution = {});

    const std::string& kind() const noexcept { return kind_; }
    const Form& form() const noexcept { return form_; }
    const FeasibleSet& set() const noexcept { return set_; }
    const WeightedVector& x0() const noexcept { return x0_; }
    const WeightedVector& x1() const noexcept { return x1_; }
    const std::optional<AssumptionConstants>& constants() const noexcept { return constants_; }
    const std::optional<WeightedVector>& known_solution() const noexcept { return solution_; }
    Eigen::Index dim() const noexcept { return x0_.dim(); }

    bool is_vip() const noexcept { return std::holds_alternative<VipForm>(form_); }

    /// A point in the problem's space (weights attached).
    WeightedVector point(Vector values) const { return x0_.with_values(std::move(values)); }

    /// Pointwise bifunction value f(x, y).
    double evaluate(const WeightedVector& x, const WeightedVector& y) const;

    /// argmin_{y in C} lambda f(anchor, y) + 1/2 ||y - center||^2.
    WeightedVector prox(const WeightedVector& anchor, const WeightedVector& center,
                        double lambda, const QpSettings& qp = {}) const;
    WeightedVector prox(const WeightedVector& w, double lambda, const QpSettings& qp = {}) const {
        return prox(w, w, lambda, qp);
    }

    ProblemInstance with_start(WeightedVector x0, WeightedVector x1) const;
    ProblemInstance with_known_solution(WeightedVector x_star) const;

private:
    std::string kind_;
    Form form_;
    FeasibleSet set_;
    WeightedVector x0_;
    WeightedVector x1_;
    std::optional<AssumptionConstants> constants_;
    std::optional<WeightedVector> solution_;
};

// Nash-Cournot oligopoly ------------------------------------------------------

struct NashCournotOptions {
    /// Test hook: fixed eigenvalues of T = Q - P instead of random ones in (-2, 0).
    std::optional<Vector> t_eigenvalues;
};

struct NashCournotInstance {
    QuadraticBifunction f;
    FeasibleSet set;
    AssumptionConstants constants;
    std::uint64_t seed = 0;
    Vector t_eigenvalues;  // spectrum of Q - P
    Vector q_eigenvalues;  // spectrum of Q

    Eigen::Index m() const noexcept { return f.dim(); }
    Eigen::Index l() const noexcept;

    /// Starts at x0 = x1 = (1, ..., 1).
    ProblemInstance to_problem() const;
};

/// Q = U2' diag(l2) U2 with l2 in (0, 2), T = U1' diag(l1) U1 with l1 in (-2, 0),
/// P = Q - T, q uniform in (-2, 2), A uniform in (0, 1)^{l x m} and
/// b = A 1 + zeta with zeta uniform in (0, 1)^l. gamma = min |l1|, L = max |l1|.
NashCournotInstance generate_nash_cournot(Eigen::Index m, Eigen::Index l, std::uint64_t seed,
                                          const NashCournotOptions& options = {});

// Integral-operator VIP on L2[0,1] ---------------------------------------------

/// F(t, s) = 2 t s e^{t+s} / (e sqrt(e^2 - 1)).
double integral_kernel(double t, double s);
/// g(t) = 2 t e^t / (e sqrt(e^2 - 1)).
double integral_forcing(double t);

struct IntegralVipInstance {
    double tau = 0.0;
    Vector grid;
    std::shared_ptr<const Vector> weights;
    Vector phi;  // t e^t on the grid
    FeasibleSet set = FeasibleSet::whole_space(1);

    Eigen::Index points() const noexcept { return grid.size(); }

    /// A(x)_i = x_i - sum_j w_j F(t_i, t_j) cos(x_j) + g(t_i).
    WeightedVector apply(const WeightedVector& x) const;
    WeightedVector zero() const;
    /// x0(t) = x1(t) = t + 0.5 cos t sampled on the grid.
    WeightedVector default_start() const;

    ProblemInstance to_problem() const;
};

/// Throws InvalidArgument unless 1/tau is a positive integer.
IntegralVipInstance build_integral_vip(double tau = 0.001);

// Scalar counterexample ---------------------------------------------------------

/// f(x, y) = x (y - x) on R with gamma = L = 1 and x* = 0.
ProblemInstance make_toy_problem(double x0 = 1.0, double x1 = 1.0);

// Assumption checks ---------------------------------------------------------------

/// A random point of the set. Unbounded directions are sampled in [0, spread]
/// (orthant) or N(0, spread^2) (whole space).
WeightedVector sample_feasible(const FeasibleSet& set, const WeightedVector& like,
                               std::mt19937_64& rng, double spread = 2.0);

struct AssumptionReport {
    double gamma_hat = kInf;   // min of -f(y,x)/||x-y||^2 over pairs with f(x,y) >= 0
    double L_hat = -kInf;      // max of (f(x,z)-f(x,y)-f(y,z))/(||x-y|| ||y-z||)
    long pairs_used = 0;
    long triples_used = 0;
    std::vector<std::string> violations;
};

AssumptionReport check_assumptions(const ProblemInstance& problem, long samples,
                                   std::uint64_t seed, double tolerance = 1e-8);

} // namespace ep
