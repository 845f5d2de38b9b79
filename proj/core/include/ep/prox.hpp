#pragma once

#include <functional>
#include <limits>
#include <variant>

#include "ep/core.hpp"

namespace ep {

// Feasible sets ---------------------------------------------------------------

struct Ball {
    Vector center;
    double radius;
};

struct Box {
    Vector lower;
    Vector upper;
};

struct NonNegative {
    Eigen::Index dim;
};

/// {x >= 0, A x <= b}. Nonemptiness is certified by a stored feasible point.
struct Polyhedron {
    Matrix A;
    Vector b;
    Vector witness;
};

struct WholeSpace {
    Eigen::Index dim;
};

class FeasibleSet {
public:
    using Shape = std::variant<Ball, Box, NonNegative, Polyhedron, WholeSpace>;

    static FeasibleSet ball(Vector center, double radius);
    static FeasibleSet box(Vector lower, Vector upper);
    static FeasibleSet nonneg(Eigen::Index dim);
    /// Throws InfeasibleSet when `witness` violates x >= 0 or A x <= b by more than `tol`.
    static FeasibleSet polyhedron(Matrix A, Vector b, Vector witness, double tol = 1e-9);
    static FeasibleSet whole_space(Eigen::Index dim);

    Eigen::Index dim() const noexcept;
    const Shape& shape() const noexcept { return shape_; }
    std::string_view kind_name() const noexcept;

    template <class T>
    const T* as() const noexcept { return std::get_if<T>(&shape_); }

    /// Membership up to an absolute slack `tol`; ball radius is measured in
    /// the norm of `x`.
    bool contains(const WeightedVector& x, double tol = 1e-9) const;

private:
    explicit FeasibleSet(Shape s) : shape_(std::move(s)) {}
    Shape shape_;
};

// Quadratic programs -----------------------------------------------------------

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// min 1/2 y'Hy + c'y  subject to  lower <= G y <= upper.
/// H is symmetrized on construction; one-sided rows use +/-infinity.
class QpProblem {
public:
    QpProblem(Matrix H, Vector c, Matrix G, Vector lower, Vector upper);
    /// Unconstrained problem (G has zero rows).
    QpProblem(Matrix H, Vector c);

    const Matrix& H() const noexcept { return H_; }
    const Vector& c() const noexcept { return c_; }
    const Matrix& G() const noexcept { return G_; }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }
    Eigen::Index dim() const noexcept { return H_.rows(); }
    Eigen::Index constraints() const noexcept { return G_.rows(); }

    double objective(const Vector& y) const { return 0.5 * y.dot(H_ * y) + c_.dot(y); }

private:
    Matrix H_;
    Vector c_;
    Matrix G_;
    Vector lower_;
    Vector upper_;
};

struct QpSolution {
    Vector y;
    /// Scaled dual of the splitting variable; rho * u is the multiplier of G y.
    Vector dual;
    long iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
};

struct QpSettings {
    double tol = 1e-9;
    long max_iters = 200000;
    double rho = 1.0;
};

/// Raised when the splitting iteration hits its cap; carries the best iterate.
class QpMaxIterations : public Error {
public:
    QpMaxIterations(const std::string& what, QpSolution best)
        : Error(ErrorCode::max_iterations, what), best_(std::move(best)) {}
    const QpSolution& best() const noexcept { return best_; }

private:
    QpSolution best_;
};

/// ADMM with fixed penalty and no over-relaxation:
///   y+ = (H + rho G'G)^{-1} (-c + rho G'(z - u))
///   z+ = clip(G y+ + u, lower, upper)
///   u+ = u + G y+ - z+
/// Stops when ||G y - clip(G y)||_inf <= tol and ||H y + c + rho G'u||_inf <= tol.
/// Throws InvalidArgument if H is not positive definite.
QpSolution qp_solve(const QpProblem& qp, const QpSettings& settings = {});

// Proximal operators ------------------------------------------------------------

/// Euclidean (or weighted) projection of z onto the set.
WeightedVector project(const FeasibleSet& set, const WeightedVector& z,
                       const QpSettings& qp = {});

/// f(x, y) = <P x + Q y + q, y - x>.
struct QuadraticBifunction {
    Matrix P;
    Matrix Q;
    Vector q;

    Eigen::Index dim() const noexcept { return q.size(); }
    double operator()(const Vector& x, const Vector& y) const {
        return (P * x + Q * y + q).dot(y - x);
    }
};

/// argmin_{y in C} lambda * f(anchor, y) + 1/2 ||y - center||^2 for a quadratic
/// bifunction. The prox of Algorithm-style methods has anchor == center; the
/// extragradient corrector uses a different anchor.
WeightedVector prox_quadratic_bifunction(const QuadraticBifunction& f, const FeasibleSet& set,
                                         const WeightedVector& anchor,
                                         const WeightedVector& center, double lambda,
                                         const QpSettings& qp = {});

inline WeightedVector prox_quadratic_bifunction(const QuadraticBifunction& f,
                                                const FeasibleSet& set,
                                                const WeightedVector& w, double lambda,
                                                const QpSettings& qp = {}) {
    return prox_quadratic_bifunction(f, set, w, w, lambda, qp);
}

/// The QP the quadratic prox solves, exposed so tests can evaluate its objective.
QpProblem quadratic_prox_qp(const QuadraticBifunction& f, const FeasibleSet& set,
                            const Vector& anchor, const Vector& center, double lambda);

using Operator = std::function<WeightedVector(const WeightedVector&)>;

/// For f(x,y) = <A x, y - x>: P_C(center - lambda * A(anchor)).
WeightedVector prox_vip(const Operator& op, const FeasibleSet& set,
                        const WeightedVector& anchor, const WeightedVector& center,
                        double lambda, const QpSettings& qp = {});

inline WeightedVector prox_vip(const Operator& op, const FeasibleSet& set,
                               const WeightedVector& w, double lambda,
                               const QpSettings& qp = {}) {
    return prox_vip(op, set, w, w, lambda, qp);
}

} // namespace ep
