#include <cmath>
#include <string>

#include "ep/prox.hpp"
#include "overloaded.hpp"

namespace ep {

using detail::overloaded;

// FeasibleSet -------------------------------------------------------------------

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
    if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
    return FeasibleSet(Ball{std::move(center), radius});
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
    if (lower.size() != upper.size()) throw InvalidArgument("box bounds differ in dimension");
    if (!(lower.array() <= upper.array()).all()) {
        throw InvalidArgument("box lower bound exceeds upper bound");
    }
    return FeasibleSet(Box{std::move(lower), std::move(upper)});
}

FeasibleSet FeasibleSet::nonneg(Eigen::Index dim) {
    if (dim <= 0) throw InvalidArgument("dimension must be positive");
    return FeasibleSet(NonNegative{dim});
}

FeasibleSet FeasibleSet::polyhedron(Matrix A, Vector b, Vector witness, double tol) {
    if (A.rows() != b.size()) throw InvalidArgument("polyhedron: A and b row counts differ");
    if (A.cols() != witness.size()) throw InvalidArgument("polyhedron: witness has wrong dimension");
    if ((witness.array() < -tol).any() || ((A * witness - b).array() > tol).any()) {
        throw InfeasibleSet("polyhedron: witness point violates {x >= 0, Ax <= b}");
    }
    return FeasibleSet(Polyhedron{std::move(A), std::move(b), std::move(witness)});
}

FeasibleSet FeasibleSet::whole_space(Eigen::Index dim) {
    if (dim <= 0) throw InvalidArgument("dimension must be positive");
    return FeasibleSet(WholeSpace{dim});
}

Eigen::Index FeasibleSet::dim() const noexcept {
    return std::visit(overloaded{
                          [](const Ball& s) { return s.center.size(); },
                          [](const Box& s) { return s.lower.size(); },
                          [](const NonNegative& s) { return s.dim; },
                          [](const Polyhedron& s) { return s.A.cols(); },
                          [](const WholeSpace& s) { return s.dim; },
                      },
                      shape_);
}

std::string_view FeasibleSet::kind_name() const noexcept {
    return std::visit(overloaded{
                          [](const Ball&) { return std::string_view("ball"); },
                          [](const Box&) { return std::string_view("box"); },
                          [](const NonNegative&) { return std::string_view("nonneg"); },
                          [](const Polyhedron&) { return std::string_view("polyhedron"); },
                          [](const WholeSpace&) { return std::string_view("whole_space"); },
                      },
                      shape_);
}

bool FeasibleSet::contains(const WeightedVector& x, double tol) const {
    if (x.dim() != dim()) return false;
    const Vector& v = x.values();
    return std::visit(overloaded{
                          [&](const Ball& s) {
                              return distance(x, x.with_values(s.center)) <= s.radius + tol;
                          },
                          [&](const Box& s) {
                              return ((v - s.lower).array() >= -tol).all() &&
                                     ((s.upper - v).array() >= -tol).all();
                          },
                          [&](const NonNegative&) { return (v.array() >= -tol).all(); },
                          [&](const Polyhedron& s) {
                              return (v.array() >= -tol).all() &&
                                     ((s.A * v - s.b).array() <= tol).all();
                          },
                          [&](const WholeSpace&) { return true; },
                      },
                      shape_);
}

// Projection ----------------------------------------------------------------------

namespace {

void require_set_dim(const FeasibleSet& set, Eigen::Index dim, std::string_view what) {
    if (set.dim() != dim) {
        throw InvalidArgument(std::string(what) + ": point dimension " + std::to_string(dim) +
                              " does not match set dimension " + std::to_string(set.dim()));
    }
}

} // namespace

WeightedVector project(const FeasibleSet& set, const WeightedVector& z, const QpSettings& qp) {
    require_set_dim(set, z.dim(), "project");
    const Vector& v = z.values();
    return std::visit(
        overloaded{
            [&](const Ball& s) {
                const WeightedVector center = z.with_values(s.center);
                const double r = distance(z, center);
                if (r <= s.radius) return z;
                return z.with_values(s.center + (s.radius / r) * (v - s.center));
            },
            [&](const Box& s) { return z.with_values(v.cwiseMax(s.lower).cwiseMin(s.upper)); },
            [&](const NonNegative&) { return z.with_values(v.cwiseMax(0.0)); },
            [&](const Polyhedron& s) {
                if (z.is_weighted()) {
                    throw Unsupported("projection onto a polyhedron requires uniform weights");
                }
                const auto m = v.size();
                const auto l = s.A.rows();
                Matrix G(l + m, m);
                G << s.A, Matrix::Identity(m, m);
                Vector lo(l + m), hi(l + m);
                lo << Vector::Constant(l, -kInf), Vector::Zero(m);
                hi << s.b, Vector::Constant(m, kInf);
                QpProblem problem(Matrix::Identity(m, m), -v, std::move(G), std::move(lo),
                                  std::move(hi));
                return z.with_values(qp_solve(problem, qp).y);
            },
            [&](const WholeSpace&) { return z; },
        },
        set.shape());
}

// Proximal maps -----------------------------------------------------------------

// For f(a, y) = <P a + Q y + q, y - a> the prox objective in y is
//
//   lambda <P a + Q y + q, y - a> + 1/2 ||y - x||^2
//     = 1/2 y'(I + lambda (Q + Q')) y + (lambda (P a + q - Q' a) - x)' y + const,
//
// using y'Q y = 1/2 y'(Q + Q')y and a'Q y = (Q'a)'y. With symmetric Q this is
// H = I + 2 lambda Q and c = lambda (P a + q - Q a) - x.
QpProblem quadratic_prox_qp(const QuadraticBifunction& f, const FeasibleSet& set,
                            const Vector& anchor, const Vector& center, double lambda) {
    const auto m = f.dim();
    if (f.P.rows() != m || f.P.cols() != m || f.Q.rows() != m || f.Q.cols() != m) {
        throw InvalidArgument("quadratic bifunction: P, Q must be m x m with m = dim(q)");
    }
    if (anchor.size() != m || center.size() != m) {
        throw InvalidArgument("quadratic prox: point dimension mismatch");
    }
    require_set_dim(set, m, "quadratic prox");
    if (!(lambda > 0.0)) throw InvalidArgument("quadratic prox: lambda must be positive");

    Matrix H = Matrix::Identity(m, m) + lambda * (f.Q + f.Q.transpose());
    Vector c = lambda * (f.P * anchor + f.q - f.Q.transpose() * anchor) - center;

    return std::visit(
        overloaded{
            [&](const Ball&) -> QpProblem {
                throw Unsupported("quadratic prox over a ball is not a linearly constrained QP");
            },
            [&](const Box& s) {
                return QpProblem(std::move(H), std::move(c), Matrix::Identity(m, m), s.lower,
                                 s.upper);
            },
            [&](const NonNegative&) {
                return QpProblem(std::move(H), std::move(c), Matrix::Identity(m, m),
                                 Vector::Zero(m), Vector::Constant(m, kInf));
            },
            [&](const Polyhedron& s) {
                const auto l = s.A.rows();
                Matrix G(l + m, m);
                G << s.A, Matrix::Identity(m, m);
                Vector lo(l + m), hi(l + m);
                lo << Vector::Constant(l, -kInf), Vector::Zero(m);
                hi << s.b, Vector::Constant(m, kInf);
                return QpProblem(std::move(H), std::move(c), std::move(G), std::move(lo),
                                 std::move(hi));
            },
            [&](const WholeSpace&) { return QpProblem(std::move(H), std::move(c)); },
        },
        set.shape());
}

WeightedVector prox_quadratic_bifunction(const QuadraticBifunction& f, const FeasibleSet& set,
                                         const WeightedVector& anchor,
                                         const WeightedVector& center, double lambda,
                                         const QpSettings& qp) {
    require_same_space(anchor, center, "quadratic prox");
    if (center.is_weighted()) {
        throw Unsupported("quadratic bifunction prox requires uniform weights");
    }
    const QpProblem problem = quadratic_prox_qp(f, set, anchor.values(), center.values(), lambda);
    return center.with_values(qp_solve(problem, qp).y);
}

WeightedVector prox_vip(const Operator& op, const FeasibleSet& set,
                        const WeightedVector& anchor, const WeightedVector& center,
                        double lambda, const QpSettings& qp) {
    if (!(lambda > 0.0)) throw InvalidArgument("prox_vip: lambda must be positive");
    require_same_space(anchor, center, "prox_vip");
    WeightedVector step = op(anchor);
    require_same_space(step, center, "prox_vip operator image");
    return project(set, center - lambda * std::move(step), qp);
}

} // namespace ep
