#include <cmath>
#include <string>

#include "ep/prox.hpp"

namespace ep {

QpProblem::QpProblem(Matrix H, Vector c, Matrix G, Vector lower, Vector upper)
    : H_(std::move(H)), c_(std::move(c)), G_(std::move(G)),
      lower_(std::move(lower)), upper_(std::move(upper)) {
    const auto m = H_.rows();
    if (H_.cols() != m) throw InvalidArgument("QpProblem: H must be square");
    if (c_.size() != m) throw InvalidArgument("QpProblem: c has wrong dimension");
    if (G_.cols() != m && G_.rows() > 0) throw InvalidArgument("QpProblem: G has wrong column count");
    if (G_.rows() == 0) G_.resize(0, m);
    const auto k = G_.rows();
    if (lower_.size() != k || upper_.size() != k) {
        throw InvalidArgument("QpProblem: bound vectors must have one entry per constraint row");
    }
    if (!(lower_.array() <= upper_.array()).all()) {
        throw InvalidArgument("QpProblem: lower bound exceeds upper bound");
    }
    H_ = 0.5 * (H_ + H_.transpose()).eval();
}

QpProblem::QpProblem(Matrix H, Vector c)
    : QpProblem(std::move(H), std::move(c), Matrix(0, 0), Vector(0), Vector(0)) {}

namespace {

Vector clip(const Vector& v, const Vector& lo, const Vector& hi) {
    return v.cwiseMax(lo).cwiseMin(hi);
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

} // namespace

QpSolution qp_solve(const QpProblem& qp, const QpSettings& settings) {
    if (!(settings.tol > 0.0)) throw InvalidArgument("qp_solve: tolerance must be positive");
    if (settings.max_iters <= 0) throw InvalidArgument("qp_solve: iteration cap must be positive");
    if (!(settings.rho > 0.0)) throw InvalidArgument("qp_solve: rho must be positive");

    const Matrix& H = qp.H();
    const Matrix& G = qp.G();
    const double rho = settings.rho;

    Eigen::LLT<Matrix> h_chol(H);
    if (h_chol.info() != Eigen::Success) {
        throw InvalidArgument("qp_solve: H is not positive definite");
    }

    QpSolution sol;
    if (qp.constraints() == 0) {
        sol.y = h_chol.solve(-qp.c());
        sol.dual = Vector(0);
        sol.iterations = 1;
        sol.dual_residual = inf_norm(H * sol.y + qp.c());
        return sol;
    }

    Eigen::LLT<Matrix> kkt(H + rho * G.transpose() * G);
    if (kkt.info() != Eigen::Success) {
        throw InvalidArgument("qp_solve: factorization of H + rho G'G failed");
    }

    const Vector& lo = qp.lower();
    const Vector& hi = qp.upper();
    Vector z = clip(Vector::Zero(G.rows()), lo, hi);
    Vector u = Vector::Zero(G.rows());
    Vector y(qp.dim());
    Vector Gy(G.rows());

    double best_score = kInf;
    for (long k = 1; k <= settings.max_iters; ++k) {
        y = kkt.solve(-qp.c() + rho * G.transpose() * (z - u));
        Gy.noalias() = G * y;
        const Vector z_next = clip(Gy + u, lo, hi);
        u += Gy - z_next;
        z = z_next;

        const double primal = inf_norm(Gy - clip(Gy, lo, hi));
        const double dual = inf_norm(H * y + qp.c() + rho * G.transpose() * u);
        const double score = std::max(primal, dual);
        if (score < best_score) {
            best_score = score;
            sol.y = y;
            sol.dual = u;
            sol.iterations = k;
            sol.primal_residual = primal;
            sol.dual_residual = dual;
        }
        if (primal <= settings.tol && dual <= settings.tol) {
            sol.y = y;
            sol.dual = u;
            sol.iterations = k;
            sol.primal_residual = primal;
            sol.dual_residual = dual;
            return sol;
        }
    }
    throw QpMaxIterations("qp_solve: no convergence within " + std::to_string(settings.max_iters) +
                              " iterations (primal " + std::to_string(sol.primal_residual) +
                              ", dual " + std::to_string(sol.dual_residual) + ")",
                          sol);
}

} // namespace ep
