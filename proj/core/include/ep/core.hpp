#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "ep/error.hpp"

namespace ep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point of a finite-dimensional real Hilbert space.
///
/// Without weights this is plain R^m with the Euclidean inner product.
/// With weights (quadrature weights, all strictly positive) the inner product
/// is sum_i w_i x_i y_i, which is how discretized L2[0,1] is represented.
/// Weights are shared between vectors derived from each other, so arithmetic
/// on large grids never copies them.
class WeightedVector {
public:
    WeightedVector() = default;
    explicit WeightedVector(Vector values);
    WeightedVector(Vector values, std::shared_ptr<const Vector> weights);
    WeightedVector(Vector values, const Vector& weights);

    static WeightedVector zeros_like(const WeightedVector& other);

    Eigen::Index dim() const noexcept { return values_.size(); }
    const Vector& values() const noexcept { return values_; }
    double operator[](Eigen::Index i) const { return values_[i]; }

    bool is_weighted() const noexcept { return weights_ != nullptr; }
    /// Null when uniform.
    const std::shared_ptr<const Vector>& weights() const noexcept { return weights_; }

    /// New values in this vector's space.
    WeightedVector with_values(Vector values) const;

    /// True when both vectors live in the same space (dimension and weights).
    bool same_space(const WeightedVector& other) const noexcept;

    WeightedVector& operator+=(const WeightedVector& rhs);
    WeightedVector& operator-=(const WeightedVector& rhs);
    WeightedVector& operator*=(double s);

    friend WeightedVector operator+(WeightedVector lhs, const WeightedVector& rhs) { return lhs += rhs; }
    friend WeightedVector operator-(WeightedVector lhs, const WeightedVector& rhs) { return lhs -= rhs; }
    friend WeightedVector operator*(double s, WeightedVector v) { return v *= s; }
    friend WeightedVector operator*(WeightedVector v, double s) { return v *= s; }

private:
    Vector values_;
    std::shared_ptr<const Vector> weights_;
};

/// Throws InvalidArgument unless `a` and `b` share dimension and weights.
void require_same_space(const WeightedVector& a, const WeightedVector& b, std::string_view what);

double inner(const WeightedVector& x, const WeightedVector& y);
double norm(const WeightedVector& x);
double squared_distance(const WeightedVector& x, const WeightedVector& y);
double distance(const WeightedVector& x, const WeightedVector& y);

/// lambda_n = (n+1)^(-p) for the power kind, a constant lambda otherwise.
class StepsizeSchedule {
public:
    enum class Kind { power, constant };

    static StepsizeSchedule power(double p);
    static StepsizeSchedule constant(double lambda);

    Kind kind() const noexcept { return kind_; }
    double exponent() const noexcept { return value_; }
    double lambda() const noexcept { return value_; }

    double at(std::int64_t n) const;

private:
    StepsizeSchedule(Kind kind, double value) : kind_(kind), value_(value) {}

    Kind kind_;
    double value_;
};

/// theta_n: either a constant in [0,1) or the non-decreasing sequence
/// theta_star * n / (n+1) capped by theta_star < 1/3.
class InertialSchedule {
public:
    enum class Kind { constant, sequence };

    static InertialSchedule constant(double theta);
    static InertialSchedule sequence(double theta_star);

    Kind kind() const noexcept { return kind_; }
    double theta() const noexcept { return value_; }
    double theta_star() const noexcept { return value_; }
    /// Largest value the schedule ever returns.
    double upper_bound() const noexcept { return value_; }

    double at(std::int64_t n) const;

private:
    InertialSchedule(Kind kind, double value) : kind_(kind), value_(value) {}

    Kind kind_;
    double value_;
};

enum class Algorithm { ira, ra, egm, vip_ira };
enum class StopMetric { residual_D, error_E, step_norm };

std::string_view to_string(Algorithm a) noexcept;
std::string_view to_string(StopMetric m) noexcept;
Algorithm parse_algorithm(std::string_view s);
StopMetric parse_stop_metric(std::string_view s);

struct SolverConfig {
    Algorithm algorithm = Algorithm::ira;
    StepsizeSchedule stepsize = StepsizeSchedule::power(1.0);
    InertialSchedule inertia = InertialSchedule::constant(0.3);
    std::int64_t max_iters = 1000;
    double stop_tol = 1e-6;
    StopMetric stop_metric = StopMetric::residual_D;
    double qp_tolerance = 1e-9;
    std::int64_t qp_max_iters = 200000;
    /// lambda used inside D(x); fixed at 1 unless overridden.
    double residual_lambda = 1.0;
    /// x_{n+1} = w_n is declared when ||x_{n+1}-w_n|| <= tol * (1 + ||w_n||).
    double fixed_point_tol = 1e-14;
    /// Evaluate D(x_{n+1}) on every iteration even when it is not the stop metric.
    bool record_residual = true;
    /// Keep every iterate in the trace (tests and bound checks need them).
    bool record_iterates = false;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument on an unusable configuration.
    void validate() const;

    /// theta actually applied at step n (0 for RA and EGM).
    double effective_theta(std::int64_t n) const;
};

} // namespace ep
