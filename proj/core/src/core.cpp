#include "ep/core.hpp"

#include <cmath>
#include <string>

namespace ep {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::infeasible_set: return "infeasible-set";
    case ErrorCode::max_iterations: return "max-iterations";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::io: return "io";
    }
    return "unknown";
}

namespace {

std::shared_ptr<const Vector> checked_weights(const Vector& weights, Eigen::Index dim) {
    if (weights.size() != dim) {
        throw InvalidArgument("weights dimension " + std::to_string(weights.size()) +
                              " does not match values dimension " + std::to_string(dim));
    }
    if (!(weights.array() > 0.0).all()) {
        throw InvalidArgument("quadrature weights must be strictly positive");
    }
    return std::make_shared<const Vector>(weights);
}

} // namespace

WeightedVector::WeightedVector(Vector values) : values_(std::move(values)) {}

WeightedVector::WeightedVector(Vector values, std::shared_ptr<const Vector> weights)
    : values_(std::move(values)), weights_(std::move(weights)) {
    if (weights_) {
        if (weights_->size() != values_.size()) {
            throw InvalidArgument("weights dimension does not match values dimension");
        }
        if (!(weights_->array() > 0.0).all()) {
            throw InvalidArgument("quadrature weights must be strictly positive");
        }
    }
}

WeightedVector::WeightedVector(Vector values, const Vector& weights)
    : values_(std::move(values)) {
    weights_ = checked_weights(weights, values_.size());
}

WeightedVector WeightedVector::zeros_like(const WeightedVector& other) {
    WeightedVector out;
    out.values_ = Vector::Zero(other.dim());
    out.weights_ = other.weights_;
    return out;
}

WeightedVector WeightedVector::with_values(Vector values) const {
    if (values.size() != dim()) {
        throw InvalidArgument("with_values: dimension mismatch");
    }
    WeightedVector out;
    out.values_ = std::move(values);
    out.weights_ = weights_;
    return out;
}

bool WeightedVector::same_space(const WeightedVector& other) const noexcept {
    if (dim() != other.dim()) return false;
    if (weights_ == other.weights_) return true;
    if (!weights_ || !other.weights_) return false;
    return *weights_ == *other.weights_;
}

WeightedVector& WeightedVector::operator+=(const WeightedVector& rhs) {
    require_same_space(*this, rhs, "operator+");
    values_ += rhs.values_;
    return *this;
}

WeightedVector& WeightedVector::operator-=(const WeightedVector& rhs) {
    require_same_space(*this, rhs, "operator-");
    values_ -= rhs.values_;
    return *this;
}

WeightedVector& WeightedVector::operator*=(double s) {
    values_ *= s;
    return *this;
}

void require_same_space(const WeightedVector& a, const WeightedVector& b, std::string_view what) {
    if (a.dim() != b.dim()) {
        throw InvalidArgument(std::string(what) + ": dimension mismatch (" +
                              std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
    }
    if (!a.same_space(b)) {
        throw InvalidArgument(std::string(what) + ": quadrature weights differ");
    }
}

double inner(const WeightedVector& x, const WeightedVector& y) {
    require_same_space(x, y, "inner");
    if (const auto& w = x.weights()) {
        return (w->array() * x.values().array() * y.values().array()).sum();
    }
    return x.values().dot(y.values());
}

double norm(const WeightedVector& x) { return std::sqrt(inner(x, x)); }

double squared_distance(const WeightedVector& x, const WeightedVector& y) {
    require_same_space(x, y, "squared_distance");
    const Vector d = x.values() - y.values();
    if (const auto& w = x.weights()) {
        return (w->array() * d.array().square()).sum();
    }
    return d.squaredNorm();
}

double distance(const WeightedVector& x, const WeightedVector& y) {
    return std::sqrt(squared_distance(x, y));
}

// Schedules ------------------------------------------------------------------

StepsizeSchedule StepsizeSchedule::power(double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw InvalidArgument("power stepsize exponent must lie in (0, 1]");
    }
    return {Kind::power, p};
}

StepsizeSchedule StepsizeSchedule::constant(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("constant stepsize must be positive and finite");
    }
    return {Kind::constant, lambda};
}

double StepsizeSchedule::at(std::int64_t n) const {
    if (kind_ == Kind::constant) return value_;
    return std::pow(static_cast<double>(n) + 1.0, -value_);
}

InertialSchedule InertialSchedule::constant(double theta) {
    if (!(theta >= 0.0 && theta < 1.0)) {
        throw InvalidArgument("inertial parameter must lie in [0, 1)");
    }
    return {Kind::constant, theta};
}

InertialSchedule InertialSchedule::sequence(double theta_star) {
    if (!(theta_star >= 0.0 && theta_star < 1.0 / 3.0)) {
        throw InvalidArgument("inertial cap theta_star must lie in [0, 1/3)");
    }
    return {Kind::sequence, theta_star};
}

double InertialSchedule::at(std::int64_t n) const {
    if (kind_ == Kind::constant) return value_;
    const double k = static_cast<double>(n < 0 ? 0 : n);
    return value_ * k / (k + 1.0);
}

// Config ---------------------------------------------------------------------

std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
    case Algorithm::ira: return "IRA";
    case Algorithm::ra: return "RA";
    case Algorithm::egm: return "EGM";
    case Algorithm::vip_ira: return "VIP-IRA";
    }
    return "?";
}

std::string_view to_string(StopMetric m) noexcept {
    switch (m) {
    case StopMetric::residual_D: return "D";
    case StopMetric::error_E: return "E";
    case StopMetric::step_norm: return "step";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view s) {
    if (s == "IRA" || s == "ira") return Algorithm::ira;
    if (s == "RA" || s == "ra") return Algorithm::ra;
    if (s == "EGM" || s == "egm") return Algorithm::egm;
    if (s == "VIP-IRA" || s == "vip-ira") return Algorithm::vip_ira;
    throw InvalidArgument("unknown algorithm '" + std::string(s) + "'");
}

StopMetric parse_stop_metric(std::string_view s) {
    if (s == "D" || s == "residual_D") return StopMetric::residual_D;
    if (s == "E" || s == "error_E") return StopMetric::error_E;
    if (s == "step" || s == "step_norm") return StopMetric::step_norm;
    throw InvalidArgument("unknown stop metric '" + std::string(s) + "'");
}

void SolverConfig::validate() const {
    if (max_iters <= 0) throw InvalidArgument("max_iters must be positive");
    if (!(stop_tol >= 0.0)) throw InvalidArgument("stop_tol must be nonnegative");
    if (!(qp_tolerance > 0.0)) throw InvalidArgument("qp_tolerance must be positive");
    if (qp_max_iters <= 0) throw InvalidArgument("qp_max_iters must be positive");
    if (!(residual_lambda > 0.0)) throw InvalidArgument("residual_lambda must be positive");
    if (!(fixed_point_tol >= 0.0)) throw InvalidArgument("fixed_point_tol must be nonnegative");
}

double SolverConfig::effective_theta(std::int64_t n) const {
    switch (algorithm) {
    case Algorithm::ra:
    case Algorithm::egm:
        return 0.0;
    case Algorithm::ira:
    case Algorithm::vip_ira:
        return inertia.at(n);
    }
    return 0.0;
}

} // namespace ep
