#pragma once

#include <Eigen/Dense>
#include <span>
#include <string_view>
#include <vector>

#include "gevstat/distributions.hpp"

namespace gevstat {

enum class Model { Gev, Gumbel };

[[nodiscard]] std::string_view to_string(Model m) noexcept;
// Number of free parameters: 3 for GEV, 2 for Gumbel.
[[nodiscard]] int dimension(Model m) noexcept;

// Parameter vector layout is (mu, sigma, xi) for GEV and (mu, sigma) for Gumbel.
[[nodiscard]] std::vector<double> to_vector(const GevParams& p, Model m);
[[nodiscard]] GevParams from_vector(std::span<const double> theta, Model m);

// Base value returned for parameter points outside the admissible region.
inline constexpr double kInvalidPenalty = 1e10;

struct NegLogLik {
  double value;
  bool valid;
};

// Negative GEV log-likelihood. Invalid points (sigma <= 0, or some observation
// with 1 + xi*(x-mu)/sigma <= 0) get kInvalidPenalty plus the total violation.
// Throws InputError on an empty sample.
[[nodiscard]] NegLogLik nllh_gev(std::span<const double> x, const GevParams& p);
[[nodiscard]] NegLogLik nllh_gumbel(std::span<const double> x, double mu, double sigma);
[[nodiscard]] NegLogLik nllh(std::span<const double> x, const GevParams& p, Model m);

struct ObservedInfo {
  Eigen::MatrixXd matrix;
  double condition_estimate;  // ratio of extreme eigenvalue magnitudes
};

// Condition estimates above this are reported as singular.
inline constexpr double kMaxCondition = 1e12;

// Central finite-difference Hessian of the negative log-likelihood at p, with
// per-coordinate steps step_scale * max(1e-5, 1e-5*|theta_i|).
// Throws DomainError unless every observation is strictly inside the support.
[[nodiscard]] ObservedInfo observed_information(std::span<const double> x, const GevParams& p,
                                                Model m, double step_scale = 1.0);

// Inverse of the information matrix. Throws SingularInformationError when the
// matrix is not positive definite or its condition estimate exceeds kMaxCondition.
[[nodiscard]] Eigen::MatrixXd covariance(const ObservedInfo& info);

}  // namespace gevstat
