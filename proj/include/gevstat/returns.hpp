#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string_view>
#include <vector>

#include "gevstat/distributions.hpp"
#include "gevstat/inference.hpp"

namespace gevstat {

// Throughout, p is the exceedance probability per block: the level x_p is
// exceeded by a block maximum with probability p and the return period is 1/p.

// y_p = -log(1 - p).
[[nodiscard]] double reduced_variate(double p);

// x_p = quantile(params, 1 - p).
[[nodiscard]] double return_level(const GevParams& params, double p);

// Gradient of x_p: (dmu, dsigma, dxi) for GEV, (dmu, dsigma) when |xi| is below
// the Gumbel switch.
[[nodiscard]] std::vector<double> return_level_gradient(const GevParams& params, double p);

// Gradient with the dimension of the model. For a GEV model whose shape is
// below the Gumbel switch, the xi-component is its limit sigma * log(y_p)^2 / 2.
[[nodiscard]] std::vector<double> return_level_gradient(const GevParams& params, double p,
                                                        Model model);

enum class LevelBasis { RawFit, BiasCorrected };

[[nodiscard]] std::string_view to_string(LevelBasis b) noexcept;

struct ReturnLevelEstimate {
  double p = 0.0;
  double period = 0.0;
  double level = 0.0;
  double variance = 0.0;
  Interval ci{};
  LevelBasis basis = LevelBasis::RawFit;
  GevParams params;  // parameters the level was evaluated at
};

// Delta-method interval level +/- z * sqrt(grad' cov grad).
[[nodiscard]] ReturnLevelEstimate return_level_ci(const GevParams& params,
                                                  const Eigen::MatrixXd& cov, double p, double tau,
                                                  Sidedness sided = Sidedness::TwoSided,
                                                  LevelBasis basis = LevelBasis::RawFit);

// From a fit. When `corrected` is given, the level and gradient are evaluated at
// those (bias-corrected) parameters while the fit's covariance is kept.
// Throws DomainError if the fit has no covariance.
[[nodiscard]] ReturnLevelEstimate return_level_ci(const FitResult& fit, double p, double tau,
                                                  Sidedness sided = Sidedness::TwoSided,
                                                  const std::optional<GevParams>& corrected = {});

}  // namespace gevstat
