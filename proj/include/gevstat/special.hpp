#pragma once

namespace gevstat {

// Standard normal distribution function.
[[nodiscard]] double normal_cdf(double z);
// Standard normal quantile for q in (0,1); throws DomainError otherwise.
[[nodiscard]] double normal_quantile(double q);

// Regularized lower incomplete gamma P(a, x). Uses the power series when
// x < a + 1 and the Lentz continued fraction for Q(a, x) otherwise.
[[nodiscard]] double regularized_gamma_p(double a, double x);

[[nodiscard]] double chi2_cdf(double x, double df);
// Quantile of the chi-square law by bisection on chi2_cdf.
[[nodiscard]] double chi2_quantile(double q, double df);

}  // namespace gevstat
