#pragma once

#include "gevstat/distributions.hpp"

namespace gevstat {

// P(X_{r:n} <= x) given F = F(x): the binomial upper tail
// sum_{k=r}^{n} C(n,k) F^k (1-F)^(n-k), accumulated in log space largest term first.
// Throws DomainError unless 1 <= r <= n and 0 <= F <= 1.
[[nodiscard]] double order_cdf(double F, int r, int n);

// Density of the r-th smallest of n draws from params at x.
[[nodiscard]] double order_pdf(const GevParams& params, double x, int r, int n);

}  // namespace gevstat
