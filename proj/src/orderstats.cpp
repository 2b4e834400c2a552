#include "gevstat/orderstats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "gevstat/errors.hpp"

namespace gevstat {

namespace {

void check_rank(int r, int n) {
  if (n < 1 || r < 1 || r > n) throw DomainError("order statistic: need 1 <= r <= n");
}

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double order_cdf(double F, int r, int n) {
  check_rank(r, n);
  if (!(F >= 0.0 && F <= 1.0)) throw DomainError("order_cdf: F must lie in [0,1]");
  if (F == 0.0) return 0.0;
  if (F == 1.0) return 1.0;
  if (r == n) return std::exp(n * std::log(F));
  if (r == 1) return -std::expm1(n * std::log1p(-F));
  const double log_f = std::log(F);
  const double log_g = std::log1p(-F);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n - r + 1));
  for (int k = r; k <= n; ++k) terms.push_back(log_choose(n, k) + k * log_f + (n - k) * log_g);
  std::sort(terms.begin(), terms.end(), std::greater<>());
  const double top = terms.front();
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - top);
  return std::min(1.0, std::exp(top) * sum);
}

double order_pdf(const GevParams& params, double x, int r, int n) {
  check_rank(r, n);
  const double lf = log_pdf(params, x);
  if (!std::isfinite(lf)) return 0.0;
  const double F = cdf(params, x);
  if (F <= 0.0 || F >= 1.0) {
    // the density is only non-zero at an end-point when the power is zero
    if ((F <= 0.0 && r > 1) || (F >= 1.0 && r < n)) return 0.0;
  }
  double log_value = std::log(static_cast<double>(r)) + log_choose(n, r) + lf;
  if (r > 1) log_value += (r - 1) * std::log(F);
  if (n > r) log_value += (n - r) * std::log1p(-F);
  return std::exp(log_value);
}

}  // namespace gevstat
