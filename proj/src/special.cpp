#include "gevstat/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gevstat/errors.hpp"

namespace gevstat {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("normal_quantile: probability must lie in (0,1)");
  // Acklam's rational approximation, then two Newton steps on erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double lo = 0.02425;
  double x;
  if (q < lo) {
    const double t = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  } else if (q <= 1.0 - lo) {
    const double u = q - 0.5;
    const double r = u * u;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double t = std::sqrt(-2.0 * std::log1p(-q));
    x = -(((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    // work with the smaller tail for accuracy
    const double err = q < 0.5 ? normal_cdf(x) - q : (1.0 - q) - normal_cdf(-x);
    const double dens = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    x -= err / dens;
  }
  return x;
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw DomainError("regularized_gamma_p: need a > 0 and x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  constexpr double eps = 1e-16;
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * eps) break;
    }
    return std::min(1.0, sum * std::exp(log_prefix));
  }
  constexpr double tiny = 1e-300;
  double bb = x + 1.0 - a;
  double cc = 1.0 / tiny;
  double dd = 1.0 / bb;
  double h = dd;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    bb += 2.0;
    dd = an * dd + bb;
    if (std::abs(dd) < tiny) dd = tiny;
    cc = bb + an / cc;
    if (std::abs(cc) < tiny) cc = tiny;
    dd = 1.0 / dd;
    const double delta = dd * cc;
    h *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return std::max(0.0, 1.0 - std::exp(log_prefix) * h);
}

double chi2_cdf(double x, double df) {
  if (!(df > 0.0)) throw DomainError("chi2_cdf: degrees of freedom must be positive");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chi2_quantile(double q, double df) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("chi2_quantile: probability must lie in (0,1)");
  if (!(df > 0.0)) throw DomainError("chi2_quantile: degrees of freedom must be positive");
  double lo = 0.0;
  double hi = std::max(1.0, df);
  while (chi2_cdf(hi, df) < q) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi2_cdf(mid, df) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace gevstat
