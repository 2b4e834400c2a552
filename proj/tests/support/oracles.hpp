#pragma once

// Independent reference computations used by the tests. Nothing here calls into
// the code paths being checked.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b]; the interval is pre-split into
// `pieces` panels so narrow peaks are not missed.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int pieces = 64) {
  double total = 0.0;
  const double w = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * w;
    const double hi = lo + w;
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / pieces, 40);
  }
  return total;
}

// Central difference with one Richardson extrapolation step.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

// Partial derivative of a function of a parameter vector.
inline double partial(const std::function<double(const std::vector<double>&)>& f,
                      std::vector<double> at, std::size_t i, double h) {
  return derivative(
      [&](double v) {
        auto t = at;
        t[i] = v;
        return f(t);
      },
      at[i], h);
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double e : v) s += e;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation with divisor n-1.
inline double sd(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double e : v) ss += (e - m) * (e - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// Gumbel(mu, sigma) cdf written out directly.
inline double gumbel_cdf(double mu, double sigma, double x) {
  return std::exp(-std::exp(-(x - mu) / sigma));
}

// Binomial upper tail by direct summation with exact integer binomials.
inline double binomial_upper_tail(double F, int r, int n) {
  double total = 0.0;
  for (int k = r; k <= n; ++k) {
    double c = 1.0;
    for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    total += c * std::pow(F, k) * std::pow(1.0 - F, n - k);
  }
  return total;
}

}  // namespace oracle
