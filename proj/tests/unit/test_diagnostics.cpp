#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gevstat/diagnostics.hpp"
#include "gevstat/distributions.hpp"
#include "gevstat/errors.hpp"
#include "gevstat/inference.hpp"
#include "gevstat/returns.hpp"

using namespace gevstat;

namespace {
double max_gap(const PlotSeries& s) {
  double g = 0.0;
  for (const auto& p : s.points) g = std::max(g, std::abs(p.y - p.x));
  return g;
}
}  // namespace

TEST_CASE("probability plot") {
  const GevParams p{1, 2, 0.1};
  const auto one = probability_plot(std::vector<double>{3.0}, p);
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0].x == 0.5);
  CHECK(one.points[0].y == cdf(p, 3.0));

  const auto x = sample(p, 500, 3).values;
  const auto pp = probability_plot(x, p);
  CHECK(max_gap(pp) < 1.36 / std::sqrt(500.0));
  for (const auto& q : pp.points) {
    CHECK(q.x > 0);
    CHECK(q.x < 1);
    CHECK(q.y >= 0);
    CHECK(q.y <= 1);
  }
  for (std::size_t i = 1; i < pp.points.size(); ++i) CHECK(pp.points[i].x > pp.points[i - 1].x);

  const auto shifted = probability_plot(x, {p.mu + 1.5, p.sigma, p.xi});
  CHECK(max_gap(shifted) > 1.36 / std::sqrt(500.0));
  CHECK_THROWS_AS((void)probability_plot(std::vector<double>{}, p), InputError);
}

TEST_CASE("quantile plot") {
  const GevParams p{0, 1, -0.2};
  std::vector<double> exact;
  const int m = 25;
  for (int i = 1; i <= m; ++i) exact.push_back(quantile(p, i / (m + 1.0)));
  std::reverse(exact.begin(), exact.end());
  for (const auto& q : quantile_plot(exact, p).points) CHECK(q.x == q.y);

  const auto two = quantile_plot(std::vector<double>{5.0, -1.0}, p);
  REQUIRE(two.points.size() == 2);
  CHECK(two.points[0].x < two.points[1].x);
  CHECK(two.points[0].y == -1.0);

  // the probability plot's y is the cdf image of the quantile plot's y
  const auto x = sample(p, 500, 9).values;
  const auto qq = quantile_plot(x, p);
  const auto pp = probability_plot(x, p);
  double gap = 0.0;
  for (std::size_t i = 0; i < qq.points.size(); ++i) {
    CHECK(pp.points[i].y == cdf(p, qq.points[i].y));
    gap = std::max(gap, std::abs(cdf(p, qq.points[i].y) - cdf(p, qq.points[i].x)));
  }
  CHECK(gap < 1.36 / std::sqrt(500.0));
}

TEST_CASE("return curve") {
  const auto x = sample({78.7, 21.8, 0}, 129, 2).values;
  const auto f = fit_gumbel(x);
  const std::vector<double> periods{100, 1.5, 2, 5, 10, 20, 50, 200, 1000};
  const auto c = return_curve(f, periods);
  REQUIRE(c.bands);
  for (std::size_t i = 1; i < c.points.size(); ++i) CHECK(c.points[i].x > c.points[i - 1].x);
  // affine in -log y_p
  std::vector<double> t, v;
  for (const auto& p : c.points) {
    t.push_back(-std::log(reduced_variate(1.0 / p.x)));
    v.push_back(p.y);
  }
  for (std::size_t i = 2; i < t.size(); ++i) {
    const double s1 = (v[i] - v[i - 1]) / (t[i] - t[i - 1]);
    const double s0 = (v[i - 1] - v[i - 2]) / (t[i - 1] - t[i - 2]);
    CHECK(std::abs(s1 - s0) <= 1e-9 * std::max(1.0, std::abs(s0)));
  }

  FitResult w;
  w.model = Model::Gev;
  w.params = {10, 2, -0.3};
  w.cov = Eigen::MatrixXd::Identity(3, 3) * 0.01;
  const std::vector<double> far{10, 1e3, 1e6, 1e9};
  for (const auto& p : return_curve(w, far).points) CHECK(p.y <= 10 + 2 / 0.3);

  FitResult t3;
  t3.model = Model::Gumbel;
  t3.params = {78.70124, 21.11317, 0};
  t3.cov = Eigen::MatrixXd::Identity(2, 2);
  const std::vector<double> table{4, 10, 40, 100};
  const double expect[] = {105.0061, 126.2136, 156.3185, 175.8250};
  const auto tc = return_curve(t3, table);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(tc.points[i].y - expect[i]) <= 5e-4);
  CHECK_THROWS_AS((void)return_curve(t3, std::vector<double>{1.0}), DomainError);
}

TEST_CASE("density overlay") {
  const GevParams p{0, 1, 0};
  const auto x = sample(p, 10000, 5).values;
  const auto d = density_overlay(x, p);
  CHECK(d.points.size() == static_cast<std::size_t>(sturges_bins(10000)));
  CHECK(sturges_bins(10000) == 15);
  double area = 0.0, gap = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    area += d.points[i].y * d.bin_width;
    gap += std::abs(d.points[i].y - d.model[i]);
    peak = std::max(peak, d.model[i]);
  }
  CHECK(std::abs(area - 1) <= 1e-12);
  CHECK(gap / static_cast<double>(d.points.size()) < 0.15 * peak);

  const std::vector<double> y{2.0, 3.0, 7.0};
  const auto one = density_overlay(y, p, 1);
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0].y == doctest::Approx(1.0 / 5.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)density_overlay(y, p, 0), DomainError);
  const auto flat = density_overlay(std::vector<double>{4.0, 4.0}, p, 3);
  double a2 = 0.0;
  for (const auto& q : flat.points) a2 += q.y * flat.bin_width;
  CHECK(a2 == doctest::Approx(1.0));
}

TEST_CASE("serialization") {
  const GevParams p{0, 1, 0};
  const auto x = sample(p, 30, 1).values;
  const auto pp = probability_plot(x, p);
  const auto csv = to_csv(pp);
  CHECK(csv.rfind("kind,x,y,lower,upper\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
  const auto d = density_overlay(x, p, 4);
  const auto dc = to_csv(d);
  CHECK(dc.find("density_model,") != std::string::npos);
  for (const auto& s : {pp, d}) {
    const auto svg = to_svg(s);
    CHECK(svg.find("viewBox=\"0 0 640 480\"") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(to_svg(s) == svg);
  }
}
