#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "gevstat/distributions.hpp"
#include "gevstat/errors.hpp"
#include "gevstat/inference.hpp"
#include "gevstat/returns.hpp"
#include "oracles.hpp"

using namespace gevstat;

TEST_CASE("return level examples") {
  const GevParams g{78.70124, 21.11317, 0.0};
  CHECK(std::abs(return_level(g, 0.25) - 105.0061) <= 5e-4);
  CHECK(std::abs(return_level(g, 0.01) - 175.8250) <= 5e-4);
  const double p = 1 - std::exp(-1.0);
  CHECK(reduced_variate(p) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(return_level(g, p) - g.mu) <= 1e-12 * g.mu);
  CHECK_THROWS_AS((void)return_level(g, 0.0), DomainError);
  CHECK_THROWS_AS((void)return_level(g, 1.0), DomainError);
}

TEST_CASE("return level properties") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> mu(-10, 10), ls(-1, 1), xi(-0.6, 0.6);
  for (int t = 0; t < 100; ++t) {
    const GevParams p{mu(gen), std::exp(ls(gen)), xi(gen)};
    double prev = -INFINITY;
    for (double q : {0.9, 0.5, 0.2, 0.1, 0.01, 1e-3, 1e-6}) {
      const double level = return_level(p, q);
      CHECK(level == quantile(p, 1 - q));
      CHECK(level > prev);
      prev = level;
      if (p.xi < 0) CHECK(level <= p.mu - p.sigma / p.xi);
    }
  }
}

TEST_CASE("gradient examples") {
  const GevParams g{78.70124, 21.11317, 0.0};
  const auto a = return_level_gradient(g, 1 - std::exp(-1.0));
  REQUIRE(a.size() == 2);
  CHECK(a[0] == 1.0);
  CHECK(std::abs(a[1]) <= 1e-15);
  const auto b = return_level_gradient(g, 0.25);
  CHECK(b[1] == doctest::Approx(1.2458993237).epsilon(1e-9));

  const GevParams p{79.25, 22.12, -0.045};
  const auto d = return_level_gradient(p, 0.1);
  REQUIRE(d.size() == 3);
  auto f = [&](const std::vector<double>& t) { return return_level({t[0], t[1], t[2]}, 0.1); };
  const std::vector<double> th{p.mu, p.sigma, p.xi};
  for (std::size_t i = 0; i < 3; ++i) {
    const double fd = oracle::partial(f, th, i, 1e-4);
    CHECK(std::abs(d[i] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("property: gradient matches finite differences across the shape switch") {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> mu(-50, 100), ls(-1, 3), xi(-0.5, 0.5), lp(-6, -0.1);
  const double shapes[] = {0.0, 1e-12, -1e-12, 1e-3, -1e-3};
  for (int t = 0; t < 100; ++t) {
    const double x = t < 50 ? shapes[t % 5] : xi(gen);
    const GevParams p{mu(gen), std::exp(ls(gen)), x};
    const double prob = std::exp(lp(gen));
    const auto g = return_level_gradient(p, prob, Model::Gev);
    REQUIRE(g.size() == 3);
    const std::vector<double> th{p.mu, p.sigma, p.xi};
    auto f = [&](const std::vector<double>& v) { return return_level({v[0], v[1], v[2]}, prob); };
    for (std::size_t i = 0; i < 3; ++i) {
      // shape steps stay well clear of the Gumbel switch so the FD sees the smooth GEV form
      const double h = i == 2 ? 1e-4 : 1e-4 * std::max(1.0, std::abs(th[i]));
      const double fd = oracle::partial(f, th, i, h);
      CHECK(std::abs(g[i] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("confidence bounds") {
  const GevParams g{78.70124, 21.11317, 0.0};
  const auto z = return_level_ci(g, Eigen::MatrixXd::Zero(2, 2), 0.1, 0.05);
  CHECK(z.ci.lower == z.level);
  CHECK(z.ci.upper == z.level);

  Eigen::MatrixXd v(2, 2);
  v << 2.031079 * 2.031079, 0, 0, 1.471843 * 1.471843;
  for (double p : {0.25, 0.1, 0.025, 0.01}) {
    const auto r = return_level_ci(g, v, p, 0.05);
    const double ly = std::log(reduced_variate(p));
    CHECK(r.variance == doctest::Approx(v(0, 0) + ly * ly * v(1, 1)).epsilon(1e-12));
    CHECK(r.period * r.p == doctest::Approx(1.0));
    CHECK(r.ci.lower <= r.level);
    CHECK(r.ci.upper >= r.level);
    CHECK(r.level - r.ci.lower == doctest::Approx(r.ci.upper - r.level));
    CHECK(r.ci.upper - r.level == doctest::Approx(1.959964 * std::sqrt(r.variance)).epsilon(1e-6));
    const auto o = return_level_ci(g, v, p, 0.05, Sidedness::OneSided);
    CHECK(o.ci.upper - o.level == doctest::Approx(1.644854 * std::sqrt(o.variance)).epsilon(1e-6));
  }
  CHECK_THROWS_AS((void)return_level_ci(GevParams{0, 1, 0.1}, v, 0.1, 0.05), DomainError);

  FitResult nocov;
  nocov.model = Model::Gumbel;
  nocov.params = g;
  CHECK_THROWS_AS((void)return_level_ci(nocov, 0.1, 0.05), DomainError);
}

TEST_CASE("bias-corrected basis keeps the fit covariance") {
  const auto x = sample({78.7, 21.8, 0}, 129, 4).values;
  const auto f = fit_gumbel(x);
  GevParams c = f.params;
  c.sigma -= 0.7;
  const auto raw = return_level_ci(f, 0.01, 0.05);
  const auto cor = return_level_ci(f, 0.01, 0.05, Sidedness::TwoSided, c);
  CHECK(raw.basis == LevelBasis::RawFit);
  CHECK(cor.basis == LevelBasis::BiasCorrected);
  CHECK(cor.level == doctest::Approx(return_level(c, 0.01)));
  CHECK(cor.level < raw.level);
  CHECK(cor.variance == doctest::Approx(raw.variance));
  CHECK(to_string(LevelBasis::BiasCorrected) == "bias_corrected");
}
