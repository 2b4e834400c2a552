#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "gevstat/errors.hpp"
#include "gevstat/optimizer.hpp"

using namespace gevstat;

namespace {
double bowl(std::span<const double> x) {
  return (x[0] - 3) * (x[0] - 3) + (x[1] + 1) * (x[1] + 1);
}
double rosenbrock(std::span<const double> x) {
  const double a = 1 - x[0];
  const double b = x[1] - x[0] * x[0];
  return a * a + 100 * b * b;
}
}  // namespace

TEST_CASE("quadratic bowl") {
  const std::vector<double> x0{0, 0};
  const auto r = minimize(bowl, x0);
  CHECK(r.converged);
  CHECK(std::abs(r.x_min[0] - 3) <= 1e-6);
  CHECK(std::abs(r.x_min[1] + 1) <= 1e-6);
  CHECK(r.f_min == bowl(r.x_min));
}

TEST_CASE("Rosenbrock") {
  const std::vector<double> x0{-1.2, 1};
  SimplexConfig cfg;
  cfg.max_iter = 10000;
  const auto r = minimize(rosenbrock, x0, cfg);
  CHECK(r.f_min < 1e-8);
  CHECK(r.iterations <= 10000);
  CHECK(std::abs(r.x_min[0] - 1) < 1e-3);
}

TEST_CASE("nonsmooth 1-D") {
  const std::vector<double> x0{5};
  const auto r = minimize([](std::span<const double> x) { return std::abs(x[0]); }, x0);
  CHECK(std::abs(r.x_min[0]) <= 1e-6);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS((void)minimize(bowl, std::vector<double>{}), DomainError);
  CHECK_THROWS_AS((void)minimize([](std::span<const double>) { return NAN; },
                                 std::vector<double>{1.0}),
                  DomainError);
  SimplexConfig bad;
  bad.expansion = 0.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS((void)minimize_from_simplex(bowl, {{0, 0}, {1, 0}}), DomainError);
}

TEST_CASE("restart when the first pass runs out of iterations") {
  SimplexConfig cfg;
  cfg.max_iter = 20;
  const auto r = minimize(rosenbrock, std::vector<double>{-1.2, 1}, cfg);
  CHECK(r.restarts == 1);
}

TEST_CASE("property: monotone best value") {
  SimplexConfig cfg;
  cfg.record_history = true;
  const auto r = minimize(rosenbrock, std::vector<double>{-1.2, 1}, cfg);
  REQUIRE(r.history.size() > 10);
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1]);
}

TEST_CASE("property: vertex permutation and translation") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-3, 3);
  auto quartic = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - 0.5 * static_cast<double>(i);
      s += d * d + 0.1 * d * d * d * d;
    }
    return s;
  };
  for (int t = 0; t < 20; ++t) {
    std::vector<std::vector<double>> v(4, std::vector<double>(3));
    for (auto& row : v)
      for (auto& e : row) e = u(gen);
    const auto a = minimize_from_simplex(quartic, v);
    auto w = v;
    std::reverse(w.begin(), w.end());
    std::swap(w[0], w[2]);
    const auto b = minimize_from_simplex(quartic, w);
    CHECK(std::abs(a.f_min - b.f_min) <= 1e-10);

    const std::vector<double> c{u(gen), u(gen), u(gen)};
    const std::vector<double> x0{u(gen), u(gen), u(gen)};
    const auto base = minimize(quartic, x0);
    auto shifted = [&](std::span<const double> x) {
      std::vector<double> y(x.begin(), x.end());
      for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c[i];
      return quartic(y);
    };
    std::vector<double> x0c = x0;
    for (std::size_t i = 0; i < 3; ++i) x0c[i] += c[i];
    const auto moved = minimize(shifted, x0c);
    // x_tol tolerance plus the convergence slack of each run
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(std::abs(moved.x_min[i] - (base.x_min[i] + c[i])) <= 1e-4);
  }
}
