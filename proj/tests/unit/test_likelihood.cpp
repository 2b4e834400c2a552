#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "gevstat/distributions.hpp"
#include "gevstat/errors.hpp"
#include "gevstat/inference.hpp"
#include "gevstat/likelihood.hpp"
#include "oracles.hpp"

using namespace gevstat;

TEST_CASE("nllh examples") {
  const std::vector<double> one{0.0};
  CHECK(nllh_gev(one, {0, 1, 0}).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(nllh_gumbel(one, 0, 1).value == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<double> two{0.0, 0.0};
  CHECK(nllh_gumbel(two, 0, 1).value == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)nllh_gev(std::vector<double>{}, {0, 1, 0}), InputError);
}

TEST_CASE("support violation is penalized") {
  const std::vector<double> x{-3.0, 0.5, 1.0};
  // xi = 0.5, mu = 0, sigma = 1: lower end-point -2
  const auto r = nllh_gev(x, {0, 1, 0.5});
  CHECK_FALSE(r.valid);
  CHECK(r.value >= kInvalidPenalty);
  CHECK(std::isfinite(r.value));
  const auto s = nllh_gev(x, {0, -1, 0.1});
  CHECK_FALSE(s.valid);
  CHECK(std::isfinite(s.value));
  // exactly on the boundary counts as invalid
  CHECK_FALSE(nllh_gev(std::vector<double>{-2.0}, {0, 1, 0.5}).valid);
  // larger violation, larger penalty
  CHECK(nllh_gev(std::vector<double>{-5.0}, {0, 1, 0.5}).value >
        nllh_gev(std::vector<double>{-3.0}, {0, 1, 0.5}).value);
}

TEST_CASE("generating parameters beat far-perturbed ones") {
  int wins = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const GevParams truth{79.25, 22.12, -0.045};
    const auto x = sample(truth, 129, 100 + s).values;
    const GevParams far{90.0, 30.0, 0.2};
    if (nllh_gev(x, truth).value < nllh_gev(x, far).value) ++wins;
  }
  CHECK(wins == 20);
}

TEST_CASE("property: additivity, Gumbel switch, affine invariance") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> xi(-0.4, 0.4), ls(-1, 1), a(0.1, 10), b(-50, 50);
  for (int t = 0; t < 50; ++t) {
    const GevParams p{0.0, std::exp(ls(gen)), xi(gen)};
    const auto x = sample(p, 40, 900 + t).values;
    const auto y = sample(p, 25, 1900 + t).values;
    std::vector<double> xy = x;
    xy.insert(xy.end(), y.begin(), y.end());
    CHECK(nllh_gev(xy, p).value ==
          doctest::Approx(nllh_gev(x, p).value + nllh_gev(y, p).value).epsilon(1e-12));

    CHECK(std::abs(nllh_gev(x, {p.mu, p.sigma, 1e-10}).value -
                   nllh_gumbel(x, p.mu, p.sigma).value) <= 1e-6);
    CHECK(std::abs(nllh_gev(x, {p.mu, p.sigma, -1e-10}).value -
                   nllh_gumbel(x, p.mu, p.sigma).value) <= 1e-6);

    const double av = a(gen), bv = b(gen);
    std::vector<double> z;
    for (double v : x) z.push_back(av * v + bv);
    const double lhs = nllh_gev(z, {av * p.mu + bv, av * p.sigma, p.xi}).value;
    const double rhs = nllh_gev(x, p).value + static_cast<double>(x.size()) * std::log(av);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("observed information against finite differences of the gradient") {
  const GevParams truth{10.0, 2.0, 0.1};
  const auto x = sample(truth, 300, 77).values;
  const auto f = fit_gev(x);
  const auto info = observed_information(x, f.params, Model::Gev);
  auto nll = [&](const std::vector<double>& th) {
    return nllh_gev(x, {th[0], th[1], th[2]}).value;
  };
  const auto th = f.estimate();
  for (std::size_t j = 0; j < 3; ++j) {
    auto grad_i = [&](std::size_t i) {
      return [&, i](const std::vector<double>& t) { return oracle::partial(nll, t, i, 1e-4); };
    };
    for (std::size_t i = 0; i < 3; ++i) {
      const double h2 = oracle::partial(grad_i(i), th, j, 1e-3);
      const double ref = std::max(std::abs(h2), info.matrix.cwiseAbs().maxCoeff() * 1e-3);
      CHECK(std::abs(info.matrix(i, j) - h2) <= 1e-4 * ref);
    }
  }
  CHECK((info.matrix - info.matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-8);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(info.matrix);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("observed information is stable under step doubling") {
  const auto x = sample({0, 1, 0.05}, 1000, 8).values;
  const auto f = fit_gev(x);
  const auto a = observed_information(x, f.params, Model::Gev, 1.0).matrix;
  const auto b = observed_information(x, f.params, Model::Gev, 2.0).matrix;
  const double scale = a.cwiseAbs().maxCoeff();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(a(i, j) - b(i, j)) <= 1e-3 * std::max(std::abs(a(i, j)), 1e-3 * scale));
}

TEST_CASE("Gumbel standard errors match the large-sample values") {
  const std::size_t n = 10000;
  const auto x = sample({0, 1, 0}, n, 2024).values;
  const auto f = fit_gumbel(x);
  REQUIRE(f.se);
  const double s = f.params.sigma;
  const double g = 0.5772156649015329;
  const double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  const double var_mu = s * s / n * (pi2_6 + (1 - g) * (1 - g)) / pi2_6;
  const double var_sigma = s * s / n / pi2_6;
  CHECK(std::abs((*f.se)[0] / std::sqrt(var_mu) - 1.0) <= 0.05);
  CHECK(std::abs((*f.se)[1] / std::sqrt(var_sigma) - 1.0) <= 0.05);
}

TEST_CASE("observed information errors") {
  const std::vector<double> x{-3.0, 0.5, 1.0};
  CHECK_THROWS_AS((void)observed_information(x, {0, 1, 0.5}, Model::Gev), DomainError);
  ObservedInfo bad{Eigen::MatrixXd::Zero(2, 2), 0.0};
  bad.matrix << 1.0, 0.0, 0.0, -1.0;
  CHECK_THROWS_AS((void)covariance(bad), SingularInformationError);
  ObservedInfo ill{Eigen::MatrixXd::Identity(2, 2), 0.0};
  ill.matrix(1, 1) = 1e-14;
  ill.condition_estimate = 1e14;
  try {
    (void)covariance(ill);
    FAIL("expected SingularInformationError");
  } catch (const SingularInformationError& e) {
    CHECK(e.condition() > kMaxCondition);
  }
}

TEST_CASE("parameter vectors") {
  const GevParams p{1, 2, 3};
  CHECK(to_vector(p, Model::Gev) == std::vector<double>{1, 2, 3});
  CHECK(to_vector(p, Model::Gumbel) == std::vector<double>{1, 2});
  const std::vector<double> v{4, 5};
  CHECK(from_vector(v, Model::Gumbel) == GevParams{4, 5, 0});
  CHECK(dimension(Model::Gev) == 3);
  CHECK(to_string(Model::Gumbel) == "gumbel");
}
