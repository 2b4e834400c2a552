#include <cmath>
#include <vector>

#include "doctest.h"
#include "gevstat/distributions.hpp"
#include "gevstat/errors.hpp"
#include "gevstat/inference.hpp"
#include "gevstat/returns.hpp"

using namespace gevstat;

TEST_CASE("deviance vanishes at the estimate") {
  const auto x = sample({20, 5, 0.1}, 200, 4).values;
  const auto f = fit_gev(x);
  for (int i = 0; i < 3; ++i) {
    const auto c = profile(x, f, ProfileTarget::parameter(i));
    CHECK(c.grid[c.estimate_index] == c.estimate);
    CHECK(std::abs(c.deviance[c.estimate_index]) <= 1e-6);
    CHECK(std::abs(c.max_loglik + f.nllh) <= 1e-4);
    CHECK(c.ci.lower < c.estimate);
    CHECK(c.ci.upper > c.estimate);
    CHECK(c.threshold == doctest::Approx(3.841458820694124));
    for (double d : c.deviance) CHECK(d >= -1e-6);
  }
}

TEST_CASE("profile of the shape on skewed small samples") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto x = sample({0, 1, 0.3}, 50, 70 + s).values;
    const auto f = fit_gev(x);
    const auto c = profile(x, f, ProfileTarget::parameter(2));
    CHECK(c.ci.lower < f.params.xi);
    CHECK(c.ci.upper > f.params.xi);
    CHECK(c.ci.upper > c.ci.lower);
  }
}

TEST_CASE("return level reparameterization identity") {
  const auto x = sample({79.25, 22.12, -0.045}, 129, 12).values;
  for (const GevParams p : {GevParams{79.25, 22.12, -0.045}, GevParams{80.0, 21.0, 0.0},
                            GevParams{75.0, 25.0, 0.08}}) {
    for (double prob : {0.25, 0.1, 0.01}) {
      const double level = return_level(p, prob);
      const double mu = location_from_return_level(level, p.sigma, p.xi, prob);
      CHECK(std::abs(mu - p.mu) <= 1e-9 * std::abs(p.mu));
      CHECK(std::abs(nllh_gev(x, {mu, p.sigma, p.xi}).value - nllh_gev(x, p).value) <= 1e-9);
    }
  }
}

TEST_CASE("return level profile") {
  const auto x = sample({79.25, 22.12, -0.045}, 129, 12).values;
  for (Model m : {Model::Gev, Model::Gumbel}) {
    const auto f = fit(x, m);
    const auto c = profile(x, f, ProfileTarget::return_level(0.01));
    CHECK(c.estimate == doctest::Approx(return_level(f.params, 0.01)).epsilon(1e-12));
    CHECK(std::abs(c.deviance[c.estimate_index]) <= 1e-6);
    CHECK(c.ci.lower < c.estimate);
    CHECK(c.ci.upper > c.estimate);
  }
}

TEST_CASE("explicit grid that misses the crossing") {
  const auto x = sample({0, 1, 0.1}, 100, 6).values;
  const auto f = fit_gev(x);
  ProfileOptions o;
  o.lower = f.params.xi - 1e-3;
  o.upper = f.params.xi + 1e-3;
  o.points = 11;
  try {
    (void)profile(x, f, ProfileTarget::parameter(2), o);
    FAIL("expected BracketError");
  } catch (const BracketError& e) {
    CHECK((e.side() == "lower" || e.side() == "upper"));
  }
  ProfileOptions bad;
  bad.lower = f.params.xi + 0.1;
  bad.upper = f.params.xi + 0.2;
  CHECK_THROWS_AS((void)profile(x, f, ProfileTarget::parameter(2), bad), DomainError);
  CHECK_THROWS_AS((void)profile(x, f, ProfileTarget::parameter(5)), DomainError);
}
