#include <cmath>
#include <string>

#include "doctest.h"
#include "gevstat/distributions.hpp"
#include "gevstat/errors.hpp"
#include "gevstat/workflow.hpp"

using namespace gevstat;

TEST_CASE("full report on synthetic Gumbel data") {
  const auto s = sample({78.7, 21.8, 0}, 129, 17);
  WorkflowConfig c;
  c.boot_replicates = 60;
  c.seed = 3;
  c.order_queries = {{100.0, 5, 10}};
  c.holdout = {106.2, 104, 60.8, 73.8};
  const auto r = run_workflow(s, c);
  CHECK(r.n == 129);
  CHECK(r.gev.nllh <= r.gumbel.nllh + 1e-6);
  CHECK(r.aic_gev - r.aic_gumbel == doctest::Approx(2 - r.lrt.statistic).epsilon(1e-9));
  CHECK(r.selected == select_model(r.lrt));
  REQUIRE(r.bootstrap);
  REQUIRE(r.jackknife);
  CHECK(r.jackknife->replicates == 129);
  CHECK(r.return_levels.size() == 4);
  CHECK(r.diagnostics.size() == 4);
  REQUIRE(r.order_stats.size() == 1);
  CHECK(r.order_stats[0].probability > 0);
  REQUIRE(r.holdout);
  CHECK(r.holdout->below.size() == 4);

  const auto j = to_json(r);
  CHECK(j.contains("return_levels"));
  CHECK(j.contains("fits"));
  const auto again = to_json(run_workflow(s, c)).dump();
  CHECK(again == j.dump());
  const auto tables = format_tables(r);
  CHECK(tables.find("Table 1") != std::string::npos);
}

TEST_CASE("empty periods omit the return-level section") {
  const auto s = sample({0, 1, 0}, 60, 2);
  WorkflowConfig c;
  c.periods.clear();
  c.resample = false;
  const auto r = run_workflow(s, c);
  CHECK(r.return_levels.empty());
  CHECK_FALSE(to_json(r).contains("return_levels"));
}

TEST_CASE("errors carry the stage") {
  MaximaSample tiny({1, 2, 3});
  try {
    (void)run_workflow(tiny, {});
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).rfind("[", 0) == 0);
  }
}

TEST_CASE("round to ten significant digits") {
  CHECK(round_sig10(1.23456789012345) == 1.234567890);
  CHECK(round_sig10(0.0) == 0.0);
  CHECK(round_sig10(-98765.432109876) == -98765.43211);
}

TEST_CASE("model selection on Gumbel data") {
  int gumbel = 0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    const auto x = sample({78.7, 21.8, 0}, 129, 300 + static_cast<std::uint64_t>(s)).values;
    const auto pair = fit_both(x);
    if (select_model(lrt(pair.gumbel, pair.gev)) == Model::Gumbel) ++gumbel;
  }
  const double rate = static_cast<double>(gumbel) / seeds;
  MESSAGE("Gumbel selected in " << rate);
  // 3 binomial SEs around 0.95
  CHECK(std::abs(rate - 0.95) <= 3 * std::sqrt(0.95 * 0.05 / seeds));
}
