#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gevstat/diagnostics.hpp"
#include "gevstat/distributions.hpp"
#include "gevstat/inference.hpp"
#include "gevstat/resampling.hpp"
#include "gevstat/returns.hpp"

namespace gevstat {

enum class ModelChoice { Auto, Gev, Gumbel };
enum class BiasCorrection { Auto, On, Off };

struct OrderQuery {
  double x;
  int r;
  int n;
};

struct WorkflowConfig {
  ModelChoice model = ModelChoice::Auto;
  std::size_t boot_replicates = 999;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool resample = true;
  std::vector<double> periods{4.0, 10.0, 40.0, 100.0};
  double tau = 0.05;
  bool one_sided = false;
  BiasCorrection bias_correct = BiasCorrection::Auto;
  std::vector<OrderQuery> order_queries;
  std::vector<double> holdout;
  std::optional<int> bins;
  bool profile_shape = true;
};

struct OrderResult {
  OrderQuery query;
  double cdf_at_x;     // F(x) under the parameters used for return levels
  double probability;  // P(X_{r:n} <= x)
};

struct HoldoutCheck {
  std::vector<double> values;
  double period;  // number of held-out blocks
  double level;
  std::vector<bool> below;
};

struct WorkflowReport {
  std::size_t n = 0;
  FitResult gev;
  FitResult gumbel;
  LrtResult lrt{};
  double aic_gev = 0.0;
  double aic_gumbel = 0.0;
  Model selected = Model::Gumbel;
  std::string selection_reason;
  std::optional<ResamplingReport> bootstrap;
  std::optional<ResamplingReport> jackknife;
  std::vector<BiasVerdict> verdicts;  // from the jackknife report
  std::optional<GevParams> corrected;
  std::vector<ReturnLevelEstimate> return_levels;
  std::vector<PlotSeries> diagnostics;
  std::vector<OrderResult> order_stats;
  std::optional<HoldoutCheck> holdout;
  std::optional<ProfileCurve> shape_profile;
  std::string shape_profile_note;

  [[nodiscard]] const FitResult& selected_fit() const {
    return selected == Model::Gev ? gev : gumbel;
  }
};

// Gumbel unless the likelihood-ratio test rejects it at `level`.
[[nodiscard]] Model select_model(const LrtResult& test) noexcept;

// Fits both models, guaranteeing the GEV fit is at least as good as the nested
// Gumbel fit (refitting from the Gumbel optimum if needed).
struct ModelPair {
  FitResult gev;
  FitResult gumbel;
};
[[nodiscard]] ModelPair fit_both(std::span<const double> x);

// The full case-study pipeline. Errors propagate with their type and a
// "[stage] " prefix in the message.
[[nodiscard]] WorkflowReport run_workflow(const MaximaSample& sample, const WorkflowConfig& config);

// Round to 10 significant digits (the report's number format).
[[nodiscard]] double round_sig10(double v);

[[nodiscard]] nlohmann::json to_json(const FitResult& fit);
[[nodiscard]] nlohmann::json to_json(const ResamplingReport& report);
[[nodiscard]] nlohmann::json to_json(const ReturnLevelEstimate& est);
[[nodiscard]] nlohmann::json to_json(const ProfileCurve& curve);
[[nodiscard]] nlohmann::json to_json(const WorkflowReport& report);

// Human-readable tables: model comparison, bias/SE, return levels, order statistics.
[[nodiscard]] std::string format_tables(const WorkflowReport& report);

}  // namespace gevstat
