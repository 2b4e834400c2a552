#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gevstat/likelihood.hpp"

namespace gevstat {

// A vector-valued statistic of a sample. It may throw gevstat::Error (or return
// non-finite values) to signal a failed evaluation.
using Statistic = std::function<std::vector<double>(std::span<const double>)>;

enum class ResamplingMethod { Bootstrap, Jackknife };

[[nodiscard]] std::string_view to_string(ResamplingMethod m) noexcept;

struct ResamplingReport {
  ResamplingMethod method = ResamplingMethod::Bootstrap;
  std::size_t replicates = 0;  // B, or n for the jackknife
  std::uint64_t seed = 0;      // bootstrap only
  std::size_t failed = 0;      // bootstrap replicates skipped and redrawn
  std::vector<std::string> labels;
  std::vector<double> estimate;  // statistic on the full sample
  std::vector<double> mean;      // mean of the replicate statistics
  std::vector<double> bias;
  std::vector<double> se;
  std::vector<double> ratio;  // |bias| / se
  std::vector<double> rmse;
  std::vector<double> corrected;  // estimate - bias
};

struct BootstrapOptions {
  std::size_t replicates = 999;
  std::uint64_t seed = 0;
  unsigned workers = 1;  // 0 selects the hardware concurrency
  // Share of B that may fail (and be redrawn) before the run is aborted.
  double max_failed_fraction = 0.10;
};

// Nonparametric bootstrap. Replicate b draws its resample from the stream
// derive_seed(derive_seed(seed, b), attempt), so the report does not depend on
// the number of workers. Throws ResamplingError when B < 2, when the statistic
// fails on the full sample, or when failures exceed the budget.
[[nodiscard]] ResamplingReport bootstrap(std::span<const double> x, const Statistic& statistic,
                                         const BootstrapOptions& options,
                                         std::vector<std::string> labels = {});

// Leave-one-out jackknife over all n observations. Any failed evaluation aborts
// with ResamplingError; n must be at least 3.
[[nodiscard]] ResamplingReport jackknife(std::span<const double> x, const Statistic& statistic,
                                         std::vector<std::string> labels = {});

// se * sqrt(1 + (bias/se)^2); throws DomainError unless se > 0.
[[nodiscard]] double rmse(double bias, double se);
// se * (1 + 0.5 * (bias/se)^2).
[[nodiscard]] double rmse_approx(double bias, double se);

enum class BiasVerdict { Ignore, Correct, Suspect };

[[nodiscard]] std::string_view to_string(BiasVerdict v) noexcept;

// Below this ratio a bias is ignored.
inline constexpr double kIgnoreRatio = 0.25;
// At or above this ratio the estimator itself is suspect. Heuristic threshold.
inline constexpr double kSuspectRatio = 1.0;

[[nodiscard]] BiasVerdict screen(double ratio) noexcept;
[[nodiscard]] std::vector<BiasVerdict> screen(const ResamplingReport& report);

// Statistic that refits the model and returns its parameter vector.
[[nodiscard]] Statistic fit_statistic(Model model);
[[nodiscard]] std::vector<std::string> parameter_labels(Model model);

}  // namespace gevstat
