#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gevstat/distributions.hpp"
#include "gevstat/likelihood.hpp"
#include "gevstat/optimizer.hpp"

namespace gevstat {

// Asymptotic behaviour of the GEV maximum likelihood estimator by shape:
// regular above -0.5, non-standard in (-1, -0.5], unobtainable at or below -1.
enum class Regularity { Regular, NonStandard, Unobtainable };

[[nodiscard]] Regularity regularity(double xi) noexcept;
[[nodiscard]] std::string_view to_string(Regularity r) noexcept;

// Smallest sample accepted by the fitting routines.
inline constexpr std::size_t kMinFitSize = 10;

struct FitResult {
  Model model = Model::Gev;
  GevParams params;
  double nllh = 0.0;
  std::size_t n = 0;
  // Inverse observed information and its diagonal square roots; empty when the
  // information matrix could not be inverted (see se_note).
  std::optional<Eigen::MatrixXd> cov;
  std::optional<std::vector<double>> se;
  std::string se_note;
  double info_condition = 0.0;
  Regularity regularity = Regularity::Regular;
  OptResult opt;

  [[nodiscard]] int dim() const noexcept { return dimension(model); }
  [[nodiscard]] std::vector<double> estimate() const { return to_vector(params, model); }
};

// Method-of-moments start under the Gumbel baseline, with shape 0.1.
[[nodiscard]] GevParams start_values(std::span<const double> x);

// Maximum likelihood fits. Throw InputError for fewer than kMinFitSize points
// or a sample without spread, and ConvergenceError if the simplex search fails.
[[nodiscard]] FitResult fit_gev(std::span<const double> x, const SimplexConfig& config = {});
[[nodiscard]] FitResult fit_gumbel(std::span<const double> x, const SimplexConfig& config = {});
// Fit of either model, optionally from an explicit starting point.
[[nodiscard]] FitResult fit(std::span<const double> x, Model m, const SimplexConfig& config = {},
                            const std::optional<GevParams>& start = std::nullopt);

enum class Sidedness { TwoSided, OneSided };

// Normal critical value: z_{1-tau/2} when two-sided, z_{1-tau} when one-sided.
[[nodiscard]] double critical_z(double tau, Sidedness sided = Sidedness::TwoSided);

struct Interval {
  double lower;
  double upper;
};

[[nodiscard]] Interval normal_ci(double estimate, double se, double tau,
                                 Sidedness sided = Sidedness::TwoSided);
// Throws DomainError if the fit has no standard errors or index is out of range.
[[nodiscard]] Interval normal_ci(const FitResult& fit, int index, double tau,
                                 Sidedness sided = Sidedness::TwoSided);

// What a profile likelihood is computed for: one model parameter (by index in
// the model's parameter vector) or the return level with exceedance probability p.
struct ProfileTarget {
  enum class Kind { Parameter, ReturnLevel };
  Kind kind = Kind::Parameter;
  int index = 0;
  double p = 0.0;

  static ProfileTarget parameter(int i) { return {Kind::Parameter, i, 0.0}; }
  static ProfileTarget return_level(double p) { return {Kind::ReturnLevel, 0, p}; }
};

struct ProfileOptions {
  // Explicit grid range; when absent the grid spans the estimate +/- 4 standard
  // errors and is widened automatically if the deviance threshold is not reached.
  std::optional<double> lower;
  std::optional<double> upper;
  int points = 100;
  double tau = 0.05;
  int max_expansions = 4;
  SimplexConfig simplex;
};

struct ProfileCurve {
  ProfileTarget target;
  std::vector<double> grid;      // includes the estimate itself
  std::vector<double> lp;        // profile log-likelihood
  std::vector<double> deviance;  // 2 * (max log-likelihood - lp)
  double estimate = 0.0;
  std::size_t estimate_index = 0;
  double max_loglik = 0.0;
  double threshold = 0.0;  // chi-square(1) quantile at 1 - tau
  Interval ci{};
};

// Location implied by a return level x_p with exceedance probability p.
[[nodiscard]] double location_from_return_level(double level, double sigma, double xi, double p);

// Profile log-likelihood and its deviance-based confidence interval.
// Throws BracketError naming the side whose deviance never crosses the threshold.
[[nodiscard]] ProfileCurve profile(std::span<const double> x, const FitResult& fit,
                                   ProfileTarget target, const ProfileOptions& options = {});

struct LrtResult {
  double statistic;
  int df;
  double critical;  // chi-square(df) quantile at 1 - level
  double p_value;
  bool reject;
};

[[nodiscard]] LrtResult lrt(double nllh_null, int dim_null, double nllh_alt, int dim_alt,
                            double level = 0.05);
// Gumbel (null) against GEV (alternative). Throws DomainError for any other pairing
// or when the alternative fits worse than the null by more than 1e-6.
[[nodiscard]] LrtResult lrt(const FitResult& null_fit, const FitResult& alt_fit,
                            double level = 0.05);

[[nodiscard]] double aic(double nllh, int free_params) noexcept;
[[nodiscard]] double aic(const FitResult& fit) noexcept;

// grad' * cov * grad. Throws DomainError on dimension mismatch or asymmetric cov.
[[nodiscard]] double delta_method(const Eigen::MatrixXd& cov, std::span<const double> gradient);

}  // namespace gevstat
