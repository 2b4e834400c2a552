#include "gevstat/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "gevstat/errors.hpp"
#include "gevstat/returns.hpp"
#include "gevstat/special.hpp"

namespace gevstat {

Regularity regularity(double xi) noexcept {
  if (xi > -0.5) return Regularity::Regular;
  if (xi > -1.0) return Regularity::NonStandard;
  return Regularity::Unobtainable;
}

std::string_view to_string(Regularity r) noexcept {
  switch (r) {
    case Regularity::Regular:
      return "regular";
    case Regularity::NonStandard:
      return "non_standard";
    case Regularity::Unobtainable:
      return "unobtainable";
  }
  return "?";
}

namespace {

constexpr double kEulerGamma = 0.5772157;

void check_fit_sample(std::span<const double> x) {
  if (x.size() < kMinFitSize) {
    throw InputError("fit: need at least " + std::to_string(kMinFitSize) + " observations, got " +
                     std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError("fit: sample contains a non-finite value");
  }
}

// Runs the simplex search and a second pass from its end point; the second pass
// guards against the f-spread rule stopping on a collapsed simplex.
OptResult search(const Objective& f, std::vector<double> x0, const SimplexConfig& config) {
  auto first = minimize(f, x0, config);
  if (!first.converged) return first;
  auto second = minimize(f, first.x_min, config);
  second.iterations += first.iterations;
  second.restarts += first.restarts;
  if (second.f_min <= first.f_min) return second;
  first.iterations = second.iterations;
  return first;
}

void attach_uncertainty(FitResult& out, std::span<const double> x) {
  try {
    const auto info = observed_information(x, out.params, out.model);
    out.info_condition = info.condition_estimate;
    auto cov = covariance(info);
    std::vector<double> se(static_cast<std::size_t>(cov.rows()));
    for (Eigen::Index i = 0; i < cov.rows(); ++i) se[i] = std::sqrt(cov(i, i));
    out.cov = std::move(cov);
    out.se = std::move(se);
  } catch (const SingularInformationError& e) {
    out.info_condition = e.condition();
    out.se_note = e.what();
  } catch (const DomainError& e) {
    out.info_condition = std::numeric_limits<double>::infinity();
    out.se_note = e.what();
  }
}

FitResult run_fit(std::span<const double> x, Model model, const SimplexConfig& config,
                  const std::optional<GevParams>& initial) {
  check_fit_sample(x);
  const auto start = initial ? *initial : start_values(x);
  std::vector<double> x0 = to_vector(start, model);
  auto objective = [&](std::span<const double> t) {
    return nllh(x, from_vector(t, model), model).value;
  };
  if (!nllh(x, from_vector(x0, model), model).valid) {
    if (model == Model::Gev && !initial) x0[2] = 0.0;
    if (!nllh(x, from_vector(x0, model), model).valid) {
      throw InputError("fit: starting point is outside the support of the data");
    }
  }

  const auto opt = search(objective, x0, config);
  if (!opt.converged) {
    throw ConvergenceError("fit: Nelder-Mead did not converge within " +
                           std::to_string(opt.iterations) + " iterations");
  }
  FitResult out;
  out.model = model;
  out.params = from_vector(opt.x_min, model);
  const auto value = nllh(x, out.params, model);
  if (!value.valid) throw ConvergenceError("fit: optimum lies outside the admissible region");
  out.nllh = value.value;
  out.n = x.size();
  out.regularity = regularity(out.params.xi);
  out.opt = opt;
  attach_uncertainty(out, x);
  return out;
}

}  // namespace

GevParams start_values(std::span<const double> x) {
  if (x.size() < 2) throw InputError("start_values: need at least two observations");
  const double n = static_cast<double>(x.size());
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double var = ss / (n - 1.0);
  if (!(var > 0.0)) throw InputError("fit: sample has no spread");
  const double sigma = std::sqrt(6.0 * var) / std::numbers::pi;
  return {mean - kEulerGamma * sigma, sigma, 0.1};
}

FitResult fit_gev(std::span<const double> x, const SimplexConfig& config) {
  return run_fit(x, Model::Gev, config, std::nullopt);
}

FitResult fit_gumbel(std::span<const double> x, const SimplexConfig& config) {
  return run_fit(x, Model::Gumbel, config, std::nullopt);
}

FitResult fit(std::span<const double> x, Model m, const SimplexConfig& config,
              const std::optional<GevParams>& start) {
  return run_fit(x, m, config, start);
}

double critical_z(double tau, Sidedness sided) {
  if (sided == Sidedness::TwoSided) {
    if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("confidence level: tau must lie in (0,1]");
    if (tau == 1.0) return 0.0;
    return normal_quantile(1.0 - 0.5 * tau);
  }
  if (!(tau > 0.0 && tau < 1.0)) throw DomainError("confidence level: tau must lie in (0,1)");
  return normal_quantile(1.0 - tau);
}

Interval normal_ci(double estimate, double se, double tau, Sidedness sided) {
  if (!(se >= 0.0)) throw DomainError("normal_ci: standard error must be non-negative");
  const double half = critical_z(tau, sided) * se;
  return {estimate - half, estimate + half};
}

Interval normal_ci(const FitResult& fit, int index, double tau, Sidedness sided) {
  if (!fit.se) throw DomainError("normal_ci: standard errors unavailable (" + fit.se_note + ")");
  if (index < 0 || index >= fit.dim()) throw DomainError("normal_ci: parameter index out of range");
  return normal_ci(fit.estimate()[index], (*fit.se)[index], tau, sided);
}

double location_from_return_level(double level, double sigma, double xi, double p) {
  const double log_y = std::log(reduced_variate(p));
  if (std::abs(xi) < kGumbelSwitch) return level + sigma * log_y;
  return level - sigma * std::expm1(-xi * log_y) / xi;
}

namespace {

// Objective over nuisance parameters with the target held at `value`.
struct ProfileProblem {
  std::span<const double> x;
  Model model;
  ProfileTarget target;

  [[nodiscard]] GevParams params(double value, std::span<const double> nuisance) const {
    if (target.kind == ProfileTarget::Kind::ReturnLevel) {
      const double sigma = nuisance[0];
      const double xi = model == Model::Gev ? nuisance[1] : 0.0;
      return {location_from_return_level(value, sigma, xi, target.p), sigma, xi};
    }
    std::vector<double> full;
    std::size_t k = 0;
    for (int i = 0; i < dimension(model); ++i) {
      full.push_back(i == target.index ? value : nuisance[k++]);
    }
    return from_vector(full, model);
  }

  [[nodiscard]] std::vector<double> nuisance_of(const GevParams& p) const {
    if (target.kind == ProfileTarget::Kind::ReturnLevel) {
      if (model == Model::Gev) return {p.sigma, p.xi};
      return {p.sigma};
    }
    const auto full = to_vector(p, model);
    std::vector<double> out;
    for (int i = 0; i < dimension(model); ++i) {
      if (i != target.index) out.push_back(full[i]);
    }
    return out;
  }

  [[nodiscard]] double value_of(const GevParams& p) const {
    if (target.kind == ProfileTarget::Kind::ReturnLevel) return return_level(p, target.p);
    return to_vector(p, model)[target.index];
  }

  [[nodiscard]] double nllh_at(double value, std::span<const double> nuisance) const {
    return nllh(x, params(value, nuisance), model).value;
  }
};

double default_halfwidth(const FitResult& fit, const ProfileTarget& target, double value) {
  double se = std::numeric_limits<double>::quiet_NaN();
  if (fit.cov) {
    if (target.kind == ProfileTarget::Kind::Parameter) {
      se = std::sqrt((*fit.cov)(target.index, target.index));
    } else {
      const auto grad = return_level_gradient(fit.params, target.p, fit.model);
      se = std::sqrt(delta_method(*fit.cov, grad));
    }
  }
  if (!(se > 0.0) || !std::isfinite(se)) se = 0.1 * std::max(1.0, std::abs(value));
  return 4.0 * se;
}

struct Sweep {
  std::vector<double> grid;
  std::vector<double> nllh;
  std::size_t centre = 0;
};

Sweep sweep(const ProfileProblem& problem, const FitResult& fit, double lower, double upper,
            int points, const SimplexConfig& config) {
  const double estimate = problem.value_of(fit.params);
  Sweep s;
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.5 : static_cast<double>(i) / (points - 1);
    const double g = lower + t * (upper - lower);
    if (std::abs(g - estimate) > 1e-12 * std::max(1.0, std::abs(estimate))) s.grid.push_back(g);
  }
  s.grid.push_back(estimate);
  std::sort(s.grid.begin(), s.grid.end());
  s.centre = static_cast<std::size_t>(
      std::find(s.grid.begin(), s.grid.end(), estimate) - s.grid.begin());
  s.nllh.assign(s.grid.size(), 0.0);

  const auto start = problem.nuisance_of(fit.params);
  auto solve = [&](std::size_t i, const std::vector<double>& from) {
    const double value = s.grid[i];
    auto f = [&](std::span<const double> w) { return problem.nllh_at(value, w); };
    auto w0 = from;
    // a warm start can fall outside the support after the target moves
    if (!std::isfinite(f(w0)) || f(w0) >= kInvalidPenalty) w0 = start;
    auto r = minimize(f, w0, config);
    if (r.converged) {
      auto polish = minimize(f, r.x_min, config);
      if (polish.f_min <= r.f_min) r = std::move(polish);
    }
    s.nllh[i] = r.f_min;
    return r.x_min;
  };

  const auto at_centre = solve(s.centre, start);
  auto w = at_centre;
  for (std::size_t i = s.centre + 1; i < s.grid.size(); ++i) w = solve(i, w);
  w = at_centre;
  for (std::size_t i = s.centre; i-- > 0;) w = solve(i, w);
  return s;
}

}  // namespace

ProfileCurve profile(std::span<const double> x, const FitResult& fit, ProfileTarget target,
                     const ProfileOptions& options) {
  if (!fit.opt.converged) throw DomainError("profile: the full fit did not converge");
  if (target.kind == ProfileTarget::Kind::Parameter &&
      (target.index < 0 || target.index >= fit.dim())) {
    throw DomainError("profile: parameter index out of range");
  }
  if (target.kind == ProfileTarget::Kind::ReturnLevel) (void)reduced_variate(target.p);
  if (options.points < 2) throw DomainError("profile: need at least two grid points");

  const ProfileProblem problem{x, fit.model, target};
  const double estimate = problem.value_of(fit.params);
  const double threshold = chi2_quantile(1.0 - options.tau, 1.0);

  const bool explicit_range = options.lower.has_value() || options.upper.has_value();
  double half = default_halfwidth(fit, target, estimate);
  double lower = options.lower.value_or(estimate - half);
  double upper = options.upper.value_or(estimate + half);
  const bool is_scale = target.kind == ProfileTarget::Kind::Parameter && target.index == 1;
  if (is_scale && !options.lower) lower = std::max(lower, 1e-3 * estimate);
  if (!(lower <= estimate && estimate <= upper)) {
    throw DomainError("profile: grid range does not bracket the estimate");
  }

  for (int attempt = 0;; ++attempt) {
    const auto s = sweep(problem, fit, lower, upper, options.points, options.simplex);

    ProfileCurve out;
    out.target = target;
    out.grid = s.grid;
    out.estimate = estimate;
    out.estimate_index = s.centre;
    out.threshold = threshold;
    out.lp.resize(s.grid.size());
    std::transform(s.nllh.begin(), s.nllh.end(), out.lp.begin(), [](double v) { return -v; });
    out.max_loglik = std::max(-fit.nllh, *std::max_element(out.lp.begin(), out.lp.end()));
    out.deviance.resize(s.grid.size());
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
      out.deviance[i] = 2.0 * (out.max_loglik - out.lp[i]);
    }

    auto crossing = [&](bool up) -> std::optional<double> {
      std::size_t prev = s.centre;
      for (std::size_t step = 1;; ++step) {
        if (up ? s.centre + step >= s.grid.size() : step > s.centre) return std::nullopt;
        const std::size_t i = up ? s.centre + step : s.centre - step;
        if (out.deviance[i] > threshold) {
          const double d0 = out.deviance[prev];
          const double d1 = out.deviance[i];
          const double t = (threshold - d0) / (d1 - d0);
          return s.grid[prev] + t * (s.grid[i] - s.grid[prev]);
        }
        prev = i;
      }
    };
    const auto lo = crossing(false);
    const auto hi = crossing(true);
    if (lo && hi) {
      out.ci = {*lo, *hi};
      return out;
    }
    const std::string side = !lo ? "lower" : "upper";
    if (explicit_range || attempt >= options.max_expansions) {
      throw BracketError("profile: deviance never exceeds " + std::to_string(threshold) +
                             " on the " + side + " side of the grid",
                         side);
    }
    if (!lo) {
      lower = estimate - 2.0 * (estimate - lower);
      if (is_scale) lower = std::max(lower, 1e-3 * estimate);
    }
    if (!hi) upper = estimate + 2.0 * (upper - estimate);
  }
}

LrtResult lrt(double nllh_null, int dim_null, double nllh_alt, int dim_alt, double level) {
  if (dim_alt <= dim_null) throw DomainError("lrt: alternative must have more parameters");
  if (nllh_alt > nllh_null + 1e-6) {
    throw DomainError("lrt: the larger model fits worse than the nested one");
  }
  LrtResult out;
  out.df = dim_alt - dim_null;
  out.statistic = std::max(0.0, 2.0 * (nllh_null - nllh_alt));
  out.critical = chi2_quantile(1.0 - level, out.df);
  out.p_value = 1.0 - chi2_cdf(out.statistic, out.df);
  out.reject = out.statistic > out.critical;
  return out;
}

LrtResult lrt(const FitResult& null_fit, const FitResult& alt_fit, double level) {
  if (null_fit.model != Model::Gumbel || alt_fit.model != Model::Gev) {
    throw DomainError("lrt: expected a Gumbel null model nested in a GEV alternative");
  }
  if (null_fit.n != alt_fit.n) throw DomainError("lrt: fits use different samples");
  return lrt(null_fit.nllh, null_fit.dim(), alt_fit.nllh, alt_fit.dim(), level);
}

double aic(double nllh, int free_params) noexcept { return 2.0 * nllh + 2.0 * free_params; }

double aic(const FitResult& fit) noexcept { return aic(fit.nllh, fit.dim()); }

double delta_method(const Eigen::MatrixXd& cov, std::span<const double> gradient) {
  if (cov.rows() != cov.cols() || static_cast<std::size_t>(cov.rows()) != gradient.size()) {
    throw DomainError("delta_method: covariance and gradient dimensions differ");
  }
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw DomainError("delta_method: covariance is not symmetric");
  }
  const Eigen::Map<const Eigen::VectorXd> g(gradient.data(), static_cast<Eigen::Index>(gradient.size()));
  return g.dot(cov * g);
}

}  // namespace gevstat
