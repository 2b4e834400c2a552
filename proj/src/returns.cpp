#include "gevstat/returns.hpp"

#include <cmath>

#include "gevstat/errors.hpp"

namespace gevstat {

namespace {

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("return level: p must lie in (0,1)");
}

}  // namespace

double reduced_variate(double p) {
  check_p(p);
  return -std::log1p(-p);
}

double return_level(const GevParams& params, double p) {
  check_p(p);
  return quantile(params, 1.0 - p);
}

std::vector<double> return_level_gradient(const GevParams& params, double p) {
  require_valid(params);
  const double log_y = std::log(reduced_variate(p));
  if (params.is_gumbel()) return {1.0, -log_y};
  const double xi = params.xi;
  // 1 - y^-xi, evaluated without cancellation for small xi
  const double one_minus = -std::expm1(-xi * log_y);
  const double y_pow = 1.0 - one_minus;
  return {1.0, -one_minus / xi,
          params.sigma * one_minus / (xi * xi) - params.sigma * y_pow * log_y / xi};
}

std::vector<double> return_level_gradient(const GevParams& params, double p, Model model) {
  auto g = return_level_gradient(params, p);
  if (model == Model::Gumbel) {
    g.resize(2);
  } else if (g.size() == 2) {
    const double log_y = std::log(reduced_variate(p));
    g.push_back(0.5 * params.sigma * log_y * log_y);
  }
  return g;
}

std::string_view to_string(LevelBasis b) noexcept {
  return b == LevelBasis::RawFit ? "raw" : "bias_corrected";
}

ReturnLevelEstimate return_level_ci(const GevParams& params, const Eigen::MatrixXd& cov, double p,
                                    double tau, Sidedness sided, LevelBasis basis) {
  if (cov.rows() != 2 && cov.rows() != 3) {
    throw DomainError("return_level_ci: covariance must be 2x2 (Gumbel) or 3x3 (GEV)");
  }
  const Model model = cov.rows() == 3 ? Model::Gev : Model::Gumbel;
  if (model == Model::Gumbel && !params.is_gumbel()) {
    throw DomainError("return_level_ci: a 2x2 covariance needs Gumbel parameters");
  }
  const auto grad = return_level_gradient(params, p, model);
  ReturnLevelEstimate out;
  out.p = p;
  out.period = 1.0 / p;
  out.level = return_level(params, p);
  out.variance = delta_method(cov, grad);
  out.basis = basis;
  out.params = params;
  out.ci = normal_ci(out.level, std::sqrt(out.variance), tau, sided);
  return out;
}

ReturnLevelEstimate return_level_ci(const FitResult& fit, double p, double tau, Sidedness sided,
                                    const std::optional<GevParams>& corrected) {
  if (!fit.cov) throw DomainError("return_level_ci: fit has no covariance matrix");
  if (corrected) {
    GevParams at = *corrected;
    if (fit.model == Model::Gumbel) at.xi = 0.0;
    return return_level_ci(at, *fit.cov, p, tau, sided, LevelBasis::BiasCorrected);
  }
  return return_level_ci(fit.params, *fit.cov, p, tau, sided, LevelBasis::RawFit);
}

}  // namespace gevstat
