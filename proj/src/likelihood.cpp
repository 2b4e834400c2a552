#include "gevstat/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gevstat/errors.hpp"

namespace gevstat {

std::string_view to_string(Model m) noexcept { return m == Model::Gev ? "gev" : "gumbel"; }

int dimension(Model m) noexcept { return m == Model::Gev ? 3 : 2; }

std::vector<double> to_vector(const GevParams& p, Model m) {
  if (m == Model::Gev) return {p.mu, p.sigma, p.xi};
  return {p.mu, p.sigma};
}

GevParams from_vector(std::span<const double> theta, Model m) {
  if (theta.size() != static_cast<std::size_t>(dimension(m))) {
    throw DomainError("parameter vector has wrong dimension for the model");
  }
  return {theta[0], theta[1], m == Model::Gev ? theta[2] : 0.0};
}

NegLogLik nllh_gumbel(std::span<const double> x, double mu, double sigma) {
  if (x.empty()) throw InputError("likelihood: empty sample");
  if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma)) {
    return {kInvalidPenalty + (std::isfinite(sigma) ? std::abs(sigma) : 1.0), false};
  }
  double sum_z = 0.0;
  double sum_e = 0.0;
  for (double xi : x) {
    const double z = (xi - mu) / sigma;
    sum_z += z;
    sum_e += std::exp(-z);
  }
  const double value = static_cast<double>(x.size()) * std::log(sigma) + sum_z + sum_e;
  if (!std::isfinite(value)) return {kInvalidPenalty, false};
  return {value, true};
}

NegLogLik nllh_gev(std::span<const double> x, const GevParams& p) {
  if (x.empty()) throw InputError("likelihood: empty sample");
  if (std::abs(p.xi) < kGumbelSwitch) return nllh_gumbel(x, p.mu, p.sigma);
  if (!(p.sigma > 0.0) || !std::isfinite(p.mu) || !std::isfinite(p.sigma) ||
      !std::isfinite(p.xi)) {
    return {kInvalidPenalty + (std::isfinite(p.sigma) ? std::abs(p.sigma) : 1.0), false};
  }
  bool outside = false;
  double violation = 0.0;
  double sum_log = 0.0;
  double sum_pow = 0.0;
  for (double xi : x) {
    const double xz = p.xi * (xi - p.mu) / p.sigma;
    if (xz <= -1.0) {
      outside = true;
      violation += -(1.0 + xz);
      continue;
    }
    const double lt = std::log1p(xz);
    sum_log += lt;
    sum_pow += std::exp(-lt / p.xi);
  }
  if (outside) return {kInvalidPenalty + violation, false};
  const double value = static_cast<double>(x.size()) * std::log(p.sigma) +
                       (1.0 + 1.0 / p.xi) * sum_log + sum_pow;
  if (!std::isfinite(value)) return {kInvalidPenalty, false};
  return {value, true};
}

NegLogLik nllh(std::span<const double> x, const GevParams& p, Model m) {
  if (m == Model::Gumbel) return nllh_gumbel(x, p.mu, p.sigma);
  return nllh_gev(x, p);
}

ObservedInfo observed_information(std::span<const double> x, const GevParams& p, Model m,
                                  double step_scale) {
  require_valid(p);
  const GevParams at = m == Model::Gumbel ? GevParams{p.mu, p.sigma, 0.0} : p;
  const auto sup = support(at);
  for (double v : x) {
    if (!sup.contains(v)) {
      throw DomainError("observed_information: parameters are not interior to the data");
    }
  }

  const auto theta = to_vector(at, m);
  const auto d = theta.size();
  std::vector<double> h(d);
  for (std::size_t i = 0; i < d; ++i) {
    h[i] = step_scale * std::max(1e-5, 1e-5 * std::abs(theta[i]));
  }
  auto f = [&](std::vector<double> t) { return nllh(x, from_vector(t, m), m).value; };

  Eigen::MatrixXd hess(d, d);
  const double f0 = f(theta);
  for (std::size_t i = 0; i < d; ++i) {
    auto tp = theta;
    auto tm = theta;
    tp[i] += h[i];
    tm[i] -= h[i];
    hess(i, i) = (f(tp) - 2.0 * f0 + f(tm)) / (h[i] * h[i]);
    for (std::size_t j = 0; j < i; ++j) {
      auto tpp = theta, tpm = theta, tmp = theta, tmm = theta;
      tpp[i] += h[i], tpp[j] += h[j];
      tpm[i] += h[i], tpm[j] -= h[j];
      tmp[i] -= h[i], tmp[j] += h[j];
      tmm[i] -= h[i], tmm[j] -= h[j];
      const double v = (f(tpp) - f(tpm) - f(tmp) + f(tmm)) / (4.0 * h[i] * h[j]);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hess, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double lo = ev.cwiseAbs().minCoeff();
  const double hi = ev.cwiseAbs().maxCoeff();
  const double cond = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return {hess, cond};
}

Eigen::MatrixXd covariance(const ObservedInfo& info) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info.matrix, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0 ||
      !(info.condition_estimate <= kMaxCondition)) {
    throw SingularInformationError(
        "observed information is not positive definite or is ill-conditioned (condition " +
            std::to_string(info.condition_estimate) + ")",
        info.condition_estimate);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(info.matrix);
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(info.matrix.rows(), info.matrix.cols()));
  return 0.5 * (inv + inv.transpose());
}

}  // namespace gevstat
