#include "gevstat/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gevstat/errors.hpp"

namespace gevstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

bool GevParams::valid() const noexcept {
  return std::isfinite(mu) && std::isfinite(sigma) && std::isfinite(xi) && sigma > 0.0;
}

bool GevParams::is_gumbel() const noexcept { return std::abs(xi) < kGumbelSwitch; }

void require_valid(const GevParams& p) {
  if (!p.valid()) {
    throw DomainError("invalid GEV parameters: need finite mu, xi and sigma > 0 (sigma=" +
                      std::to_string(p.sigma) + ")");
  }
}

std::string_view to_string(GevType t) noexcept {
  switch (t) {
    case GevType::Frechet:
      return "Frechet";
    case GevType::Weibull:
      return "Weibull";
    case GevType::Gumbel:
      return "Gumbel";
  }
  return "?";
}

MaximaSample::MaximaSample(std::vector<double> v, std::optional<std::vector<int>> y)
    : values(std::move(v)), years(std::move(y)) {}

void MaximaSample::validate() const {
  if (values.empty()) throw InputError("sample is empty");
  for (double v : values) {
    if (!std::isfinite(v)) throw InputError("sample contains a non-finite value");
  }
  if (years) {
    if (years->size() != values.size()) throw InputError("years and values differ in length");
    for (std::size_t i = 1; i < years->size(); ++i) {
      if ((*years)[i] <= (*years)[i - 1]) throw InputError("years are not strictly increasing");
    }
  }
}

Support support(const GevParams& p) {
  require_valid(p);
  if (p.is_gumbel()) return {-kInf, kInf};
  const double end = p.mu - p.sigma / p.xi;
  if (p.xi > 0.0) return {end, kInf};
  return {-kInf, end};
}

double cdf(const GevParams& p, double x) {
  require_valid(p);
  const double z = (x - p.mu) / p.sigma;
  if (p.is_gumbel()) return std::exp(-std::exp(-z));
  const double t = 1.0 + p.xi * z;
  if (t <= 0.0) return p.xi > 0.0 ? 0.0 : 1.0;
  return std::exp(-std::exp(-std::log1p(p.xi * z) / p.xi));
}

double log_pdf(const GevParams& p, double x) {
  require_valid(p);
  const double z = (x - p.mu) / p.sigma;
  if (p.is_gumbel()) return -std::log(p.sigma) - z - std::exp(-z);
  if (1.0 + p.xi * z <= 0.0) return -kInf;
  const double lt = std::log1p(p.xi * z);
  return -std::log(p.sigma) - (1.0 + 1.0 / p.xi) * lt - std::exp(-lt / p.xi);
}

double pdf(const GevParams& p, double x) { return std::exp(log_pdf(p, x)); }

double quantile(const GevParams& p, double q) {
  require_valid(p);
  if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile: probability must lie in (0,1)");
  const double ly = std::log(-std::log(q));
  if (p.is_gumbel()) return p.mu - p.sigma * ly;
  return p.mu + p.sigma * std::expm1(-p.xi * ly) / p.xi;
}

GevType classify(const GevParams& p) {
  require_valid(p);
  if (p.is_gumbel()) return GevType::Gumbel;
  return p.xi > 0.0 ? GevType::Frechet : GevType::Weibull;
}

std::size_t Rng::index(std::size_t n) noexcept {
  const auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return k < n ? k : n - 1;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

MaximaSample sample(const GevParams& p, std::size_t n, std::uint64_t seed) {
  require_valid(p);
  if (n == 0) throw DomainError("sample: n must be at least 1");
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = quantile(p, rng.uniform());
  return MaximaSample(std::move(out));
}

}  // namespace gevstat
