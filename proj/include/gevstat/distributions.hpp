#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace gevstat {

// |xi| below this value is treated as exactly zero (Gumbel) everywhere in the library.
inline constexpr double kGumbelSwitch = 1e-9;

// Location mu, scale sigma > 0 and shape xi of a GEV law. xi == 0 is the Gumbel law.
struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;

  [[nodiscard]] bool valid() const noexcept;
  [[nodiscard]] bool is_gumbel() const noexcept;
  friend bool operator==(const GevParams&, const GevParams&) = default;
};

// Throws DomainError unless p.valid().
void require_valid(const GevParams& p);

struct Support {
  double lower;  // may be -inf
  double upper;  // may be +inf
  [[nodiscard]] bool contains(double x) const noexcept { return x > lower && x < upper; }
};

enum class GevType { Frechet, Weibull, Gumbel };

[[nodiscard]] std::string_view to_string(GevType t) noexcept;

// Block maxima with optional year labels (strictly increasing when present).
struct MaximaSample {
  std::vector<double> values;
  std::optional<std::vector<int>> years;

  MaximaSample() = default;
  explicit MaximaSample(std::vector<double> v, std::optional<std::vector<int>> y = std::nullopt);

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] bool empty() const noexcept { return values.empty(); }
  [[nodiscard]] std::span<const double> view() const noexcept { return values; }

  // Throws InputError if empty, non-finite, or years malformed.
  void validate() const;
};

[[nodiscard]] Support support(const GevParams& p);
[[nodiscard]] double cdf(const GevParams& p, double x);
[[nodiscard]] double pdf(const GevParams& p, double x);
[[nodiscard]] double log_pdf(const GevParams& p, double x);
[[nodiscard]] double quantile(const GevParams& p, double q);
[[nodiscard]] GevType classify(const GevParams& p);

// Seedable generator used by every stochastic routine: std::mt19937_64 seeded
// with the 64-bit seed; a uniform variate is ((bits >> 11) + 0.5) * 2^-53, so it
// lies strictly inside (0,1) and the stream is reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() noexcept { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  // Uniform index in [0, n).
  std::size_t index(std::size_t n) noexcept;

 private:
  std::mt19937_64 engine_;
};

// Seed of the independent stream number `stream` derived from `seed` (splitmix64 mixing).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// n i.i.d. draws by inverse-CDF sampling.
[[nodiscard]] MaximaSample sample(const GevParams& p, std::size_t n, std::uint64_t seed);

}  // namespace gevstat
