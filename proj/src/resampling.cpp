#include "gevstat/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "gevstat/distributions.hpp"
#include "gevstat/errors.hpp"
#include "gevstat/inference.hpp"

namespace gevstat {

std::string_view to_string(ResamplingMethod m) noexcept {
  return m == ResamplingMethod::Bootstrap ? "bootstrap" : "jackknife";
}

std::string_view to_string(BiasVerdict v) noexcept {
  switch (v) {
    case BiasVerdict::Ignore:
      return "ignore";
    case BiasVerdict::Correct:
      return "correct";
    case BiasVerdict::Suspect:
      return "suspect";
  }
  return "?";
}

namespace {

// Evaluates the statistic; empty result means the evaluation failed.
std::optional<std::vector<double>> try_evaluate(const Statistic& statistic,
                                                std::span<const double> x, std::size_t dim) {
  try {
    auto v = statistic(x);
    if (dim != 0 && v.size() != dim) return std::nullopt;
    for (double e : v) {
      if (!std::isfinite(e)) return std::nullopt;
    }
    return v;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::vector<std::string> default_labels(std::vector<std::string> labels, std::size_t d) {
  if (labels.size() == d) return labels;
  labels.clear();
  for (std::size_t i = 0; i < d; ++i) labels.push_back("theta" + std::to_string(i));
  return labels;
}

void summarize(ResamplingReport& r) {
  const std::size_t d = r.estimate.size();
  r.ratio.resize(d);
  r.rmse.resize(d);
  r.corrected.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double se = r.se[i];
    r.ratio[i] = se > 0.0 ? std::abs(r.bias[i]) / se
                          : (r.bias[i] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    r.rmse[i] = std::hypot(r.bias[i], se);
    r.corrected[i] = r.estimate[i] - r.bias[i];
  }
}

}  // namespace

ResamplingReport bootstrap(std::span<const double> x, const Statistic& statistic,
                           const BootstrapOptions& options, std::vector<std::string> labels) {
  if (x.empty()) throw InputError("bootstrap: empty sample");
  const std::size_t B = options.replicates;
  if (B < 2) throw ResamplingError("bootstrap: need at least 2 replicates");
  const auto full = try_evaluate(statistic, x, 0);
  if (!full || full->empty()) throw ResamplingError("bootstrap: statistic fails on the full sample");
  const std::size_t d = full->size();
  const auto budget = static_cast<std::size_t>(options.max_failed_fraction * static_cast<double>(B));

  std::vector<std::vector<double>> reps(B);
  std::vector<std::size_t> failures(B, 0);

  auto run_replicate = [&](std::size_t b) {
    std::vector<double> resample(x.size());
    const auto stream = derive_seed(options.seed, b);
    for (std::size_t attempt = 0; attempt <= budget; ++attempt) {
      Rng rng(derive_seed(stream, attempt));
      for (auto& v : resample) v = x[rng.index(x.size())];
      if (auto r = try_evaluate(statistic, resample, d)) {
        reps[b] = std::move(*r);
        return;
      }
      ++failures[b];
    }
  };

  unsigned workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, B));
  if (workers <= 1) {
    for (std::size_t b = 0; b < B; ++b) run_replicate(b);
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t b = w; b < B; b += workers) run_replicate(b);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

  ResamplingReport r;
  r.method = ResamplingMethod::Bootstrap;
  r.replicates = B;
  r.seed = options.seed;
  for (std::size_t f : failures) r.failed += f;
  if (r.failed > budget) {
    throw ResamplingError("bootstrap: " + std::to_string(r.failed) + " failed replicates exceed " +
                          "the budget of " + std::to_string(budget));
  }
  r.labels = default_labels(std::move(labels), d);
  r.estimate = *full;
  r.mean.assign(d, 0.0);
  r.se.assign(d, 0.0);
  r.bias.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    long double sum = 0.0L;
    for (const auto& rep : reps) sum += rep[i];
    const double mean = static_cast<double>(sum / static_cast<long double>(B));
    long double ss = 0.0L;
    for (const auto& rep : reps) ss += static_cast<long double>(rep[i] - mean) * (rep[i] - mean);
    r.mean[i] = mean;
    r.se[i] = std::sqrt(static_cast<double>(ss / static_cast<long double>(B - 1)));
    r.bias[i] = mean - r.estimate[i];
  }
  summarize(r);
  return r;
}

ResamplingReport jackknife(std::span<const double> x, const Statistic& statistic,
                           std::vector<std::string> labels) {
  const std::size_t n = x.size();
  if (n < 3) throw ResamplingError("jackknife: need at least 3 observations");
  const auto full = try_evaluate(statistic, x, 0);
  if (!full || full->empty()) throw ResamplingError("jackknife: statistic fails on the full sample");
  const std::size_t d = full->size();

  std::vector<std::vector<double>> reps(n);
  std::vector<double> reduced(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i), reduced.begin());
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(i) + 1, x.end(),
              reduced.begin() + static_cast<std::ptrdiff_t>(i));
    auto r = try_evaluate(statistic, reduced, d);
    if (!r) {
      throw ResamplingError("jackknife: statistic failed with observation " + std::to_string(i) +
                            " removed");
    }
    reps[i] = std::move(*r);
  }

  ResamplingReport r;
  r.method = ResamplingMethod::Jackknife;
  r.replicates = n;
  r.labels = default_labels(std::move(labels), d);
  r.estimate = *full;
  r.mean.assign(d, 0.0);
  r.se.assign(d, 0.0);
  r.bias.resize(d);
  const auto nl = static_cast<long double>(n);
  for (std::size_t k = 0; k < d; ++k) {
    long double sum = 0.0L;
    for (const auto& rep : reps) sum += rep[k];
    const long double mean = sum / nl;
    long double ss = 0.0L;
    for (const auto& rep : reps) ss += (rep[k] - mean) * (rep[k] - mean);
    r.mean[k] = static_cast<double>(mean);
    r.bias[k] = static_cast<double>((nl - 1.0L) * (mean - r.estimate[k]));
    r.se[k] = static_cast<double>(std::sqrt((nl - 1.0L) / nl * ss));
  }
  summarize(r);
  return r;
}

double rmse(double bias, double se) {
  if (!(se > 0.0)) throw DomainError("rmse: standard error must be positive");
  const double q = bias / se;
  return se * std::sqrt(1.0 + q * q);
}

double rmse_approx(double bias, double se) {
  if (!(se > 0.0)) throw DomainError("rmse_approx: standard error must be positive");
  const double q = bias / se;
  return se * (1.0 + 0.5 * q * q);
}

BiasVerdict screen(double ratio) noexcept {
  if (ratio < kIgnoreRatio) return BiasVerdict::Ignore;
  if (ratio < kSuspectRatio) return BiasVerdict::Correct;
  return BiasVerdict::Suspect;
}

std::vector<BiasVerdict> screen(const ResamplingReport& report) {
  std::vector<BiasVerdict> out;
  out.reserve(report.ratio.size());
  for (double r : report.ratio) out.push_back(screen(r));
  return out;
}

Statistic fit_statistic(Model model) {
  return [model](std::span<const double> x) { return fit(x, model).estimate(); };
}

std::vector<std::string> parameter_labels(Model model) {
  if (model == Model::Gev) return {"mu", "sigma", "xi"};
  return {"mu", "sigma"};
}

}  // namespace gevstat
