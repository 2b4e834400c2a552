#include "gevstat/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "gevstat/errors.hpp"

namespace gevstat {

void SimplexConfig::validate() const {
  if (!(reflection > 0.0 && expansion > 1.0 && contraction > 0.0 && contraction < 1.0 &&
        shrink > 0.0 && shrink < 1.0)) {
    throw DomainError("SimplexConfig: need reflection > 0, expansion > 1, 0 < contraction < 1, "
                      "0 < shrink < 1");
  }
  if (max_iter < 1 || !(f_tol >= 0.0) || !(x_tol >= 0.0)) {
    throw DomainError("SimplexConfig: max_iter must be positive and tolerances non-negative");
  }
}

namespace {

struct Vertex {
  std::vector<double> x;
  double f;
  std::uint64_t id;  // insertion order, breaks ties deterministically
};

struct PassResult {
  int iterations = 0;
  bool converged = false;
};

class Simplex {
 public:
  Simplex(const Objective& objective, const SimplexConfig& config)
      : objective_(objective), config_(config) {}

  void reset(std::vector<std::vector<double>> points) {
    vertices_.clear();
    for (auto& p : points) add(std::move(p));
    sort();
  }

  PassResult run(std::vector<double>* history) {
    PassResult out;
    const std::size_t d = vertices_.front().x.size();
    std::vector<double> centroid(d);
    for (; out.iterations < config_.max_iter; ++out.iterations) {
      if (converged()) {
        out.converged = true;
        return out;
      }
      step(centroid);
      sort();
      if (history) history->push_back(vertices_.front().f);
    }
    out.converged = converged();
    return out;
  }

  [[nodiscard]] const Vertex& best() const { return vertices_.front(); }

 private:
  void add(std::vector<double> x) {
    const double f = eval(x);
    vertices_.push_back({std::move(x), f, next_id_++});
  }

  // NaN would break the vertex ordering; treat it as +inf.
  double eval(const std::vector<double>& x) const {
    const double f = objective_(x);
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  }

  void replace_worst(std::vector<double> x, double f) {
    vertices_.back() = {std::move(x), f, next_id_++};
  }

  void sort() {
    std::stable_sort(vertices_.begin(), vertices_.end(), [](const Vertex& a, const Vertex& b) {
      if (a.f != b.f) return a.f < b.f;
      return a.id < b.id;
    });
  }

  [[nodiscard]] bool converged() const {
    const double fb = vertices_.front().f;
    const double fw = vertices_.back().f;
    const double band = 0.5 * config_.f_tol * (std::abs(fb) + std::abs(fw));
    if (fw - fb <= band) {
      // Vertices can tie while straddling a minimum (|x| from a symmetric pair);
      // the centroid must not undercut them either.
      std::vector<double> c(vertices_.front().x.size(), 0.0);
      for (const auto& v : vertices_) {
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += v.x[i];
      }
      for (double& ci : c) ci /= static_cast<double>(vertices_.size());
      if (eval(c) >= fb - band) return true;
    }
    double diameter = 0.0;
    const auto& xb = vertices_.front().x;
    for (std::size_t v = 1; v < vertices_.size(); ++v) {
      for (std::size_t i = 0; i < xb.size(); ++i) {
        diameter = std::max(diameter, std::abs(vertices_[v].x[i] - xb[i]));
      }
    }
    return diameter <= config_.x_tol;
  }

  std::vector<double> along(const std::vector<double>& from, const std::vector<double>& to,
                            double t) const {
    std::vector<double> out(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) out[i] = from[i] + t * (to[i] - from[i]);
    return out;
  }

  void step(std::vector<double>& c) {
    const std::size_t n = vertices_.size() - 1;
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < c.size(); ++i) c[i] += vertices_[v].x[i];
    }
    for (double& ci : c) ci /= static_cast<double>(n);

    const Vertex& worst = vertices_.back();
    const double f_best = vertices_.front().f;
    const double f_second = vertices_[n - 1].f;

    auto xr = along(c, worst.x, -config_.reflection);
    const double fr = eval(xr);
    if (fr < f_best) {
      auto xe = along(c, xr, config_.expansion);
      const double fe = eval(xe);
      if (fe < fr) {
        replace_worst(std::move(xe), fe);
      } else {
        replace_worst(std::move(xr), fr);
      }
      return;
    }
    if (fr < f_second) {
      replace_worst(std::move(xr), fr);
      return;
    }
    if (fr < worst.f) {
      auto xc = along(c, xr, config_.contraction);
      const double fc = eval(xc);
      if (fc <= fr) {
        replace_worst(std::move(xc), fc);
        return;
      }
    } else {
      auto xc = along(c, worst.x, config_.contraction);
      const double fc = eval(xc);
      if (fc < worst.f) {
        replace_worst(std::move(xc), fc);
        return;
      }
    }
    // shrink toward the best vertex
    const auto xb = vertices_.front().x;
    for (std::size_t v = 1; v < vertices_.size(); ++v) {
      auto x = along(xb, vertices_[v].x, config_.shrink);
      const double f = eval(x);
      vertices_[v] = {std::move(x), f, next_id_++};
    }
  }

  const Objective& objective_;
  const SimplexConfig& config_;
  std::vector<Vertex> vertices_;
  std::uint64_t next_id_ = 0;
};

std::vector<std::vector<double>> axis_simplex(std::span<const double> x0) {
  std::vector<std::vector<double>> pts;
  pts.emplace_back(x0.begin(), x0.end());
  for (std::size_t i = 0; i < x0.size(); ++i) {
    std::vector<double> v(x0.begin(), x0.end());
    v[i] += std::max(0.05 * std::abs(x0[i]), 0.00025);
    pts.push_back(std::move(v));
  }
  return pts;
}

}  // namespace

OptResult minimize_from_simplex(const Objective& objective,
                                std::vector<std::vector<double>> vertices,
                                const SimplexConfig& config) {
  config.validate();
  if (vertices.empty() || vertices.front().empty()) {
    throw DomainError("minimize: dimension must be at least 1");
  }
  const std::size_t d = vertices.front().size();
  if (vertices.size() != d + 1) throw DomainError("minimize: simplex needs d+1 vertices");
  for (const auto& v : vertices) {
    if (v.size() != d) throw DomainError("minimize: simplex vertices differ in dimension");
  }
  if (!std::isfinite(objective(vertices.front()))) {
    throw DomainError("minimize: objective is not finite at the starting point");
  }

  Simplex simplex(objective, config);
  simplex.reset(std::move(vertices));
  OptResult out;
  auto* history = config.record_history ? &out.history : nullptr;
  auto pass = simplex.run(history);

  out.iterations = pass.iterations;
  if (!pass.converged) {
    auto restart = axis_simplex(simplex.best().x);
    simplex.reset(std::move(restart));
    pass = simplex.run(history);
    out.iterations += pass.iterations;
    out.restarts = 1;
  }
  out.converged = pass.converged;
  out.x_min = simplex.best().x;
  out.f_min = simplex.best().f;
  return out;
}

OptResult minimize(const Objective& objective, std::span<const double> x0,
                   const SimplexConfig& config) {
  if (x0.empty()) throw DomainError("minimize: dimension must be at least 1");
  return minimize_from_simplex(objective, axis_simplex(x0), config);
}

}  // namespace gevstat
