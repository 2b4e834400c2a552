#pragma once

#include <functional>
#include <span>
#include <vector>

namespace gevstat {

// Nelder-Mead coefficients and stopping rules.
struct SimplexConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  int max_iter = 5000;
  double f_tol = 1e-10;  // relative spread of vertex values
  double x_tol = 1e-8;   // simplex diameter (max-norm)
  bool record_history = false;

  void validate() const;
};

struct OptResult {
  std::vector<double> x_min;
  double f_min = 0.0;
  int iterations = 0;
  bool converged = false;
  int restarts = 0;
  std::vector<double> history;  // best vertex value per iteration, when requested
};

using Objective = std::function<double(std::span<const double>)>;

// Derivative-free Nelder-Mead minimization. The initial simplex is x0 plus one
// vertex per axis displaced by max(0.05*|x0_i|, 0.00025). If the first pass
// stops at max_iter without converging, one restart is made from the incumbent.
// Throws DomainError if x0 is empty or the objective is not finite at x0.
[[nodiscard]] OptResult minimize(const Objective& objective, std::span<const double> x0,
                                 const SimplexConfig& config = {});

// Same, starting from an explicit simplex of d+1 vertices.
[[nodiscard]] OptResult minimize_from_simplex(const Objective& objective,
                                              std::vector<std::vector<double>> vertices,
                                              const SimplexConfig& config = {});

}  // namespace gevstat
