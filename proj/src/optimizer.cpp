#include "mpqkd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mpqkd/kernels.hpp"
#include "mpqkd/nelder_mead.hpp"

namespace mpqkd {

OptimizationProblem OptimizationProblem::from_distances(double L_a, double L_b,
                                                        PairingInterval lambda,
                                                        const SystemParams& params) {
  OptimizationProblem p;
  p.L_a = L_a;
  p.delta = std::pow(10.0, params.alpha * (L_b - L_a) / 10.0);
  p.lambda = lambda;
  p.params = params;
  return p;
}

double OptimizationProblem::L_b() const { return L_a + 10.0 * std::log10(delta) / params.alpha; }

Scenario OptimizationProblem::scenario(double mu_a, double mu_b) const {
  Scenario s;
  s.link_a = Link::from_distance(L_a, params);
  // eta_b = eta_a / delta exactly, rather than via the rounded L_b.
  s.link_b = Link{L_b(), s.link_a.eta / delta};
  s.mu_a = mu_a;
  s.mu_b = mu_b;
  s.lambda = lambda;
  s.params = params;
  return s;
}

void OptimizationProblem::validate() const {
  params.validate();
  if (!(L_a > 0.0)) throw std::invalid_argument("L_a must be positive");
  if (!(delta >= 1.0)) throw std::invalid_argument("delta must be at least 1");
}

double objective_rate(const OptimizationProblem& problem, double mu_a, double mu_b) {
  try {
    return key_rate(problem.scenario(mu_a, mu_b), problem.model).R;
  } catch (const ModelDegenerateError&) {
    return 0.0;
  }
}

OptimumReport optimize_intensities(const OptimizationProblem& problem,
                                   const SearchOptions& options) {
  problem.validate();
  const int n = options.grid_resolution;
  if (n < 2) throw std::invalid_argument("grid resolution must be at least 2");

  const std::vector<double> grid = options.workers == 1
                                       ? kernels::rate_grid_serial(problem, n)
                                       : kernels::rate_grid_parallel(problem, n, options.workers);

  // Row-major scan with mu_a ascending; a later point must beat the incumbent
  // by more than a relative 1e-15 to replace it, so ties keep the smaller mu_a.
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (grid[k] - grid[best] > 1e-15 * std::abs(grid[best])) best = k;
  }
  const double step = 1.0 / n;
  double mu_a = (static_cast<double>(best / n) + 1.0) * step;
  double mu_b = (static_cast<double>(best % n) + 1.0) * step;

  OptimumReport report;
  report.grid_resolution = n;
  if (!(grid[best] > 0.0)) {
    report.mu_a_star = mu_a;
    report.mu_b_star = mu_b;
    report.converged = false;
    return report;
  }

  const double scale = grid[best];
  auto objective = [&](const std::vector<double>& x) {
    return -objective_rate(problem, x[0], x[1]) / scale;
  };
  NelderMeadOptions nm;
  nm.initial_step = step;
  nm.x_tolerance = options.x_tolerance;
  nm.f_tolerance = options.f_tolerance;
  nm.max_iterations = options.max_iterations;
  nm.lower = options.min_intensity;
  nm.upper = 1.0;

  // A projected simplex can collapse onto the boundary; restarting from the
  // incumbent with a fresh simplex recovers the lost direction.
  std::vector<double> x{mu_a, mu_b};
  double value = objective(x);
  bool converged = false;
  for (int restart = 0; restart < 4; ++restart) {
    NelderMeadResult r = nelder_mead_minimize(objective, x, nm);
    report.iterations += r.iterations;
    const double moved = std::max(std::abs(r.x[0] - x[0]), std::abs(r.x[1] - x[1]));
    const bool improved = r.value < value;
    if (improved) {
      x = r.x;
      value = r.value;
    }
    converged = r.converged;
    if (!improved || moved <= 10.0 * options.x_tolerance) break;
    nm.initial_step = std::max(step / 8.0, 1e-4);
  }

  report.mu_a_star = x[0];
  report.mu_b_star = x[1];
  report.breakdown = key_rate(problem.scenario(x[0], x[1]), problem.model);
  report.R_star = report.breakdown.R;
  report.converged = converged;
  return report;
}

IntensityPair closed_form_asymptotic(double delta, AsymptoticRegime regime) {
  if (!(delta >= 1.0)) throw std::domain_error("delta must be at least 1");
  if (regime == AsymptoticRegime::LambdaOne) return {1.0, 1.0};
  if (delta == 1.0) return {0.5, 0.5};
  const double root = std::sqrt(delta);
  return {(root - 1.0) / (delta - 1.0), (delta - root) / (delta - 1.0)};
}

double plob_bound(double total_distance_km, const SystemParams& params,
                  PlobConvention convention) {
  if (!(total_distance_km >= 0.0)) throw std::domain_error("distance must be non-negative");
  double eta = std::pow(10.0, -params.alpha * total_distance_km / 10.0);
  if (convention == PlobConvention::IncludeDetector) eta *= params.eta_d;
  if (eta >= 1.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-eta) / std::log(2.0);
}

OptimumReport adding_fiber_optimum(const OptimizationProblem& problem,
                                   const SearchOptions& options) {
  problem.validate();
  OptimizationProblem padded = problem;
  padded.L_a = problem.L_b();
  padded.delta = 1.0;
  return optimize_intensities(padded, options);
}

double adding_fiber_rate(const OptimizationProblem& problem, const SearchOptions& options) {
  return adding_fiber_optimum(problem, options).R_star;
}

}  // namespace mpqkd
