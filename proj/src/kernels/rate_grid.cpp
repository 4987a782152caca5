#include <omp.h>

#include "mpqkd/kernels.hpp"

namespace mpqkd::kernels {

std::vector<double> rate_grid_serial(const OptimizationProblem& problem, int resolution) {
  const auto n = static_cast<std::size_t>(resolution);
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mu_a = static_cast<double>(i + 1) / resolution;
    for (std::size_t j = 0; j < n; ++j) {
      const double mu_b = static_cast<double>(j + 1) / resolution;
      values[i * n + j] = objective_rate(problem, mu_a, mu_b);
    }
  }
  return values;
}

std::vector<double> rate_grid_parallel(const OptimizationProblem& problem, int resolution,
                                       int workers) {
  const auto n = static_cast<std::int64_t>(resolution);
  std::vector<double> values(static_cast<std::size_t>(n * n));
  const int threads = workers > 0 ? workers : omp_get_max_threads();

#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t k = 0; k < n * n; ++k) {
    const double mu_a = static_cast<double>(k / n + 1) / resolution;
    const double mu_b = static_cast<double>(k % n + 1) / resolution;
    values[static_cast<std::size_t>(k)] = objective_rate(problem, mu_a, mu_b);
  }
  return values;
}

}  // namespace mpqkd::kernels
