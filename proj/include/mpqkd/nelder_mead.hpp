#pragma once

#include <functional>
#include <vector>

namespace mpqkd {

struct NelderMeadOptions {
  double initial_step = 0.05;
  /// Stop once every vertex is within `x_tolerance` of the best one...
  double x_tolerance = 1e-10;
  /// ...and the objective spread is below `f_tolerance` times |f_best|.
  double f_tolerance = 1e-15;
  int max_iterations = 1000;
  /// Box constraints. Vertices are projected onto [lower, upper].
  double lower = -1e300;
  double upper = 1e300;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes `objective` starting from `start` with the downhill simplex
/// method (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
NelderMeadResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& objective,
                                      std::vector<double> start,
                                      const NelderMeadOptions& options = {});

}  // namespace mpqkd
