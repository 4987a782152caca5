#include "mpqkd/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mpqkd {
namespace {

struct Vertex {
  std::vector<double> x;
  double f;
};

}  // namespace

NelderMeadResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& objective,
                                      std::vector<double> start,
                                      const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  auto project = [&](std::vector<double>& x) {
    for (double& v : x) v = std::clamp(v, options.lower, options.upper);
  };
  auto make_vertex = [&](std::vector<double> x) {
    project(x);
    const double f = objective(x);
    return Vertex{std::move(x), f};
  };

  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  simplex.push_back(make_vertex(start));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = simplex.front().x;
    // Step inward if the start sits on the upper bound.
    x[i] += (x[i] + options.initial_step <= options.upper) ? options.initial_step
                                                           : -options.initial_step;
    simplex.push_back(make_vertex(std::move(x)));
  }

  auto combine = [&](const std::vector<double>& a, const std::vector<double>& b, double t) {
    // a + t (b - a)
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + t * (b[i] - a[i]);
    return out;
  };

  NelderMeadResult result;
  int iteration = 0;
  for (; iteration < options.max_iterations; ++iteration) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
    const Vertex& best = simplex.front();
    const Vertex& worst = simplex.back();

    double spread_x = 0.0;
    for (const Vertex& v : simplex) {
      for (std::size_t i = 0; i < n; ++i) {
        spread_x = std::max(spread_x, std::abs(v.x[i] - best.x[i]));
      }
    }
    const double spread_f = std::abs(worst.f - best.f);
    if (spread_x <= options.x_tolerance &&
        spread_f <= options.f_tolerance * std::max(std::abs(best.f), 1e-300)) {
      result.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(n);
    }

    Vertex reflected = make_vertex(combine(centroid, worst.x, -1.0));
    if (reflected.f < best.f) {
      Vertex expanded = make_vertex(combine(centroid, worst.x, -2.0));
      simplex.back() = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
      continue;
    }
    if (reflected.f < simplex[n - 1].f) {
      simplex.back() = std::move(reflected);
      continue;
    }
    const bool outside = reflected.f < worst.f;
    Vertex contracted = make_vertex(
        outside ? combine(centroid, reflected.x, 0.5) : combine(centroid, worst.x, 0.5));
    if (contracted.f < std::min(reflected.f, worst.f)) {
      simplex.back() = std::move(contracted);
      continue;
    }
    for (std::size_t v = 1; v <= n; ++v) {
      simplex[v] = make_vertex(combine(simplex.front().x, simplex[v].x, 0.5));
    }
  }

  const auto it = std::min_element(simplex.begin(), simplex.end(),
                                   [](const Vertex& l, const Vertex& r) { return l.f < r.f; });
  result.x = it->x;
  result.value = it->f;
  result.iterations = iteration;
  return result;
}

}  // namespace mpqkd
