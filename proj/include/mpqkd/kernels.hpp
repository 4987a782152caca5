#pragma once

// Data-parallel kernels. Each kernel has a serial reference implementation and
// an OpenMP implementation that must produce bit-identical output; the tests
// compare the two and bench/ times them against each other.

#include <cstdint>
#include <vector>

#include "mpqkd/mc_sim.hpp"
#include "mpqkd/optimizer.hpp"

namespace mpqkd::kernels {

/// Key rate on the uniform grid mu = (i + 1) / resolution, row-major with
/// mu_a as the slow index.
std::vector<double> rate_grid_serial(const OptimizationProblem& problem, int resolution);
std::vector<double> rate_grid_parallel(const OptimizationProblem& problem, int resolution,
                                       int workers = 0);

/// Rounds are simulated in fixed-size chunks, each with its own RNG
/// substream, so the result does not depend on the thread count.
inline constexpr std::uint64_t kRoundsPerChunk = 1u << 16;

SimulationRun simulate_rounds_serial(const Scenario& scenario, std::uint64_t n_rounds,
                                     std::uint64_t seed);
SimulationRun simulate_rounds_parallel(const Scenario& scenario, std::uint64_t n_rounds,
                                       std::uint64_t seed, int workers = 0);

}  // namespace mpqkd::kernels
