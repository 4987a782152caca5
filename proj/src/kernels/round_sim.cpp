#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <omp.h>

#include "mpqkd/kernels.hpp"
#include "mpqkd/rng.hpp"

namespace mpqkd::kernels {
namespace {

// Inversion sampling; the means used here are at most a few photons.
std::uint16_t sample_poisson(Xoshiro256& rng, double mean) {
  if (mean <= 0.0) return 0;
  const double u = rng.uniform();
  double term = std::exp(-mean);
  double cdf = term;
  std::uint16_t k = 0;
  while (u >= cdf && k < 1000) {
    ++k;
    term *= mean / k;
    cdf += term;
    if (term == 0.0) break;
  }
  return k;
}

struct RoundConstants {
  double mu_a, mu_b, eta_a, eta_b, p_d;
};

void simulate_chunk(const RoundConstants& c, std::uint64_t begin, std::uint64_t end,
                    std::uint64_t seed, std::uint64_t chunk, std::vector<RoundRecord>& out) {
  Xoshiro256 rng(seed, chunk);
  for (std::uint64_t index = begin; index < end; ++index) {
    RoundRecord r;
    r.index = index;
    const std::uint64_t bits = rng();
    r.z.a = static_cast<int>(bits & 1u);
    r.z.b = static_cast<int>((bits >> 1) & 1u);
    r.phase_a = static_cast<std::uint8_t>((bits >> 2) % kPhaseSlices);
    r.phase_b = static_cast<std::uint8_t>((bits >> 7) % kPhaseSlices);
    r.n_a = r.z.a ? sample_poisson(rng, c.mu_a) : 0;
    r.n_b = r.z.b ? sample_poisson(rng, c.mu_b) : 0;

    int hits_left = 0;
    int hits_right = 0;
    auto route = [&](int photons, double eta) {
      for (int k = 0; k < photons; ++k) {
        if (rng.uniform() < eta) {
          (rng() >> 63) ? ++hits_right : ++hits_left;
        }
      }
    };
    route(r.n_a, c.eta_a);
    route(r.n_b, c.eta_b);
    const bool signal = hits_left + hits_right > 0;
    if (c.p_d > 0.0) {
      if (rng.uniform() < c.p_d) ++hits_left;
      if (rng.uniform() < c.p_d) ++hits_right;
    }
    const bool left = hits_left > 0;
    const bool right = hits_right > 0;
    if (left != right) {
      r.clicked = true;
      r.dark_only = !signal;
      r.detector = left ? Detector::Left : Detector::Right;
      out.push_back(r);
    }
  }
}

RoundConstants constants_of(const Scenario& s) {
  s.validate();
  return {s.mu_a, s.mu_b, s.link_a.eta, s.link_b.eta, s.params.p_d};
}

std::uint64_t chunk_count(std::uint64_t n_rounds) {
  return (n_rounds + kRoundsPerChunk - 1) / kRoundsPerChunk;
}

}  // namespace

SimulationRun simulate_rounds_serial(const Scenario& scenario, std::uint64_t n_rounds,
                                     std::uint64_t seed) {
  const RoundConstants c = constants_of(scenario);
  SimulationRun run;
  run.n_rounds = n_rounds;
  const std::uint64_t chunks = chunk_count(n_rounds);
  for (std::uint64_t k = 0; k < chunks; ++k) {
    const std::uint64_t begin = k * kRoundsPerChunk;
    simulate_chunk(c, begin, std::min(n_rounds, begin + kRoundsPerChunk), seed, k, run.clicks);
  }
  return run;
}

SimulationRun simulate_rounds_parallel(const Scenario& scenario, std::uint64_t n_rounds,
                                       std::uint64_t seed, int workers) {
  const RoundConstants c = constants_of(scenario);
  const auto chunks = static_cast<std::int64_t>(chunk_count(n_rounds));
  std::vector<std::vector<RoundRecord>> per_chunk(static_cast<std::size_t>(chunks));
  const int threads = workers > 0 ? workers : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t k = 0; k < chunks; ++k) {
    const auto begin = static_cast<std::uint64_t>(k) * kRoundsPerChunk;
    simulate_chunk(c, begin, std::min(n_rounds, begin + kRoundsPerChunk), seed,
                   static_cast<std::uint64_t>(k), per_chunk[static_cast<std::size_t>(k)]);
  }

  SimulationRun run;
  run.n_rounds = n_rounds;
  std::size_t total = 0;
  for (const auto& v : per_chunk) total += v.size();
  run.clicks.reserve(total);
  for (const auto& v : per_chunk) run.clicks.insert(run.clicks.end(), v.begin(), v.end());
  return run;
}

}  // namespace mpqkd::kernels
