#include "mpqkd/mc_sim.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "mpqkd/kernels.hpp"
#include "mpqkd/rng.hpp"

namespace mpqkd {
namespace {

enum class PartyBasis { Z, X, Zero };

PartyBasis party_basis(int z_first, int z_second) {
  switch (z_first + z_second) {
    case 0:
      return PartyBasis::Zero;
    case 1:
      return PartyBasis::Z;
    default:
      return PartyBasis::X;
  }
}

int phase_difference(std::uint8_t first, std::uint8_t second) {
  return ((static_cast<int>(second) - static_cast<int>(first)) % kPhaseSlices + kPhaseSlices) %
         kPhaseSlices;
}

}  // namespace

SimulationRun simulate_rounds(const Scenario& scenario, std::uint64_t n_rounds,
                              std::uint64_t seed, int workers) {
  if (n_rounds == 0) throw std::invalid_argument("n_rounds must be at least 1");
  if (workers == 1) return kernels::simulate_rounds_serial(scenario, n_rounds, seed);
  return kernels::simulate_rounds_parallel(scenario, n_rounds, seed, workers);
}

const char* to_string(PairBasis basis) {
  switch (basis) {
    case PairBasis::Z:
      return "Z";
    case PairBasis::X:
      return "X";
    case PairBasis::Zero:
      return "zero";
    case PairBasis::Discard:
      return "discard";
  }
  return "?";
}

std::vector<PairRecord> pair_clicks(std::span<const RoundRecord> clicks, PairingInterval lambda) {
  std::vector<PairRecord> pairs;
  const RoundRecord* pending = nullptr;
  for (const RoundRecord& r : clicks) {
    if (!r.clicked) continue;
    if (pending != nullptr) {
      if (r.index <= pending->index) throw std::invalid_argument("clicks must be ordered by index");
      if (lambda.is_infinite() || r.index - pending->index <= lambda.rounds()) {
        PairRecord p;
        p.first = *pending;
        p.second = r;
        pairs.push_back(p);
        pending = nullptr;
        continue;
      }
    }
    pending = &r;
  }
  return pairs;
}

std::vector<PairRecord> sift_and_map(std::vector<PairRecord> pairs, double e_d,
                                     std::uint64_t seed) {
  for (PairRecord& p : pairs) {
    const PartyBasis alice = party_basis(p.first.z.a, p.second.z.a);
    const PartyBasis bob = party_basis(p.first.z.b, p.second.z.b);
    p.kappa_a.reset();
    p.kappa_b.reset();
    p.error = false;

    if (alice != bob) {
      p.basis = PairBasis::Discard;
    } else if (alice == PartyBasis::Zero) {
      p.basis = PairBasis::Zero;
    } else if (alice == PartyBasis::Z) {
      p.basis = PairBasis::Z;
      p.kappa_a = p.first.z.a == 0 ? 0 : 1;
      p.kappa_b = p.first.z.b == 0 ? 1 : 0;
      p.error = *p.kappa_a != *p.kappa_b;
    } else {
      const int diff_a = phase_difference(p.first.phase_a, p.second.phase_a);
      const int diff_b = phase_difference(p.first.phase_b, p.second.phase_b);
      constexpr int half = kPhaseSlices / 2;
      if (diff_a % half != diff_b % half) {
        p.basis = PairBasis::Discard;
        continue;
      }
      p.basis = PairBasis::X;
      const int kappa_a = diff_a / half;
      const double flip_probability = (p.first.dark_only || p.second.dark_only) ? 0.5 : e_d;
      Xoshiro256 rng(seed, p.first.index);
      const bool misaligned = rng.uniform() < flip_probability;
      // Bob's raw bit is flipped again by the (L,R)/(R,L) rule, so the
      // post-flip bit differs from Alice's only through `misaligned`.
      const bool pattern_flip = p.first.detector != p.second.detector;
      const int raw_b = kappa_a ^ static_cast<int>(misaligned) ^ static_cast<int>(pattern_flip);
      p.kappa_a = kappa_a;
      p.kappa_b = raw_b ^ static_cast<int>(pattern_flip);
      p.error = misaligned;
    }
  }
  return pairs;
}

Estimate Estimate::from_counts(std::uint64_t successes, std::uint64_t trials) {
  Estimate e;
  e.successes = successes;
  e.trials = trials;
  if (trials > 0) {
    const double v = static_cast<double>(successes) / static_cast<double>(trials);
    e.value = v;
    e.std_error = std::sqrt(v * (1.0 - v) / static_cast<double>(trials));
  }
  return e;
}

EmpiricalStats estimate_statistics(std::span<const PairRecord> pairs, const SimulationRun& run) {
  EmpiricalStats s;
  s.n_rounds = run.n_rounds;
  s.clicks = run.clicks.size();
  s.pairs = pairs.size();
  std::uint64_t z_errors = 0;
  std::uint64_t z_single = 0;
  std::uint64_t x_errors = 0;
  for (const PairRecord& p : pairs) {
    switch (p.basis) {
      case PairBasis::Z:
        ++s.z_pairs;
        z_errors += p.error ? 1 : 0;
        z_single += (p.photons_a() == 1 && p.photons_b() == 1) ? 1 : 0;
        break;
      case PairBasis::X:
        ++s.x_pairs;
        x_errors += p.error ? 1 : 0;
        break;
      case PairBasis::Zero:
        ++s.zero_pairs;
        break;
      case PairBasis::Discard:
        ++s.discarded;
        break;
    }
  }
  s.p = Estimate::from_counts(s.clicks, s.n_rounds);
  // Without any click nothing downstream is defined.
  const std::uint64_t pair_trials = s.clicks > 0 ? s.n_rounds : 0;
  s.r_p = Estimate::from_counts(s.pairs, pair_trials);
  s.r_s = Estimate::from_counts(s.z_pairs, s.pairs);
  s.e_z = Estimate::from_counts(z_errors, s.z_pairs);
  s.q_bar = Estimate::from_counts(z_single, s.z_pairs);
  s.e_x = Estimate::from_counts(x_errors, s.x_pairs);
  return s;
}

void write_pair_trace(std::ostream& out, std::span<const PairRecord> pairs) {
  out << "i,j,basis,kappa_a,kappa_b,error\n";
  for (const PairRecord& p : pairs) {
    out << p.first.index << ',' << p.second.index << ',' << to_string(p.basis) << ',';
    if (p.kappa_a) out << *p.kappa_a;
    out << ',';
    if (p.kappa_b) out << *p.kappa_b;
    out << ',' << (p.error ? 1 : 0) << '\n';
  }
}

}  // namespace mpqkd
