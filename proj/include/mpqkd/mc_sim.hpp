#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mpqkd/params.hpp"

namespace mpqkd {

enum class Detector : std::uint8_t { None, Left, Right };

/// Number of phase slices over [0, 2 pi). Half of them span [0, pi), which is
/// the resolution at which alignment angles are compared.
inline constexpr int kPhaseSlices = 32;

struct RoundRecord {
  std::uint64_t index = 0;
  IntensityBits z;
  std::uint16_t n_a = 0;  // photons emitted by Alice
  std::uint16_t n_b = 0;
  std::uint8_t phase_a = 0;  // slice in [0, kPhaseSlices)
  std::uint8_t phase_b = 0;
  bool clicked = false;
  bool dark_only = false;  // click produced without any detected photon
  Detector detector = Detector::None;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

/// Output of the round simulation. Only clicked rounds are stored; the
/// remaining rounds are represented by `n_rounds`.
struct SimulationRun {
  std::uint64_t n_rounds = 0;
  std::vector<RoundRecord> clicks;
};

/// Simulates the preparation and measurement steps. Each round draws the
/// intensity bits and phases uniformly, Poisson photon numbers, per-photon
/// survival, a uniformly random detector per surviving photon, and
/// independent dark counts on each detector. A round clicks iff exactly one
/// detector fires. Deterministic in (scenario, n_rounds, seed) regardless of
/// `workers` (0 = OpenMP default, 1 = serial).
SimulationRun simulate_rounds(const Scenario& scenario, std::uint64_t n_rounds,
                              std::uint64_t seed, int workers = 0);

enum class PairBasis : std::uint8_t { Z, X, Zero, Discard };

const char* to_string(PairBasis basis);

struct PairRecord {
  RoundRecord first;
  RoundRecord second;
  PairBasis basis = PairBasis::Discard;
  std::optional<int> kappa_a;
  std::optional<int> kappa_b;  // after the detector-pattern flip
  bool error = false;

  int photons_a() const { return first.n_a + second.n_a; }
  int photons_b() const { return first.n_b + second.n_b; }
};

/// Greedy left-to-right pairing: a pending click is paired with the next
/// click if their index gap is at most lambda, otherwise it is dropped and the
/// new click becomes pending. `clicks` must be ordered by index.
std::vector<PairRecord> pair_clicks(std::span<const RoundRecord> clicks, PairingInterval lambda);

/// Basis sifting and key mapping.
///
/// Z pairs map (0, mu) to kappa_a = 0 / kappa_b = 1 and (mu, 0) to 1 / 0.
/// X pairs derive kappa_a and the alignment angle from Alice's phase slices,
/// and are discarded when Bob's angle slice differs. Interference is not
/// simulated: Bob's post-flip bit equals kappa_a up to a misalignment error
/// drawn with probability e_d, or 1/2 if either click was a pure dark count.
/// The error draws use substreams of `seed` keyed by the pair's first index.
std::vector<PairRecord> sift_and_map(std::vector<PairRecord> pairs, double e_d,
                                     std::uint64_t seed);

/// A binomial proportion. `value` is empty when `trials` is zero.
struct Estimate {
  std::optional<double> value;
  double std_error = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;

  static Estimate from_counts(std::uint64_t successes, std::uint64_t trials);
  bool defined() const { return value.has_value(); }
};

struct EmpiricalStats {
  Estimate p;      // clicks / rounds
  Estimate r_p;    // pairs / rounds
  Estimate r_s;    // Z pairs / pairs
  Estimate e_z;    // erroneous Z pairs / Z pairs
  Estimate q_bar;  // Z pairs with one photon per party / Z pairs
  Estimate e_x;    // erroneous X pairs / kept X pairs

  std::uint64_t n_rounds = 0;
  std::uint64_t clicks = 0;
  std::uint64_t pairs = 0;
  std::uint64_t z_pairs = 0;
  std::uint64_t x_pairs = 0;
  std::uint64_t zero_pairs = 0;
  std::uint64_t discarded = 0;
};

EmpiricalStats estimate_statistics(std::span<const PairRecord> pairs, const SimulationRun& run);

/// One CSV row per pair: i,j,basis,kappa_a,kappa_b,error (header included).
void write_pair_trace(std::ostream& out, std::span<const PairRecord> pairs);

}  // namespace mpqkd
