#pragma once

#include <compare>
#include <map>
#include <vector>

#include "mpqkd/params.hpp"

namespace mpqkd {

/// Three intensities {0, nu, mu} per party. Both parties share the selection
/// probabilities. `k_max` is the per-arm photon cutoff of the bounding LP;
/// `forward_k_max` is the cutoff used when generating expected observables.
struct DecoyConfig {
  double mu_a = 0.5;
  double nu_a = 0.05;
  double mu_b = 0.5;
  double nu_b = 0.05;
  double s_0 = 0.4995;
  double s_nu = 1e-3;
  double s_mu = 0.4995;
  int k_max = 10;
  int forward_k_max = 40;

  /// Intensities from the scenario, default selection probabilities.
  static DecoyConfig from_scenario(const Scenario& scenario);

  void validate() const;
};

/// Two-round intensity sum of one party.
enum class SumClass { Zero, Nu, Mu, TwoNu, NuMu, TwoMu };

struct PairIntensityVector {
  SumClass a = SumClass::Zero;
  SumClass b = SumClass::Zero;

  friend auto operator<=>(const PairIntensityVector&, const PairIntensityVector&) = default;
};

double sum_intensity(SumClass c, double nu, double mu);
double sum_a(const PairIntensityVector& v, const DecoyConfig& config);
double sum_b(const PairIntensityVector& v, const DecoyConfig& config);

/// Sum classes of Z pairs (one round vacuum) and X pairs (both rounds non-vacuum).
inline constexpr SumClass kZClasses[] = {SumClass::Zero, SumClass::Nu, SumClass::Mu};
inline constexpr SumClass kXClasses[] = {SumClass::Zero, SumClass::TwoNu, SumClass::NuMu,
                                         SumClass::TwoMu};

/// q of every vector; sums to 1.
std::map<PairIntensityVector, double> pair_intensity_prior(const DecoyConfig& config);

/// Product of two Poisson weights, with 0^0 = 1.
double poisson_pair_prob(int k_a, int k_b, double sum_a, double sum_b);

/// Pr(vector | k) over all vectors. Throws std::domain_error if k cannot occur.
std::map<PairIntensityVector, double> posterior_intensity_given_photons(
    int k_a, int k_b, const DecoyConfig& config);

/// Per-photon-number yields m_k and errors e_k of both pair types, for
/// k_a, k_b in [0, cutoff].
struct PhotonYields {
  int cutoff = 0;
  std::vector<double> m_z, e_z, m_x, e_x;

  std::size_t index(int k_a, int k_b) const {
    return static_cast<std::size_t>(k_a) * static_cast<std::size_t>(cutoff + 1) +
           static_cast<std::size_t>(k_b);
  }
};

PhotonYields ground_truth_yields(const Scenario& scenario, int cutoff);

struct ObservedVector {
  PairIntensityVector vec;
  double sum_a = 0.0;
  double sum_b = 0.0;
  double prior = 0.0;
  double total = 0.0;  // E[m'] = sum_k Pr(k | vec) m_k
  double error = 0.0;  // E[e']
};

/// Observables of every vector with nonzero prior.
struct DecoyObservables {
  std::vector<ObservedVector> z;
  std::vector<ObservedVector> x;

  const ObservedVector* find_z(PairIntensityVector v) const;
};

/// Throws PrecisionError if the Poisson mass beyond `forward_k_max` exceeds 1e-12.
DecoyObservables expected_observables(const Scenario& scenario, const DecoyConfig& config);

struct ProjectedBound {
  PairIntensityVector vec;
  double m_11_lower = 0.0;
  double e_11_upper = 0.0;
};

struct DecoyBounds {
  double m_z_11_lower = 0.0;
  double e_z_11_upper = 0.0;
  double m_x_11_lower = 0.0;
  double e_x_11_upper = 0.0;
  std::vector<ProjectedBound> z_by_vector;
  std::vector<ProjectedBound> x_by_vector;

  const ProjectedBound* find_z(PairIntensityVector v) const;
};

/// Minimizes m_11 and maximizes e_11 subject to the observables, 0 <= e <= m <= 1
/// and a tail slack per observable bounded by its Poisson mass beyond k_max.
/// Throws InconsistencyError when the observables are infeasible.
DecoyBounds bound_single_photon(const DecoyObservables& observables, const DecoyConfig& config);

struct DecoyRate {
  double R = 0.0;
  double raw_R = 0.0;
  double phase_error_upper = 0.5;
  bool degenerate = false;  // m_x_11_lower was zero
};

/// m_L [1 - H(e_x_U / m_x_L)] - f m H(e), with m_L the projection onto the
/// signal vector (mu_a, mu_b). Clamped at zero.
DecoyRate decoy_key_rate(const DecoyBounds& bounds, double observed_m_z, double observed_e_z,
                         const SystemParams& params);

/// Converts a decoy rate into key per round using the scenario's click and
/// pairing probabilities.
double decoy_rate_per_round(const DecoyRate& rate, const Scenario& scenario);

}  // namespace mpqkd
