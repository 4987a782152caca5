#pragma once

#include "mpqkd/model.hpp"
#include "mpqkd/params.hpp"

namespace mpqkd {

/// Maximize R over (mu_a, mu_b) in (0, 1]^2 for fixed L_a, delta = eta_a/eta_b
/// and pairing interval.
struct OptimizationProblem {
  double L_a = 100.0;
  double delta = 1.0;
  PairingInterval lambda = PairingInterval::infinite();
  SystemParams params;
  ClickModel model = ClickModel::Exact;

  static OptimizationProblem from_distances(double L_a, double L_b, PairingInterval lambda,
                                            const SystemParams& params = {});

  /// L_b = L_a + 10 log10(delta) / alpha.
  double L_b() const;
  double distance_difference() const { return L_b() - L_a; }

  /// Scenario at the given intensities (decoys left at zero).
  Scenario scenario(double mu_a, double mu_b) const;

  void validate() const;
};

struct SearchOptions {
  int grid_resolution = 64;
  double min_intensity = 1e-6;
  int max_iterations = 1000;
  double x_tolerance = 1e-10;
  double f_tolerance = 1e-15;
  /// Threads for the grid stage: 1 runs the serial kernel, 0 lets OpenMP decide.
  int workers = 1;
};

struct OptimumReport {
  double mu_a_star = 0.0;
  double mu_b_star = 0.0;
  double R_star = 0.0;
  int iterations = 0;
  bool converged = false;
  int grid_resolution = 0;
  KeyRateBreakdown breakdown;
};

/// Key rate for the problem at (mu_a, mu_b); degenerate points count as zero.
double objective_rate(const OptimizationProblem& problem, double mu_a, double mu_b);

/// Grid localization followed by Nelder-Mead refinement. If the key rate is
/// zero on the whole grid the report has converged = false and R_star = 0.
OptimumReport optimize_intensities(const OptimizationProblem& problem,
                                   const SearchOptions& options = {});

struct IntensityPair {
  double mu_a = 0.0;
  double mu_b = 0.0;
};

enum class AsymptoticRegime { LambdaInfinite, LambdaOne };

/// Closed-form optimum of the linearized, dark-count-free model.
IntensityPair closed_form_asymptotic(double delta, AsymptoticRegime regime);

/// Whether the repeaterless bound is computed on the bare fiber or on the
/// fiber times the detector efficiency.
enum class PlobConvention { ChannelOnly, IncludeDetector };

/// -log2(1 - eta) for the end-to-end transmittance over `total_distance_km`.
/// Returns +infinity when eta = 1.
double plob_bound(double total_distance_km, const SystemParams& params, PlobConvention convention);

/// Pads Alice's arm to L_b and optimizes the resulting symmetric link.
OptimumReport adding_fiber_optimum(const OptimizationProblem& problem,
                                   const SearchOptions& options = {});
double adding_fiber_rate(const OptimizationProblem& problem, const SearchOptions& options = {});

}  // namespace mpqkd
