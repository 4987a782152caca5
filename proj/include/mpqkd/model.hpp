#pragma once

#include "mpqkd/params.hpp"

namespace mpqkd {

/// How the per-round click probability depends on the intensities.
///
/// `Exact` uses 1 - (1 - 2 p_d) exp(-eta_a mu_a z_a - eta_b mu_b z_b).
/// `Linearized` keeps only the first-order terms, 2 p_d + eta_a mu_a z_a +
/// eta_b mu_b z_b. The closed-form optimal intensities are exact optima of
/// this variant when p_d = 0, so it serves as a test oracle.
enum class ClickModel { Exact, Linearized };

double transmittance_from_distance(double distance_km, const SystemParams& params);
double distance_from_transmittance(double eta, const SystemParams& params);

double click_prob_given_intensity(IntensityBits z, const Scenario& scenario,
                                  ClickModel model = ClickModel::Exact);
double click_prob_given_photons(int n_a, int n_b, const Scenario& scenario);

/// Average click probability over the four equiprobable intensity settings.
double round_click_prob(const Scenario& scenario, ClickModel model = ClickModel::Exact);

/// Expected number of pairs formed per round. p = 0 yields 0.
double pairing_rate(double p, PairingInterval lambda);

double z_pair_ratio(const Scenario& scenario, ClickModel model = ClickModel::Exact);
double z_bit_error(const Scenario& scenario, ClickModel model = ClickModel::Exact);
double single_photon_ratio(const Scenario& scenario, ClickModel model = ClickModel::Exact);

struct XBasisEstimate {
  double gain = 0.0;         // Y_(1,1)
  double phase_error = 0.0;  // e_(1,1)
};
XBasisEstimate x_gain_and_phase_error(const Scenario& scenario);

/// H(x) in bits, with H(0) = H(1) = 0.
double binary_entropy(double x);

/// e^-mean mean^k / k!, with 0^0 = 1.
double poisson_weight(double mean, int k);

struct KeyRateBreakdown {
  double p = 0.0;
  double r_p = 0.0;
  double r_s = 0.0;
  double q_bar_11 = 0.0;
  double e_z = 0.0;
  double Y_11 = 0.0;
  double e_11 = 0.0;
  double raw_R = 0.0;  // before clamping, may be negative
  double R = 0.0;
};

/// R = r_p r_s { q_11 [1 - H(e_11)] - f H(e_z) }, clamped at zero.
KeyRateBreakdown key_rate(const Scenario& scenario, ClickModel model = ClickModel::Exact);

}  // namespace mpqkd
