#include "mpqkd/model.hpp"

#include <cmath>
#include <stdexcept>

namespace mpqkd {
namespace {

// Click probabilities for the four intensity settings, indexed [z_a][z_b].
struct ClickTable {
  double by_setting[2][2];
};

ClickTable click_table(const Scenario& s, ClickModel model) {
  ClickTable t{};
  for (int za = 0; za < 2; ++za) {
    for (int zb = 0; zb < 2; ++zb) {
      t.by_setting[za][zb] = click_prob_given_intensity({za, zb}, s, model);
    }
  }
  return t;
}

// Sum over the four effective Z combinations [z_i, z_j] with z_i xor z_j = 11
// of Pr(C|z_i) Pr(C|z_j).
double effective_pair_sum(const double (&c)[2][2]) {
  return 2.0 * (c[0][0] * c[1][1] + c[0][1] * c[1][0]);
}

double photon_pair_sum(const Scenario& s) {
  double c[2][2];
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) c[a][b] = click_prob_given_photons(a, b, s);
  }
  return effective_pair_sum(c);
}

struct ZPairStats {
  double p;
  double r_s;
  double e_z;
  double q_bar_11;
};

ZPairStats z_pair_stats(const Scenario& s, ClickModel model) {
  const ClickTable t = click_table(s, model);
  const auto& c = t.by_setting;
  const double p = 0.25 * (c[0][0] + c[0][1] + c[1][0] + c[1][1]);
  if (!(p > 0.0)) throw ModelDegenerateError("round click probability is zero");
  const double pair_sum = effective_pair_sum(c);
  const double r_s = pair_sum / (16.0 * p * p);
  if (!(r_s > 0.0)) throw ModelDegenerateError("Z-pair ratio is zero");
  const double e_z = 2.0 * c[0][0] * c[1][1] / pair_sum;
  const double q_bar =
      poisson_weight(s.mu_a, 1) * poisson_weight(s.mu_b, 1) * photon_pair_sum(s) / pair_sum;
  return {p, r_s, e_z, q_bar};
}

}  // namespace

double transmittance_from_distance(double distance_km, const SystemParams& params) {
  if (!(distance_km >= 0.0)) throw std::domain_error("distance must be non-negative");
  return params.eta_d * std::pow(10.0, -params.alpha * distance_km / 10.0);
}

double distance_from_transmittance(double eta, const SystemParams& params) {
  if (!(eta > 0.0 && eta <= params.eta_d)) {
    throw std::domain_error("transmittance must lie in (0, eta_d]");
  }
  return 10.0 * std::log10(params.eta_d / eta) / params.alpha;
}

double click_prob_given_intensity(IntensityBits z, const Scenario& s, ClickModel model) {
  const double mean = s.link_a.eta * s.mu_a * z.a + s.link_b.eta * s.mu_b * z.b;
  const double p_d = s.params.p_d;
  if (model == ClickModel::Linearized) return 2.0 * p_d + mean;
  // 1 - (1 - 2 p_d) e^-mean, written to keep precision for small means.
  return -std::expm1(-mean) + 2.0 * p_d * std::exp(-mean);
}

double click_prob_given_photons(int n_a, int n_b, const Scenario& s) {
  if (n_a < 0 || n_b < 0) throw std::domain_error("photon counts must be non-negative");
  const double log_survive =
      n_a * std::log1p(-s.link_a.eta) + n_b * std::log1p(-s.link_b.eta);
  return -std::expm1(log_survive) + 2.0 * s.params.p_d * std::exp(log_survive);
}

double round_click_prob(const Scenario& s, ClickModel model) {
  const ClickTable t = click_table(s, model);
  const auto& c = t.by_setting;
  return 0.25 * (c[0][0] + c[0][1] + c[1][0] + c[1][1]);
}

double pairing_rate(double p, PairingInterval lambda) {
  if (p < 0.0 || p > 1.0 || std::isnan(p)) throw std::domain_error("p must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (lambda.is_infinite()) return p / 2.0;
  // 1 - (1 - p)^lambda
  const double reach =
      p == 1.0 ? 1.0
               : -std::expm1(static_cast<double>(lambda.rounds()) * std::log1p(-p));
  return p * reach / (1.0 + reach);
}

double z_pair_ratio(const Scenario& s, ClickModel model) { return z_pair_stats(s, model).r_s; }

double z_bit_error(const Scenario& s, ClickModel model) { return z_pair_stats(s, model).e_z; }

double single_photon_ratio(const Scenario& s, ClickModel model) {
  return z_pair_stats(s, model).q_bar_11;
}

XBasisEstimate x_gain_and_phase_error(const Scenario& s) {
  const double ea = s.link_a.eta;
  const double eb = s.link_b.eta;
  const double pd = s.params.p_d;
  const double e0 = SystemParams::e_0;
  const double gain = (1.0 - pd) * (1.0 - pd) *
                      (ea * eb / 2.0 + (2.0 * ea + 2.0 * eb - 3.0 * ea * eb) * pd +
                       4.0 * (1.0 - ea) * (1.0 - eb) * pd * pd);
  if (!(gain > 0.0)) throw ModelDegenerateError("single-photon gain is zero");
  const double err =
      (e0 * gain - (e0 - s.params.e_d) * (1.0 - pd * pd) * ea * eb / 2.0) / gain;
  return {gain, err};
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("binary entropy argument outside [0, 1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double poisson_weight(double mean, int k) {
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

KeyRateBreakdown key_rate(const Scenario& s, ClickModel model) {
  const ZPairStats z = z_pair_stats(s, model);
  const XBasisEstimate x = x_gain_and_phase_error(s);
  KeyRateBreakdown out;
  out.p = z.p;
  out.r_p = pairing_rate(z.p, s.lambda);
  out.r_s = z.r_s;
  out.q_bar_11 = z.q_bar_11;
  out.e_z = z.e_z;
  out.Y_11 = x.gain;
  out.e_11 = x.phase_error;
  out.raw_R = out.r_p * out.r_s *
              (out.q_bar_11 * (1.0 - binary_entropy(out.e_11)) -
               s.params.f * binary_entropy(out.e_z));
  out.R = out.raw_R > 0.0 ? out.raw_R : 0.0;
  return out;
}

}  // namespace mpqkd
