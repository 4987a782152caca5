#include <doctest.h>

#include <cmath>

#include "mpqkd/model.hpp"

using namespace mpqkd;

namespace {

SystemParams no_dark() {
  SystemParams p;
  p.p_d = 0.0;
  return p;
}

// Arms given directly by transmittance; intensities 1 so eta * mu = eta.
Scenario by_eta(double eta_a, double eta_b, SystemParams params = {}) {
  Scenario s;
  s.link_a = Link{0.0, eta_a};
  s.link_b = Link{0.0, eta_b};
  s.mu_a = 1.0;
  s.mu_b = 1.0;
  s.params = params;
  return s;
}

}  // namespace

TEST_CASE("transmittance and distance") {
  const SystemParams p;
  CHECK(transmittance_from_distance(0.0, p) == 0.2);
  CHECK(transmittance_from_distance(100.0, p) == doctest::Approx(0.002).epsilon(1e-14));
  CHECK(transmittance_from_distance(50.0, p) == doctest::Approx(0.02).epsilon(1e-14));
  CHECK(distance_from_transmittance(0.2, p) == 0.0);
  CHECK(distance_from_transmittance(0.002, p) == doctest::Approx(100.0).epsilon(1e-14));
  for (double x : {1.0, 37.5, 250.0}) {
    CHECK(distance_from_transmittance(transmittance_from_distance(x, p), p) ==
          doctest::Approx(x).epsilon(1e-12));
  }
  CHECK_THROWS_AS(transmittance_from_distance(-1.0, p), std::domain_error);
  CHECK_THROWS_AS(distance_from_transmittance(0.0, p), std::domain_error);
  CHECK_THROWS_AS(distance_from_transmittance(0.3, p), std::domain_error);
}

TEST_CASE("click probability given intensity") {
  Scenario s = by_eta(0.001, 0.002, no_dark());
  CHECK(click_prob_given_intensity({0, 0}, s) == 0.0);
  CHECK(click_prob_given_intensity({1, 1}, s) ==
        doctest::Approx(0.002995504496627024).epsilon(1e-14));
  s.params.p_d = 1.2e-8;
  CHECK(click_prob_given_intensity({0, 0}, s) == doctest::Approx(2.4e-8).epsilon(1e-12));
  CHECK(click_prob_given_intensity({1, 0}, s, ClickModel::Linearized) ==
        doctest::Approx(0.001 + 2.4e-8).epsilon(1e-14));
}

TEST_CASE("click probability given photons") {
  const Scenario s = by_eta(0.01, 0.001, no_dark());
  CHECK(click_prob_given_photons(0, 0, s) == 0.0);
  CHECK(click_prob_given_photons(1, 0, s) == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(click_prob_given_photons(2, 1, s) == doctest::Approx(0.0208801).epsilon(1e-12));
  CHECK_THROWS_AS(click_prob_given_photons(-1, 0, s), std::domain_error);
}

TEST_CASE("round click probability") {
  Scenario s = by_eta(0.2, 0.2, no_dark());
  s.mu_a = s.mu_b = 0.0;
  CHECK(round_click_prob(s) == 0.0);

  s = by_eta(1e-3, 1e-3, no_dark());
  CHECK(round_click_prob(s) == doctest::Approx(1e-3).epsilon(1e-3));

  s.params.p_d = 0.5;
  CHECK(round_click_prob(s) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pairing rate") {
  CHECK(pairing_rate(0.5, PairingInterval::infinite()) == 0.25);
  CHECK(pairing_rate(0.5, PairingInterval(1)) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  const double r = pairing_rate(0.01, PairingInterval(100));
  CHECK(r == doctest::Approx(0.0038799278268504675).epsilon(1e-13));
  CHECK(r > 0.01 * 0.01 / 1.01);
  CHECK(r < 0.005);
  CHECK(pairing_rate(0.0, PairingInterval(10)) == 0.0);
  for (double q : {0.3, 0.5, 0.77, 0.9}) {
    CHECK(pairing_rate(q, PairingInterval(1000000)) <= pairing_rate(q, PairingInterval::infinite()));
  }
  CHECK_THROWS_AS(pairing_rate(-0.1, PairingInterval(10)), std::domain_error);
}

TEST_CASE("Z-pair ratio") {
  const Scenario s = by_eta(1e-3, 1e-3, no_dark());
  CHECK(z_pair_ratio(s) == doctest::Approx(0.125).epsilon(2e-3));
  const double pl = round_click_prob(s, ClickModel::Linearized);
  CHECK(z_pair_ratio(s, ClickModel::Linearized) ==
        doctest::Approx(1e-3 * 1e-3 / (8.0 * pl * pl)).epsilon(1e-14));
  CHECK(z_pair_ratio(s) == doctest::Approx(z_pair_ratio(s.swapped())).epsilon(1e-15));

  Scenario dark = by_eta(0.1, 0.1, no_dark());
  dark.mu_a = dark.mu_b = 0.0;
  CHECK_THROWS_AS(z_pair_ratio(dark), ModelDegenerateError);
}

TEST_CASE("Z-basis bit error") {
  CHECK(z_bit_error(by_eta(1e-3, 2e-3, no_dark())) == 0.0);
  const Scenario s = Scenario::from_distances(100.0, 100.0, 0.5, 0.5, PairingInterval::infinite());
  const double e = z_bit_error(s);
  CHECK(e > 0.0);
  CHECK(e < 1e-4);
  // Linearized: error pairs are [00, 11], weight 2 p_d (eta mu_a + eta mu_b + 2 p_d).
  Scenario lin = by_eta(1e-3, 1e-3);
  const double pd = lin.params.p_d;
  const double c00 = 2 * pd, c11 = 2e-3 + 2 * pd, c10 = 1e-3 + 2 * pd;
  CHECK(z_bit_error(lin, ClickModel::Linearized) ==
        doctest::Approx(c00 * c11 / (c00 * c11 + c10 * c10)).epsilon(1e-12));
}

TEST_CASE("single-photon pair ratio") {
  Scenario s = by_eta(1e-3, 2e-3, no_dark());
  s.mu_a = 0.3;
  s.mu_b = 0.6;
  const double ea = 1e-3, eb = 2e-3;
  const double p = round_click_prob(s, ClickModel::Linearized);
  const double rs = z_pair_ratio(s, ClickModel::Linearized);
  CHECK(single_photon_ratio(s, ClickModel::Linearized) ==
        doctest::Approx(ea * eb * 0.3 * 0.6 * std::exp(-0.9) / (8.0 * rs * p * p)).epsilon(1e-12));

  s.mu_a = s.mu_b = 1e-7;
  CHECK(single_photon_ratio(s) == doctest::Approx(1.0).epsilon(1e-6));

  const Scenario t = Scenario::from_distances(100.0, 100.0, 0.5, 0.5, PairingInterval::infinite());
  const double q = single_photon_ratio(t);
  CHECK(q > 0.0);
  CHECK(q < 1.0);
}

TEST_CASE("X-basis gain and phase error") {
  const auto x = x_gain_and_phase_error(by_eta(0.002, 0.0002, no_dark()));
  CHECK(x.gain == doctest::Approx(0.002 * 0.0002 / 2.0).epsilon(1e-15));
  CHECK(x.phase_error == doctest::Approx(0.04).epsilon(1e-14));

  SystemParams half;
  half.e_d = 0.4999999999;
  CHECK(x_gain_and_phase_error(by_eta(0.002, 0.0002, half)).phase_error ==
        doctest::Approx(0.5).epsilon(1e-9));

  const double e = x_gain_and_phase_error(by_eta(0.002, 0.0002)).phase_error;
  CHECK(e > 0.04);
  CHECK(e < 0.045);

  Scenario dead = by_eta(0.0, 0.0, no_dark());
  CHECK_THROWS_AS(x_gain_and_phase_error(dead), ModelDegenerateError);
}

TEST_CASE("binary entropy and Poisson weight") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.04) == doctest::Approx(0.24229218908241476).epsilon(1e-14));
  CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(1.1), std::domain_error);
  CHECK(poisson_weight(0.0, 0) == 1.0);
  CHECK(poisson_weight(0.0, 3) == 0.0);
  CHECK(poisson_weight(2.0, 3) == doctest::Approx(std::exp(-2.0) * 8.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("key rate") {
  SUBCASE("no signal, no key") {
    Scenario s = Scenario::from_distances(50.0, 50.0, 1e-9, 1e-9, PairingInterval::infinite());
    CHECK(key_rate(s).R == 0.0);
    CHECK(key_rate(s).raw_R < 0.0);
  }
  SUBCASE("linearized dark-count-free closed form") {
    Scenario s = Scenario::from_distances(100.0, 150.0, 0.3, 0.7, PairingInterval::infinite(), no_dark());
    const double ea = s.link_a.eta, eb = s.link_b.eta;
    const double expected = (1.0 - binary_entropy(0.04)) / 8.0 * ea * eb * 0.3 * 0.7 *
                            std::exp(-1.0) / (ea * 0.3 + eb * 0.7);
    CHECK(key_rate(s, ClickModel::Linearized).R == doctest::Approx(expected).epsilon(1e-12));
  }
  SUBCASE("breakdown fields are probabilities") {
    const Scenario s = Scenario::from_distances(100.0, 150.0, 0.24, 0.76, PairingInterval(1000000));
    const KeyRateBreakdown k = key_rate(s);
    for (double v : {k.p, k.r_p, k.r_s, k.q_bar_11, k.e_z, k.e_11, k.R}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(k.R == doctest::Approx(k.r_p * k.r_s *
                                 (k.q_bar_11 * (1.0 - binary_entropy(k.e_11)) -
                                  1.15 * binary_entropy(k.e_z))));
  }
}

TEST_CASE("scenario validation") {
  Scenario s = Scenario::from_distances(10.0, 20.0, 0.5, 0.5, PairingInterval(10));
  s.mu_a = 1.5;
  CHECK_THROWS(s.validate());
  s.mu_a = 0.5;
  s.nu_a = 0.5;
  CHECK_THROWS(s.validate());
  SystemParams p;
  p.e_d = 0.5;
  CHECK_THROWS(p.validate());
  p.e_d = 0.04;
  p.f = 0.9;
  CHECK_THROWS(p.validate());
  CHECK_THROWS(PairingInterval(0));
  CHECK(PairingInterval::parse("inf").is_infinite());
  CHECK(PairingInterval::parse("1e6").rounds() == 1000000);
  CHECK_THROWS(PairingInterval::parse("2.5"));
}
