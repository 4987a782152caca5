#include <doctest.h>

#include <cmath>

#include "mpqkd/decoy.hpp"
#include "mpqkd/model.hpp"

using namespace mpqkd;

namespace {

Scenario asym_scenario(double nu = 0.05, SystemParams params = {}) {
  Scenario s = Scenario::from_distances(100.0, 150.0, 0.24, 0.76, PairingInterval(1000000), params);
  s.nu_a = nu;
  s.nu_b = nu;
  return s;
}

DecoyBounds exact_bounds(const Scenario& s) {
  const PhotonYields y = ground_truth_yields(s, 1);
  const std::size_t k = y.index(1, 1);
  DecoyBounds b;
  b.m_z_11_lower = y.m_z[k];
  b.e_z_11_upper = y.e_z[k];
  b.m_x_11_lower = y.m_x[k];
  b.e_x_11_upper = y.e_x[k];
  const double w = poisson_pair_prob(1, 1, s.mu_a, s.mu_b);
  b.z_by_vector.push_back({{SumClass::Mu, SumClass::Mu}, w * y.m_z[k], w * y.e_z[k]});
  return b;
}

}  // namespace

TEST_CASE("decoy: pair intensity prior") {
  DecoyConfig c;
  double total = 0.0;
  for (const auto& [v, q] : pair_intensity_prior(c)) total += q;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));

  c.s_0 = 1.0;
  c.s_nu = 0.0;
  c.s_mu = 0.0;
  auto q = pair_intensity_prior(c);
  CHECK(q[{SumClass::Zero, SumClass::Zero}] == 1.0);
  CHECK(q[{SumClass::Mu, SumClass::Zero}] == 0.0);

  c.s_0 = 0.25;
  c.s_nu = 0.25;
  c.s_mu = 0.5;
  q = pair_intensity_prior(c);
  CHECK(q[{SumClass::TwoMu, SumClass::TwoMu}] == doctest::Approx(0.0625).epsilon(1e-15));

  c.s_0 = c.s_nu = c.s_mu = 1.0 / 3.0;
  q = pair_intensity_prior(c);
  // Two orderings of (nu, mu) for Alice, (0, 0) for Bob.
  CHECK(q[{SumClass::NuMu, SumClass::Zero}] == doctest::Approx(2.0 / 9.0 / 9.0));
}

TEST_CASE("decoy: Poisson pair probabilities") {
  CHECK(poisson_pair_prob(0, 0, 0.0, 0.0) == 1.0);
  CHECK(poisson_pair_prob(1, 0, 0.0, 0.0) == 0.0);
  CHECK(poisson_pair_prob(1, 1, 0.1, 0.1) == doctest::Approx(0.00818730753077982).epsilon(1e-14));
}

TEST_CASE("decoy: posterior over intensity vectors") {
  DecoyConfig c;
  c.s_0 = 1.0;
  c.s_nu = 0.0;
  c.s_mu = 0.0;
  auto post = posterior_intensity_given_photons(0, 0, c);
  CHECK(post[{SumClass::Zero, SumClass::Zero}] == 1.0);
  CHECK_THROWS_AS(posterior_intensity_given_photons(1, 0, c), std::domain_error);

  c.s_0 = c.s_nu = c.s_mu = 1.0 / 3.0;
  for (int ka = 0; ka <= 4; ++ka) {
    for (int kb = 0; kb <= 4; ++kb) {
      double total = 0.0;
      for (const auto& [v, w] : posterior_intensity_given_photons(ka, kb, c)) total += w;
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
  post = posterior_intensity_given_photons(1, 1, c);
  for (const auto& [v, w] : post) {
    if (v.a == SumClass::Zero || v.b == SumClass::Zero) CHECK(w == 0.0);
  }
}

TEST_CASE("decoy: forward observables") {
  SUBCASE("blackout channel without dark counts is silent") {
    SystemParams p;
    p.p_d = 0.0;
    Scenario s = asym_scenario(0.05, p);
    s.link_a.eta = 0.0;
    s.link_b.eta = 0.0;
    const auto obs = expected_observables(s, DecoyConfig::from_scenario(s));
    for (const auto& o : obs.z) CHECK(o.total == 0.0);
    for (const auto& o : obs.x) CHECK(o.total == 0.0);
  }
  SUBCASE("errors never exceed totals") {
    const Scenario s = asym_scenario();
    const auto obs = expected_observables(s, DecoyConfig::from_scenario(s));
    CHECK(obs.z.size() == 8);
    CHECK(obs.x.size() == 16);
    for (const auto& o : obs.z) CHECK(o.error <= o.total);
    for (const auto& o : obs.x) CHECK(o.error <= o.total);
  }
  SUBCASE("signal observable reproduces the model Z-pair ratio") {
    const Scenario s = asym_scenario();
    const auto obs = expected_observables(s, DecoyConfig::from_scenario(s));
    const ObservedVector* sig = obs.find_z({SumClass::Mu, SumClass::Mu});
    REQUIRE(sig != nullptr);
    const KeyRateBreakdown k = key_rate(s);
    CHECK(sig->total == doctest::Approx(4.0 * k.p * k.p * k.r_s).epsilon(1e-10));
    CHECK(sig->error / sig->total == doctest::Approx(k.e_z).epsilon(1e-9));
  }
  SUBCASE("projection identity per photon number") {
    const Scenario s = asym_scenario();
    const DecoyConfig cfg = DecoyConfig::from_scenario(s);
    const PhotonYields y = ground_truth_yields(s, cfg.forward_k_max);
    const auto obs = expected_observables(s, cfg);
    for (const auto& o : obs.z) {
      double sum = 0.0;
      double mass = 0.0;
      for (int ka = 0; ka <= y.cutoff; ++ka) {
        for (int kb = 0; kb <= y.cutoff; ++kb) {
          sum += poisson_pair_prob(ka, kb, o.sum_a, o.sum_b) * y.m_z[y.index(ka, kb)];
          mass += poisson_pair_prob(ka, kb, o.sum_a, o.sum_b);
        }
      }
      CHECK(o.total == doctest::Approx(sum).epsilon(1e-14));
      CHECK(mass >= 1.0 - 1e-12);
    }
  }
  SUBCASE("too small a cutoff is a precision error") {
    Scenario s = asym_scenario();
    s.mu_b = 1.0;
    DecoyConfig cfg = DecoyConfig::from_scenario(s);
    cfg.forward_k_max = 10;
    CHECK_THROWS_AS(expected_observables(s, cfg), PrecisionError);
  }
}

TEST_CASE("decoy: single-photon bounds bracket the truth") {
  const Scenario s = asym_scenario();
  const DecoyConfig cfg = DecoyConfig::from_scenario(s);
  const DecoyBounds b = bound_single_photon(expected_observables(s, cfg), cfg);
  const PhotonYields y = ground_truth_yields(s, 1);
  const std::size_t k = y.index(1, 1);
  CHECK(b.m_z_11_lower <= y.m_z[k]);
  CHECK(b.e_z_11_upper >= y.e_z[k]);
  CHECK(b.m_x_11_lower <= y.m_x[k]);
  CHECK(b.e_x_11_upper >= y.e_x[k]);
  // Tight enough to be useful at nu = 0.05.
  CHECK(b.m_z_11_lower > 0.9 * y.m_z[k]);
  CHECK(b.m_x_11_lower > 0.5 * y.m_x[k]);

  const ProjectedBound* sig = b.find_z({SumClass::Mu, SumClass::Mu});
  REQUIRE(sig != nullptr);
  CHECK(sig->m_11_lower == doctest::Approx(poisson_pair_prob(1, 1, 0.24, 0.76) * b.m_z_11_lower));
}

TEST_CASE("decoy: without decoy settings the single-photon yield is unconstrained") {
  const Scenario s = asym_scenario();
  DecoyConfig cfg = DecoyConfig::from_scenario(s);
  cfg.s_0 = 0.5;
  cfg.s_nu = 0.0;
  cfg.s_mu = 0.5;
  const DecoyBounds b = bound_single_photon(expected_observables(s, cfg), cfg);
  CHECK(std::abs(b.m_z_11_lower) < 1e-15);
}

TEST_CASE("decoy: smaller decoy intensity tightens the bounds") {
  const Scenario tight = asym_scenario(0.024);
  const Scenario loose = asym_scenario(0.12);
  const PhotonYields y = ground_truth_yields(tight, 1);
  const double truth = y.m_z[y.index(1, 1)];
  const auto gap = [&](const Scenario& s) {
    const DecoyConfig cfg = DecoyConfig::from_scenario(s);
    return truth - bound_single_photon(expected_observables(s, cfg), cfg).m_z_11_lower;
  };
  CHECK(gap(tight) >= 0.0);
  CHECK(gap(tight) <= gap(loose));
}

TEST_CASE("decoy: inconsistent observables are rejected") {
  const Scenario s = asym_scenario();
  const DecoyConfig cfg = DecoyConfig::from_scenario(s);
  DecoyObservables obs = expected_observables(s, cfg);
  for (auto& o : obs.z) {
    if (o.vec.a == SumClass::Zero && o.vec.b == SumClass::Nu) o.total = o.error = 0.0;
    if (o.vec.a == SumClass::Zero && o.vec.b == SumClass::Mu) o.total = 0.9;
  }
  CHECK_THROWS_AS(bound_single_photon(obs, cfg), InconsistencyError);

  obs = expected_observables(s, cfg);
  obs.z[0].error = 2.0 * obs.z[0].total;
  CHECK_THROWS_AS(bound_single_photon(obs, cfg), InconsistencyError);
}

TEST_CASE("decoy: key rate") {
  SystemParams params;
  DecoyBounds b;
  b.m_x_11_lower = 1e-7;
  b.e_x_11_upper = 0.5e-7;
  b.z_by_vector.push_back({{SumClass::Mu, SumClass::Mu}, 1e-8, 0.0});
  CHECK(decoy_key_rate(b, 3e-8, 1e-4, params).R == 0.0);

  b.e_x_11_upper = 0.04e-7;
  const DecoyRate r = decoy_key_rate(b, 3e-8, 0.0, params);
  CHECK(r.R == doctest::Approx(1e-8 * (1.0 - binary_entropy(0.04))));

  b.m_x_11_lower = 0.0;
  const DecoyRate d = decoy_key_rate(b, 3e-8, 0.0, params);
  CHECK(d.degenerate);
  CHECK(d.R == 0.0);
}

TEST_CASE("decoy: exact bounds reproduce the model key rate") {
  SystemParams no_dark;
  no_dark.p_d = 0.0;
  for (const SystemParams& p : {SystemParams{}, no_dark}) {
    const Scenario s = asym_scenario(0.05, p);
    const auto obs = expected_observables(s, DecoyConfig::from_scenario(s));
    const ObservedVector* sig = obs.find_z({SumClass::Mu, SumClass::Mu});
    const DecoyRate r = decoy_key_rate(exact_bounds(s), sig->total, sig->error / sig->total, p);
    CHECK(decoy_rate_per_round(r, s) == doctest::Approx(key_rate(s).R).epsilon(1e-9));
  }
}

TEST_CASE("decoy: estimated rate never exceeds the model rate") {
  const Scenario s = asym_scenario();
  const DecoyConfig cfg = DecoyConfig::from_scenario(s);
  const auto obs = expected_observables(s, cfg);
  const DecoyBounds b = bound_single_photon(obs, cfg);
  const ObservedVector* sig = obs.find_z({SumClass::Mu, SumClass::Mu});
  const DecoyRate r = decoy_key_rate(b, sig->total, sig->error / sig->total, s.params);
  const double per_round = decoy_rate_per_round(r, s);
  CHECK(per_round > 0.0);
  CHECK(per_round <= key_rate(s).R + 1e-12);
}
