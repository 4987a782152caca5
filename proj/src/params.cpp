#include "mpqkd/params.hpp"

#include <charconv>
#include <cmath>
#include <utility>

#include "mpqkd/model.hpp"

namespace mpqkd {

void SystemParams::validate() const {
  if (!(eta_d > 0.0 && eta_d <= 1.0)) throw std::invalid_argument("eta_d must lie in (0, 1]");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(p_d >= 0.0 && p_d < 1.0)) throw std::invalid_argument("p_d must lie in [0, 1)");
  if (!(f >= 1.0)) throw std::invalid_argument("f must be at least 1");
  if (!(e_d >= 0.0 && e_d < 0.5)) throw std::invalid_argument("e_d must lie in [0, 0.5)");
}

PairingInterval::PairingInterval(std::uint64_t rounds) : rounds_(rounds) {
  if (rounds == 0) throw std::invalid_argument("pairing interval must be at least 1");
}

PairingInterval PairingInterval::parse(const std::string& text) {
  if (text == "inf" || text == "infinite" || text == "Inf" || text == "INF") return infinite();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("cannot parse pairing interval '" + text + "'");
  }
  if (!(value >= 1.0) || value != std::floor(value) || value > 1e18) {
    throw std::invalid_argument("pairing interval must be an integer >= 1, got '" + text + "'");
  }
  return PairingInterval(static_cast<std::uint64_t>(value));
}

std::string PairingInterval::to_string() const {
  return infinite_ ? std::string("inf") : std::to_string(rounds_);
}

Link Link::from_distance(double distance_km, const SystemParams& params) {
  return {distance_km, transmittance_from_distance(distance_km, params)};
}

Link Link::from_transmittance(double eta, const SystemParams& params) {
  return {distance_from_transmittance(eta, params), eta};
}

Scenario Scenario::from_distances(double distance_a_km, double distance_b_km, double mu_a,
                                  double mu_b, PairingInterval lambda,
                                  const SystemParams& params) {
  Scenario s;
  s.link_a = Link::from_distance(distance_a_km, params);
  s.link_b = Link::from_distance(distance_b_km, params);
  s.mu_a = mu_a;
  s.mu_b = mu_b;
  s.lambda = lambda;
  s.params = params;
  return s;
}

Scenario Scenario::swapped() const {
  Scenario s = *this;
  std::swap(s.link_a, s.link_b);
  std::swap(s.mu_a, s.mu_b);
  std::swap(s.nu_a, s.nu_b);
  return s;
}

void Scenario::validate() const {
  params.validate();
  for (const Link* link : {&link_a, &link_b}) {
    if (!(link->eta >= 0.0 && link->eta <= 1.0)) {
      throw std::invalid_argument("link transmittance must lie in [0, 1]");
    }
  }
  // Intensities of exactly zero are admitted so the no-signal limit can be
  // evaluated; the optimizer keeps them strictly positive.
  if (!(mu_a >= 0.0 && mu_a <= 1.0) || !(mu_b >= 0.0 && mu_b <= 1.0)) {
    throw std::invalid_argument("signal intensities must lie in [0, 1]");
  }
  auto decoy_ok = [](double nu, double mu) { return nu >= 0.0 && (nu < mu || nu == 0.0); };
  if (!decoy_ok(nu_a, mu_a) || !decoy_ok(nu_b, mu_b)) {
    throw std::invalid_argument("decoy intensities must satisfy 0 <= nu < mu");
  }
}

}  // namespace mpqkd
