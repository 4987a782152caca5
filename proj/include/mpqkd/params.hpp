#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace mpqkd {

/// Raised when a formula is evaluated at a point where it has no value
/// (zero click probability, zero Z-pair ratio, zero single-photon gain).
class ModelDegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when decoy observables admit no channel consistent with them.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a truncated photon-number sum leaves too much tail mass.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Device and link constants. Defaults are the standard simulation set:
/// 20% detectors, 0.2 dB/km fiber, 1.2e-8 dark counts, f = 1.15, e_d = 4%.
struct SystemParams {
  double eta_d = 0.2;
  double alpha = 0.2;  // dB/km
  double p_d = 1.2e-8;
  double f = 1.15;
  double e_d = 0.04;

  static constexpr double e_0 = 0.5;

  void validate() const;
};

/// Maximal pairing interval. Either a finite number of rounds (>= 1) or the
/// symbolic infinite value whose pairing rate is exactly p/2.
class PairingInterval {
 public:
  constexpr PairingInterval() = default;
  explicit PairingInterval(std::uint64_t rounds);

  static constexpr PairingInterval infinite() {
    PairingInterval l;
    l.infinite_ = true;
    return l;
  }

  /// Accepts "inf", "infinite", or a positive integer (scientific notation
  /// such as "1e6" is allowed as long as the value is integral).
  static PairingInterval parse(const std::string& text);

  bool is_infinite() const { return infinite_; }
  std::uint64_t rounds() const {
    return infinite_ ? std::numeric_limits<std::uint64_t>::max() : rounds_;
  }
  std::string to_string() const;

  friend bool operator==(const PairingInterval&, const PairingInterval&) = default;

 private:
  std::uint64_t rounds_ = 1;
  bool infinite_ = false;
};

/// One fiber arm. `eta` includes the detector efficiency.
struct Link {
  double distance_km = 0.0;
  double eta = 0.0;

  static Link from_distance(double distance_km, const SystemParams& params);
  static Link from_transmittance(double eta, const SystemParams& params);
};

/// Per-round intensity selector: 1 means the signal intensity was sent.
struct IntensityBits {
  int a = 0;
  int b = 0;

  friend bool operator==(const IntensityBits&, const IntensityBits&) = default;
};

struct Scenario {
  Link link_a;
  Link link_b;
  double mu_a = 0.5;
  double mu_b = 0.5;
  double nu_a = 0.0;
  double nu_b = 0.0;
  PairingInterval lambda = PairingInterval::infinite();
  SystemParams params;

  static Scenario from_distances(double distance_a_km, double distance_b_km, double mu_a,
                                 double mu_b, PairingInterval lambda,
                                 const SystemParams& params = {});

  /// Exchanges the roles of Alice and Bob.
  Scenario swapped() const;

  void validate() const;
};

}  // namespace mpqkd
