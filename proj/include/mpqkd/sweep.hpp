#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpqkd/model.hpp"
#include "mpqkd/optimizer.hpp"
#include "mpqkd/params.hpp"

namespace mpqkd {

/// Bad configuration; the message lists every offending field.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepMode { Table2, Table3, Table4, Table5, Fig3, Fig4, Fig5, Fig6, Fig7, Custom };
enum class Method { OI, AF, PLOB, Fixed };

const char* to_string(SweepMode mode);
const char* to_string(Method method);

struct DistanceGrid {
  double start = 0.0;
  double stop = 600.0;
  double step = 5.0;
};

/// One Monte Carlo or decoy verification point.
struct VerifyPoint {
  enum class Kind { MonteCarlo, Decoy };
  Kind kind = Kind::MonteCarlo;
  std::string name;
  double L_a = 100.0;
  double L_b = 100.0;
  double mu_a = 0.5;
  double mu_b = 0.5;
  double nu_a = 0.0;
  double nu_b = 0.0;
  PairingInterval lambda{100};
  SystemParams params;
};

struct SweepSpec {
  SweepMode mode = SweepMode::Custom;
  /// Alice's distance for the point modes (tables, fig3).
  double L_a = 100.0;
  /// Total-distance grid for the curve modes; absent means point mode.
  std::optional<DistanceGrid> distance;
  std::vector<double> deltas{0.0};  // Delta = L_b - L_a, km
  std::vector<PairingInterval> lambdas{PairingInterval(1000000)};
  std::vector<double> e_ds;  // empty: params.e_d
  std::vector<Method> methods{Method::OI};
  std::optional<IntensityPair> fixed_intensity;
  std::string output;
  std::uint64_t seed = 1;
  int workers = 1;
  double cutoff = 1e-12;
  PlobConvention plob_convention = PlobConvention::IncludeDetector;
  SystemParams params;

  std::uint64_t verify_rounds = 10000000;
  std::vector<VerifyPoint> verify_points;

  /// Preset for a mode; custom starts from the plain defaults.
  static SweepSpec preset(SweepMode mode);

  /// Strict parse: the mode preset is applied first, then every present key
  /// overrides it. Unknown keys and invalid values raise ValidationError.
  static SweepSpec from_json(const nlohmann::json& doc);

  void validate() const;
};

SweepSpec load_spec(const std::string& path);

struct ResultRow {
  SweepMode mode = SweepMode::Custom;
  Method method = Method::OI;
  double L_a = 0.0;
  double L_b = 0.0;
  double Delta = 0.0;
  double total = 0.0;
  double delta = 0.0;  // eta_a / eta_b
  std::optional<PairingInterval> lambda;
  double e_d = 0.0;
  double mu_a = 0.0;
  double mu_b = 0.0;
  double R = 0.0;
  double plob = 0.0;
  std::optional<KeyRateBreakdown> breakdown;
};

/// Rows ordered by curve, then by grid index, regardless of worker count.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

/// Default points when the sweep spec lists none: symmetric 100 km at lambda = 100,
/// the same point without dark counts, and a decoy point at 100/150 km.
std::vector<VerifyPoint> default_verify_points(const SystemParams& base = {});

VerifyReport verify_oracles(const SweepSpec& spec);

void write_report(std::ostream& out, const VerifyReport& report);

}  // namespace mpqkd
