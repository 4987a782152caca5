#include "mpqkd/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mpqkd/linprog.hpp"
#include "mpqkd/model.hpp"

namespace mpqkd {
namespace {

constexpr double kTailThreshold = 1e-12;
constexpr double kEqualityTolerance = 1e-10;

constexpr SumClass kAllClasses[] = {SumClass::Zero,  SumClass::Nu,   SumClass::Mu,
                                    SumClass::TwoNu, SumClass::NuMu, SumClass::TwoMu};

double class_prior(SumClass c, const DecoyConfig& cfg) {
  switch (c) {
    case SumClass::Zero:
      return cfg.s_0 * cfg.s_0;
    case SumClass::Nu:
      return 2.0 * cfg.s_0 * cfg.s_nu;
    case SumClass::Mu:
      return 2.0 * cfg.s_0 * cfg.s_mu;
    case SumClass::TwoNu:
      return cfg.s_nu * cfg.s_nu;
    case SumClass::NuMu:
      return 2.0 * cfg.s_nu * cfg.s_mu;
    case SumClass::TwoMu:
      return cfg.s_mu * cfg.s_mu;
  }
  return 0.0;
}

// Poisson mass above `cutoff`, summed directly so small tails keep precision.
double poisson_upper_tail(double mean, int cutoff) {
  if (mean <= 0.0) return 0.0;
  double tail = 0.0;
  for (int k = cutoff + 1; k <= cutoff + 200; ++k) {
    const double w = poisson_weight(mean, k);
    tail += w;
    if (w < 1e-300 || (k > mean && w < tail * 1e-17)) break;
  }
  return tail;
}

double pair_tail(double sum_a, double sum_b, int cutoff) {
  const double ta = poisson_upper_tail(sum_a, cutoff);
  const double tb = poisson_upper_tail(sum_b, cutoff);
  return ta + tb - ta * tb;
}

template <typename Classes>
std::vector<ObservedVector> fold(const Classes& classes, bool z_type, const PhotonYields& y,
                                 const DecoyConfig& cfg) {
  std::vector<ObservedVector> out;
  const int K = y.cutoff;
  for (SumClass ca : classes) {
    for (SumClass cb : classes) {
      if (z_type && ca == SumClass::Zero && cb == SumClass::Zero) continue;
      ObservedVector o;
      o.vec = {ca, cb};
      o.prior = class_prior(ca, cfg) * class_prior(cb, cfg);
      if (o.prior <= 0.0) continue;
      o.sum_a = sum_a(o.vec, cfg);
      o.sum_b = sum_b(o.vec, cfg);
      if (pair_tail(o.sum_a, o.sum_b, K) > kTailThreshold) {
        throw PrecisionError("photon cutoff " + std::to_string(K) +
                             " leaves Poisson tail above 1e-12; increase forward_k_max");
      }
      const std::vector<double>& m = z_type ? y.m_z : y.m_x;
      const std::vector<double>& e = z_type ? y.e_z : y.e_x;
      for (int ka = 0; ka <= K; ++ka) {
        const double pa = poisson_weight(o.sum_a, ka);
        if (pa == 0.0) continue;
        for (int kb = 0; kb <= K; ++kb) {
          const double w = pa * poisson_weight(o.sum_b, kb);
          o.total += w * m[y.index(ka, kb)];
          o.error += w * e[y.index(ka, kb)];
        }
      }
      out.push_back(o);
    }
  }
  return out;
}

struct BasisBound {
  double m_lower = 0.0;
  double e_upper = 0.0;
};

// Variables: m_k, e_k for k in [0, K]^2, then one tail slack per observable
// for the totals and one for the errors.
BasisBound solve_basis(const std::vector<ObservedVector>& obs, int K) {
  if (obs.empty()) return {0.0, 0.0};
  const std::size_t side = static_cast<std::size_t>(K + 1);
  const std::size_t n_k = side * side;
  const std::size_t n_obs = obs.size();
  const std::size_t n_vars = 2 * n_k + 2 * n_obs;
  const std::size_t k11 = side + 1;

  double scale = 0.0;
  for (const auto& o : obs) scale = std::max(scale, o.total);
  if (scale <= 0.0) scale = 1.0;

  LinearProgram lp(n_vars);
  for (std::size_t k = 0; k < n_k; ++k) lp.set_upper_bound(k, 1.0 / scale);
  for (std::size_t r = 0; r < n_obs; ++r) {
    const ObservedVector& o = obs[r];
    const double tail = pair_tail(o.sum_a, o.sum_b, K) / scale;
    lp.set_upper_bound(2 * n_k + r, tail);
    lp.set_upper_bound(2 * n_k + n_obs + r, tail);

    std::vector<std::pair<std::size_t, double>> m_terms;
    std::vector<std::pair<std::size_t, double>> e_terms;
    for (int ka = 0; ka <= K; ++ka) {
      for (int kb = 0; kb <= K; ++kb) {
        const double w = poisson_pair_prob(ka, kb, o.sum_a, o.sum_b);
        if (w < 1e-300) continue;
        const std::size_t k = static_cast<std::size_t>(ka) * side + static_cast<std::size_t>(kb);
        m_terms.emplace_back(k, w);
        e_terms.emplace_back(n_k + k, w);
      }
    }
    m_terms.emplace_back(2 * n_k + r, 1.0);
    e_terms.emplace_back(2 * n_k + n_obs + r, 1.0);
    const double m_rhs = o.total / scale;
    const double e_rhs = o.error / scale;
    lp.add_row(m_terms, RowSense::GreaterEqual, m_rhs - kEqualityTolerance);
    lp.add_row(m_terms, RowSense::LessEqual, m_rhs + kEqualityTolerance);
    lp.add_row(e_terms, RowSense::GreaterEqual, e_rhs - kEqualityTolerance);
    lp.add_row(std::move(e_terms), RowSense::LessEqual, e_rhs + kEqualityTolerance);
  }
  for (std::size_t k = 0; k < n_k; ++k) {
    lp.add_row({{n_k + k, 1.0}, {k, -1.0}}, RowSense::LessEqual, 0.0);
  }

  lp.set_objective(k11, 1.0);
  const LpSolution low = minimize(lp);
  lp.set_objective(k11, 0.0);
  lp.set_objective(n_k + k11, 1.0);
  const LpSolution high = maximize(lp);
  for (const LpSolution* s : {&low, &high}) {
    if (s->status == LpStatus::Infeasible) {
      throw InconsistencyError("decoy observables admit no consistent channel");
    }
    if (s->status != LpStatus::Optimal) {
      throw std::runtime_error("decoy linear program did not reach an optimum");
    }
  }
  return {std::max(low.objective, 0.0) * scale, std::max(high.objective, 0.0) * scale};
}

std::vector<ProjectedBound> project(const std::vector<ObservedVector>& obs, BasisBound b) {
  std::vector<ProjectedBound> out;
  for (const auto& o : obs) {
    const double w = poisson_pair_prob(1, 1, o.sum_a, o.sum_b);
    out.push_back({o.vec, w * b.m_lower, w * b.e_upper});
  }
  return out;
}

}  // namespace

DecoyConfig DecoyConfig::from_scenario(const Scenario& scenario) {
  DecoyConfig c;
  c.mu_a = scenario.mu_a;
  c.mu_b = scenario.mu_b;
  c.nu_a = scenario.nu_a;
  c.nu_b = scenario.nu_b;
  return c;
}

void DecoyConfig::validate() const {
  if (s_0 < 0.0 || s_nu < 0.0 || s_mu < 0.0 || std::abs(s_0 + s_nu + s_mu - 1.0) > 1e-12) {
    throw std::invalid_argument("selection probabilities must be nonnegative and sum to 1");
  }
  if (k_max < 2) throw std::invalid_argument("k_max must be at least 2");
  if (forward_k_max < k_max) throw std::invalid_argument("forward_k_max must be >= k_max");
  if (!(mu_a > 0.0) || !(mu_b > 0.0)) throw std::invalid_argument("signal intensities must be positive");
  if (nu_a < 0.0 || nu_a >= mu_a || nu_b < 0.0 || nu_b >= mu_b) {
    throw std::invalid_argument("decoy intensities must satisfy 0 <= nu < mu");
  }
}

double sum_intensity(SumClass c, double nu, double mu) {
  switch (c) {
    case SumClass::Zero:
      return 0.0;
    case SumClass::Nu:
      return nu;
    case SumClass::Mu:
      return mu;
    case SumClass::TwoNu:
      return 2.0 * nu;
    case SumClass::NuMu:
      return nu + mu;
    case SumClass::TwoMu:
      return 2.0 * mu;
  }
  return 0.0;
}

double sum_a(const PairIntensityVector& v, const DecoyConfig& config) {
  return sum_intensity(v.a, config.nu_a, config.mu_a);
}

double sum_b(const PairIntensityVector& v, const DecoyConfig& config) {
  return sum_intensity(v.b, config.nu_b, config.mu_b);
}

std::map<PairIntensityVector, double> pair_intensity_prior(const DecoyConfig& config) {
  std::map<PairIntensityVector, double> q;
  for (SumClass a : kAllClasses) {
    for (SumClass b : kAllClasses) q[{a, b}] = class_prior(a, config) * class_prior(b, config);
  }
  return q;
}

double poisson_pair_prob(int k_a, int k_b, double sum_a, double sum_b) {
  return poisson_weight(sum_a, k_a) * poisson_weight(sum_b, k_b);
}

std::map<PairIntensityVector, double> posterior_intensity_given_photons(
    int k_a, int k_b, const DecoyConfig& config) {
  if (k_a < 0 || k_b < 0) throw std::domain_error("photon numbers must be nonnegative");
  std::map<PairIntensityVector, double> post = pair_intensity_prior(config);
  double total = 0.0;
  for (auto& [vec, w] : post) {
    w *= poisson_pair_prob(k_a, k_b, sum_a(vec, config), sum_b(vec, config));
    total += w;
  }
  if (!(total > 0.0)) throw std::domain_error("photon numbers unreachable under this config");
  for (auto& [vec, w] : post) w /= total;
  return post;
}

PhotonYields ground_truth_yields(const Scenario& scenario, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be at least 1");
  PhotonYields y;
  y.cutoff = cutoff;
  const std::size_t n = static_cast<std::size_t>(cutoff + 1) * static_cast<std::size_t>(cutoff + 1);
  y.m_z.assign(n, 0.0);
  y.e_z.assign(n, 0.0);
  y.m_x.assign(n, 0.0);
  y.e_x.assign(n, 0.0);

  std::vector<double> click(n);
  for (int a = 0; a <= cutoff; ++a) {
    for (int b = 0; b <= cutoff; ++b) click[y.index(a, b)] = click_prob_given_photons(a, b, scenario);
  }
  // Binomial(k, 1/2) split weights.
  std::vector<std::vector<double>> split(static_cast<std::size_t>(cutoff + 1));
  for (int k = 0; k <= cutoff; ++k) {
    auto& row = split[static_cast<std::size_t>(k)];
    row.resize(static_cast<std::size_t>(k + 1));
    for (int i = 0; i <= k; ++i) {
      row[static_cast<std::size_t>(i)] =
          std::exp(std::lgamma(k + 1.0) - std::lgamma(i + 1.0) - std::lgamma(k - i + 1.0) -
                   k * std::log(2.0));
    }
  }

  const double vacuum = click[y.index(0, 0)];
  double e_11_ratio = SystemParams::e_0;
  try {
    e_11_ratio = x_gain_and_phase_error(scenario).phase_error;
  } catch (const ModelDegenerateError&) {
  }

  for (int ka = 0; ka <= cutoff; ++ka) {
    for (int kb = 0; kb <= cutoff; ++kb) {
      const std::size_t k = y.index(ka, kb);
      // Z pair: either both signals share a round, or they sit in different rounds.
      y.e_z[k] = 0.5 * click[k] * vacuum;
      y.m_z[k] = y.e_z[k] + 0.5 * click[y.index(ka, 0)] * click[y.index(0, kb)];
      double mx = 0.0;
      for (int ia = 0; ia <= ka; ++ia) {
        for (int ib = 0; ib <= kb; ++ib) {
          mx += split[static_cast<std::size_t>(ka)][static_cast<std::size_t>(ia)] *
                split[static_cast<std::size_t>(kb)][static_cast<std::size_t>(ib)] *
                click[y.index(ia, ib)] * click[y.index(ka - ia, kb - ib)];
        }
      }
      y.m_x[k] = mx;
      y.e_x[k] = (ka == 1 && kb == 1 ? e_11_ratio : SystemParams::e_0) * mx;
    }
  }
  return y;
}

const ObservedVector* DecoyObservables::find_z(PairIntensityVector v) const {
  for (const auto& o : z) {
    if (o.vec == v) return &o;
  }
  return nullptr;
}

DecoyObservables expected_observables(const Scenario& scenario, const DecoyConfig& config) {
  scenario.validate();
  config.validate();
  const PhotonYields y = ground_truth_yields(scenario, config.forward_k_max);
  DecoyObservables obs;
  obs.z = fold(kZClasses, true, y, config);
  obs.x = fold(kXClasses, false, y, config);
  return obs;
}

const ProjectedBound* DecoyBounds::find_z(PairIntensityVector v) const {
  for (const auto& b : z_by_vector) {
    if (b.vec == v) return &b;
  }
  return nullptr;
}

DecoyBounds bound_single_photon(const DecoyObservables& observables, const DecoyConfig& config) {
  config.validate();
  for (const auto* set : {&observables.z, &observables.x}) {
    for (const auto& o : *set) {
      if (o.error < 0.0 || o.total < 0.0 || o.error > o.total * (1.0 + 1e-12) || o.total > 1.0) {
        throw InconsistencyError("observables violate 0 <= error <= total <= 1");
      }
    }
  }
  const BasisBound z = solve_basis(observables.z, config.k_max);
  const BasisBound x = solve_basis(observables.x, config.k_max);
  DecoyBounds b;
  b.m_z_11_lower = z.m_lower;
  b.e_z_11_upper = z.e_upper;
  b.m_x_11_lower = x.m_lower;
  b.e_x_11_upper = x.e_upper;
  b.z_by_vector = project(observables.z, z);
  b.x_by_vector = project(observables.x, x);
  return b;
}

DecoyRate decoy_key_rate(const DecoyBounds& bounds, double observed_m_z, double observed_e_z,
                         const SystemParams& params) {
  if (observed_m_z < 0.0 || observed_m_z > 1.0 || observed_e_z < 0.0 || observed_e_z > 1.0) {
    throw std::domain_error("observed values must lie in [0, 1]");
  }
  DecoyRate r;
  if (!(bounds.m_x_11_lower > 0.0)) {
    r.degenerate = true;
    return r;
  }
  const ProjectedBound* signal = bounds.find_z({SumClass::Mu, SumClass::Mu});
  const double m_11 = signal != nullptr ? signal->m_11_lower : 0.0;
  r.phase_error_upper = std::min(bounds.e_x_11_upper / bounds.m_x_11_lower, 0.5);
  r.raw_R = m_11 * (1.0 - binary_entropy(r.phase_error_upper)) -
            params.f * observed_m_z * binary_entropy(observed_e_z);
  r.R = std::max(r.raw_R, 0.0);
  return r;
}

double decoy_rate_per_round(const DecoyRate& rate, const Scenario& scenario) {
  const double p = round_click_prob(scenario);
  if (!(p > 0.0)) return 0.0;
  return rate.R * pairing_rate(p, scenario.lambda) / (4.0 * p * p);
}

}  // namespace mpqkd
