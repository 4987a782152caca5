#include "mpqkd/sweep.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <omp.h>

#include "mpqkd/decoy.hpp"
#include "mpqkd/mc_sim.hpp"

namespace mpqkd {
namespace {

using nlohmann::json;

constexpr std::pair<SweepMode, const char*> kModeNames[] = {
    {SweepMode::Table2, "table2"}, {SweepMode::Table3, "table3"}, {SweepMode::Table4, "table4"},
    {SweepMode::Table5, "table5"}, {SweepMode::Fig3, "fig3"},     {SweepMode::Fig4, "fig4"},
    {SweepMode::Fig5, "fig5"},     {SweepMode::Fig6, "fig6"},     {SweepMode::Fig7, "fig7"},
    {SweepMode::Custom, "custom"}};

constexpr std::pair<Method, const char*> kMethodNames[] = {
    {Method::OI, "OI"}, {Method::AF, "AF"}, {Method::PLOB, "PLOB"}, {Method::Fixed, "fixed"}};

std::vector<PairingInterval> decades(int from, int to) {
  std::vector<PairingInterval> out;
  std::uint64_t v = 1;
  for (int e = 0; e <= to; ++e) {
    if (e >= from) out.emplace_back(v);
    v *= 10;
  }
  return out;
}

std::vector<double> range(double start, double stop, double step) {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = start + i * step;
    if (v > stop + 1e-9) break;
    out.push_back(v);
  }
  return out;
}

// Collects problems so one ValidationError can name all of them.
struct Issues {
  std::vector<std::string> list;
  void add(std::string s) { list.push_back(std::move(s)); }
  void raise() const {
    if (list.empty()) return;
    std::string msg = "invalid sweep spec:";
    for (const auto& s : list) msg += "\n  " + s;
    throw ValidationError(msg);
  }
};

std::optional<double> get_number(const json& j, const std::string& field, Issues& issues) {
  if (!j.is_number()) {
    issues.add(field + ": expected a number");
    return std::nullopt;
  }
  return j.get<double>();
}

std::optional<PairingInterval> get_lambda(const json& j, const std::string& field,
                                          Issues& issues) {
  try {
    if (j.is_string()) return PairingInterval::parse(j.get<std::string>());
    if (j.is_number()) {
      const double v = j.get<double>();
      if (!(v >= 1.0) || v != std::floor(v) || v > 1e18) {
        issues.add(field + ": pairing interval must be an integer >= 1 or \"inf\"");
        return std::nullopt;
      }
      return PairingInterval(static_cast<std::uint64_t>(v));
    }
  } catch (const std::exception& e) {
    issues.add(field + ": " + e.what());
    return std::nullopt;
  }
  issues.add(field + ": expected an integer or \"inf\"");
  return std::nullopt;
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where,
                Issues& issues) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) issues.add(where + it.key() + ": unknown key");
  }
}

void parse_params(const json& j, SystemParams& p, const std::string& where, Issues& issues) {
  if (!j.is_object()) {
    issues.add(where + ": expected an object");
    return;
  }
  check_keys(j, {"eta_d", "alpha", "p_d", "f", "e_d"}, where + ".", issues);
  auto set = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (auto v = get_number(j[key], where + "." + key, issues)) dst = *v;
  };
  set("eta_d", p.eta_d);
  set("alpha", p.alpha);
  set("p_d", p.p_d);
  set("f", p.f);
  set("e_d", p.e_d);
}

std::vector<double> number_list(const json& j, const std::string& field, Issues& issues) {
  std::vector<double> out;
  if (!j.is_array()) {
    issues.add(field + ": expected a list");
    return out;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (auto v = get_number(j[i], field + "[" + std::to_string(i) + "]", issues)) out.push_back(*v);
  }
  return out;
}

VerifyPoint parse_point(const json& j, const std::string& where, const SystemParams& base,
                        Issues& issues) {
  VerifyPoint p;
  p.params = base;
  if (!j.is_object()) {
    issues.add(where + ": expected an object");
    return p;
  }
  check_keys(j,
             {"kind", "name", "L_a", "L_b", "mu_a", "mu_b", "nu_a", "nu_b", "lambda", "params"},
             where + ".", issues);
  if (j.contains("kind")) {
    const json& k = j["kind"];
    if (k == "mc") {
      p.kind = VerifyPoint::Kind::MonteCarlo;
    } else if (k == "decoy") {
      p.kind = VerifyPoint::Kind::Decoy;
    } else {
      issues.add(where + ".kind: expected \"mc\" or \"decoy\"");
    }
  }
  if (j.contains("name")) {
    if (j["name"].is_string()) {
      p.name = j["name"].get<std::string>();
    } else {
      issues.add(where + ".name: expected a string");
    }
  }
  auto set = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    if (auto v = get_number(j[key], where + "." + key, issues)) dst = *v;
  };
  set("L_a", p.L_a);
  set("L_b", p.L_b);
  set("mu_a", p.mu_a);
  set("mu_b", p.mu_b);
  set("nu_a", p.nu_a);
  set("nu_b", p.nu_b);
  if (j.contains("lambda")) {
    if (auto l = get_lambda(j["lambda"], where + ".lambda", issues)) p.lambda = *l;
  }
  if (j.contains("params")) parse_params(j["params"], p.params, where + ".params", issues);
  if (p.name.empty()) p.name = where;
  return p;
}

Scenario point_scenario(const VerifyPoint& p) {
  Scenario s = Scenario::from_distances(p.L_a, p.L_b, p.mu_a, p.mu_b, p.lambda, p.params);
  s.nu_a = p.nu_a;
  s.nu_b = p.nu_b;
  return s;
}

ResultRow evaluate(const SweepSpec& spec, Method method, double L_a, double Delta,
                   PairingInterval lambda, double e_d) {
  SystemParams params = spec.params;
  params.e_d = e_d;
  ResultRow row;
  row.mode = spec.mode;
  row.method = method;
  row.L_a = L_a;
  row.L_b = L_a + Delta;
  row.Delta = Delta;
  row.total = row.L_a + row.L_b;
  row.e_d = e_d;
  row.plob = plob_bound(row.total, params, spec.plob_convention);
  if (method == Method::PLOB) {
    row.delta = std::numeric_limits<double>::quiet_NaN();
    row.mu_a = row.mu_b = std::numeric_limits<double>::quiet_NaN();
    row.R = row.plob;
    return row;
  }
  const OptimizationProblem problem = OptimizationProblem::from_distances(L_a, L_a + Delta, lambda, params);
  row.delta = problem.delta;
  row.lambda = lambda;
  SearchOptions options;
  options.workers = 1;
  switch (method) {
    case Method::OI: {
      const OptimumReport r = optimize_intensities(problem, options);
      row.mu_a = r.mu_a_star;
      row.mu_b = r.mu_b_star;
      row.R = r.R_star;
      if (r.R_star > 0.0) row.breakdown = r.breakdown;
      break;
    }
    case Method::AF: {
      const OptimumReport r = adding_fiber_optimum(problem, options);
      row.mu_a = r.mu_a_star;
      row.mu_b = r.mu_b_star;
      row.R = r.R_star;
      if (r.R_star > 0.0) row.breakdown = r.breakdown;
      break;
    }
    case Method::Fixed: {
      row.mu_a = spec.fixed_intensity->mu_a;
      row.mu_b = spec.fixed_intensity->mu_b;
      try {
        row.breakdown = key_rate(problem.scenario(row.mu_a, row.mu_b));
        row.R = row.breakdown->R;
      } catch (const ModelDegenerateError&) {
        row.R = 0.0;
      }
      break;
    }
    case Method::PLOB:
      break;
  }
  return row;
}

// One unit of parallel work: a single point, or a whole distance curve that
// is walked in order so it can stop at the cutoff.
struct Task {
  Method method;
  double Delta;
  PairingInterval lambda;
  double e_d;
};

std::vector<ResultRow> run_task(const SweepSpec& spec, const Task& t) {
  std::vector<ResultRow> rows;
  if (!spec.distance) {
    rows.push_back(evaluate(spec, t.method, spec.L_a, t.Delta, t.lambda, t.e_d));
    return rows;
  }
  for (double total : range(spec.distance->start, spec.distance->stop, spec.distance->step)) {
    const double L_a = (total - t.Delta) / 2.0;
    if (!(L_a > 0.0)) continue;
    ResultRow row = evaluate(spec, t.method, L_a, t.Delta, t.lambda, t.e_d);
    if (row.R < spec.cutoff) break;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

const char* to_string(SweepMode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "?";
}

const char* to_string(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "?";
}

SweepSpec SweepSpec::preset(SweepMode mode) {
  SweepSpec s;
  s.mode = mode;
  switch (mode) {
    case SweepMode::Table2:
      s.deltas = {0.0, 50.0, 100.0};  // delta = 1, 10, 100
      s.lambdas = {PairingInterval(1000000)};
      break;
    case SweepMode::Table3:
      s.deltas = {0.0, 50.0, 100.0};
      s.lambdas = {PairingInterval(1)};
      break;
    case SweepMode::Table4:
      s.deltas = {50.0};
      s.lambdas = decades(0, 6);
      break;
    case SweepMode::Table5:
      s.deltas = {0.0};
      s.lambdas = decades(0, 6);
      break;
    case SweepMode::Fig3:
      s.deltas = range(0.0, 200.0, 5.0);
      s.lambdas = {PairingInterval(1000000), PairingInterval(1)};
      break;
    case SweepMode::Fig4:
    case SweepMode::Fig5:
      s.distance = DistanceGrid{};
      s.deltas = {0.0, 50.0, 100.0, 150.0};
      s.lambdas = {PairingInterval(mode == SweepMode::Fig4 ? 1000000 : 1)};
      s.methods = {Method::OI, Method::AF, Method::PLOB};
      break;
    case SweepMode::Fig6:
      s.distance = DistanceGrid{};
      s.deltas = {50.0};
      s.lambdas = decades(0, 6);
      s.methods = {Method::OI, Method::PLOB};
      break;
    case SweepMode::Fig7:
      s.distance = DistanceGrid{};
      s.deltas = {0.0, 50.0, 100.0};
      s.lambdas = {PairingInterval(1000000)};
      s.e_ds = {0.04, 0.10, 0.20};
      s.methods = {Method::OI, Method::PLOB};
      break;
    case SweepMode::Custom:
      break;
  }
  return s;
}

SweepSpec SweepSpec::from_json(const json& doc) {
  Issues issues;
  if (!doc.is_object()) throw ValidationError("invalid sweep spec:\n  top level must be an object");
  check_keys(doc,
             {"mode", "L_a", "distance", "deltas", "lambdas", "e_d", "methods", "fixed_intensity",
              "output", "seed", "workers", "cutoff", "plob_convention", "params", "verify"},
             "", issues);

  SweepMode mode = SweepMode::Custom;
  if (doc.contains("mode")) {
    bool found = false;
    if (doc["mode"].is_string()) {
      for (const auto& [m, name] : kModeNames) {
        if (doc["mode"] == name) {
          mode = m;
          found = true;
        }
      }
    }
    if (!found) issues.add("mode: expected one of table2..table5, fig3..fig7, custom");
  }
  SweepSpec s = preset(mode);

  if (doc.contains("params")) parse_params(doc["params"], s.params, "params", issues);
  if (doc.contains("L_a")) {
    if (auto v = get_number(doc["L_a"], "L_a", issues)) s.L_a = *v;
  }
  if (doc.contains("distance")) {
    const json& d = doc["distance"];
    if (d.is_null()) {
      s.distance.reset();
    } else if (!d.is_object()) {
      issues.add("distance: expected an object with start/stop/step");
    } else {
      check_keys(d, {"start", "stop", "step"}, "distance.", issues);
      DistanceGrid g = s.distance.value_or(DistanceGrid{});
      if (d.contains("start")) {
        if (auto v = get_number(d["start"], "distance.start", issues)) g.start = *v;
      }
      if (d.contains("stop")) {
        if (auto v = get_number(d["stop"], "distance.stop", issues)) g.stop = *v;
      }
      if (d.contains("step")) {
        if (auto v = get_number(d["step"], "distance.step", issues)) g.step = *v;
      }
      s.distance = g;
    }
  }
  if (doc.contains("deltas")) s.deltas = number_list(doc["deltas"], "deltas", issues);
  if (doc.contains("e_d")) s.e_ds = number_list(doc["e_d"], "e_d", issues);
  if (doc.contains("lambdas")) {
    s.lambdas.clear();
    const json& l = doc["lambdas"];
    if (!l.is_array()) {
      issues.add("lambdas: expected a list");
    } else {
      for (std::size_t i = 0; i < l.size(); ++i) {
        if (auto v = get_lambda(l[i], "lambdas[" + std::to_string(i) + "]", issues)) {
          s.lambdas.push_back(*v);
        }
      }
    }
  }
  if (doc.contains("methods")) {
    s.methods.clear();
    const json& m = doc["methods"];
    if (!m.is_array()) {
      issues.add("methods: expected a list");
    } else {
      for (std::size_t i = 0; i < m.size(); ++i) {
        bool found = false;
        for (const auto& [method, name] : kMethodNames) {
          if (m[i] == name) {
            s.methods.push_back(method);
            found = true;
          }
        }
        if (!found) issues.add("methods[" + std::to_string(i) + "]: expected OI, AF, PLOB or fixed");
      }
    }
  }
  if (doc.contains("fixed_intensity")) {
    const std::vector<double> v = number_list(doc["fixed_intensity"], "fixed_intensity", issues);
    if (v.size() == 2) {
      s.fixed_intensity = IntensityPair{v[0], v[1]};
    } else {
      issues.add("fixed_intensity: expected [mu_a, mu_b]");
    }
  }
  if (doc.contains("output")) {
    if (doc["output"].is_string()) {
      s.output = doc["output"].get<std::string>();
    } else {
      issues.add("output: expected a path string");
    }
  }
  if (doc.contains("seed")) {
    if (doc["seed"].is_number_unsigned()) {
      s.seed = doc["seed"].get<std::uint64_t>();
    } else {
      issues.add("seed: expected a nonnegative integer");
    }
  }
  if (doc.contains("workers")) {
    if (doc["workers"].is_number_integer()) {
      s.workers = doc["workers"].get<int>();
    } else {
      issues.add("workers: expected an integer");
    }
  }
  if (doc.contains("cutoff")) {
    if (auto v = get_number(doc["cutoff"], "cutoff", issues)) s.cutoff = *v;
  }
  if (doc.contains("plob_convention")) {
    const json& c = doc["plob_convention"];
    if (c == "detector") {
      s.plob_convention = PlobConvention::IncludeDetector;
    } else if (c == "channel") {
      s.plob_convention = PlobConvention::ChannelOnly;
    } else {
      issues.add("plob_convention: expected \"detector\" or \"channel\"");
    }
  }
  if (doc.contains("verify")) {
    const json& v = doc["verify"];
    if (!v.is_object()) {
      issues.add("verify: expected an object");
    } else {
      check_keys(v, {"n_rounds", "points"}, "verify.", issues);
      if (v.contains("n_rounds")) {
        const json& n = v["n_rounds"];
        if (n.is_number() && n.get<double>() >= 1.0 && n.get<double>() == std::floor(n.get<double>())) {
          s.verify_rounds = static_cast<std::uint64_t>(n.get<double>());
        } else {
          issues.add("verify.n_rounds: expected an integer >= 1");
        }
      }
      if (v.contains("points")) {
        const json& pts = v["points"];
        if (!pts.is_array()) {
          issues.add("verify.points: expected a list");
        } else {
          for (std::size_t i = 0; i < pts.size(); ++i) {
            s.verify_points.push_back(
                parse_point(pts[i], "verify.points[" + std::to_string(i) + "]", s.params, issues));
          }
        }
      }
    }
  }
  issues.raise();
  s.validate();
  return s;
}

void SweepSpec::validate() const {
  Issues issues;
  try {
    params.validate();
  } catch (const std::exception& e) {
    issues.add(std::string("params: ") + e.what());
  }
  if (methods.empty()) issues.add("methods: must not be empty");
  if (deltas.empty()) issues.add("deltas: must not be empty");
  if (lambdas.empty()) issues.add("lambdas: must not be empty");
  for (double d : deltas) {
    if (!(d >= 0.0)) issues.add("deltas: values must be >= 0");
  }
  for (double e : e_ds) {
    if (!(e >= 0.0 && e < 0.5)) issues.add("e_d: values must lie in [0, 0.5)");
  }
  if (distance) {
    if (!(distance->step > 0.0)) issues.add("distance.step: must be > 0");
    if (!(distance->start >= 0.0)) issues.add("distance.start: must be >= 0");
    if (!(distance->stop >= distance->start)) issues.add("distance.stop: must be >= start");
  } else if (!(L_a > 0.0)) {
    issues.add("L_a: must be > 0");
  }
  for (Method m : methods) {
    if (m == Method::Fixed && !fixed_intensity) {
      issues.add("fixed_intensity: required by the fixed method");
    }
  }
  if (fixed_intensity && !(fixed_intensity->mu_a > 0.0 && fixed_intensity->mu_a <= 1.0 &&
                           fixed_intensity->mu_b > 0.0 && fixed_intensity->mu_b <= 1.0)) {
    issues.add("fixed_intensity: values must lie in (0, 1]");
  }
  if (workers < 0) issues.add("workers: must be >= 0");
  if (!(cutoff >= 0.0)) issues.add("cutoff: must be >= 0");
  for (const auto& p : verify_points) {
    try {
      point_scenario(p).validate();
      if (p.kind == VerifyPoint::Kind::Decoy) DecoyConfig::from_scenario(point_scenario(p)).validate();
    } catch (const std::exception& e) {
      issues.add(p.name + ": " + e.what());
    }
  }
  issues.raise();
}

SweepSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("invalid sweep spec:\n  not valid JSON: ") + e.what());
  }
  return SweepSpec::from_json(doc);
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> e_ds = spec.e_ds.empty() ? std::vector<double>{spec.params.e_d} : spec.e_ds;
  std::vector<Task> tasks;
  bool plob = false;
  for (const auto& lambda : spec.lambdas) {
    for (double e_d : e_ds) {
      for (double Delta : spec.deltas) {
        for (Method m : spec.methods) {
          if (m == Method::PLOB && spec.distance) {
            plob = true;
            continue;
          }
          tasks.push_back({m, Delta, lambda, e_d});
        }
      }
    }
  }
  // The bound depends only on the total distance, so curves get one copy.
  if (plob) tasks.push_back({Method::PLOB, 0.0, spec.lambdas.front(), e_ds.front()});

  std::vector<std::vector<ResultRow>> out(tasks.size());
  const int threads = spec.workers > 0 ? spec.workers : omp_get_max_threads();
  const auto n = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = run_task(spec, tasks[static_cast<std::size_t>(i)]);
  }

  std::vector<ResultRow> rows;
  for (auto& v : out) {
    for (auto& r : v) rows.push_back(std::move(r));
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "mode,method,L_a,L_b,Delta,total,delta,lambda,e_d,mu_a,mu_b,ratio,R,plob,"
         "p,r_p,r_s,q_bar_11,e_z,e_11\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const ResultRow& r : rows) {
    const KeyRateBreakdown* b = r.breakdown ? &*r.breakdown : nullptr;
    out << to_string(r.mode) << ',' << to_string(r.method) << ',' << fmt(r.L_a) << ','
        << fmt(r.L_b) << ',' << fmt(r.Delta) << ',' << fmt(r.total) << ',' << fmt(r.delta) << ','
        << (r.lambda ? r.lambda->to_string() : "") << ',' << fmt(r.e_d) << ',' << fmt(r.mu_a)
        << ',' << fmt(r.mu_b) << ',' << fmt(r.mu_b / r.mu_a) << ',' << fmt(r.R) << ','
        << fmt(r.plob) << ',' << fmt(b ? b->p : nan) << ',' << fmt(b ? b->r_p : nan) << ','
        << fmt(b ? b->r_s : nan) << ',' << fmt(b ? b->q_bar_11 : nan) << ','
        << fmt(b ? b->e_z : nan) << ',' << fmt(b ? b->e_11 : nan) << '\n';
  }
}

bool VerifyReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<VerifyPoint> default_verify_points(const SystemParams& base) {
  std::vector<VerifyPoint> pts(3);
  for (auto& p : pts) p.params = base;
  pts[0].name = "sym100";
  pts[1].name = "sym100_no_dark";
  pts[1].params.p_d = 0.0;
  pts[2].name = "decoy_100_150";
  pts[2].kind = VerifyPoint::Kind::Decoy;
  pts[2].L_b = 150.0;
  pts[2].mu_a = 0.24;
  pts[2].mu_b = 0.76;
  pts[2].nu_a = 0.05;
  pts[2].nu_b = 0.05;
  pts[2].lambda = PairingInterval(1000000);
  return pts;
}

namespace {

// Within three binomial standard errors of the model value.
CheckResult within_3se(const std::string& name, const Estimate& e, double model) {
  CheckResult c;
  c.name = name;
  c.expected = model;
  c.measured = e.value.value_or(std::numeric_limits<double>::quiet_NaN());
  const double n = static_cast<double>(e.trials);
  c.tolerance = n > 0.0 ? 3.0 * std::sqrt(model * (1.0 - model) / n) : 0.0;
  c.passed = e.defined() && std::abs(c.measured - model) <= c.tolerance;
  return c;
}

void verify_mc(const VerifyPoint& pt, const SweepSpec& spec, VerifyReport& report) {
  const Scenario s = point_scenario(pt);
  const KeyRateBreakdown model = key_rate(s);
  const SimulationRun run = simulate_rounds(s, spec.verify_rounds, spec.seed, spec.workers);
  const auto pairs = sift_and_map(pair_clicks(run.clicks, s.lambda), s.params.e_d, spec.seed);
  const EmpiricalStats st = estimate_statistics(pairs, run);
  report.checks.push_back(within_3se(pt.name + ".p", st.p, model.p));
  report.checks.push_back(within_3se(pt.name + ".r_p", st.r_p, model.r_p));
  report.checks.push_back(within_3se(pt.name + ".r_s", st.r_s, model.r_s));
  report.checks.push_back(within_3se(pt.name + ".q_bar", st.q_bar, model.q_bar_11));
  if (s.params.p_d == 0.0) {
    CheckResult c;
    c.name = pt.name + ".e_z_zero";
    c.measured = st.e_z.value.value_or(std::numeric_limits<double>::quiet_NaN());
    c.passed = st.e_z.defined() && st.e_z.successes == 0;
    report.checks.push_back(c);
  }
}

void verify_decoy(const VerifyPoint& pt, VerifyReport& report) {
  const Scenario s = point_scenario(pt);
  const DecoyConfig cfg = DecoyConfig::from_scenario(s);
  const DecoyObservables obs = expected_observables(s, cfg);
  const DecoyBounds b = bound_single_photon(obs, cfg);
  const PhotonYields truth = ground_truth_yields(s, 1);
  const std::size_t k11 = truth.index(1, 1);

  CheckResult m;
  m.name = pt.name + ".m_z_11_lower";
  m.measured = b.m_z_11_lower;
  m.expected = truth.m_z[k11];
  m.passed = b.m_z_11_lower <= truth.m_z[k11];
  report.checks.push_back(m);

  CheckResult e;
  e.name = pt.name + ".e_z_11_upper";
  e.measured = b.e_z_11_upper;
  e.expected = truth.e_z[k11];
  e.passed = b.e_z_11_upper >= truth.e_z[k11];
  report.checks.push_back(e);

  const ObservedVector* signal = obs.find_z({SumClass::Mu, SumClass::Mu});
  CheckResult r;
  r.name = pt.name + ".rate_below_model";
  r.expected = key_rate(s).R;
  r.tolerance = 1e-12;
  if (signal != nullptr) {
    const DecoyRate dr =
        decoy_key_rate(b, signal->total, signal->error / signal->total, s.params);
    r.measured = decoy_rate_per_round(dr, s);
  }
  r.passed = signal != nullptr && r.measured <= r.expected + r.tolerance;
  report.checks.push_back(r);
}

}  // namespace

VerifyReport verify_oracles(const SweepSpec& spec) {
  VerifyReport report;
  const std::vector<VerifyPoint> points =
      spec.verify_points.empty() ? default_verify_points(spec.params) : spec.verify_points;
  for (const VerifyPoint& pt : points) {
    if (pt.kind == VerifyPoint::Kind::MonteCarlo) {
      verify_mc(pt, spec, report);
    } else {
      verify_decoy(pt, report);
    }
  }
  return report;
}

void write_report(std::ostream& out, const VerifyReport& report) {
  for (const CheckResult& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " measured=" << fmt(c.measured)
        << " expected=" << fmt(c.expected) << " tol=" << fmt(c.tolerance) << '\n';
  }
}

}  // namespace mpqkd
