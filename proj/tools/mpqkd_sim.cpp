#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mpqkd/optimizer.hpp"
#include "mpqkd/sweep.hpp"

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kIo = 2, kVerifyFailed = 3 };

void apply_seed_override(mpqkd::SweepSpec& spec) {
  const char* env = std::getenv("MPQKD_SEED");
  if (env == nullptr || *env == '\0') return;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    spec.seed = v;
  } catch (const std::exception&) {
    throw mpqkd::ValidationError(std::string("MPQKD_SEED: not an unsigned integer: ") + env);
  }
}

int cmd_run(const std::string& config, const std::string& out_path, int workers) {
  mpqkd::SweepSpec spec = mpqkd::load_spec(config);
  apply_seed_override(spec);
  if (workers >= 0) spec.workers = workers;
  if (!out_path.empty()) spec.output = out_path;
  spec.validate();

  const auto rows = mpqkd::run_sweep(spec);
  if (spec.output.empty()) {
    mpqkd::write_csv(std::cout, rows);
    return kOk;
  }
  std::ofstream out(spec.output);
  if (!out) throw mpqkd::IoError("cannot write " + spec.output);
  mpqkd::write_csv(out, rows);
  out.close();
  if (!out) throw mpqkd::IoError("failed writing " + spec.output);
  std::cerr << rows.size() << " rows written to " << spec.output << '\n';
  return kOk;
}

int cmd_verify(const std::string& config) {
  mpqkd::SweepSpec spec = mpqkd::load_spec(config);
  apply_seed_override(spec);
  const mpqkd::VerifyReport report = mpqkd::verify_oracles(spec);
  mpqkd::write_report(std::cout, report);
  return report.all_passed() ? kOk : kVerifyFailed;
}

int cmd_optimize(double la, double delta, const std::string& lambda_text) {
  mpqkd::OptimizationProblem problem;
  problem.L_a = la;
  problem.delta = delta;
  try {
    problem.lambda = mpqkd::PairingInterval::parse(lambda_text);
    problem.validate();
  } catch (const std::invalid_argument& e) {
    throw mpqkd::ValidationError(e.what());
  }
  mpqkd::SearchOptions options;
  options.workers = 0;
  const mpqkd::OptimumReport r = mpqkd::optimize_intensities(problem, options);
  std::printf("mu_a=%.6f mu_b=%.6f R=%.10g\n", r.mu_a_star, r.mu_b_star, r.R_star);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymmetric mode-pairing QKD key-rate toolkit"};
  app.require_subcommand(1);

  std::string config;
  std::string out_path;
  int workers = -1;
  auto* run = app.add_subcommand("run", "Run a sweep and write CSV");
  run->add_option("--config", config, "JSON sweep spec")->required();
  run->add_option("--out", out_path, "CSV output path (default: spec output or stdout)");
  run->add_option("--workers", workers, "Worker threads, 0 = all")->check(CLI::NonNegativeNumber);

  std::string verify_config;
  auto* verify = app.add_subcommand("verify", "Check the model against Monte Carlo and decoy oracles");
  verify->add_option("--config", verify_config, "JSON sweep spec")->required();

  double la = 0.0;
  double delta = 1.0;
  std::string lambda_text;
  auto* optimize = app.add_subcommand("optimize", "Optimal intensities for one link pair");
  optimize->add_option("--la", la, "Alice's distance, km")->required();
  optimize->add_option("--delta", delta, "Transmittance ratio eta_a/eta_b")->required();
  optimize->add_option("--lambda", lambda_text, "Maximal pairing interval, integer or inf")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*run) return cmd_run(config, out_path, workers);
    if (*verify) return cmd_verify(verify_config);
    if (*optimize) return cmd_optimize(la, delta, lambda_text);
  } catch (const mpqkd::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const mpqkd::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
