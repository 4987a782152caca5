#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace mpqkd {

enum class RowSense { LessEqual, Equal, GreaterEqual };

/// minimize c.x subject to linear rows and 0 <= x <= upper.
class LinearProgram {
 public:
  struct Row {
    std::vector<std::pair<std::size_t, double>> terms;
    RowSense sense;
    double rhs;
  };

  explicit LinearProgram(std::size_t n_vars);

  std::size_t n_vars() const { return objective_.size(); }

  void set_objective(std::size_t var, double coefficient);
  void set_upper_bound(std::size_t var, double upper);
  void add_row(std::vector<std::pair<std::size_t, double>> terms, RowSense sense, double rhs);

  const std::vector<double>& objective() const { return objective_; }
  const std::vector<double>& upper_bounds() const { return upper_; }
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<double> objective_;
  std::vector<double> upper_;
  std::vector<Row> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpOptions {
  double pivot_tolerance = 1e-11;
  /// Largest total artificial mass accepted as feasible after phase one.
  double feasibility_tolerance = 1e-9;
  int max_iterations = 100000;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
  int iterations = 0;
};

/// Dense two-phase primal simplex. Dantzig pricing, falling back to Bland's
/// rule after a run of degenerate pivots.
LpSolution minimize(const LinearProgram& lp, const LpOptions& options = {});
LpSolution maximize(const LinearProgram& lp, const LpOptions& options = {});

}  // namespace mpqkd
