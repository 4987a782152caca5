#include "mpqkd/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpqkd {

LinearProgram::LinearProgram(std::size_t n_vars)
    : objective_(n_vars, 0.0), upper_(n_vars, std::numeric_limits<double>::infinity()) {}

void LinearProgram::set_objective(std::size_t var, double coefficient) {
  objective_.at(var) = coefficient;
}

void LinearProgram::set_upper_bound(std::size_t var, double upper) {
  if (upper < 0.0) throw std::invalid_argument("upper bound below the zero lower bound");
  upper_.at(var) = upper;
}

void LinearProgram::add_row(std::vector<std::pair<std::size_t, double>> terms, RowSense sense,
                            double rhs) {
  for (const auto& [var, coeff] : terms) {
    if (var >= n_vars()) throw std::out_of_range("row references an unknown variable");
    (void)coeff;
  }
  rows_.push_back({std::move(terms), sense, rhs});
}

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), a_(rows * cols, 0.0), b_(rows, 0.0), basis_(rows, 0), d_(cols, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& rhs(std::size_t i) { return b_[i]; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  /// Reduced costs for cost vector `c` under the current basis.
  void price(const std::vector<double>& c) {
    d_ = c;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &a_[i * n_];
      for (std::size_t j = 0; j < n_; ++j) d_[j] -= cb * row[j];
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    double* pr = &a_[r * n_];
    const double inv = 1.0 / pr[c];
    for (std::size_t j = 0; j < n_; ++j) pr[j] *= inv;
    b_[r] *= inv;
    pr[c] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* pi = &a_[i * n_];
      const double factor = pi[c];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < n_; ++j) pi[j] -= factor * pr[j];
      pi[c] = 0.0;
      b_[i] -= factor * b_[r];
    }
    const double factor = d_[c];
    if (factor != 0.0) {
      for (std::size_t j = 0; j < n_; ++j) d_[j] -= factor * pr[j];
      d_[c] = 0.0;
    }
    basis_[r] = c;
  }

  /// Runs simplex iterations on columns with `allowed[j]`.
  LpStatus optimize(const std::vector<bool>& allowed, const LpOptions& opt, int& iterations) {
    int degenerate_run = 0;
    while (true) {
      if (iterations >= opt.max_iterations) return LpStatus::IterationLimit;
      const bool bland = degenerate_run > 50;
      std::size_t enter = n_;
      double most_negative = -1e-12;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!allowed[j] || d_[j] >= most_negative) continue;
        enter = j;
        if (bland) break;
        most_negative = d_[j];
      }
      if (enter == n_) return LpStatus::Optimal;

      std::size_t leave = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double coeff = at(i, enter);
        if (coeff <= opt.pivot_tolerance) continue;
        const double ratio = std::max(b_[i], 0.0) / coeff;
        if (ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 && leave < m_ && basis_[i] < basis_[leave])) {
          best_ratio = std::min(best_ratio, ratio);
          leave = i;
        }
      }
      if (leave == m_) return LpStatus::Unbounded;
      degenerate_run = best_ratio <= 1e-14 ? degenerate_run + 1 : 0;
      pivot(leave, enter);
      ++iterations;
    }
  }

  double reduced_cost(std::size_t j) const { return d_[j]; }

 private:
  std::size_t m_, n_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<std::size_t> basis_;
  std::vector<double> d_;
};

}  // namespace

LpSolution minimize(const LinearProgram& lp, const LpOptions& options) {
  struct NormalRow {
    std::vector<std::pair<std::size_t, double>> terms;
    RowSense sense;
    double rhs;
  };
  std::vector<NormalRow> rows;
  for (const auto& r : lp.rows()) rows.push_back({r.terms, r.sense, r.rhs});
  for (std::size_t j = 0; j < lp.n_vars(); ++j) {
    if (std::isfinite(lp.upper_bounds()[j])) {
      rows.push_back({{{j, 1.0}}, RowSense::LessEqual, lp.upper_bounds()[j]});
    }
  }
  // Non-negative right-hand sides.
  for (auto& r : rows) {
    if (r.rhs < 0.0) {
      r.rhs = -r.rhs;
      for (auto& t : r.terms) t.second = -t.second;
      if (r.sense == RowSense::LessEqual) {
        r.sense = RowSense::GreaterEqual;
      } else if (r.sense == RowSense::GreaterEqual) {
        r.sense = RowSense::LessEqual;
      }
    }
  }

  const std::size_t n = lp.n_vars();
  const std::size_t m = rows.size();
  std::size_t n_slack = 0;
  std::size_t n_artificial = 0;
  for (const auto& r : rows) {
    if (r.sense != RowSense::Equal) ++n_slack;
    if (r.sense != RowSense::LessEqual) ++n_artificial;
  }
  const std::size_t cols = n + n_slack + n_artificial;
  const std::size_t first_artificial = n + n_slack;

  Tableau t(m, cols);
  std::size_t slack = n;
  std::size_t artificial = first_artificial;
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [var, coeff] : rows[i].terms) t.at(i, var) += coeff;
    t.rhs(i) = rows[i].rhs;
    switch (rows[i].sense) {
      case RowSense::LessEqual:
        t.at(i, slack) = 1.0;
        t.basis(i) = slack++;
        break;
      case RowSense::GreaterEqual:
        t.at(i, slack++) = -1.0;
        t.at(i, artificial) = 1.0;
        t.basis(i) = artificial++;
        break;
      case RowSense::Equal:
        t.at(i, artificial) = 1.0;
        t.basis(i) = artificial++;
        break;
    }
  }

  LpSolution solution;
  int iterations = 0;

  // Phase one: drive the artificial variables to zero.
  if (n_artificial > 0) {
    std::vector<double> phase_one_cost(cols, 0.0);
    for (std::size_t j = first_artificial; j < cols; ++j) phase_one_cost[j] = 1.0;
    t.price(phase_one_cost);
    std::vector<bool> allowed(cols, true);
    const LpStatus status = t.optimize(allowed, options, iterations);
    if (status == LpStatus::IterationLimit) {
      solution.status = status;
      solution.iterations = iterations;
      return solution;
    }
    double infeasibility = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis(i) >= first_artificial) infeasibility += std::max(t.rhs(i), 0.0);
    }
    if (infeasibility > options.feasibility_tolerance) {
      solution.status = LpStatus::Infeasible;
      solution.iterations = iterations;
      return solution;
    }
    // Pivot remaining zero-level artificials out where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (t.basis(i) < first_artificial) continue;
      std::size_t best = cols;
      double best_abs = options.pivot_tolerance;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (std::abs(t.at(i, j)) > best_abs) {
          best_abs = std::abs(t.at(i, j));
          best = j;
        }
      }
      if (best != cols) {
        t.rhs(i) = 0.0;
        t.pivot(i, best);
      }
    }
  }

  std::vector<double> cost(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) cost[j] = lp.objective()[j];
  t.price(cost);
  std::vector<bool> allowed(cols, true);
  for (std::size_t j = first_artificial; j < cols; ++j) allowed[j] = false;
  const LpStatus status = t.optimize(allowed, options, iterations);

  solution.status = status;
  solution.iterations = iterations;
  solution.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis(i) < n) solution.x[t.basis(i)] = std::max(t.rhs(i), 0.0);
  }
  solution.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) solution.objective += lp.objective()[j] * solution.x[j];
  return solution;
}

LpSolution maximize(const LinearProgram& lp, const LpOptions& options) {
  LinearProgram negated = lp;
  for (std::size_t j = 0; j < lp.n_vars(); ++j) negated.set_objective(j, -lp.objective()[j]);
  LpSolution s = minimize(negated, options);
  s.objective = -s.objective;
  return s;
}

}  // namespace mpqkd
