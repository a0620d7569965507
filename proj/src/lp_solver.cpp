#include "recourse/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace recourse {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "?";
}

namespace {

// Constraint rows 0..m-1, reduced-cost row m; the last column is the rhs
// (the objective row stores -z there).
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), width_(cols + 1), data_((rows + 1) * (cols + 1), 0.0),
        basis_(rows, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * width_ + c]; }
  double& rhs(std::size_t r) { return data_[r * width_ + cols_]; }
  double rhs(std::size_t r) const { return data_[r * width_ + cols_]; }
  double& cost(std::size_t c) { return data_[rows_ * width_ + c]; }
  double cost(std::size_t c) const { return data_[rows_ * width_ + c]; }
  std::vector<std::size_t>& basis() { return basis_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  void pivot(std::size_t r, std::size_t c, double feasibility_tolerance) {
    double* prow = &data_[r * width_];
    const double inv = 1.0 / prow[c];
    for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
    prow[c] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      double* row = &data_[i * width_];
      const double f = row[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[c] = 0.0;
    }
    for (std::size_t i = 0; i < rows_; ++i) {
      double& b = rhs(i);
      if (b < 0.0 && b > -feasibility_tolerance) b = 0.0;
    }
    basis_[r] = c;
  }

  void erase_row(std::size_t r) {
    data_.erase(data_.begin() + static_cast<std::ptrdiff_t>(r * width_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * width_));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --rows_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t width_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

enum class PhaseOutcome { Optimal, Unbounded, IterationLimit };

struct PivotBudget {
  std::size_t pivots = 0;
  std::size_t degenerate_streak = 0;
  bool bland = false;
};

// Columns >= allowed_cols never enter the basis.
PhaseOutcome run_phase(Tableau& t, std::size_t allowed_cols, const SimplexOptions& opt,
                       PivotBudget& budget) {
  const double tie_tol = 1e-12;
  for (;;) {
    std::size_t entering = allowed_cols;
    if (budget.bland) {
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (t.cost(j) < -opt.optimality_tolerance) {
          entering = j;
          break;
        }
      }
    } else {
      double best = -opt.optimality_tolerance;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (t.cost(j) < best) {
          best = t.cost(j);
          entering = j;
        }
      }
    }
    if (entering == allowed_cols) return PhaseOutcome::Optimal;

    std::size_t leaving = t.rows();
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, entering);
      if (a <= opt.pivot_tolerance) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      if (leaving == t.rows() || ratio < best_ratio - tie_tol) {
        leaving = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + tie_tol && t.basis()[i] < t.basis()[leaving]) {
        leaving = i;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    if (leaving == t.rows()) return PhaseOutcome::Unbounded;

    if (best_ratio <= tie_tol) {
      if (++budget.degenerate_streak >= opt.bland_after_degenerate) budget.bland = true;
    } else {
      budget.degenerate_streak = 0;
    }
    t.pivot(leaving, entering, opt.feasibility_tolerance);
    if (++budget.pivots >= opt.max_pivots) return PhaseOutcome::IterationLimit;
  }
}

void load_costs(Tableau& t, std::span<const double> c, std::size_t structural) {
  for (std::size_t j = 0; j < t.cols(); ++j) t.cost(j) = j < structural ? c[j] : 0.0;
  t.rhs(t.rows()) = 0.0;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const std::size_t b = t.basis()[i];
    const double cb = b < structural ? c[b] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j < t.cols(); ++j) t.cost(j) -= cb * t.at(i, j);
    t.rhs(t.rows()) -= cb * t.rhs(i);
  }
}

void check_shape(const LinearProgram& lp) {
  const std::size_t n = lp.objective.size();
  if (lp.equalities.rows() != lp.rhs.size()) {
    throw std::invalid_argument("equality rows and rhs length differ");
  }
  if (lp.equalities.rows() > 0 && lp.equalities.cols() != n) {
    throw std::invalid_argument("equality columns and objective length differ");
  }
  for (double b : lp.rhs) {
    if (!std::isfinite(b)) throw std::invalid_argument("rhs entry not finite");
  }
  for (double c : lp.objective) {
    if (!std::isfinite(c)) throw std::invalid_argument("objective entry not finite");
  }
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SimplexOptions& opt) {
  check_shape(lp);
  const std::size_t n = lp.objective.size();
  const std::size_t m = lp.equalities.rows() + (lp.on_simplex ? 1 : 0);

  std::vector<double> rows(m * n, 0.0);
  std::vector<double> b(m, 0.0);
  for (std::size_t i = 0; i < lp.equalities.rows(); ++i) {
    std::copy_n(lp.equalities.row(i).begin(), n, rows.begin() + static_cast<std::ptrdiff_t>(i * n));
    b[i] = lp.rhs[i];
  }
  if (lp.on_simplex) {
    std::fill_n(rows.begin() + static_cast<std::ptrdiff_t>((m - 1) * n), n, 1.0);
    b[m - 1] = 1.0;
  }

  std::vector<double> cost(lp.objective);
  if (lp.sense == Sense::Maximize) {
    for (double& c : cost) c = -c;
  }

  const bool warm = opt.initial_basis.has_value();
  const std::size_t artificials = warm ? 0 : m;
  Tableau t(m, n + artificials);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = (!warm && b[i] < 0.0) ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * rows[i * n + j];
    t.rhs(i) = sign * b[i];
    if (!warm) {
      t.at(i, n + i) = 1.0;
      t.basis()[i] = n + i;
    }
  }

  LpSolution out;
  PivotBudget budget;

  if (warm) {
    const auto& basis = *opt.initial_basis;
    if (basis.size() != m) throw std::invalid_argument("initial basis size differs from row count");
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] >= n || t.rhs(i) < 0.0) throw std::invalid_argument("invalid initial basis");
      for (std::size_t k = 0; k < m; ++k) {
        if (t.at(k, basis[i]) != (k == i ? 1.0 : 0.0)) {
          throw std::invalid_argument("initial basis columns are not an identity");
        }
      }
      t.basis()[i] = basis[i];
    }
  } else {
    // Phase I: minimise the sum of artificials.
    std::vector<double> phase1(n + m, 0.0);
    std::fill(phase1.begin() + static_cast<std::ptrdiff_t>(n), phase1.end(), 1.0);
    load_costs(t, phase1, n + m);
    const PhaseOutcome p1 = run_phase(t, n, opt, budget);
    out.pivots = budget.pivots;
    if (p1 == PhaseOutcome::IterationLimit) {
      out.status = LpStatus::IterationLimit;
      return out;
    }
    if (-t.rhs(t.rows()) > opt.feasibility_tolerance) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Drive zero-level artificials out of the basis; rows with no usable
    // structural entry are redundant and dropped.
    for (std::size_t i = 0; i < t.rows();) {
      if (t.basis()[i] < n) {
        ++i;
        continue;
      }
      std::size_t col = n;
      double best = opt.pivot_tolerance;
      for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(t.at(i, j)) > best) {
          best = std::abs(t.at(i, j));
          col = j;
        }
      }
      if (col == n) {
        t.erase_row(i);
      } else {
        t.pivot(i, col, opt.feasibility_tolerance);
        ++i;
      }
    }
  }

  load_costs(t, cost, n);
  const PhaseOutcome p2 = run_phase(t, n, opt, budget);
  out.pivots = budget.pivots;
  if (p2 == PhaseOutcome::IterationLimit) {
    out.status = LpStatus::IterationLimit;
    return out;
  }
  if (p2 == PhaseOutcome::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  out.status = LpStatus::Optimal;
  out.point.assign(n, 0.0);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    if (t.basis()[i] < n) out.point[t.basis()[i]] = t.rhs(i);
  }
  out.value = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.value += lp.objective[j] * out.point[j];
  for (std::size_t i = 0; i < m; ++i) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < n; ++j) lhs += rows[i * n + j] * out.point[j];
    out.residual = std::max(out.residual, std::abs(lhs - b[i]));
  }
  return out;
}

LpSolution feasible_point(const DenseMatrix& equalities, std::span<const double> rhs,
                          const SimplexOptions& options) {
  if (equalities.cols() == 0) {
    throw std::invalid_argument("feasible_point needs the dimension; pass a 0 x n matrix");
  }
  LinearProgram lp;
  lp.objective.assign(equalities.cols(), 0.0);
  lp.equalities = equalities;
  lp.rhs.assign(rhs.begin(), rhs.end());
  lp.on_simplex = true;
  return solve(lp, options);
}

const LpBackend& default_backend() {
  static const SimplexBackend backend;
  return backend;
}

}  // namespace recourse
