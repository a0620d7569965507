#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace recourse {

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Sense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string_view to_string(LpStatus status);

// min/max c·q subject to E q = b, q >= 0, and (when on_simplex) sum(q) = 1.
struct LinearProgram {
  std::vector<double> objective;
  DenseMatrix equalities;
  std::vector<double> rhs;
  Sense sense = Sense::Minimize;
  bool on_simplex = true;
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> point;
  // Infinity-norm primal residual over all equality rows.
  double residual = 0.0;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-10;
  double feasibility_tolerance = 1e-8;
  double optimality_tolerance = 1e-9;
  // Consecutive degenerate pivots before switching to Bland's rule.
  std::size_t bland_after_degenerate = 1000;
  std::size_t max_pivots = 1'000'000;
  // Columns forming an identity basis with rhs >= 0; skips Phase I.
  std::optional<std::vector<std::size_t>> initial_basis;
};

// Two-phase dense tableau simplex. Deterministic: Dantzig pricing with
// lowest-index ties, lowest-basic-index ratio ties, Bland's rule once the
// degenerate streak hits the configured limit. Maximize is solved as -min.
LpSolution solve(const LinearProgram& lp, const SimplexOptions& options = {});

// A point of {q >= 0, sum(q) = 1, E q = b} via Phase I alone.
LpSolution feasible_point(const DenseMatrix& equalities, std::span<const double> rhs,
                          const SimplexOptions& options = {});

// Seam for alternate LP backends; the in-repo simplex is the reference.
class LpBackend {
 public:
  virtual ~LpBackend() = default;
  virtual LpSolution solve(const LinearProgram& lp) const = 0;
  virtual std::string_view name() const = 0;
};

class SimplexBackend final : public LpBackend {
 public:
  explicit SimplexBackend(SimplexOptions options = {}) : options_(std::move(options)) {}
  LpSolution solve(const LinearProgram& lp) const override { return recourse::solve(lp, options_); }
  std::string_view name() const override { return "dense-simplex"; }

 private:
  SimplexOptions options_;
};

const LpBackend& default_backend();

}  // namespace recourse
