#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "recourse/causal_model.hpp"
#include "recourse/fc_bounds.hpp"

namespace recourse {

// One factor P(outputs | parents) of the response distribution. Under
// partial or no confounding every block has a single output R_i; a fully
// confounded problem is one block holding the whole joint table.
struct ParameterBlock {
  std::vector<std::size_t> outputs;
  std::vector<std::size_t> parents;
  std::uint64_t output_cardinality = 1;
  std::uint64_t parent_cardinality = 1;

  std::uint64_t entries() const { return output_cardinality * parent_cardinality; }
  std::uint64_t free_parameters() const { return parent_cardinality * (output_cardinality - 1); }
};

// tables[b][j * output_cardinality + o] = P(outputs = o | parents = j); each
// column j is a probability vector.
struct FactorizedParams {
  std::vector<std::vector<double>> tables;
};

struct PcOptions {
  // Treat partial specs with all-predecessor (or empty) response parents as
  // full (or no) confounding, which parametrise the same set of P_R.
  bool collapse_equivalent = true;
};

class PcProblem {
 public:
  PcProblem(ConstraintSystem system, ObjectiveVector objective, const ConfoundingSpec& spec,
            PcOptions options = {});

  const ConstraintSystem& system() const { return system_; }
  const ObjectiveVector& objective() const { return objective_; }
  const std::vector<ParameterBlock>& blocks() const { return blocks_; }
  std::uint64_t free_parameters() const;
  // Table entry of block b that response profile r reads.
  std::uint64_t entry(std::size_t block, std::uint64_t r) const { return entry_[block][r]; }
  // Number of leading response variables fixed once blocks 0..b are chosen.
  std::size_t prefix_end(std::size_t block) const { return prefix_end_[block]; }

  void check(const FactorizedParams& params) const;
  FactorizedParams uniform() const;

 private:
  ConstraintSystem system_;
  ObjectiveVector objective_;
  std::vector<ParameterBlock> blocks_;
  std::vector<std::vector<std::uint64_t>> entry_;
  std::vector<std::size_t> prefix_end_;
};

// q_r = prod_b s_b[entry_b(r)].
std::vector<double> assemble_q(const PcProblem& problem, const FactorizedParams& params);

// Conditional tables of a joint q under the problem's factorisation.
FactorizedParams factorize(const PcProblem& problem, std::span<const double> q);

// ||A q - p||_1
double constraint_residual(const ConstraintSystem& system, std::span<const double> q);

struct PcLocalOptions {
  std::size_t restarts = 32;
  std::uint64_t seed = 0;
  double penalty = 100.0;
  std::size_t max_sweeps = 200;
  double tolerance = 1e-7;
  double feasibility = 1e-6;
  unsigned threads = 0;  // 0: hardware concurrency
};

// Multi-start block-coordinate descent on the bilinear program. Each block
// update is an LP (penalised L1 residual); each run then restores feasibility
// by EM on the factorised tables and refines with A q held fixed. Uncertified.
BoundsResult pc_local_bounds(const PcProblem& problem, const PcLocalOptions& options = {});

struct GridOptions {
  double resolution = 0.05;
  std::uint64_t max_free_parameters = 12;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  unsigned threads = 0;
};

// Exhaustive simplex-grid search over all parameter tables. Keeps points with
// ||A q - p||_1 < resolution and reports the envelope of E_q[h(cf) | x^F].
BoundsResult pc_grid_certify(const PcProblem& problem, const GridOptions& options = {});

}  // namespace recourse
