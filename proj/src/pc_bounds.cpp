#include "recourse/pc_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "recourse/detail/parallel.hpp"
#include "recourse/detail/random.hpp"
#include "recourse/errors.hpp"

namespace recourse {

PcProblem::PcProblem(ConstraintSystem system, ObjectiveVector objective,
                     const ConfoundingSpec& spec, PcOptions options)
    : system_(std::move(system)), objective_(std::move(objective)) {
  const ResponseSpace& space = system_.space();
  const std::size_t n = space.size();
  if (objective_.c.size() != system_.cols()) {
    throw DomainError("objective length does not match the constraint system");
  }
  if (spec.mode == ConfoundingMode::Partial && spec.response_parents.size() != n) {
    throw ModelError("confounding spec does not list response parents for every variable");
  }

  const bool full = spec.mode == ConfoundingMode::Full ||
                    (options.collapse_equivalent && spec.equivalent_to_full(n));
  if (full) {
    ParameterBlock block;
    block.outputs.resize(n);
    for (std::size_t i = 0; i < n; ++i) block.outputs[i] = i;
    block.output_cardinality = space.total();
    blocks_.push_back(std::move(block));
    prefix_end_.push_back(n);
    std::vector<std::uint64_t> identity(space.total());
    for (std::uint64_t r = 0; r < identity.size(); ++r) identity[r] = r;
    entry_.push_back(std::move(identity));
    return;
  }

  for (std::size_t i = 0; i < n; ++i) {
    ParameterBlock block;
    block.outputs = {i};
    block.parents = spec.parents_of(i);
    block.output_cardinality = space.count(i);
    for (std::size_t j : block.parents) {
      if (j >= i) throw ModelError("response parents must precede their child");
      block.parent_cardinality *= space.count(j);
    }
    std::vector<std::uint64_t> entries(space.total());
    for (auto cur = space.begin(); cur.valid(); cur.next()) {
      const auto& d = cur.digits();
      std::uint64_t col = 0;
      std::uint64_t stride = 1;
      for (std::size_t j : block.parents) {
        col += d[j] * stride;
        stride *= space.count(j);
      }
      entries[cur.index()] = col * block.output_cardinality + d[i];
    }
    blocks_.push_back(std::move(block));
    prefix_end_.push_back(i + 1);
    entry_.push_back(std::move(entries));
  }
}

std::uint64_t PcProblem::free_parameters() const {
  std::uint64_t total = 0;
  for (const auto& b : blocks_) total += b.free_parameters();
  return total;
}

void PcProblem::check(const FactorizedParams& params) const {
  if (params.tables.size() != blocks_.size()) {
    throw DomainError("parameter tables do not match the confounding structure");
  }
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& blk = blocks_[b];
    const auto& t = params.tables[b];
    if (t.size() != blk.entries()) {
      throw DomainError("parameter table " + std::to_string(b) + " has " +
                        std::to_string(t.size()) + " entries, expected " +
                        std::to_string(blk.entries()));
    }
    for (std::uint64_t j = 0; j < blk.parent_cardinality; ++j) {
      double sum = 0.0;
      for (std::uint64_t o = 0; o < blk.output_cardinality; ++o) {
        const double v = t[j * blk.output_cardinality + o];
        if (!(v >= 0.0)) throw DomainError("negative conditional probability");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw DomainError("conditional table column does not sum to 1");
      }
    }
  }
}

FactorizedParams PcProblem::uniform() const {
  FactorizedParams params;
  for (const auto& blk : blocks_) {
    params.tables.emplace_back(blk.entries(), 1.0 / static_cast<double>(blk.output_cardinality));
  }
  return params;
}

std::vector<double> assemble_q(const PcProblem& problem, const FactorizedParams& params) {
  problem.check(params);
  const std::uint64_t cols = problem.system().cols();
  std::vector<double> q(cols, 1.0);
  for (std::size_t b = 0; b < problem.blocks().size(); ++b) {
    const auto& t = params.tables[b];
    for (std::uint64_t r = 0; r < cols; ++r) q[r] *= t[problem.entry(b, r)];
  }
  return q;
}

FactorizedParams factorize(const PcProblem& problem, std::span<const double> q) {
  if (q.size() != problem.system().cols()) throw DomainError("q has the wrong length");
  FactorizedParams params;
  for (std::size_t b = 0; b < problem.blocks().size(); ++b) {
    const auto& blk = problem.blocks()[b];
    std::vector<double> joint(blk.entries(), 0.0);
    for (std::uint64_t r = 0; r < q.size(); ++r) joint[problem.entry(b, r)] += q[r];
    for (std::uint64_t j = 0; j < blk.parent_cardinality; ++j) {
      double mass = 0.0;
      for (std::uint64_t o = 0; o < blk.output_cardinality; ++o) {
        mass += joint[j * blk.output_cardinality + o];
      }
      for (std::uint64_t o = 0; o < blk.output_cardinality; ++o) {
        double& v = joint[j * blk.output_cardinality + o];
        v = mass > 0.0 ? v / mass : 1.0 / static_cast<double>(blk.output_cardinality);
      }
    }
    params.tables.push_back(std::move(joint));
  }
  return params;
}

double constraint_residual(const ConstraintSystem& system, std::span<const double> q) {
  std::vector<double> achieved(system.rows(), 0.0);
  const auto rows = system.row_of_column();
  for (std::uint64_t r = 0; r < q.size(); ++r) achieved[rows[r]] += q[r];
  double residual = 0.0;
  for (std::uint64_t x = 0; x < achieved.size(); ++x) residual += std::abs(achieved[x] - system.p()[x]);
  return residual;
}

namespace {

double objective_value(const PcProblem& problem, std::span<const double> q) {
  const auto& c = problem.objective().c;
  double v = 0.0;
  for (std::uint64_t r = 0; r < q.size(); ++r) v += c[r] * q[r];
  return v;
}

enum class BlockMode { Penalised, Refine };

struct RunOutcome {
  double value = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  std::vector<double> q;
  bool accepted = false;
};

// Block-coordinate descent for one sense and one starting point. With all
// other blocks fixed, q is linear in the free block, so each update is an LP.
class Descent {
 public:
  Descent(const PcProblem& problem, Sense sense, const PcLocalOptions& options,
          FactorizedParams start)
      : problem_(problem), options_(options), sign_(sense == Sense::Minimize ? 1.0 : -1.0),
        params_(std::move(start)) {}

  RunOutcome run() {
    double previous = penalised();
    for (std::size_t sweep = 0; sweep < options_.max_sweeps; ++sweep) {
      sweep_blocks(BlockMode::Penalised);
      const double current = penalised();
      if (std::abs(previous - current) < options_.tolerance) break;
      previous = current;
    }

    restore_feasibility();

    double previous_obj = signed_objective();
    for (std::size_t sweep = 0; sweep < options_.max_sweeps; ++sweep) {
      sweep_blocks(BlockMode::Refine);
      const double current = signed_objective();
      if (std::abs(previous_obj - current) < options_.tolerance) break;
      previous_obj = current;
    }

    RunOutcome out;
    out.q = assemble_q(problem_, params_);
    out.value = objective_value(problem_, out.q);
    out.residual = constraint_residual(problem_.system(), out.q);
    out.accepted = out.residual <= options_.feasibility;
    return out;
  }

 private:
  double residual() const { return constraint_residual(problem_.system(), assemble_q(problem_, params_)); }
  double signed_objective() const { return sign_ * objective_value(problem_, assemble_q(problem_, params_)); }
  double penalised() const {
    const auto q = assemble_q(problem_, params_);
    return sign_ * objective_value(problem_, q) +
           options_.penalty * constraint_residual(problem_.system(), q);
  }

  // The L1 block updates stall on degenerate vertices, so feasibility is
  // restored with EM on KL(p || A q): reweight q towards p within each
  // observed cell, then refit every block from the reweighted counts. A small
  // uniform blend first lets it leave zero entries.
  void restore_feasibility() {
    constexpr double kBlend = 1e-3;
    constexpr std::size_t kMaxIterations = 20000;
    const ConstraintSystem& system = problem_.system();
    const auto rows = system.row_of_column();
    if (residual() <= 1e-10) return;
    for (std::size_t b = 0; b < params_.tables.size(); ++b) {
      const double u = 1.0 / static_cast<double>(problem_.blocks()[b].output_cardinality);
      for (double& v : params_.tables[b]) v = (1.0 - kBlend) * v + kBlend * u;
    }
    std::vector<double> achieved(system.rows());
    std::vector<double> w(system.cols());
    double best = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    for (std::size_t it = 0; it < kMaxIterations; ++it) {
      const auto q = assemble_q(problem_, params_);
      std::fill(achieved.begin(), achieved.end(), 0.0);
      for (std::uint64_t r = 0; r < q.size(); ++r) achieved[rows[r]] += q[r];
      double res = 0.0;
      for (std::uint64_t x = 0; x < achieved.size(); ++x) res += std::abs(achieved[x] - system.p()[x]);
      if (res <= 1e-10) return;
      if (res < best * (1.0 - 1e-6)) {
        best = res;
        since_best = 0;
      } else if (++since_best > 500) {
        return;
      }
      for (std::uint64_t r = 0; r < q.size(); ++r) {
        const double a = achieved[rows[r]];
        w[r] = a > 0.0 ? q[r] * system.p()[rows[r]] / a : 0.0;
      }
      for (std::size_t b = 0; b < params_.tables.size(); ++b) {
        const auto& blk = problem_.blocks()[b];
        std::vector<double> counts(blk.entries(), 0.0);
        for (std::uint64_t r = 0; r < w.size(); ++r) counts[problem_.entry(b, r)] += w[r];
        auto& t = params_.tables[b];
        for (std::uint64_t j = 0; j < blk.parent_cardinality; ++j) {
          double mass = 0.0;
          for (std::uint64_t o = 0; o < blk.output_cardinality; ++o) mass += counts[j * blk.output_cardinality + o];
          if (!(mass > 0.0)) continue;
          for (std::uint64_t o = 0; o < blk.output_cardinality; ++o) {
            t[j * blk.output_cardinality + o] = counts[j * blk.output_cardinality + o] / mass;
          }
        }
      }
    }
  }

  void sweep_blocks(BlockMode mode) {
    for (std::size_t b = 0; b < problem_.blocks().size(); ++b) update(b, mode);
  }

  void update(std::size_t b, BlockMode mode) {
    const ConstraintSystem& system = problem_.system();
    const auto& blk = problem_.blocks()[b];
    const std::uint64_t ne = blk.entries();
    const std::uint64_t nx = system.rows();
    const std::uint64_t cols = system.cols();
    const auto rows = system.row_of_column();
    const auto& c = problem_.objective().c;

    // G[x, e] and g[e]: contribution of block entry e to (A q)_x and c·q.
    DenseMatrix G(nx, ne);
    std::vector<double> g(ne, 0.0);
    for (std::uint64_t r = 0; r < cols; ++r) {
      double rest = 1.0;
      for (std::size_t o = 0; o < problem_.blocks().size() && rest != 0.0; ++o) {
        if (o != b) rest *= params_.tables[o][problem_.entry(o, r)];
      }
      if (rest == 0.0) continue;
      const std::uint64_t e = problem_.entry(b, r);
      G(rows[r], e) += rest;
      g[e] += c[r] * rest;
    }
    const auto& current = params_.tables[b];

    const bool slack_u = mode == BlockMode::Penalised;
    const std::uint64_t nvar = ne + (slack_u ? 2 * nx : 0);
    const std::uint64_t nrow = blk.parent_cardinality + nx;

    LinearProgram lp;
    lp.on_simplex = false;
    lp.sense = Sense::Minimize;
    lp.objective.assign(nvar, 0.0);
    lp.equalities = DenseMatrix(nrow, nvar);
    lp.rhs.assign(nrow, 0.0);

    for (std::uint64_t j = 0; j < blk.parent_cardinality; ++j) {
      for (std::uint64_t o = 0; o < blk.output_cardinality; ++o) {
        lp.equalities(j, j * blk.output_cardinality + o) = 1.0;
      }
      lp.rhs[j] = 1.0;
    }
    for (std::uint64_t x = 0; x < nx; ++x) {
      const std::uint64_t row = blk.parent_cardinality + x;
      double achieved = 0.0;
      for (std::uint64_t e = 0; e < ne; ++e) {
        lp.equalities(row, e) = G(x, e);
        achieved += G(x, e) * current[e];
      }
      if (slack_u) {
        lp.equalities(row, ne + x) = -1.0;
        lp.equalities(row, ne + nx + x) = 1.0;
      }
      lp.rhs[row] = mode == BlockMode::Refine ? achieved : system.p()[x];
    }

    switch (mode) {
      case BlockMode::Penalised:
        for (std::uint64_t e = 0; e < ne; ++e) lp.objective[e] = sign_ * g[e];
        for (std::uint64_t k = 0; k < 2 * nx; ++k) lp.objective[ne + k] = options_.penalty;
        break;
      case BlockMode::Refine:
        for (std::uint64_t e = 0; e < ne; ++e) lp.objective[e] = sign_ * g[e];
        break;
    }

    const LpSolution sol = solve(lp);
    if (sol.status != LpStatus::Optimal) return;

    std::vector<double> next(ne);
    for (std::uint64_t j = 0; j < blk.parent_cardinality; ++j) {
      double sum = 0.0;
      for (std::uint64_t o = 0; o < blk.output_cardinality; ++o) {
        const std::uint64_t e = j * blk.output_cardinality + o;
        next[e] = std::max(sol.point[e], 0.0);
        sum += next[e];
      }
      for (std::uint64_t o = 0; o < blk.output_cardinality; ++o) {
        const std::uint64_t e = j * blk.output_cardinality + o;
        next[e] = sum > 0.0 ? next[e] / sum : current[e];
      }
    }
    params_.tables[b] = std::move(next);
  }

  const PcProblem& problem_;
  const PcLocalOptions& options_;
  double sign_;
  FactorizedParams params_;
};

FactorizedParams initial_params(const PcProblem& problem, std::size_t run, detail::Rng& rng) {
  FactorizedParams params = problem.uniform();
  if (run == 0) return params;
  const bool vertex = run % 2 == 0;
  for (std::size_t b = 0; b < problem.blocks().size(); ++b) {
    const auto& blk = problem.blocks()[b];
    auto& t = params.tables[b];
    for (std::uint64_t j = 0; j < blk.parent_cardinality; ++j) {
      double* column = t.data() + j * blk.output_cardinality;
      if (vertex) {
        std::fill_n(column, blk.output_cardinality, 0.0);
        column[rng.below(blk.output_cardinality)] = 1.0;
      } else {
        const auto d = rng.dirichlet(blk.output_cardinality);
        std::copy(d.begin(), d.end(), column);
      }
    }
  }
  return params;
}

}  // namespace

BoundsResult pc_local_bounds(const PcProblem& problem, const PcLocalOptions& options) {
  if (options.restarts == 0) throw DomainError("at least one restart is required");
  const std::size_t runs = options.restarts;
  std::vector<RunOutcome> outcomes(2 * runs);

  detail::parallel_for(2 * runs, options.threads, [&](std::size_t k) {
    const std::size_t run = k % runs;
    const Sense sense = k < runs ? Sense::Minimize : Sense::Maximize;
    detail::Rng rng(options.seed * 0x100000001b3ULL + 2 * run + (sense == Sense::Maximize ? 1 : 0));
    Descent descent(problem, sense, options, initial_params(problem, run, rng));
    outcomes[k] = descent.run();
  });

  // Equal objectives: smaller residual, then earlier run.
  auto pick = [&](std::size_t first, bool minimise) -> const RunOutcome* {
    const RunOutcome* best = nullptr;
    for (std::size_t k = first; k < first + runs; ++k) {
      const RunOutcome& o = outcomes[k];
      if (!o.accepted) continue;
      if (!best) {
        best = &o;
        continue;
      }
      const double delta = minimise ? best->value - o.value : o.value - best->value;
      if (delta > 1e-12 || (std::abs(delta) <= 1e-12 && o.residual < best->residual)) best = &o;
    }
    return best;
  };
  const RunOutcome* lo = pick(0, true);
  const RunOutcome* hi = pick(runs, false);
  if (!lo || !hi) {
    throw InfeasibleError(
        "no local run reached constraint residual <= " + std::to_string(options.feasibility) +
        "; the observational distribution may be incompatible with the declared confounding");
  }
  BoundsResult result;
  result.lb = lo->value;
  result.ub = hi->value;
  result.certified = false;
  result.method = BoundMethod::PcLocal;
  result.witness_min = lo->q;
  result.witness_max = hi->q;
  if (result.lb > result.ub) std::swap(result.lb, result.ub);
  clamp_bounds(result);
  return result;
}

namespace {

struct GridEnvelope {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::uint64_t kept = 0;
  std::vector<double> q_lo, q_hi;
};

// Shared read-only tables for the grid search.
struct GridLayout {
  std::uint64_t steps = 0;
  double resolution = 0.0;
  std::vector<std::uint64_t> prefix_size;  // number of prefix response profiles per block
  std::vector<std::vector<std::uint32_t>> prefix_row;  // prefix x-code per prefix profile
  std::vector<std::vector<double>> prefix_p;  // observational marginal over the prefix
  std::vector<std::uint64_t> consistent;  // r with A[x^F, r] = 1
  std::vector<double> outcome;  // h(counterfactual) for each consistent r
};

class GridSearch {
 public:
  GridSearch(const PcProblem& problem, const GridLayout& layout, const GridOptions& options)
      : problem_(problem), layout_(layout), options_(options) {
    for (const auto& blk : problem.blocks()) tables_.emplace_back(blk.entries(), 0.0);
    for (std::uint64_t size : layout.prefix_size) prefix_q_.emplace_back(size, 0.0);
    marginal_.resize(layout.prefix_p.back().size());
  }

  // Enumerates everything below a fixed first entry of block 0, column 0.
  GridEnvelope run(std::uint64_t first_units) {
    tables_[0][0] = static_cast<double>(first_units) / static_cast<double>(layout_.steps);
    if (problem_.blocks()[0].output_cardinality == 1) {
      if (first_units == layout_.steps) next_column(0, 1);
    } else {
      fill(0, 0, 1, layout_.steps - first_units);
    }
    return std::move(envelope_);
  }

 private:
  // Assigns entry k of column j of block b from the remaining grid units.
  void fill(std::size_t b, std::uint64_t j, std::uint64_t k, std::uint64_t remaining) {
    const auto& blk = problem_.blocks()[b];
    double* column = tables_[b].data() + j * blk.output_cardinality;
    const double unit = 1.0 / static_cast<double>(layout_.steps);
    if (k + 1 == blk.output_cardinality) {
      column[k] = static_cast<double>(remaining) * unit;
      next_column(b, j + 1);
      return;
    }
    for (std::uint64_t v = 0; v <= remaining; ++v) {
      column[k] = static_cast<double>(v) * unit;
      fill(b, j, k + 1, remaining - v);
    }
  }

  void next_column(std::size_t b, std::uint64_t j) {
    const auto& blk = problem_.blocks()[b];
    if (j < blk.parent_cardinality) {
      if (blk.output_cardinality == 1) {
        tables_[b][j] = 1.0;
        next_column(b, j + 1);
      } else {
        fill(b, j, 0, layout_.steps);
      }
      return;
    }
    block_complete(b);
  }

  void block_complete(std::size_t b) {
    if (options_.deadline && (visited_++ & 0xfff) == 0 &&
        std::chrono::steady_clock::now() > *options_.deadline) {
      throw TimeoutError("grid certification exceeded its deadline");
    }
    const std::uint64_t size = layout_.prefix_size[b];
    const std::uint64_t previous = b == 0 ? 1 : layout_.prefix_size[b - 1];
    const auto& table = tables_[b];
    auto& q = prefix_q_[b];
    const auto& p = layout_.prefix_p[b];
    const auto& rows = layout_.prefix_row[b];
    std::fill_n(marginal_.begin(), p.size(), 0.0);
    for (std::uint64_t rp = 0; rp < size; ++rp) {
      const double prior = b == 0 ? 1.0 : prefix_q_[b - 1][rp % previous];
      q[rp] = prior * table[problem_.entry(b, rp)];
      marginal_[rows[rp]] += q[rp];
    }
    double residual = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) residual += std::abs(marginal_[x] - p[x]);
    // Strict: a point exactly at the tolerance is rejected.
    if (residual >= layout_.resolution - 1e-12) return;
    if (b + 1 < problem_.blocks().size()) {
      next_column(b + 1, 0);
      return;
    }
    leaf(q);
  }

  void leaf(const std::vector<double>& q) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < layout_.consistent.size(); ++k) {
      const double w = q[layout_.consistent[k]];
      num += w * layout_.outcome[k];
      den += w;
    }
    if (!(den > 0.0)) return;
    const double value = num / den;
    ++envelope_.kept;
    if (value < envelope_.lo) {
      envelope_.lo = value;
      envelope_.q_lo = q;
    }
    if (value > envelope_.hi) {
      envelope_.hi = value;
      envelope_.q_hi = q;
    }
  }

  const PcProblem& problem_;
  const GridLayout& layout_;
  const GridOptions& options_;
  std::vector<std::vector<double>> tables_;
  std::vector<std::vector<double>> prefix_q_;
  std::vector<double> marginal_;
  GridEnvelope envelope_;
  std::uint64_t visited_ = 0;
};

GridLayout make_layout(const PcProblem& problem, const GridOptions& options) {
  const ConstraintSystem& system = problem.system();
  const ResponseSpace& space = system.space();
  const CausalModel& model = system.model();

  GridLayout layout;
  layout.resolution = options.resolution;
  const double steps = std::round(1.0 / options.resolution);
  if (!(options.resolution > 0.0) || std::abs(steps * options.resolution - 1.0) > 1e-9) {
    throw DomainError("grid resolution must be 1/N for a positive integer N");
  }
  layout.steps = static_cast<std::uint64_t>(steps);

  const auto rows = system.row_of_column();
  for (std::size_t b = 0; b < problem.blocks().size(); ++b) {
    const std::size_t end = problem.prefix_end(b);
    std::uint64_t prefix = 1;
    std::uint64_t xprefix = 1;
    for (std::size_t i = 0; i < end; ++i) {
      prefix *= space.count(i);
      xprefix *= static_cast<std::uint64_t>(model.cardinality(i));
    }
    layout.prefix_size.push_back(prefix);
    // Little-endian codes: the prefix of a code is its residue.
    std::vector<std::uint32_t> prow(prefix);
    for (std::uint64_t rp = 0; rp < prefix; ++rp) prow[rp] = static_cast<std::uint32_t>(rows[rp] % xprefix);
    layout.prefix_row.push_back(std::move(prow));
    std::vector<double> pm(xprefix, 0.0);
    for (std::uint64_t x = 0; x < system.rows(); ++x) pm[x % xprefix] += system.p()[x];
    layout.prefix_p.push_back(std::move(pm));
  }

  const auto& objective = problem.objective();
  for (std::uint64_t r = 0; r < system.cols(); ++r) {
    if (rows[r] != objective.factual_index) continue;
    layout.consistent.push_back(r);
    layout.outcome.push_back(objective.c[r] * objective.factual_probability);
  }
  return layout;
}

}  // namespace

BoundsResult pc_grid_certify(const PcProblem& problem, const GridOptions& options) {
  const std::uint64_t free = problem.free_parameters();
  if (free > options.max_free_parameters) {
    throw CapacityError("grid certification needs " + std::to_string(free) +
                        " free parameters, limit is " +
                        std::to_string(options.max_free_parameters));
  }
  const GridLayout layout = make_layout(problem, options);
  const bool trivial_first = problem.blocks()[0].output_cardinality == 1;
  const std::uint64_t first_choices = trivial_first ? 1 : layout.steps + 1;

  std::vector<GridEnvelope> parts(first_choices);
  detail::parallel_for(first_choices, options.threads, [&](std::size_t k) {
    GridSearch search(problem, layout, options);
    parts[k] = search.run(trivial_first ? layout.steps : k);
  });

  GridEnvelope total;
  for (auto& part : parts) {
    total.kept += part.kept;
    if (part.lo < total.lo) {
      total.lo = part.lo;
      total.q_lo = std::move(part.q_lo);
    }
    if (part.hi > total.hi) {
      total.hi = part.hi;
      total.q_hi = std::move(part.q_hi);
    }
  }
  if (total.kept == 0) {
    throw InfeasibleError("no grid point at resolution " + std::to_string(options.resolution) +
                          " matches the observational distribution");
  }
  BoundsResult result;
  result.lb = total.lo;
  result.ub = total.hi;
  result.certified = true;
  result.method = BoundMethod::PcGrid;
  result.witness_min = std::move(total.q_lo);
  result.witness_max = std::move(total.q_hi);
  clamp_bounds(result);
  return result;
}

}  // namespace recourse
