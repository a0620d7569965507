#include "recourse/fc_bounds.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <string>

#include "recourse/errors.hpp"

namespace recourse {

std::string_view to_string(BoundMethod method) {
  switch (method) {
    case BoundMethod::FcLp: return "FC_LP";
    case BoundMethod::PcLocal: return "PC_LOCAL";
    case BoundMethod::PcGrid: return "PC_GRID";
    case BoundMethod::Point: return "POINT";
  }
  return "?";
}

std::optional<BoundMethod> bound_method_from_string(std::string_view text) {
  for (auto m : {BoundMethod::FcLp, BoundMethod::PcLocal, BoundMethod::PcGrid, BoundMethod::Point}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

ConstraintSystem::ConstraintSystem(ResponseSpace space, std::vector<std::uint64_t> row_of_column,
                                   std::vector<double> p)
    : space_(std::move(space)), row_of_column_(std::move(row_of_column)), p_(std::move(p)) {}

DenseMatrix ConstraintSystem::dense() const {
  DenseMatrix a(rows(), cols());
  for (std::uint64_t r = 0; r < cols(); ++r) a(row_of_column_[r], r) = 1.0;
  return a;
}

ConstraintSystem build_constraints(const CausalModel& model, const ObservationalTable& p,
                                   const ConstraintOptions& options) {
  ResponseSpace space(model);
  const std::uint64_t rows = model.configuration_count();
  const std::uint64_t cols = space.total();
  if (cols != 0 && rows > options.max_entries / cols) {
    throw CapacityError("constraint matrix " + std::to_string(rows) + " x " + std::to_string(cols) +
                        " exceeds the budget of " + std::to_string(options.max_entries) +
                        " entries");
  }
  if (p.size() != rows) {
    throw ModelError("observational table size " + std::to_string(p.size()) + " does not match " +
                     std::to_string(rows) + " configurations");
  }
  std::vector<std::uint64_t> row_of_column(cols);
  Configuration x(model.size());
  for (auto cur = space.begin(); cur.valid(); cur.next()) {
    space.simulate_into(cur.digits(), nullptr, x);
    row_of_column[cur.index()] = canonical_index(x, model.cardinalities());
  }
  std::vector<double> probs(p.probabilities().begin(), p.probabilities().end());
  return ConstraintSystem(std::move(space), std::move(row_of_column), std::move(probs));
}

namespace {

struct FactualContext {
  std::uint64_t index;
  double probability;
  DescendantSplit split;
};

FactualContext prepare(const ConstraintSystem& system, std::span<const int> factual,
                       const Action& action) {
  const CausalModel& model = system.model();
  check_configuration(model, factual);
  check_action(model, action);
  FactualContext ctx;
  ctx.index = canonical_index(factual, model.cardinalities());
  ctx.probability = system.p()[ctx.index];
  if (!(ctx.probability > 0.0)) {
    throw ConditioningError("factual has zero probability");
  }
  ctx.split = descendants(model, action.targets);
  return ctx;
}

void double_sum_coefficients(const ConstraintSystem& system, const Classifier& h,
                             std::span<const int> factual, const Action& action,
                             const FactualContext& ctx, std::vector<double>& c) {
  const CausalModel& model = system.model();
  const ResponseSpace& space = system.space();
  const auto& desc = ctx.split.descendants;
  std::vector<int> desc_cards;
  for (std::size_t i : desc) desc_cards.push_back(model.cardinality(i));
  const std::uint64_t outcomes = checked_product(desc_cards);

  auto parent_values = [&](std::size_t i, std::span<const int> x) {
    std::vector<int> pa;
    for (std::size_t j : model.parents(i)) pa.push_back(x[j]);
    return pa;
  };

  Configuration y = apply_action(factual, action);
  for (std::uint64_t code = 0; code < outcomes; ++code) {
    const Configuration xd = decode_index(code, desc_cards);
    for (std::size_t k = 0; k < desc.size(); ++k) y[desc[k]] = xd[k];
    const double hval = h(y);
    for (auto cur = space.begin(); cur.valid(); cur.next()) {
      const auto& r = cur.digits();
      bool consistent = true;
      for (std::size_t i = 0; i < model.size() && consistent; ++i) {
        consistent = factual[i] == eval_response(model, i, r[i], parent_values(i, factual));
      }
      for (std::size_t k = 0; k < desc.size() && consistent; ++k) {
        const std::size_t i = desc[k];
        consistent = y[i] == eval_response(model, i, r[i], parent_values(i, y));
      }
      if (consistent) c[cur.index()] += hval / ctx.probability;
    }
  }
}

LinearProgram make_lp(const ConstraintSystem& system, std::vector<double> objective, Sense sense) {
  LinearProgram lp;
  lp.objective = std::move(objective);
  lp.equalities = system.dense();
  lp.rhs.assign(system.p().begin(), system.p().end());
  lp.sense = sense;
  lp.on_simplex = true;
  return lp;
}

LpSolution checked_solve(const LpBackend& backend, const LinearProgram& lp) {
  LpSolution sol = backend.solve(lp);
  switch (sol.status) {
    case LpStatus::Optimal:
      return sol;
    case LpStatus::Infeasible:
      throw InfeasibleError(
          "observational distribution is incompatible with the causal graph");
    case LpStatus::Unbounded:
      throw InternalError("linear program reported unbounded over the simplex");
    case LpStatus::IterationLimit:
      throw InternalError("linear program hit the pivot limit");
  }
  throw InternalError("unknown LP status");
}

}  // namespace

ObjectiveVector build_objective(const ConstraintSystem& system, const Classifier& h,
                                std::span<const int> factual, const Action& action,
                                ObjectiveForm form) {
  const FactualContext ctx = prepare(system, factual, action);
  if (ctx.split.descendants.empty()) {
    throw MisuseError("action has no descendants; use point_evaluate");
  }
  ObjectiveVector out;
  out.factual_index = ctx.index;
  out.factual_probability = ctx.probability;
  out.c.assign(system.cols(), 0.0);

  if (form == ObjectiveForm::DoubleSum) {
    double_sum_coefficients(system, h, factual, action, ctx, out.c);
    return out;
  }
  const ResponseSpace& space = system.space();
  const auto rows = system.row_of_column();
  Configuration y(system.model().size());
  for (auto cur = space.begin(); cur.valid(); cur.next()) {
    if (rows[cur.index()] != ctx.index) continue;
    space.simulate_into(cur.digits(), &action, y);
    out.c[cur.index()] = h(y) / ctx.probability;
  }
  return out;
}

void clamp_bounds(BoundsResult& result) {
  constexpr double kSlack = 1e-7;
  if (result.lb < -kSlack || result.ub > 1.0 + kSlack || result.lb > result.ub + kSlack) {
    throw InternalError("bounds [" + std::to_string(result.lb) + ", " + std::to_string(result.ub) +
                        "] violate [0,1] beyond round-off");
  }
  result.lb = std::clamp(result.lb, 0.0, 1.0);
  result.ub = std::clamp(result.ub, 0.0, 1.0);
  if (result.lb > result.ub) result.lb = result.ub = 0.5 * (result.lb + result.ub);
}

BoundsResult compute_bounds_fc(const ConstraintSystem& system, const ObjectiveVector& objective,
                               const LpBackend& backend) {
  if (objective.c.size() != system.cols()) {
    throw DomainError("objective length does not match the constraint system");
  }
  const LpSolution lo = checked_solve(backend, make_lp(system, objective.c, Sense::Minimize));
  const LpSolution hi = checked_solve(backend, make_lp(system, objective.c, Sense::Maximize));
  BoundsResult result;
  result.lb = lo.value;
  result.ub = hi.value;
  result.certified = true;
  result.method = BoundMethod::FcLp;
  result.witness_min = lo.point;
  result.witness_max = hi.point;
  clamp_bounds(result);
  return result;
}

BoundsResult point_evaluate(const CausalModel& model, const Classifier& h,
                            std::span<const int> factual, const Action& action) {
  check_configuration(model, factual);
  check_action(model, action);
  if (!descendants(model, action.targets).descendants.empty()) {
    throw MisuseError("action has descendants; point evaluation would ignore their response");
  }
  const double v = h(apply_action(factual, action));
  BoundsResult result;
  result.lb = result.ub = v;
  result.certified = true;
  result.method = BoundMethod::Point;
  return result;
}

BoundsResult worst_case_bound(const ConstraintSystem& system, const Classifier& h,
                              std::span<const int> factual, const Action& action,
                              const LpBackend& backend) {
  const FactualContext ctx = prepare(system, factual, action);
  if (ctx.split.descendants.empty()) {
    throw MisuseError("action has no descendants; use point_evaluate");
  }
  const CausalModel& model = system.model();
  const ResponseSpace& space = system.space();
  const auto rows = system.row_of_column();

  // Counterfactual configuration code -> response profiles consistent with x^F producing it.
  std::map<std::uint64_t, std::vector<std::uint64_t>> groups;
  Configuration y(model.size());
  for (auto cur = space.begin(); cur.valid(); cur.next()) {
    if (rows[cur.index()] != ctx.index) continue;
    space.simulate_into(cur.digits(), &action, y);
    groups[canonical_index(y, model.cardinalities())].push_back(cur.index());
  }

  constexpr double kAttainable = 1e-9;
  double lb = std::numeric_limits<double>::infinity();
  double ub = -std::numeric_limits<double>::infinity();
  for (const auto& [code, members] : groups) {
    std::vector<double> indicator(system.cols(), 0.0);
    for (std::uint64_t r : members) indicator[r] = 1.0;
    const LpSolution sol = checked_solve(backend, make_lp(system, indicator, Sense::Maximize));
    if (sol.value <= kAttainable) continue;
    const double hval = h(decode_index(code, model.cardinalities()));
    lb = std::min(lb, hval);
    ub = std::max(ub, hval);
  }
  if (lb > ub) throw InternalError("no counterfactual outcome is attainable");

  BoundsResult result;
  result.lb = lb;
  result.ub = ub;
  result.certified = true;
  result.method = BoundMethod::FcLp;
  clamp_bounds(result);
  return result;
}

}  // namespace recourse
