#include "recourse/recourse_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "recourse/detail/parallel.hpp"
#include "recourse/errors.hpp"

namespace recourse {

FeasibilitySpec FeasibilitySpec::all_actionable(const CausalModel& model) {
  FeasibilitySpec spec;
  spec.actionable.assign(model.size(), true);
  spec.allowed.assign(model.size(), {});
  return spec;
}

std::vector<int> FeasibilitySpec::allowed_values(const CausalModel& model, std::size_t i) const {
  if (i < allowed.size() && !allowed[i].empty()) return allowed[i];
  std::vector<int> all(static_cast<std::size_t>(model.cardinality(i)));
  std::iota(all.begin(), all.end(), 0);
  return all;
}

CostModel CostModel::uniform(const CausalModel& model) {
  return {std::vector<double>(model.size(), 1.0), std::vector<double>(model.size(), 0.0)};
}

double CostModel::cost(const Action& action, std::span<const int> factual) const {
  double total = 0.0;
  for (std::size_t k = 0; k < action.targets.size(); ++k) {
    const std::size_t i = action.targets[k];
    const double w = i < weights.size() ? weights[i] : 1.0;
    const double a = i < activation.size() ? activation[i] : 0.0;
    total += a + w * std::abs(action.values[k] - factual[i]);
  }
  return total;
}

std::string_view to_string(BoundMode mode) { return mode == BoundMode::Fc ? "fc" : "pc"; }

std::string_view to_string(ObjectiveKind kind) {
  return kind == ObjectiveKind::Expected ? "expected" : "worst";
}

namespace {

void check_spec(const CausalModel& model, const FeasibilitySpec& spec) {
  const std::size_t n = model.size();
  if (spec.actionable.size() != n) throw ModelError("actionability must list every variable");
  if (!spec.allowed.empty() && spec.allowed.size() != n) {
    throw ModelError("allowed values must list every variable");
  }
  if (spec.max_set_size == 0) throw ModelError("max_set_size must be at least 1");
  for (std::size_t i = 0; i < spec.allowed.size(); ++i) {
    for (int v : spec.allowed[i]) {
      if (v < 0 || v >= model.cardinality(i)) {
        throw ModelError("allowed value " + std::to_string(v) + " outside the domain of " +
                         model.variable(i).name);
      }
    }
  }
  if (std::none_of(spec.actionable.begin(), spec.actionable.end(), [](bool b) { return b; })) {
    throw ModelError("no variable is actionable");
  }
}

}  // namespace

ActionEnumeration enumerate_actions(const CausalModel& model, std::span<const int> factual,
                                    const FeasibilitySpec& spec) {
  check_configuration(model, factual);
  check_spec(model, spec);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (spec.actionable[i]) candidates.push_back(i);
  }
  std::vector<std::vector<int>> allowed(model.size());
  for (std::size_t i : candidates) allowed[i] = spec.allowed_values(model, i);

  ActionEnumeration out;
  const std::size_t max_size = std::min(spec.max_set_size, candidates.size());
  for (std::size_t size = 1; size <= max_size; ++size) {
    // Subsets of `candidates` of this size in lexicographic order.
    std::vector<std::size_t> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    for (;;) {
      std::vector<std::size_t> targets(size);
      for (std::size_t k = 0; k < size; ++k) targets[k] = candidates[pick[k]];

      std::vector<std::size_t> digit(size, 0);
      for (;;) {
        Action action;
        action.targets = targets;
        bool same = true;
        for (std::size_t k = 0; k < size; ++k) {
          const int v = allowed[targets[k]][digit[k]];
          action.values.push_back(v);
          same = same && v == factual[targets[k]];
        }
        if (!same) {
          if (out.actions.size() == spec.max_actions) {
            out.truncated = true;
            return out;
          }
          out.actions.push_back(std::move(action));
        }
        std::size_t k = size;
        while (k > 0 && ++digit[k - 1] == allowed[targets[k - 1]].size()) digit[--k] = 0;
        if (k == 0) break;
      }

      std::size_t k = size;
      while (k > 0 && pick[k - 1] == candidates.size() - size + (k - 1)) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t j = k; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

BoundingContext::BoundingContext(const CausalModel& model, const ObservationalTable& p,
                                 const Classifier& h, const ConstraintOptions& limits)
    : system_(build_constraints(model, p, limits)), h_(h) {}

BoundsResult BoundingContext::evaluate(std::span<const int> factual, const Action& action,
                                       const EvaluationOptions& options) const {
  const CausalModel& m = model();
  check_configuration(m, factual);
  check_action(m, action);
  const std::uint64_t index = canonical_index(factual, m.cardinalities());
  if (!(system_.p()[index] > 0.0)) throw ConditioningError("factual has zero probability");

  if (descendants(m, action.targets).descendants.empty()) {
    return point_evaluate(m, h_, factual, action);
  }
  if (options.objective == ObjectiveKind::WorstCase) {
    // The attainable-outcome set under partial confounding is contained in
    // the full-confounding one, so this is a valid outer bound in both modes.
    return worst_case_bound(system_, h_, factual, action);
  }
  ObjectiveVector objective = build_objective(system_, h_, factual, action);
  const ConfoundingSpec& spec = m.confounding();
  const bool as_full = options.mode == BoundMode::Fc || spec.mode == ConfoundingMode::Full ||
                       (options.pc.collapse_equivalent && spec.equivalent_to_full(m.size()));
  if (as_full) return compute_bounds_fc(system_, objective);

  PcProblem problem(system_, std::move(objective), spec, options.pc);
  if (problem.free_parameters() <= options.grid.max_free_parameters) {
    try {
      return pc_grid_certify(problem, options.grid);
    } catch (const InfeasibleError&) {
      // No grid point is close enough; the local search may still find a
      // feasible factorisation.
    }
  }
  return pc_local_bounds(problem, options.local);
}

std::vector<EvaluatedAction> evaluate_actions(const BoundingContext& context,
                                              std::span<const int> factual,
                                              const std::vector<Action>& actions,
                                              const CostModel& costs,
                                              const EvaluationOptions& options) {
  std::vector<EvaluatedAction> out(actions.size());
  EvaluationOptions inner = options;
  if (actions.size() > 1) {
    inner.local.threads = 1;
    inner.grid.threads = 1;
  }
  detail::parallel_for(actions.size(), options.threads, [&](std::size_t k) {
    EvaluatedAction& slot = out[k];
    slot.action = actions[k];
    try {
      slot.cost = costs.cost(actions[k], factual);
      slot.bounds = context.evaluate(factual, actions[k], inner);
    } catch (const std::exception& e) {
      slot.error = e.what();
      slot.error_kind = std::string(error_kind(e));
    }
  });
  return out;
}

Recommendation recommend(const std::vector<EvaluatedAction>& evaluated, double threshold,
                         double epsilon) {
  Recommendation rec;
  rec.threshold = threshold;
  rec.epsilon = epsilon;

  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < evaluated.size(); ++k) {
    const auto& e = evaluated[k];
    if (!e.bounds || !e.bounds->certified || !(e.bounds->lb > threshold + epsilon)) continue;
    if (!best) {
      best = k;
      continue;
    }
    const auto& b = evaluated[*best];
    if (e.cost < b.cost ||
        (e.cost == b.cost && e.action.targets.size() < b.action.targets.size())) {
      best = k;
    }
  }

  std::vector<std::size_t> order(evaluated.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = evaluated[a];
    const auto& y = evaluated[b];
    if (x.bounds.has_value() != y.bounds.has_value()) return x.bounds.has_value();
    if (x.cost != y.cost) return x.cost < y.cost;
    return x.action.targets.size() < y.action.targets.size();
  });
  for (std::size_t k = 0; k < order.size(); ++k) {
    rec.ranked.push_back(evaluated[order[k]]);
    if (best && order[k] == *best) rec.chosen = k;
  }
  return rec;
}

}  // namespace recourse
