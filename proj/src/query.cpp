#include "recourse/query.hpp"

#include "recourse/errors.hpp"
#include "recourse/oracle.hpp"

namespace recourse {

EvaluationOptions SolverSettings::options(BoundMode mode, ObjectiveKind objective) const {
  EvaluationOptions o;
  o.mode = mode;
  o.objective = objective;
  o.local.seed = seed;
  o.local.restarts = restarts;
  o.local.threads = threads;
  o.grid.resolution = resolution;
  o.grid.deadline = deadline;
  o.grid.threads = threads;
  o.threads = threads;
  return o;
}

namespace {

void check_pc_declared(const ModelBundle& bundle, BoundMode mode) {
  if (mode == BoundMode::Pc && !bundle.confounding_declared) {
    throw ModelError("pc mode needs an explicit confounding section in the model file");
  }
}

}  // namespace

BoundsReport run_bounds(const ModelBundle& bundle, const BoundsQuery& query,
                        const SolverSettings& settings) {
  check_pc_declared(bundle, query.mode);
  const EvaluationOptions options = settings.options(query.mode, query.objective);
  const BoundingContext context(bundle.model, bundle.p, bundle.h);
  const BoundsResult result = context.evaluate(query.factual, query.action, options);
  return make_bounds_report(bundle, query.factual, query.action, options, result);
}

RecourseReport run_recourse(const ModelBundle& bundle, const RecourseQuery& query,
                            const SolverSettings& settings) {
  check_pc_declared(bundle, query.mode);
  const EvaluationOptions options = settings.options(query.mode, query.objective);
  const BoundingContext context(bundle.model, bundle.p, bundle.h);
  const std::uint64_t index = canonical_index(query.factual, bundle.model.cardinalities());
  if (!(bundle.p[index] > 0.0)) throw ConditioningError("factual has zero probability");
  const ActionEnumeration actions = enumerate_actions(bundle.model, query.factual, bundle.feasibility);
  const auto evaluated = evaluate_actions(context, query.factual, actions.actions, bundle.costs, options);
  const Recommendation rec = recommend(evaluated, query.threshold, query.epsilon);
  return make_recourse_report(bundle, query.factual, options, rec, actions.truncated);
}

OracleReport run_oracle(const ModelBundle& bundle, std::span<const int> factual, const Action& action) {
  if (!bundle.ground_truth) throw ModelError("model file has no ground_truth section");
  const GroundTruthSCM& scm = *bundle.ground_truth;
  OracleReport r;
  r.model = bundle.name;
  r.factual = format_configuration(bundle.model, factual);
  r.action = format_action(bundle.model, action);
  const ObservationalTable p = observational_distribution(scm);
  r.factual_probability = report_round(p.at(bundle.model, factual));
  r.value = report_round(counterfactual_expectation(scm, bundle.h, factual, action));
  return r;
}

std::optional<BoundMode> parse_mode(std::string_view text) {
  if (text == "fc") return BoundMode::Fc;
  if (text == "pc") return BoundMode::Pc;
  return std::nullopt;
}

std::optional<ObjectiveKind> parse_objective(std::string_view text) {
  if (text == "expected") return ObjectiveKind::Expected;
  if (text == "worst" || text == "worst_case") return ObjectiveKind::WorstCase;
  return std::nullopt;
}

}  // namespace recourse
