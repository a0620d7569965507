#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recourse/causal_model.hpp"
#include "recourse/fc_bounds.hpp"
#include "recourse/pc_bounds.hpp"

namespace recourse {

// Which interventions are allowed. Indexed by canonical variable.
struct FeasibilitySpec {
  std::vector<bool> actionable;
  // Empty entry: the whole domain.
  std::vector<std::vector<int>> allowed;
  std::size_t max_set_size = 2;
  std::size_t max_actions = 10'000;

  static FeasibilitySpec all_actionable(const CausalModel& model);
  std::vector<int> allowed_values(const CausalModel& model, std::size_t i) const;
};

// cost(theta_I; x^F) = sum_{i in I} (activation_i + weight_i * |theta_i - x^F_i|).
struct CostModel {
  std::vector<double> weights;
  std::vector<double> activation;

  static CostModel uniform(const CausalModel& model);
  double cost(const Action& action, std::span<const int> factual) const;
};

struct ActionEnumeration {
  std::vector<Action> actions;
  bool truncated = false;
};

// Non-empty subsets of actionable variables up to max_set_size, with every
// allowed assignment except the one that reproduces x^F on the subset.
// Ordered by |I|, then indices, then values.
ActionEnumeration enumerate_actions(const CausalModel& model, std::span<const int> factual,
                                    const FeasibilitySpec& spec);

enum class BoundMode { Fc, Pc };
enum class ObjectiveKind { Expected, WorstCase };

std::string_view to_string(BoundMode mode);
std::string_view to_string(ObjectiveKind kind);

struct EvaluationOptions {
  BoundMode mode = BoundMode::Fc;
  ObjectiveKind objective = ObjectiveKind::Expected;
  PcOptions pc;
  PcLocalOptions local;
  GridOptions grid;
  unsigned threads = 0;
};

struct EvaluatedAction {
  Action action;
  double cost = 0.0;
  std::optional<BoundsResult> bounds;
  // Set instead of bounds when this action failed.
  std::string error;
  std::string error_kind;
};

// Problem data shared by all actions of one query.
class BoundingContext {
 public:
  BoundingContext(const CausalModel& model, const ObservationalTable& p, const Classifier& h,
                  const ConstraintOptions& limits = {});

  const CausalModel& model() const { return system_.model(); }
  const ConstraintSystem& system() const { return system_; }
  const Classifier& classifier() const { return h_; }

  // Throws the bound modules' errors.
  BoundsResult evaluate(std::span<const int> factual, const Action& action,
                        const EvaluationOptions& options) const;

 private:
  ConstraintSystem system_;
  Classifier h_;
};

// Errors are recorded per action; the batch always completes.
std::vector<EvaluatedAction> evaluate_actions(const BoundingContext& context,
                                              std::span<const int> factual,
                                              const std::vector<Action>& actions,
                                              const CostModel& costs,
                                              const EvaluationOptions& options);

struct Recommendation {
  // Sorted by cost, then by set size, then input order; failed actions last.
  std::vector<EvaluatedAction> ranked;
  // Index into ranked.
  std::optional<std::size_t> chosen;
  double threshold = 0.5;
  double epsilon = 0.0;
};

// Cheapest action whose certified lb exceeds threshold + epsilon; ties go to
// the smaller intervention set, then to the earlier action in the input.
Recommendation recommend(const std::vector<EvaluatedAction>& evaluated, double threshold = 0.5,
                         double epsilon = 0.0);

}  // namespace recourse
