#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "recourse/causal_model.hpp"
#include "recourse/lp_solver.hpp"
#include "recourse/response_space.hpp"

namespace recourse {

enum class BoundMethod { FcLp, PcLocal, PcGrid, Point };

std::string_view to_string(BoundMethod method);
std::optional<BoundMethod> bound_method_from_string(std::string_view text);

struct BoundsResult {
  double lb = 0.0;
  double ub = 1.0;
  bool certified = false;
  BoundMethod method = BoundMethod::FcLp;
  std::optional<std::vector<double>> witness_min;
  std::optional<std::vector<double>> witness_max;
};

// Binary |X| x |R| matrix A with A[x, r] = 1 iff the response profile r
// generates x, stored as the row index of the single 1 in each column.
class ConstraintSystem {
 public:
  ConstraintSystem(ResponseSpace space, std::vector<std::uint64_t> row_of_column,
                   std::vector<double> p);

  const ResponseSpace& space() const { return space_; }
  const CausalModel& model() const { return space_.model(); }
  std::uint64_t rows() const { return p_.size(); }
  std::uint64_t cols() const { return row_of_column_.size(); }
  int at(std::uint64_t x, std::uint64_t r) const { return row_of_column_.at(r) == x ? 1 : 0; }
  std::span<const std::uint64_t> row_of_column() const { return row_of_column_; }
  std::span<const double> p() const { return p_; }
  DenseMatrix dense() const;

 private:
  ResponseSpace space_;
  std::vector<std::uint64_t> row_of_column_;
  std::vector<double> p_;
};

struct ConstraintOptions {
  std::uint64_t max_entries = 100'000'000;
};

ConstraintSystem build_constraints(const CausalModel& model, const ObservationalTable& p,
                                   const ConstraintOptions& options = {});

// c_r = A[x^F, r] * h(counterfactual of r) / p(x^F); the objective is c·q.
struct ObjectiveVector {
  std::vector<double> c;
  std::uint64_t factual_index = 0;
  double factual_probability = 0.0;
};

enum class ObjectiveForm {
  // One forward simulation per r under the action.
  ForwardSimulation,
  // Literal sum over descendant outcomes with per-variable indicators; kept for verification.
  DoubleSum,
};

// Throws ConditioningError if p(x^F) = 0 and MisuseError if the action has no descendants.
ObjectiveVector build_objective(const ConstraintSystem& system, const Classifier& h,
                                std::span<const int> factual, const Action& action,
                                ObjectiveForm form = ObjectiveForm::ForwardSimulation);

// min / max of c·q over {q >= 0, sum q = 1, A q = p}. Throws InfeasibleError
// when p is incompatible with the graph.
BoundsResult compute_bounds_fc(const ConstraintSystem& system, const ObjectiveVector& objective,
                               const LpBackend& backend = default_backend());

// Direct evaluation for actions without descendants.
BoundsResult point_evaluate(const CausalModel& model, const Classifier& h,
                            std::span<const int> factual, const Action& action);

// Worst/best attainable counterfactual outcome: the min/max of h over the
// descendant outcomes that some consistent q can put mass > 1e-9 on.
BoundsResult worst_case_bound(const ConstraintSystem& system, const Classifier& h,
                              std::span<const int> factual, const Action& action,
                              const LpBackend& backend = default_backend());

// Clamps round-off into [0,1]; throws InternalError beyond 1e-7.
void clamp_bounds(BoundsResult& result);

}  // namespace recourse
