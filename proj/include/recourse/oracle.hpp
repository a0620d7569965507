#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "recourse/causal_model.hpp"

namespace recourse {

// A fully specified SCM X_i := f_i(PA_i, U_i) with an explicit joint law
// over the exogenous variables. Test-side ground truth; the bounding code
// never reads it.
struct GroundTruthSCM {
  CausalModel model;
  std::vector<std::uint64_t> exogenous;  // |U_i|, canonical order
  // mechanisms[i][pa + C_i * u_i]; pa is the mixed-radix code of the parents'
  // states in ascending variable order, first parent least significant.
  std::vector<std::vector<int>> mechanisms;
  // Joint table over U, mixed-radix with U_0 least significant.
  std::vector<double> p_u;

  // Throws ModelError on shape, range or normalisation (1e-12) violations.
  void check() const;
  std::uint64_t exogenous_total() const;
  Configuration simulate(std::span<const std::uint64_t> u, const Action* action = nullptr) const;
};

ObservationalTable observational_distribution(const GroundTruthSCM& scm);

// E[h(X_{do(action)}) | X = x^F] by abduction over P_U. An empty action is allowed.
// Throws ConditioningError when P(x^F) = 0.
double counterfactual_expectation(const GroundTruthSCM& scm, const Classifier& h,
                                  std::span<const int> factual, const Action& action);

enum class ExogenousLaw {
  ArbitraryJoint,  // one Dirichlet draw over the whole table
  Factorised,      // product of conditionals following the model's confounding spec
};

struct RandomInstanceOptions {
  std::size_t variables = 3;
  int max_cardinality = 2;
  double edge_probability = 0.5;
  // Fixed graph as declared-order parent lists; overrides the random DAG.
  std::optional<std::vector<std::vector<std::size_t>>> parents;
  ExogenousLaw law = ExogenousLaw::ArbitraryJoint;
  // Confounding spec given to the model (canonical indices); drives the
  // factorised law. Full by default.
  ConfoundingSpec confounding;
  // When set, every conditional column is a random composition of this many
  // equal units instead of a continuous Dirichlet draw.
  std::optional<std::uint64_t> lattice_steps;
  std::uint64_t max_exogenous = 1'000'000;
};

// |U_i| = |R_i| and each f_i is a random relabelling of all response functions
// of X_i, so every distribution over response functions is reachable.
GroundTruthSCM random_instance(std::uint64_t seed, const RandomInstanceOptions& options = {});

}  // namespace recourse
