#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace recourse {

// A joint assignment of states, one per variable, in canonical variable order.
using Configuration = std::vector<int>;

struct Variable {
  std::string name;
  int cardinality = 2;
};

enum class ConfoundingMode { Full, Partial, None };

// Which response variables share unobserved causes. For Partial,
// response_parents[i] lists the earlier response variables R_j (j < i, canonical
// indices) that R_i is conditioned on in the factorisation of P_R.
struct ConfoundingSpec {
  ConfoundingMode mode = ConfoundingMode::Full;
  std::vector<std::vector<std::size_t>> response_parents;

  static ConfoundingSpec full() { return {}; }
  static ConfoundingSpec none() { return {ConfoundingMode::None, {}}; }
  static ConfoundingSpec partial(std::vector<std::vector<std::size_t>> parents) {
    return {ConfoundingMode::Partial, std::move(parents)};
  }

  // Parents of R_i after resolving the mode (Full: all predecessors, None: empty).
  std::vector<std::size_t> parents_of(std::size_t i) const;
  bool equivalent_to_full(std::size_t n) const;
  bool equivalent_to_none(std::size_t n) const;
};

std::string_view to_string(ConfoundingMode mode);

// Graph, domains and confounding structure. Variables are stored in canonical
// order: topological, ties broken by declaration order. All tables in the
// library are indexed by the mixed-radix code over this order.
class CausalModel {
 public:
  // parents[i] holds declared indices of the parents of declared variable i;
  // confounding.response_parents is likewise given in declared indices.
  // Throws ModelError on cycles, duplicate names, K < 2, bad indices.
  static CausalModel create(std::vector<Variable> variables,
                            const std::vector<std::vector<std::size_t>>& parents,
                            ConfoundingSpec confounding = {});
  static CausalModel from_edges(std::vector<Variable> variables,
                                const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                ConfoundingSpec confounding = {});

  std::size_t size() const { return variables_.size(); }
  const Variable& variable(std::size_t i) const { return variables_.at(i); }
  const std::vector<Variable>& variables() const { return variables_; }
  int cardinality(std::size_t i) const { return cardinalities_.at(i); }
  std::span<const int> cardinalities() const { return cardinalities_; }
  // Ascending canonical indices.
  const std::vector<std::size_t>& parents(std::size_t i) const { return parents_.at(i); }
  const std::vector<std::size_t>& children(std::size_t i) const { return children_.at(i); }
  const ConfoundingSpec& confounding() const { return confounding_; }
  // Position of canonical variable i in the original declaration.
  std::size_t declared_index(std::size_t i) const { return declared_index_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::uint64_t configuration_count() const { return configuration_count_; }

  // Same graph, different confounding (canonical indices). Validated.
  CausalModel with_confounding(ConfoundingSpec confounding) const;

 private:
  CausalModel() = default;
  void check_confounding() const;

  std::vector<Variable> variables_;
  std::vector<int> cardinalities_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::size_t> declared_index_;
  ConfoundingSpec confounding_;
  std::uint64_t configuration_count_ = 1;
};

// Mixed-radix code with variable 0 least significant.
std::uint64_t canonical_index(std::span<const int> values, std::span<const int> cardinalities);
Configuration decode_index(std::uint64_t index, std::span<const int> cardinalities);

// Product of cardinalities; throws CapacityError on uint64 overflow.
std::uint64_t checked_product(std::span<const int> cardinalities);

class ObservationalTable {
 public:
  ObservationalTable() = default;
  explicit ObservationalTable(std::vector<double> probabilities)
      : probabilities_(std::move(probabilities)) {}

  // Empirical frequencies, taken verbatim.
  static ObservationalTable from_samples(const CausalModel& model,
                                         const std::vector<Configuration>& samples);

  std::span<const double> probabilities() const { return probabilities_; }
  double operator[](std::uint64_t index) const { return probabilities_.at(index); }
  double at(const CausalModel& model, std::span<const int> x) const;
  std::size_t size() const { return probabilities_.size(); }

 private:
  std::vector<double> probabilities_;
};

class Classifier {
 public:
  enum class Kind { Table, LinearLogit };

  // Values indexed by canonical configuration code.
  static Classifier table(const CausalModel& model, std::vector<double> values);
  // h(x) = 1 / (1 + exp(-(bias + sum_i weights[i] * x_i))).
  static Classifier linear_logit(double bias, std::vector<double> weights);
  // Table of h(x) = x_i, convenient for tests and examples.
  static Classifier indicator(const CausalModel& model, std::size_t variable, int state = 1);
  static Classifier constant(const CausalModel& model, double value);

  Kind kind() const { return kind_; }
  double operator()(std::span<const int> x) const;
  const std::vector<double>& table_values() const { return table_; }
  double bias() const { return bias_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  Kind kind_ = Kind::Table;
  std::vector<double> table_;
  double bias_ = 0.0;
  std::vector<double> weights_;
  std::vector<int> cardinalities_;
};

// Intervention do(X_I := theta_I). Targets are kept sorted ascending.
struct Action {
  std::vector<std::size_t> targets;
  std::vector<int> values;

  static Action make(std::vector<std::pair<std::size_t, int>> assignments);
  bool empty() const { return targets.empty(); }
  std::optional<int> value_for(std::size_t variable) const;
  bool operator==(const Action&) const = default;
};

struct DescendantSplit {
  std::vector<std::size_t> descendants;
  std::vector<std::size_t> non_descendants;
};

// Strict descendants of the targets and everything outside targets ∪ descendants.
DescendantSplit descendants(const CausalModel& model, std::span<const std::size_t> targets);

// Checks range of the factual instance against the model.
void check_configuration(const CausalModel& model, std::span<const int> x);
void check_action(const CausalModel& model, const Action& action, bool allow_empty = false);

// Validates the table and classifier against the model. Returns the topological
// order as declared indices. Throws ModelError.
std::vector<std::size_t> validate(const CausalModel& model, const ObservationalTable& p,
                                  const Classifier& h);

// The factual with theta_I written over the targets.
Configuration apply_action(std::span<const int> x, const Action& action);

std::string format_configuration(const CausalModel& model, std::span<const int> x);
std::string format_action(const CausalModel& model, const Action& action);

}  // namespace recourse
