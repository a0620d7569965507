#include "recourse/causal_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "recourse/errors.hpp"

namespace recourse {

std::vector<std::size_t> ConfoundingSpec::parents_of(std::size_t i) const {
  switch (mode) {
    case ConfoundingMode::Full: {
      std::vector<std::size_t> all(i);
      std::iota(all.begin(), all.end(), std::size_t{0});
      return all;
    }
    case ConfoundingMode::None:
      return {};
    case ConfoundingMode::Partial:
      return i < response_parents.size() ? response_parents[i] : std::vector<std::size_t>{};
  }
  return {};
}

bool ConfoundingSpec::equivalent_to_full(std::size_t n) const {
  if (mode == ConfoundingMode::Full) return true;
  if (mode == ConfoundingMode::None) return n <= 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (parents_of(i).size() != i) return false;
  }
  return true;
}

bool ConfoundingSpec::equivalent_to_none(std::size_t n) const {
  if (mode == ConfoundingMode::None) return true;
  if (mode == ConfoundingMode::Full) return n <= 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (!parents_of(i).empty()) return false;
  }
  return true;
}

std::string_view to_string(ConfoundingMode mode) {
  switch (mode) {
    case ConfoundingMode::Full: return "full";
    case ConfoundingMode::Partial: return "partial";
    case ConfoundingMode::None: return "none";
  }
  return "?";
}

std::uint64_t checked_product(std::span<const int> cardinalities) {
  std::uint64_t total = 1;
  for (int k : cardinalities) {
    if (k <= 0) throw DomainError("cardinality must be positive");
    if (total > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(k)) {
      throw CapacityError("joint configuration count overflows 64-bit integer");
    }
    total *= static_cast<std::uint64_t>(k);
  }
  return total;
}

CausalModel CausalModel::create(std::vector<Variable> variables,
                                const std::vector<std::vector<std::size_t>>& parents,
                                ConfoundingSpec confounding) {
  const std::size_t n = variables.size();
  if (n == 0) throw ModelError("model has no variables");
  if (parents.size() != n) throw ModelError("parent lists do not match variable count");

  std::set<std::string> names;
  for (const auto& v : variables) {
    if (v.name.empty()) throw ModelError("variable with empty name");
    if (!names.insert(v.name).second) throw ModelError("duplicate variable name '" + v.name + "'");
    if (v.cardinality < 2) {
      throw ModelError("variable '" + v.name + "' has cardinality " +
                       std::to_string(v.cardinality) + " (must be >= 2)");
    }
  }

  std::vector<std::vector<std::size_t>> children(n);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::set<std::size_t> seen;
    for (std::size_t pa : parents[i]) {
      if (pa >= n) throw ModelError("parent index out of range for '" + variables[i].name + "'");
      if (pa == i) throw ModelError("self-loop on '" + variables[i].name + "'");
      if (!seen.insert(pa).second) continue;
      children[pa].push_back(i);
      ++indegree[i];
    }
  }

  // Kahn's algorithm; the min-heap keeps declaration order among ready nodes.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t c : children[v]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (order.size() != n) {
    std::string cyclic;
    for (std::size_t i = 0; i < n; ++i) {
      if (indegree[i] > 0) cyclic += (cyclic.empty() ? "" : ", ") + variables[i].name;
    }
    throw ModelError("cycle detected among: " + cyclic);
  }

  std::vector<std::size_t> canonical_of(n);
  for (std::size_t pos = 0; pos < n; ++pos) canonical_of[order[pos]] = pos;

  CausalModel model;
  model.declared_index_ = order;
  model.parents_.resize(n);
  model.children_.resize(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t d = order[pos];
    model.variables_.push_back(variables[d]);
    model.cardinalities_.push_back(variables[d].cardinality);
    std::set<std::size_t> pa;
    for (std::size_t p : parents[d]) pa.insert(canonical_of[p]);
    model.parents_[pos].assign(pa.begin(), pa.end());
    for (std::size_t p : model.parents_[pos]) model.children_[p].push_back(pos);
  }
  for (auto& c : model.children_) std::sort(c.begin(), c.end());
  model.configuration_count_ = checked_product(model.cardinalities_);

  if (confounding.mode == ConfoundingMode::Partial) {
    if (confounding.response_parents.size() > n) {
      throw ModelError("confounding spec lists more variables than the model");
    }
    confounding.response_parents.resize(n);
    std::vector<std::vector<std::size_t>> remapped(n);
    for (std::size_t d = 0; d < n; ++d) {
      std::set<std::size_t> rp;
      for (std::size_t j : confounding.response_parents[d]) {
        if (j >= n) throw ModelError("response parent index out of range");
        rp.insert(canonical_of[j]);
      }
      remapped[canonical_of[d]].assign(rp.begin(), rp.end());
    }
    confounding.response_parents = std::move(remapped);
  } else {
    confounding.response_parents.clear();
  }
  model.confounding_ = std::move(confounding);
  model.check_confounding();
  return model;
}

CausalModel CausalModel::from_edges(std::vector<Variable> variables,
                                    const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                                    ConfoundingSpec confounding) {
  std::vector<std::vector<std::size_t>> parents(variables.size());
  for (auto [from, to] : edges) {
    if (to >= variables.size() || from >= variables.size()) {
      throw ModelError("edge endpoint out of range");
    }
    parents[to].push_back(from);
  }
  return create(std::move(variables), parents, std::move(confounding));
}

void CausalModel::check_confounding() const {
  if (confounding_.mode != ConfoundingMode::Partial) return;
  if (confounding_.response_parents.size() != size()) {
    throw ModelError("confounding spec must list response parents for every variable");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j : confounding_.response_parents[i]) {
      if (j >= i) {
        throw ModelError("response parent R_" + variables_[j].name + " of R_" + variables_[i].name +
                         " does not precede it in topological order");
      }
    }
  }
}

CausalModel CausalModel::with_confounding(ConfoundingSpec confounding) const {
  CausalModel copy = *this;
  if (confounding.mode == ConfoundingMode::Partial) {
    confounding.response_parents.resize(size());
    for (auto& rp : confounding.response_parents) {
      std::sort(rp.begin(), rp.end());
      rp.erase(std::unique(rp.begin(), rp.end()), rp.end());
    }
  } else {
    confounding.response_parents.clear();
  }
  copy.confounding_ = std::move(confounding);
  copy.check_confounding();
  return copy;
}

std::optional<std::size_t> CausalModel::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  return std::nullopt;
}

std::uint64_t canonical_index(std::span<const int> values, std::span<const int> cardinalities) {
  if (values.size() != cardinalities.size()) {
    throw DomainError("configuration has " + std::to_string(values.size()) + " entries, expected " +
                      std::to_string(cardinalities.size()));
  }
  std::uint64_t index = 0;
  std::uint64_t stride = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0 || values[i] >= cardinalities[i]) {
      throw DomainError("state " + std::to_string(values[i]) + " of variable " + std::to_string(i) +
                        " outside 0.." + std::to_string(cardinalities[i] - 1));
    }
    index += static_cast<std::uint64_t>(values[i]) * stride;
    stride *= static_cast<std::uint64_t>(cardinalities[i]);
  }
  return index;
}

Configuration decode_index(std::uint64_t index, std::span<const int> cardinalities) {
  Configuration x(cardinalities.size());
  for (std::size_t i = 0; i < cardinalities.size(); ++i) {
    const auto k = static_cast<std::uint64_t>(cardinalities[i]);
    x[i] = static_cast<int>(index % k);
    index /= k;
  }
  if (index != 0) throw DomainError("index exceeds configuration space");
  return x;
}

ObservationalTable ObservationalTable::from_samples(const CausalModel& model,
                                                    const std::vector<Configuration>& samples) {
  if (samples.empty()) throw ModelError("sample set is empty");
  std::vector<double> counts(model.configuration_count(), 0.0);
  for (const auto& s : samples) counts[canonical_index(s, model.cardinalities())] += 1.0;
  const double total = static_cast<double>(samples.size());
  for (double& c : counts) c /= total;
  return ObservationalTable(std::move(counts));
}

double ObservationalTable::at(const CausalModel& model, std::span<const int> x) const {
  return probabilities_.at(canonical_index(x, model.cardinalities()));
}

Classifier Classifier::table(const CausalModel& model, std::vector<double> values) {
  Classifier h;
  h.kind_ = Kind::Table;
  h.table_ = std::move(values);
  h.cardinalities_.assign(model.cardinalities().begin(), model.cardinalities().end());
  return h;
}

Classifier Classifier::linear_logit(double bias, std::vector<double> weights) {
  Classifier h;
  h.kind_ = Kind::LinearLogit;
  h.bias_ = bias;
  h.weights_ = std::move(weights);
  return h;
}

Classifier Classifier::indicator(const CausalModel& model, std::size_t variable, int state) {
  std::vector<double> values(model.configuration_count());
  for (std::uint64_t code = 0; code < values.size(); ++code) {
    values[code] = decode_index(code, model.cardinalities())[variable] == state ? 1.0 : 0.0;
  }
  return table(model, std::move(values));
}

Classifier Classifier::constant(const CausalModel& model, double value) {
  return table(model, std::vector<double>(model.configuration_count(), value));
}

double Classifier::operator()(std::span<const int> x) const {
  if (kind_ == Kind::Table) return table_.at(canonical_index(x, cardinalities_));
  if (x.size() != weights_.size()) throw DomainError("classifier weight count mismatch");
  double z = bias_;
  for (std::size_t i = 0; i < x.size(); ++i) z += weights_[i] * x[i];
  return 1.0 / (1.0 + std::exp(-z));
}

Action Action::make(std::vector<std::pair<std::size_t, int>> assignments) {
  std::sort(assignments.begin(), assignments.end());
  Action a;
  for (auto [t, v] : assignments) {
    if (!a.targets.empty() && a.targets.back() == t) {
      throw DomainError("duplicate intervention target " + std::to_string(t));
    }
    a.targets.push_back(t);
    a.values.push_back(v);
  }
  return a;
}

std::optional<int> Action::value_for(std::size_t variable) const {
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (targets[k] == variable) return values[k];
  }
  return std::nullopt;
}

DescendantSplit descendants(const CausalModel& model, std::span<const std::size_t> targets) {
  const std::size_t n = model.size();
  std::vector<char> is_target(n, 0), reached(n, 0);
  for (std::size_t t : targets) {
    if (t >= n) throw DomainError("target index out of range");
    is_target[t] = 1;
  }
  // Canonical order is topological, so one forward pass suffices.
  for (std::size_t i = 0; i < n; ++i) {
    if (is_target[i]) continue;
    for (std::size_t pa : model.parents(i)) {
      if (is_target[pa] || reached[pa]) {
        reached[i] = 1;
        break;
      }
    }
  }
  DescendantSplit split;
  for (std::size_t i = 0; i < n; ++i) {
    if (reached[i]) {
      split.descendants.push_back(i);
    } else if (!is_target[i]) {
      split.non_descendants.push_back(i);
    }
  }
  return split;
}

void check_configuration(const CausalModel& model, std::span<const int> x) {
  if (x.size() != model.size()) {
    throw DomainError("configuration has " + std::to_string(x.size()) + " values, model has " +
                      std::to_string(model.size()) + " variables");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || x[i] >= model.cardinality(i)) {
      throw DomainError("state " + std::to_string(x[i]) + " out of range for '" +
                        model.variable(i).name + "'");
    }
  }
}

void check_action(const CausalModel& model, const Action& action, bool allow_empty) {
  if (action.targets.size() != action.values.size()) {
    throw DomainError("action targets and values differ in length");
  }
  if (action.empty() && !allow_empty) throw DomainError("action has no targets");
  for (std::size_t k = 0; k < action.targets.size(); ++k) {
    const std::size_t t = action.targets[k];
    if (t >= model.size()) throw DomainError("action target out of range");
    if (k > 0 && action.targets[k - 1] >= t) {
      throw DomainError("action targets must be distinct and sorted");
    }
    if (action.values[k] < 0 || action.values[k] >= model.cardinality(t)) {
      throw DomainError("action value " + std::to_string(action.values[k]) + " out of range for '" +
                        model.variable(t).name + "'");
    }
  }
}

std::vector<std::size_t> validate(const CausalModel& model, const ObservationalTable& p,
                                  const Classifier& h) {
  if (p.size() != model.configuration_count()) {
    throw ModelError("observational table has " + std::to_string(p.size()) + " entries, expected " +
                     std::to_string(model.configuration_count()));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double v = p[k];
    if (!std::isfinite(v) || v < 0.0) {
      throw ModelError("observational probability at index " + std::to_string(k) +
                       " is negative or not finite");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "observational table sums to " << sum << " (must be 1 within 1e-9)";
    throw ModelError(msg.str());
  }

  if (h.kind() == Classifier::Kind::Table) {
    const auto& values = h.table_values();
    if (values.size() != model.configuration_count()) {
      throw ModelError("classifier table has " + std::to_string(values.size()) +
                       " entries, expected " + std::to_string(model.configuration_count()));
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!(values[k] >= 0.0 && values[k] <= 1.0)) {
        throw ModelError("classifier value at index " + std::to_string(k) + " outside [0,1]");
      }
    }
  } else {
    if (h.weights().size() != model.size()) {
      throw ModelError("classifier has " + std::to_string(h.weights().size()) +
                       " weights, expected " + std::to_string(model.size()));
    }
    if (!std::isfinite(h.bias())) throw ModelError("classifier bias not finite");
    for (double w : h.weights()) {
      if (!std::isfinite(w)) throw ModelError("classifier weight not finite");
    }
  }

  std::vector<std::size_t> order(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) order[i] = model.declared_index(i);
  return order;
}

Configuration apply_action(std::span<const int> x, const Action& action) {
  Configuration out(x.begin(), x.end());
  for (std::size_t k = 0; k < action.targets.size(); ++k) {
    out.at(action.targets[k]) = action.values[k];
  }
  return out;
}

std::string format_configuration(const CausalModel& model, std::span<const int> x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ',';
    out += model.variable(i).name + "=" + std::to_string(x[i]);
  }
  return out;
}

std::string format_action(const CausalModel& model, const Action& action) {
  std::string out;
  for (std::size_t k = 0; k < action.targets.size(); ++k) {
    if (k) out += ',';
    out += model.variable(action.targets[k]).name + "=" + std::to_string(action.values[k]);
  }
  return out;
}

}  // namespace recourse
