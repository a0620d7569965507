#include "recourse/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "recourse/detail/random.hpp"
#include "recourse/errors.hpp"

namespace recourse {

namespace {

std::uint64_t parent_code(const CausalModel& model, std::size_t i, std::span<const int> x) {
  std::uint64_t code = 0;
  std::uint64_t stride = 1;
  for (std::size_t j : model.parents(i)) {
    code += static_cast<std::uint64_t>(x[j]) * stride;
    stride *= static_cast<std::uint64_t>(model.cardinality(j));
  }
  return code;
}

std::uint64_t parent_configs(const CausalModel& model, std::size_t i) {
  std::uint64_t c = 1;
  for (std::size_t j : model.parents(i)) c *= static_cast<std::uint64_t>(model.cardinality(j));
  return c;
}

}  // namespace

std::uint64_t GroundTruthSCM::exogenous_total() const {
  std::uint64_t total = 1;
  for (std::uint64_t u : exogenous) total *= u;
  return total;
}

void GroundTruthSCM::check() const {
  const std::size_t n = model.size();
  if (exogenous.size() != n || mechanisms.size() != n) {
    throw ModelError("ground truth needs one exogenous domain and mechanism per variable");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (exogenous[i] == 0) throw ModelError("empty exogenous domain for " + model.variable(i).name);
    if (mechanisms[i].size() != parent_configs(model, i) * exogenous[i]) {
      throw ModelError("mechanism table of " + model.variable(i).name + " has the wrong size");
    }
    for (int v : mechanisms[i]) {
      if (v < 0 || v >= model.cardinality(i)) {
        throw ModelError("mechanism of " + model.variable(i).name + " leaves its domain");
      }
    }
  }
  if (p_u.size() != exogenous_total()) throw ModelError("exogenous table has the wrong size");
  double sum = 0.0;
  for (double v : p_u) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ModelError("exogenous table has a negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ModelError("exogenous table does not sum to 1");
}

Configuration GroundTruthSCM::simulate(std::span<const std::uint64_t> u, const Action* action) const {
  Configuration x(model.size(), 0);
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (action) {
      if (auto v = action->value_for(i)) {
        x[i] = *v;
        continue;
      }
    }
    const std::uint64_t pa = parent_code(model, i, x);
    x[i] = mechanisms[i][pa + parent_configs(model, i) * u[i]];
  }
  return x;
}

namespace {

template <class Fn>
void for_each_u(const GroundTruthSCM& scm, Fn&& fn) {
  std::vector<std::uint64_t> u(scm.exogenous.size(), 0);
  for (std::uint64_t code = 0; code < scm.p_u.size(); ++code) {
    fn(code, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (++u[i] < scm.exogenous[i]) break;
      u[i] = 0;
    }
  }
}

}  // namespace

ObservationalTable observational_distribution(const GroundTruthSCM& scm) {
  scm.check();
  std::vector<double> p(scm.model.configuration_count(), 0.0);
  for_each_u(scm, [&](std::uint64_t code, const std::vector<std::uint64_t>& u) {
    if (scm.p_u[code] == 0.0) return;
    p[canonical_index(scm.simulate(u), scm.model.cardinalities())] += scm.p_u[code];
  });
  return ObservationalTable(std::move(p));
}

double counterfactual_expectation(const GroundTruthSCM& scm, const Classifier& h,
                                  std::span<const int> factual, const Action& action) {
  scm.check();
  check_configuration(scm.model, factual);
  check_action(scm.model, action, /*allow_empty=*/true);
  double mass = 0.0;
  double weighted = 0.0;
  for_each_u(scm, [&](std::uint64_t code, const std::vector<std::uint64_t>& u) {
    const double w = scm.p_u[code];
    if (w == 0.0) return;
    const Configuration x = scm.simulate(u);
    if (!std::equal(x.begin(), x.end(), factual.begin(), factual.end())) return;
    mass += w;
    weighted += w * h(scm.simulate(u, &action));
  });
  if (!(mass > 0.0)) throw ConditioningError("factual has zero probability");
  return weighted / mass;
}

namespace {

std::vector<double> random_column(detail::Rng& rng, std::size_t size,
                                  const std::optional<std::uint64_t>& steps) {
  if (!steps) return rng.dirichlet(size);
  // Uniform composition of `steps` units into `size` parts (stars and bars).
  const std::uint64_t slots = *steps + size - 1;
  std::vector<std::uint64_t> pool(slots);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t k = 0; k + 1 < size; ++k) {
    std::swap(pool[k], pool[k + rng.below(slots - k)]);
  }
  std::vector<std::uint64_t> bars(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size - 1));
  std::sort(bars.begin(), bars.end());
  std::vector<double> out(size);
  std::uint64_t previous = 0;
  for (std::size_t k = 0; k < size; ++k) {
    const std::uint64_t end = k + 1 < size ? bars[k] : slots;
    const std::uint64_t start = k == 0 ? 0 : previous + 1;
    out[k] = static_cast<double>(end - start) / static_cast<double>(*steps);
    previous = end;
  }
  return out;
}

}  // namespace

GroundTruthSCM random_instance(std::uint64_t seed, const RandomInstanceOptions& options) {
  if (options.variables == 0 || options.variables > 4) {
    throw CapacityError("random instances support 1 to 4 variables");
  }
  if (options.max_cardinality < 2 || options.max_cardinality > 3) {
    throw CapacityError("random instances support cardinalities 2 or 3");
  }
  if (options.lattice_steps && *options.lattice_steps == 0) {
    throw DomainError("lattice needs at least one step");
  }
  detail::Rng rng(seed);
  const std::size_t n = options.variables;

  std::vector<Variable> vars;
  for (std::size_t i = 0; i < n; ++i) {
    const int k = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(options.max_cardinality - 1)));
    vars.push_back({"X" + std::to_string(i + 1), k});
  }
  std::vector<std::vector<std::size_t>> parents(n);
  if (options.parents) {
    parents = *options.parents;
    if (parents.size() != n) throw DomainError("parent lists must cover every variable");
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (rng.bernoulli(options.edge_probability)) parents[i].push_back(j);
      }
    }
  }

  GroundTruthSCM scm{CausalModel::create(vars, parents).with_confounding(options.confounding),
                     {}, {}, {}};
  const CausalModel& model = scm.model;

  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t k = static_cast<std::uint64_t>(model.cardinality(i));
    const std::uint64_t c = parent_configs(model, i);
    std::uint64_t functions = 1;
    for (std::uint64_t j = 0; j < c; ++j) {
      if (functions > options.max_exogenous / k) throw CapacityError("too many response functions");
      functions *= k;
    }
    if (total > options.max_exogenous / functions) {
      throw CapacityError("exogenous space exceeds " + std::to_string(options.max_exogenous));
    }
    total *= functions;
    scm.exogenous.push_back(functions);

    // u -> a random relabelling of the functions pa -> x.
    std::vector<std::uint64_t> label(functions);
    std::iota(label.begin(), label.end(), 0);
    for (std::uint64_t a = functions; a > 1; --a) std::swap(label[a - 1], label[rng.below(a)]);
    std::vector<int> table(c * functions);
    for (std::uint64_t u = 0; u < functions; ++u) {
      std::uint64_t f = label[u];
      for (std::uint64_t pa = 0; pa < c; ++pa) {
        table[pa + c * u] = static_cast<int>(f % k);
        f /= k;
      }
    }
    scm.mechanisms.push_back(std::move(table));
  }

  const ConfoundingSpec& spec = model.confounding();
  if (options.law == ExogenousLaw::ArbitraryJoint || spec.mode == ConfoundingMode::Full) {
    scm.p_u = random_column(rng, total, options.lattice_steps);
  } else {
    // P(U) = prod_i P(U_i | U_{parents_of(i)}), one column per parent assignment.
    std::vector<std::vector<double>> conditionals(n);
    std::vector<std::vector<std::size_t>> given(n);
    for (std::size_t i = 0; i < n; ++i) {
      given[i] = spec.parents_of(i);
      std::uint64_t columns = 1;
      for (std::size_t j : given[i]) columns *= scm.exogenous[j];
      for (std::uint64_t col = 0; col < columns; ++col) {
        const auto draw = random_column(rng, scm.exogenous[i], options.lattice_steps);
        conditionals[i].insert(conditionals[i].end(), draw.begin(), draw.end());
      }
    }
    scm.p_u.assign(total, 1.0);
    for_each_u(scm, [&](std::uint64_t code, const std::vector<std::uint64_t>& u) {
      double w = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t col = 0;
        std::uint64_t stride = 1;
        for (std::size_t j : given[i]) {
          col += u[j] * stride;
          stride *= scm.exogenous[j];
        }
        w *= conditionals[i][col * scm.exogenous[i] + u[i]];
      }
      scm.p_u[code] = w;
    });
  }
  scm.check();
  return scm;
}

}  // namespace recourse
