#include <doctest.h>

#include <cmath>

#include "recourse/errors.hpp"
#include "recourse/recourse_engine.hpp"
#include "support.hpp"

using namespace recourse;
using recourse::test::binary;
using recourse::test::fig1;
using recourse::test::two_node;

namespace {

EvaluationOptions with(BoundMode mode, ObjectiveKind objective = ObjectiveKind::Expected) {
  EvaluationOptions o;
  o.mode = mode;
  o.objective = objective;
  return o;
}

EvaluatedAction row(Action a, double cost, double lb, double ub, BoundMethod method) {
  BoundsResult b;
  b.lb = lb;
  b.ub = ub;
  b.method = method;
  b.certified = method != BoundMethod::PcLocal;
  return {std::move(a), cost, b, {}, {}};
}

}  // namespace

TEST_CASE("enumeration examples") {
  const CausalModel m = fig1();
  const Configuration xf{0, 0, 0};
  FeasibilitySpec spec = FeasibilitySpec::all_actionable(m);
  spec.actionable = {false, true, false};
  auto e = enumerate_actions(m, xf, spec);
  REQUIRE(e.actions.size() == 1);
  CHECK(e.actions[0] == Action::make({{1, 1}}));

  spec.actionable = {true, true, false};
  spec.max_set_size = 1;
  e = enumerate_actions(m, xf, spec);
  CHECK(e.actions == std::vector<Action>{Action::make({{0, 1}}), Action::make({{1, 1}})});

  spec.max_set_size = 2;
  e = enumerate_actions(m, xf, spec);
  CHECK(e.actions.size() == 5);
  CHECK(e.actions[2] == Action::make({{0, 0}, {1, 1}}));
  CHECK(e.actions[4] == Action::make({{0, 1}, {1, 1}}));
  CHECK_FALSE(e.truncated);

  spec.max_actions = 3;
  e = enumerate_actions(m, xf, spec);
  CHECK(e.actions.size() == 3);
  CHECK(e.truncated);

  spec.actionable = {false, false, false};
  CHECK_THROWS_AS(enumerate_actions(m, xf, spec), ModelError);
}

TEST_CASE("enumeration count matches the closed form") {
  detail::Rng rng(44);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.below(4);
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < n; ++i) vars.push_back({"V" + std::to_string(i), 2 + static_cast<int>(rng.below(3))});
    const CausalModel m = CausalModel::create(vars, std::vector<std::vector<std::size_t>>(n));
    FeasibilitySpec spec = FeasibilitySpec::all_actionable(m);
    Configuration xf(n);
    for (std::size_t i = 0; i < n; ++i) {
      xf[i] = static_cast<int>(rng.below(m.cardinality(i)));
      spec.actionable[i] = rng.bernoulli(0.7);
      if (rng.bernoulli(0.3)) spec.allowed[i] = {static_cast<int>(rng.below(m.cardinality(i)))};
    }
    spec.actionable[rng.below(n)] = true;
    spec.max_set_size = 1 + rng.below(3);

    // Sum over subsets I with |I| <= max of prod |allowed_i| minus the identity.
    double expected = 0.0;
    for (std::uint64_t mask = 1; mask < (1u << n); ++mask) {
      std::size_t size = 0;
      double prod = 1.0;
      bool identity_allowed = true;
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(mask >> i & 1)) continue;
        if (!spec.actionable[i]) ok = false;
        ++size;
        const auto vals = spec.allowed_values(m, i);
        prod *= static_cast<double>(vals.size());
        identity_allowed = identity_allowed && std::find(vals.begin(), vals.end(), xf[i]) != vals.end();
      }
      if (!ok || size > spec.max_set_size) continue;
      expected += prod - (identity_allowed ? 1.0 : 0.0);
    }
    const auto e = enumerate_actions(m, xf, spec);
    CHECK(static_cast<double>(e.actions.size()) == expected);
    for (std::size_t k = 1; k < e.actions.size(); ++k) {
      CHECK(e.actions[k - 1].targets.size() <= e.actions[k].targets.size());
    }
  }
}

TEST_CASE("cost model") {
  const CausalModel m = CausalModel::create({{"A", 4}, {"B", 3}}, {{}, {}});
  CostModel c{{2.0, 0.5}, {0.0, 1.0}};
  CHECK(c.cost(Action::make({{0, 3}}), Configuration{1, 0}) == 4.0);
  CHECK(c.cost(Action::make({{0, 0}, {1, 2}}), Configuration{1, 0}) == 2.0 + 1.0 + 1.0);
  CHECK(c.cost(Action::make({{1, 0}}), Configuration{1, 0}) == 1.0);
  const CostModel u = CostModel::uniform(m);
  CHECK(u.cost(Action::make({{0, 1}}), Configuration{1, 2}) == 0.0);
  // Shifting factual and action together leaves the cost unchanged.
  CHECK(u.cost(Action::make({{0, 3}, {1, 0}}), Configuration{1, 2}) ==
        u.cost(Action::make({{0, 2}, {1, 0}}), Configuration{0, 2}));
  CHECK(u.cost(Action::make({{0, 3}}), Configuration{1, 0}) == u.cost(Action::make({{0, 2}}), Configuration{0, 0}));
}

TEST_CASE("two-node running example through the engine") {
  const auto inst = two_node();
  const BoundingContext ctx(inst.model, inst.p, inst.h);
  const Configuration xf{0, 0};
  const Action a = Action::make({{0, 1}});
  const BoundsResult fc = ctx.evaluate(xf, a, with(BoundMode::Fc));
  CHECK(fc.method == BoundMethod::FcLp);
  CHECK(std::abs(fc.lb) <= 1e-9);
  CHECK(std::abs(fc.ub - 1.0) <= 1e-9);
  const BoundsResult pc = ctx.evaluate(xf, a, with(BoundMode::Pc));
  CHECK(pc.method == BoundMethod::PcGrid);
  CHECK(std::abs(pc.lb - 0.6) <= 0.05);
  CHECK(std::abs(pc.ub - 1.0) <= 0.05);
  const BoundsResult sink = ctx.evaluate(xf, Action::make({{1, 1}}), with(BoundMode::Pc));
  CHECK(sink.method == BoundMethod::Point);
  CHECK(sink.lb == 1.0);
  CHECK(sink.ub == 1.0);

  const auto evaluated = evaluate_actions(ctx, xf, {a}, CostModel::uniform(inst.model), with(BoundMode::Fc));
  REQUIRE(evaluated.size() == 1);
  CHECK(evaluated[0].cost == 1.0);
}

TEST_CASE("zero-probability factual is rejected") {
  const auto inst = two_node();
  const BoundingContext ctx(inst.model, ObservationalTable({0.0, 0.5, 0.25, 0.25}), inst.h);
  CHECK_THROWS_AS(ctx.evaluate(Configuration{0, 0}, Action::make({{0, 1}}), with(BoundMode::Fc)),
                  ConditioningError);
}

TEST_CASE("constant classifier collapses every mode") {
  const CausalModel m = fig1(ConfoundingSpec::partial({{}, {0}, {1}}));
  detail::Rng rng(12);
  const ObservationalTable p(rng.dirichlet(8));
  const BoundingContext ctx(m, p, Classifier::constant(m, 0.7));
  const Configuration xf{1, 0, 1};
  for (const Action& a : {Action::make({{0, 0}}), Action::make({{1, 1}})}) {
    for (auto o : {with(BoundMode::Fc), with(BoundMode::Pc), with(BoundMode::Fc, ObjectiveKind::WorstCase),
                   with(BoundMode::Pc, ObjectiveKind::WorstCase)}) {
      const BoundsResult b = ctx.evaluate(xf, a, o);
      CHECK(b.lb == doctest::Approx(0.7).epsilon(1e-9));
      CHECK(b.ub == doctest::Approx(0.7).epsilon(1e-9));
    }
  }
  const auto two = two_node();
  const BoundingContext small(two.model, two.p, Classifier::constant(two.model, 0.7));
  const BoundsResult g = small.evaluate(Configuration{0, 0}, Action::make({{0, 1}}), with(BoundMode::Pc));
  CHECK(g.method == BoundMethod::PcGrid);
  CHECK(g.lb == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("partial confounding over all predecessors matches full confounding") {
  detail::Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const ObservationalTable p(rng.dirichlet(8));
    const CausalModel full = fig1(ConfoundingSpec::full());
    const CausalModel all = fig1(ConfoundingSpec::partial({{}, {0}, {0, 1}}));
    const Classifier h = recourse::test::random_table(rng, full);
    const Configuration xf = decode_index(rng.below(8), full.cardinalities());
    const Action a = Action::make({{0, 1 - xf[0]}});
    const BoundsResult f = BoundingContext(full, p, h).evaluate(xf, a, with(BoundMode::Fc));
    const BoundsResult q = BoundingContext(all, p, h).evaluate(xf, a, with(BoundMode::Pc));
    CHECK(std::abs(f.lb - q.lb) <= 1e-6);
    CHECK(std::abs(f.ub - q.ub) <= 1e-6);
  }
}

TEST_CASE("per-action failures do not stop the batch") {
  // X1 -> X2 -> X3 without confounding, with X3 copying X1: infeasible in pc mode.
  const CausalModel m = CausalModel::create(binary(3), {{}, {0}, {1}}, ConfoundingSpec::none());
  std::vector<double> t(8, 0.0);
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) t[canonical_index(std::vector<int>{x1, x2, x1}, m.cardinalities())] = 0.25;
  }
  const BoundingContext ctx(m, ObservationalTable(t), Classifier::indicator(m, 2));
  EvaluationOptions o = with(BoundMode::Pc);
  o.local.restarts = 4;
  const auto rows = evaluate_actions(ctx, Configuration{0, 0, 0}, {Action::make({{1, 1}}), Action::make({{2, 1}})},
                                     CostModel::uniform(m), o);
  REQUIRE(rows.size() == 2);
  CHECK_FALSE(rows[0].bounds.has_value());
  CHECK(rows[0].error_kind == "infeasible");
  REQUIRE(rows[1].bounds.has_value());
  CHECK(rows[1].bounds->method == BoundMethod::Point);
}

TEST_CASE("recommendation rules") {
  const Action a1 = Action::make({{0, 1}});
  const Action a2 = Action::make({{1, 1}});
  const Action a12 = Action::make({{0, 1}, {1, 1}});

  Recommendation r = recommend({row(a1, 1, 1.0, 1.0, BoundMethod::Point)});
  REQUIRE(r.chosen.has_value());
  CHECK(r.ranked[*r.chosen].action == a1);

  r = recommend({row(a1, 1, 0.5, 0.9, BoundMethod::FcLp), row(a2, 2, 0.1, 0.4, BoundMethod::FcLp)});
  CHECK_FALSE(r.chosen.has_value());
  CHECK(r.ranked.size() == 2);

  r = recommend({row(a2, 2, 0.8, 0.9, BoundMethod::FcLp), row(a1, 1, 0.7, 0.9, BoundMethod::FcLp)});
  REQUIRE(r.chosen.has_value());
  CHECK(r.ranked[*r.chosen].action == a1);
  CHECK(*r.chosen == 0);

  r = recommend({row(a1, 1, 0.95, 1.0, BoundMethod::PcLocal), row(a2, 2, 0.7, 0.9, BoundMethod::PcGrid)});
  REQUIRE(r.chosen.has_value());
  CHECK(r.ranked[*r.chosen].action == a2);

  r = recommend({row(a12, 1, 0.9, 1.0, BoundMethod::FcLp), row(a2, 1, 0.6, 0.9, BoundMethod::FcLp),
                 row(a1, 1, 0.7, 0.9, BoundMethod::FcLp)});
  REQUIRE(r.chosen.has_value());
  CHECK(r.ranked[*r.chosen].action == a2);

  r = recommend({row(a1, 1, 0.6, 0.9, BoundMethod::FcLp)}, 0.5, 0.1);
  CHECK_FALSE(r.chosen.has_value());
  r = recommend({row(a1, 1, 0.61, 0.9, BoundMethod::FcLp)}, 0.5, 0.1);
  CHECK(r.chosen.has_value());

  EvaluatedAction failed{a2, 0.5, std::nullopt, "boom", "internal"};
  r = recommend({failed, row(a1, 3, 0.9, 1.0, BoundMethod::FcLp)});
  CHECK(r.ranked.back().action == a2);
  CHECK(*r.chosen == 0);
}
