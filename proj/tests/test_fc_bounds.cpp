#include <doctest.h>

#include <cmath>

#include "recourse/errors.hpp"
#include "recourse/fc_bounds.hpp"
#include "recourse/oracle.hpp"
#include "support.hpp"

using namespace recourse;
using recourse::test::binary;
using recourse::test::fig1;
using recourse::test::double_sum_oracle;
using recourse::test::two_node;

TEST_CASE("constraint matrix of a single root is the identity") {
  const CausalModel m = CausalModel::create(binary(1), {{}});
  const ConstraintSystem sys = build_constraints(m, ObservationalTable({0.3, 0.7}));
  REQUIRE(sys.rows() == 2);
  REQUIRE(sys.cols() == 2);
  for (int x = 0; x < 2; ++x) {
    for (int r = 0; r < 2; ++r) CHECK(sys.at(x, r) == (x == r ? 1 : 0));
  }
}

TEST_CASE("two-node constraint row (0,0)") {
  const auto inst = two_node();
  const ConstraintSystem sys = build_constraints(inst.model, inst.p);
  // Joint index r = r1 + 2 r2; the row holds (r1=0, r2=0) and (r1=0, r2=2).
  std::vector<std::uint64_t> cols;
  for (std::uint64_t r = 0; r < sys.cols(); ++r) {
    if (sys.at(0, r)) cols.push_back(r);
  }
  CHECK(cols == std::vector<std::uint64_t>{0, 4});
}

TEST_CASE("fig1 constraint matrix shape and sums") {
  const CausalModel m = fig1();
  const ConstraintSystem sys = build_constraints(m, ObservationalTable(std::vector<double>(8, 0.125)));
  CHECK(sys.rows() == 8);
  CHECK(sys.cols() == 128);
  const DenseMatrix a = sys.dense();
  for (std::size_t r = 0; r < 128; ++r) {
    double col = 0.0;
    for (std::size_t x = 0; x < 8; ++x) col += a(x, r);
    CHECK(col == 1.0);
  }
  for (std::size_t x = 0; x < 8; ++x) {
    double row = 0.0;
    for (std::size_t r = 0; r < 128; ++r) row += a(x, r);
    CHECK(row == 16.0);
  }
}

TEST_CASE("constraint size budget") {
  const CausalModel m = fig1();
  ConstraintOptions small;
  small.max_entries = 500;
  CHECK_THROWS_AS(build_constraints(m, ObservationalTable(std::vector<double>(8, 0.125)), small),
                  CapacityError);
}

TEST_CASE("two-node objective coefficients") {
  const auto inst = two_node();
  const ConstraintSystem sys = build_constraints(inst.model, inst.p);
  const ObjectiveVector obj = build_objective(sys, inst.h, Configuration{0, 0}, Action::make({{0, 1}}));
  CHECK(obj.factual_probability == 0.25);
  for (std::uint64_t r = 0; r < sys.cols(); ++r) {
    if (r == 4) {
      CHECK(obj.c[r] == doctest::Approx(4.0));
    } else {
      CHECK(obj.c[r] == 0.0);
    }
  }
  const ObjectiveVector flat =
      build_objective(sys, Classifier::constant(inst.model, 0.7), Configuration{0, 0}, Action::make({{0, 1}}));
  for (std::uint64_t r = 0; r < sys.cols(); ++r) {
    CHECK(flat.c[r] == doctest::Approx(0.7 * sys.at(0, r) / 0.25));
  }
}

TEST_CASE("objective guards") {
  const auto inst = two_node();
  const ConstraintSystem sys = build_constraints(inst.model, ObservationalTable({0.0, 0.5, 0.25, 0.25}));
  CHECK_THROWS_AS(build_objective(sys, inst.h, Configuration{0, 0}, Action::make({{0, 1}})),
                  ConditioningError);
  CHECK_THROWS_AS(build_objective(sys, inst.h, Configuration{1, 0}, Action::make({{1, 1}})), MisuseError);
}

TEST_CASE("forward-simulation and double-sum objectives agree on fig1") {
  const CausalModel m = fig1();
  detail::Rng rng(31);
  const ObservationalTable p(rng.dirichlet(8));
  const ConstraintSystem sys = build_constraints(m, p);
  const std::vector<Action> actions = {Action::make({{0, 1}}), Action::make({{1, 1}}),
                                       Action::make({{0, 0}}), Action::make({{0, 1}, {1, 0}})};
  for (int trial = 0; trial < 8; ++trial) {
    const Configuration xf = decode_index(trial, m.cardinalities());
    const Classifier h = recourse::test::random_table(rng, m);
    for (const Action& a : actions) {
      const auto fwd = build_objective(sys, h, xf, a, ObjectiveForm::ForwardSimulation);
      const auto dbl = build_objective(sys, h, xf, a, ObjectiveForm::DoubleSum);
      const auto lit = double_sum_oracle(sys, h, xf, a);
      for (std::size_t r = 0; r < 128; ++r) {
        CHECK(std::abs(fwd.c[r] - dbl.c[r]) <= 1e-12);
        CHECK(std::abs(fwd.c[r] - lit[r]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("two-node FC bounds") {
  const auto inst = two_node(ConfoundingSpec::full());
  const ConstraintSystem sys = build_constraints(inst.model, inst.p);
  const Action a = Action::make({{0, 1}});
  const BoundsResult b = compute_bounds_fc(sys, build_objective(sys, inst.h, Configuration{0, 0}, a));
  CHECK(std::abs(b.lb - 0.0) <= 1e-9);
  CHECK(std::abs(b.ub - 1.0) <= 1e-9);
  CHECK(b.certified);
  CHECK(b.method == BoundMethod::FcLp);
  REQUIRE(b.witness_min.has_value());
  REQUIRE(b.witness_max.has_value());
  CHECK(b.witness_max->at(4) == doctest::Approx(0.25));

  const Classifier flat = Classifier::constant(inst.model, 0.7);
  const BoundsResult c = compute_bounds_fc(sys, build_objective(sys, flat, Configuration{0, 0}, a));
  CHECK(c.lb == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(c.ub == doctest::Approx(0.7).epsilon(1e-9));
}

TEST_CASE("point evaluation of sink actions") {
  const CausalModel m = fig1();
  const Classifier h = Classifier::indicator(m, 2);
  const Configuration xf{0, 0, 0};
  BoundsResult b = point_evaluate(m, h, xf, Action::make({{2, 1}}));
  CHECK(b.lb == 1.0);
  CHECK(b.ub == 1.0);
  CHECK(b.method == BoundMethod::Point);
  CHECK(b.certified);
  b = point_evaluate(m, h, xf, Action::make({{2, 0}}));
  CHECK(b.lb == 0.0);
  CHECK(b.ub == 0.0);
  b = point_evaluate(m, Classifier::constant(m, 0.3), xf, Action::make({{2, 1}}));
  CHECK(b.lb == 0.3);
  CHECK(b.ub == 0.3);
}

TEST_CASE("worst-case bounds") {
  const auto inst = two_node(ConfoundingSpec::full());
  const ConstraintSystem sys = build_constraints(inst.model, inst.p);
  const Configuration xf{0, 0};
  BoundsResult b = worst_case_bound(sys, inst.h, xf, Action::make({{0, 1}}));
  CHECK(b.lb == 0.0);
  CHECK(b.ub == 1.0);
  b = worst_case_bound(sys, Classifier::constant(inst.model, 0.7), xf, Action::make({{0, 1}}));
  CHECK(b.lb == doctest::Approx(0.7));
  CHECK(b.ub == doctest::Approx(0.7));
  // Re-imposing the factual value leaves a single counterfactual outcome.
  b = worst_case_bound(sys, inst.h, Configuration{1, 1}, Action::make({{0, 1}}));
  CHECK(b.lb == 1.0);
  CHECK(b.ub == 1.0);
}

TEST_CASE("worst-case bounds contain expected-value bounds") {
  detail::Rng rng(8);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    RandomInstanceOptions o;
    o.parents = std::vector<std::vector<std::size_t>>{{}, {0}, {0, 1}};
    const GroundTruthSCM scm = random_instance(seed, o);
    const ObservationalTable p = observational_distribution(scm);
    const auto xf = recourse::test::draw_factual(rng, scm.model, p, 0.01);
    REQUIRE(xf.has_value());
    const Classifier h = recourse::test::random_table(rng, scm.model);
    const Action a = Action::make({{rng.below(2), static_cast<int>(rng.below(2))}});
    const ConstraintSystem sys = build_constraints(scm.model, p);
    const BoundsResult e = compute_bounds_fc(sys, build_objective(sys, h, *xf, a));
    const BoundsResult w = worst_case_bound(sys, h, *xf, a);
    CHECK(w.lb <= e.lb + 1e-9);
    CHECK(e.ub <= w.ub + 1e-9);
    CHECK(0.0 <= e.lb);
    CHECK(e.lb <= e.ub);
    CHECK(e.ub <= 1.0);
  }
}

TEST_CASE("oracle counterfactual lies inside FC bounds") {
  detail::Rng rng(1);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RandomInstanceOptions o;
    o.variables = 1 + seed % 3;
    const GroundTruthSCM scm = random_instance(1000 + seed, o);
    const CausalModel& m = scm.model;
    std::vector<std::size_t> with_desc;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m.children(i).empty()) with_desc.push_back(i);
    }
    if (with_desc.empty()) continue;
    const ObservationalTable p = observational_distribution(scm);
    const auto xf = recourse::test::draw_factual(rng, m, p, 0.01);
    REQUIRE(xf.has_value());
    const std::size_t t = with_desc[rng.below(with_desc.size())];
    const Action a = Action::make({{t, static_cast<int>(rng.below(m.cardinality(t)))}});
    const Classifier h = recourse::test::random_table(rng, m);
    const ConstraintSystem sys = build_constraints(m, p);
    const BoundsResult b = compute_bounds_fc(sys, build_objective(sys, h, *xf, a));
    const double truth = counterfactual_expectation(scm, h, *xf, a);
    CHECK(truth >= b.lb - 1e-6);
    CHECK(truth <= b.ub + 1e-6);
  }
}

TEST_CASE("clamping tolerates round-off only") {
  BoundsResult b;
  b.lb = -5e-8;
  b.ub = 1.0 + 5e-8;
  clamp_bounds(b);
  CHECK(b.lb == 0.0);
  CHECK(b.ub == 1.0);
  b.lb = -1e-5;
  CHECK_THROWS_AS(clamp_bounds(b), InternalError);
}

TEST_CASE("method names round-trip") {
  for (BoundMethod m : {BoundMethod::FcLp, BoundMethod::PcLocal, BoundMethod::PcGrid, BoundMethod::Point}) {
    CHECK(bound_method_from_string(to_string(m)) == m);
  }
  CHECK_FALSE(bound_method_from_string("LP").has_value());
}
