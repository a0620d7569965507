#include <doctest.h>

#include <cmath>
#include <numeric>

#include "recourse/errors.hpp"
#include "recourse/oracle.hpp"
#include "support.hpp"

using namespace recourse;
using recourse::test::binary;

namespace {

// X1 := U1, X2 := X1 with P(U1 = 1) = 0.3; U2 is a dummy binary noise.
GroundTruthSCM copy_chain() {
  const CausalModel m = CausalModel::create(binary(2), {{}, {0}});
  GroundTruthSCM scm{m, {2, 2}, {{0, 1}, {0, 1, 0, 1}}, {0.35, 0.15, 0.35, 0.15}};
  scm.check();
  return scm;
}

nlohmann::json to_json(const GroundTruthSCM& scm) {
  nlohmann::json parents = nlohmann::json::array();
  for (std::size_t i = 0; i < scm.model.size(); ++i) parents.push_back(scm.model.parents(i));
  return {{"parents", parents}, {"exogenous", scm.exogenous}, {"mechanisms", scm.mechanisms}, {"p_u", scm.p_u}};
}

}  // namespace

TEST_CASE("observational push-forward of a copy chain") {
  const GroundTruthSCM scm = copy_chain();
  const ObservationalTable p = observational_distribution(scm);
  CHECK(p.at(scm.model, std::vector<int>{1, 1}) == doctest::Approx(0.3));
  CHECK(p.at(scm.model, std::vector<int>{0, 0}) == doctest::Approx(0.7));
  CHECK(p.at(scm.model, std::vector<int>{0, 1}) == 0.0);
  CHECK(p.at(scm.model, std::vector<int>{1, 0}) == 0.0);
}

TEST_CASE("constant mechanisms put all mass on zero") {
  const CausalModel m = CausalModel::create(binary(2), {{}, {0}});
  const GroundTruthSCM scm{m, {3, 2}, {{0, 0, 0}, {0, 0, 0, 0}}, std::vector<double>(6, 1.0 / 6)};
  const ObservationalTable p = observational_distribution(scm);
  CHECK(p[0] == doctest::Approx(1.0));
}

TEST_CASE("push-forward is normalised") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomInstanceOptions o;
    o.variables = 1 + seed % 4;
    o.max_cardinality = 3;
    const ObservationalTable p = observational_distribution(random_instance(seed, o));
    const auto v = p.probabilities();
    CHECK(std::accumulate(v.begin(), v.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("counterfactual examples") {
  const GroundTruthSCM scm = copy_chain();
  const Classifier h = Classifier::indicator(scm.model, 1);
  CHECK(counterfactual_expectation(scm, h, Configuration{0, 0}, Action::make({{0, 1}})) == doctest::Approx(1.0));
  CHECK(counterfactual_expectation(scm, h, Configuration{0, 0}, Action::make({{1, 1}})) == doctest::Approx(1.0));
  CHECK(counterfactual_expectation(scm, h, Configuration{1, 1}, Action::make({{1, 0}})) == 0.0);
  CHECK_THROWS_AS(counterfactual_expectation(scm, h, Configuration{0, 1}, Action::make({{0, 1}})),
                  ConditioningError);
}

TEST_CASE("sink actions and empty actions evaluate the classifier directly") {
  detail::Rng rng(6);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomInstanceOptions o;
    o.parents = std::vector<std::vector<std::size_t>>{{}, {0}, {0, 1}};
    const GroundTruthSCM scm = random_instance(seed, o);
    const ObservationalTable p = observational_distribution(scm);
    const auto xf = recourse::test::draw_factual(rng, scm.model, p, 1e-6);
    REQUIRE(xf.has_value());
    const Classifier h = recourse::test::random_table(rng, scm.model);
    CHECK(counterfactual_expectation(scm, h, *xf, Action{}) == doctest::Approx(h(*xf)).epsilon(1e-12));
    const Action sink = Action::make({{2, 1 - (*xf)[2]}});
    CHECK(counterfactual_expectation(scm, h, *xf, sink) ==
          doctest::Approx(h(apply_action(*xf, sink))).epsilon(1e-12));
    const double v = counterfactual_expectation(scm, h, *xf, Action::make({{0, 1}}));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("factorised laws without confounding are exact products") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomInstanceOptions o;
    o.variables = 3;
    o.law = ExogenousLaw::Factorised;
    o.confounding = ConfoundingSpec::none();
    const GroundTruthSCM scm = random_instance(seed, o);
    std::vector<int> dims(scm.exogenous.begin(), scm.exogenous.end());
    std::vector<std::vector<double>> marginal(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) marginal[i].assign(dims[i], 0.0);
    for (std::uint64_t u = 0; u < scm.p_u.size(); ++u) {
      const auto digits = decode_index(u, dims);
      for (std::size_t i = 0; i < dims.size(); ++i) marginal[i][digits[i]] += scm.p_u[u];
    }
    double residual = 0.0;
    for (std::uint64_t u = 0; u < scm.p_u.size(); ++u) {
      const auto digits = decode_index(u, dims);
      double prod = 1.0;
      for (std::size_t i = 0; i < dims.size(); ++i) prod *= marginal[i][digits[i]];
      residual = std::max(residual, std::abs(prod - scm.p_u[u]));
    }
    CHECK(residual <= 1e-12);
  }
}

TEST_CASE("random instances are reproducible") {
  RandomInstanceOptions o;
  o.variables = 4;
  o.max_cardinality = 3;
  const GroundTruthSCM a = random_instance(77, o);
  const GroundTruthSCM b = random_instance(77, o);
  CHECK(a.p_u == b.p_u);
  CHECK(a.mechanisms == b.mechanisms);
  CHECK(a.exogenous == b.exogenous);
  const GroundTruthSCM c = random_instance(78, o);
  CHECK(a.p_u != c.p_u);
}

TEST_CASE("seed 0 instance matches the committed golden file") {
  const GroundTruthSCM scm = random_instance(0);
  const std::string mismatch = recourse::test::golden_mismatch("oracle_seed0.json", to_json(scm), 1e-15);
  CHECK_MESSAGE(mismatch.empty(), mismatch);
}

TEST_CASE("malformed ground truths are rejected") {
  const CausalModel m = CausalModel::create(binary(2), {{}, {0}});
  GroundTruthSCM bad{m, {2, 2}, {{0, 1}, {0, 1, 0, 2}}, {0.25, 0.25, 0.25, 0.25}};
  CHECK_THROWS_AS(bad.check(), ModelError);
  bad.mechanisms[1][3] = 1;
  bad.p_u[0] = 0.3;
  CHECK_THROWS_AS(bad.check(), ModelError);
  bad.p_u[0] = 0.25;
  bad.mechanisms[0].pop_back();
  CHECK_THROWS_AS(bad.check(), ModelError);
}
