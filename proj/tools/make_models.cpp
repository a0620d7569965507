// Regenerates the shipped models that carry a ground_truth section.
// Usage: recourse_make_models <output-dir>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "recourse/model_io.hpp"
#include "recourse/oracle.hpp"

using namespace recourse;

namespace {

ModelBundle bundle_from(std::string name, GroundTruthSCM scm, Classifier h) {
  ModelBundle b{.name = std::move(name),
                .model = scm.model,
                .p = observational_distribution(scm),
                .h = std::move(h),
                .feasibility = FeasibilitySpec::all_actionable(scm.model),
                .costs = CostModel::uniform(scm.model),
                .ground_truth = std::nullopt};
  b.ground_truth = std::move(scm);
  return b;
}

void write(const std::filesystem::path& path, const ModelBundle& bundle, const std::string& description) {
  nlohmann::json doc = model_to_json(bundle);
  doc["description"] = description;
  std::ofstream(path) << doc.dump(2) << '\n';
  std::cout << "wrote " << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: recourse_make_models <output-dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];

  // X1 -> X2, X1 -> X3, X2 -> X3 with confounded neighbours R1-R2 and R2-R3.
  RandomInstanceOptions chain;
  chain.parents = std::vector<std::vector<std::size_t>>{{}, {0}, {0, 1}};
  chain.law = ExogenousLaw::Factorised;
  chain.confounding = ConfoundingSpec::partial({{}, {0}, {1}});
  GroundTruthSCM fig1 = random_instance(11, chain);
  ModelBundle b1 = bundle_from("fig1_chain", fig1, Classifier::linear_logit(-2.0, {0.5, 1.5, 2.0}));
  b1.feasibility.actionable = {false, true, true};
  b1.costs.weights = {1.0, 1.0, 2.0};
  write(dir / "fig1_chain.json", b1,
        "Three binary features X1 -> X2 -> X3 with X1 -> X3; X1 is immutable.");

  RandomInstanceOptions dense;
  dense.parents = std::vector<std::vector<std::size_t>>{{}, {0}, {0, 1}};
  GroundTruthSCM golden = random_instance(0, dense);
  const std::size_t sink = golden.model.size() - 1;
  ModelBundle b2 = bundle_from("golden_oracle", golden, Classifier::indicator(golden.model, sink));
  write(dir / "golden_oracle.json", b2,
        "Random binary SCM on the complete three-node DAG (seed 0), arbitrary joint exogenous law.");
  return 0;
}
