#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "golden_cases.hpp"
#include "recourse/cli.hpp"
#include "recourse/model_io.hpp"
#include "support.hpp"

using namespace recourse;
using nlohmann::json;
using recourse::test::models_dir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const char* name) { return (models_dir() / name).string(); }

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "recourse_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("bounds on the two-node example") {
  const Run r = cli({"bounds", "--model", model("two_node.json"), "--factual", "X1=0,X2=0", "--action", "X1=1",
                     "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["lb"] == 0.0);
  CHECK(j["ub"] == 1.0);
  CHECK(j["certified"] == true);
  CHECK(j["method"] == "FC_LP");

  const Run t = cli({"bounds", "--model", model("two_node.json"), "--factual", "X1=0,X2=0", "--action", "X1=1",
                     "--mode", "pc"});
  REQUIRE(t.code == kExitOk);
  CHECK(t.out.find("PC_GRID") != std::string::npos);
  CHECK(t.out.find("0.600000") != std::string::npos);
}

TEST_CASE("recourse without a qualifying action") {
  const Run r = cli({"recourse", "--model", model("two_node.json"), "--factual", "X1=0,X2=0", "--threshold", "1",
                     "--format", "json"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["chosen"].is_null());
  CHECK(j["actions"].size() == 5);
}

TEST_CASE("oracle value lies inside the printed interval") {
  const ModelBundle b = parse_model_file(models_dir() / "golden_oracle.json");
  for (std::uint64_t x = 0; x < b.model.configuration_count(); ++x) {
    const std::string factual = format_configuration(b.model, decode_index(x, b.model.cardinalities()));
    for (const char* action : {"X1=0", "X1=1", "X2=0", "X2=1", "X1=1,X2=0"}) {
      CAPTURE(factual);
      CAPTURE(action);
      const Run o = cli({"oracle", "--model", model("golden_oracle.json"), "--factual", factual, "--action",
                         action, "--format", "json"});
      const Run bd = cli({"bounds", "--model", model("golden_oracle.json"), "--factual", factual, "--action",
                          action, "--format", "json"});
      REQUIRE(o.code == kExitOk);
      REQUIRE(bd.code == kExitOk);
      const double v = json::parse(o.out)["value"];
      const json bj = json::parse(bd.out);
      CHECK(v >= bj["lb"].get<double>() - 1e-6);
      CHECK(v <= bj["ub"].get<double>() + 1e-6);
    }
  }
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"bounds", "--model", model("two_node.json")}).code == kExitUsage);
  CHECK(cli({"bounds", "--model", model("two_node.json"), "--factual", "X1=0,X2=0", "--action", "X1=1", "--mode",
             "exact"})
            .code == kExitUsage);
  CHECK(cli({"bounds", "--model", model("two_node.json"), "--factual", "X1=0", "--action", "X1=1"}).code ==
        kExitUsage);
  CHECK(cli({"bounds", "--model", model("two_node.json"), "--factual", "X1=0,X2=0", "--action", "X1=7"}).code ==
        kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("model errors exit with 3") {
  CHECK(cli({"bounds", "--model", "/nonexistent/model.json", "--factual", "X1=0", "--action", "X1=1"}).code ==
        kExitModel);
  CHECK(cli({"oracle", "--model", model("two_node.json"), "--factual", "X1=0,X2=0", "--action", "X1=1"}).code ==
        kExitModel);

  json doc = json::parse(std::ifstream(models_dir() / "two_node.json"));
  doc["observational"]["table"] = {0.0, 0.5, 0.1, 0.4};
  const auto zero = scratch() / "zero.json";
  std::ofstream(zero) << doc.dump();
  const Run z = cli({"bounds", "--model", zero.string(), "--factual", "X1=0,X2=0", "--action", "X1=1"});
  CHECK(z.code == kExitModel);
  CHECK(z.err.find("factual has zero probability") != std::string::npos);

  doc = json::parse(std::ifstream(models_dir() / "two_node.json"));
  doc.erase("confounding");
  const auto undeclared = scratch() / "undeclared.json";
  std::ofstream(undeclared) << doc.dump();
  const Run u = cli({"bounds", "--model", undeclared.string(), "--factual", "X1=0,X2=0", "--action", "X1=1",
                     "--mode", "pc"});
  CHECK(u.code == kExitModel);
  CHECK(u.err.find("warning") != std::string::npos);
  CHECK(cli({"bounds", "--model", undeclared.string(), "--factual", "X1=0,X2=0", "--action", "X1=1"}).code ==
        kExitOk);
}

TEST_CASE("incompatible observations exit with 4") {
  // X1 -> X2 -> X3 without confounding, but X3 copies X1.
  const json doc = json::parse(R"({
    "version": 1,
    "variables": [{"name": "X1", "cardinality": 2}, {"name": "X2", "cardinality": 2},
                  {"name": "X3", "cardinality": 2}],
    "edges": [["X1", "X2"], ["X2", "X3"]],
    "confounding": {"mode": "none"},
    "observational": {"table": [0.25, 0, 0.25, 0, 0, 0.25, 0, 0.25]},
    "classifier": {"table": [0, 1, 0, 1, 0, 1, 0, 1]}
  })");
  const auto path = scratch() / "copy.json";
  std::ofstream(path) << doc.dump();
  const Run r = cli({"bounds", "--model", path.string(), "--factual", "X1=0,X2=0,X3=0", "--action", "X2=1",
                     "--mode", "pc", "--restarts", "4"});
  CHECK(r.code == kExitInfeasible);
}

TEST_CASE("JSON outputs match the golden files") {
  for (const auto& c : recourse::test::golden_cases()) {
    CAPTURE(c.name);
    const Run r = cli(c.cli_args(model((c.model + ".json").c_str())));
    REQUIRE(r.code == kExitOk);
    const std::string mismatch = recourse::test::golden_mismatch("cli_" + c.name + ".json", json::parse(r.out));
    CHECK_MESSAGE(mismatch.empty(), mismatch);
  }
}
