#include "recourse/cli.hpp"

#include <CLI11.hpp>

#include "recourse/errors.hpp"
#include "recourse/model_io.hpp"
#include "recourse/query.hpp"
#include "recourse/service.hpp"

namespace recourse {

namespace {

struct Common {
  std::string model;
  std::string factual;
  std::string action;
  std::string mode = "fc";
  std::string objective = "expected";
  std::string format = "table";
  double threshold = 0.5;
  double epsilon = 0.0;
  SolverSettings solver;
};

void add_solver_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--mode", c.mode, "Confounding assumption: fc or pc")
      ->check(CLI::IsMember({"fc", "pc"}))
      ->capture_default_str();
  cmd->add_option("--objective", c.objective, "expected or worst")
      ->check(CLI::IsMember({"expected", "worst"}))
      ->capture_default_str();
  cmd->add_option("--seed", c.solver.seed, "Seed for the local search restarts")->capture_default_str();
  cmd->add_option("--restarts", c.solver.restarts, "Local search restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--resolution", c.solver.resolution, "Grid certifier step (1/N)")
      ->check(CLI::Range(1e-3, 1.0))
      ->capture_default_str();
  cmd->add_option("--threads", c.solver.threads, "Worker threads (0: all cores)")->capture_default_str();
}

void add_format_flag(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "table or json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
}

ModelBundle load(const Common& c, std::ostream& err) {
  ModelBundle bundle = parse_model_file(c.model);
  for (const auto& w : bundle.warnings) err << "warning: " << w << '\n';
  return bundle;
}

template <class Report>
void emit(const Report& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << to_json(report).dump(2) << '\n';
  } else {
    out << to_table(report);
  }
}

int exit_code_for(const std::exception& e) {
  const std::string_view kind = error_kind(e);
  if (kind == "domain" || kind == "misuse") return kExitUsage;
  if (kind == "model" || kind == "capacity" || kind == "conditioning") return kExitModel;
  if (kind == "infeasible") return kExitInfeasible;
  return kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Counterfactual recourse bounds for discrete causal models", "recourse"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "recourse 1.0");

  Common c;
  auto* bounds = app.add_subcommand("bounds", "Bound the expected counterfactual outcome of one action");
  bounds->add_option("--model", c.model, "Model file")->required();
  bounds->add_option("--factual", c.factual, "Factual profile, e.g. \"X1=0,X2=0\"")->required();
  bounds->add_option("--action", c.action, "Intervention, e.g. \"X1=1\"")->required();
  add_solver_flags(bounds, c);
  add_format_flag(bounds, c);

  auto* recourse = app.add_subcommand("recourse", "Rank feasible actions and pick the cheapest guaranteed one");
  recourse->add_option("--model", c.model, "Model file")->required();
  recourse->add_option("--factual", c.factual, "Factual profile")->required();
  recourse->add_option("--threshold", c.threshold, "Decision threshold")->capture_default_str();
  recourse->add_option("--epsilon", c.epsilon, "Safety margin above the threshold")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  add_solver_flags(recourse, c);
  add_format_flag(recourse, c);

  auto* oracle = app.add_subcommand("oracle", "Exact counterfactual value from the ground_truth section");
  oracle->add_option("--model", c.model, "Model file")->required();
  oracle->add_option("--factual", c.factual, "Factual profile")->required();
  oracle->add_option("--action", c.action, "Intervention")->required();
  add_format_flag(oracle, c);

  int port = 8080;
  std::string host = "127.0.0.1";
  std::string model_dir;
  unsigned workers = 4;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API for a directory of model files");
  serve_cmd->add_option("--port", port, "TCP port (0: any free port)")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve_cmd->add_option("--host", host, "Bind address")->capture_default_str();
  serve_cmd->add_option("--model-dir", model_dir, "Directory of *.json model files")->required();
  serve_cmd->add_option("--workers", workers, "Request worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::vector<std::string> argv_storage{"recourse"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*serve_cmd) {
      std::vector<std::string> skipped;
      const ModelStore store = ModelStore::load_directory(model_dir, &skipped);
      for (const auto& s : skipped) err << "warning: skipped " << s << '\n';
      ServiceOptions options;
      options.workers = workers;
      return serve(store, host, port, options, err) == 0 ? kExitOk : kExitFailure;
    }

    const ModelBundle bundle = load(c, err);
    const Configuration factual = parse_factual(bundle.model, c.factual);
    if (*oracle) {
      emit(run_oracle(bundle, factual, parse_action(bundle.model, c.action)), c.format, out);
      return kExitOk;
    }
    const BoundMode mode = *parse_mode(c.mode);
    const ObjectiveKind objective = *parse_objective(c.objective);
    if (*bounds) {
      BoundsQuery q{factual, parse_action(bundle.model, c.action), mode, objective};
      emit(run_bounds(bundle, q, c.solver), c.format, out);
      return kExitOk;
    }
    RecourseQuery q{factual, c.threshold, c.epsilon, mode, objective};
    emit(run_recourse(bundle, q, c.solver), c.format, out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}

}  // namespace recourse
