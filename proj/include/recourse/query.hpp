#pragma once

#include <chrono>
#include <optional>

#include "recourse/model_io.hpp"
#include "recourse/recourse_engine.hpp"
#include "recourse/reports.hpp"

namespace recourse {

// Solver knobs shared by the CLI and the HTTP service.
struct SolverSettings {
  std::uint64_t seed = 0;
  std::size_t restarts = 32;
  double resolution = 0.05;
  unsigned threads = 0;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  EvaluationOptions options(BoundMode mode, ObjectiveKind objective) const;
};

struct BoundsQuery {
  Configuration factual;
  Action action;
  BoundMode mode = BoundMode::Fc;
  ObjectiveKind objective = ObjectiveKind::Expected;
};

struct RecourseQuery {
  Configuration factual;
  double threshold = 0.5;
  double epsilon = 0.0;
  BoundMode mode = BoundMode::Fc;
  ObjectiveKind objective = ObjectiveKind::Expected;
};

// Both throw the library's errors; a recourse query records per-action
// failures in its rows instead.
BoundsReport run_bounds(const ModelBundle& bundle, const BoundsQuery& query,
                        const SolverSettings& settings = {});
RecourseReport run_recourse(const ModelBundle& bundle, const RecourseQuery& query,
                            const SolverSettings& settings = {});
// Requires a ground_truth section.
OracleReport run_oracle(const ModelBundle& bundle, std::span<const int> factual, const Action& action);

std::optional<BoundMode> parse_mode(std::string_view text);
std::optional<ObjectiveKind> parse_objective(std::string_view text);

}  // namespace recourse
