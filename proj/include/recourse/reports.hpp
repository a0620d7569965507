#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "recourse/model_io.hpp"
#include "recourse/recourse_engine.hpp"

namespace recourse {

// Reported numbers are rounded to 1e-9 when a report is built, so the JSON
// and table renderings and every client see the same values.
double report_round(double value);

struct BoundsReport {
  std::string model;
  std::string factual;
  std::string action;
  std::string mode;
  std::string objective;
  double lb = 0.0;
  double ub = 1.0;
  bool certified = false;
  std::string method;
  std::optional<double> cost;

  bool operator==(const BoundsReport&) const = default;
};

struct ActionRow {
  std::string action;
  std::size_t set_size = 0;
  double cost = 0.0;
  std::optional<double> lb;
  std::optional<double> ub;
  bool certified = false;
  std::string method;
  bool qualifies = false;
  std::optional<std::string> error;
  std::optional<std::string> error_kind;

  bool operator==(const ActionRow&) const = default;
};

struct RecourseReport {
  std::string model;
  std::string factual;
  std::string mode;
  std::string objective;
  double threshold = 0.5;
  double epsilon = 0.0;
  bool truncated = false;
  std::optional<std::size_t> chosen;  // index into actions
  std::vector<ActionRow> actions;

  bool operator==(const RecourseReport&) const = default;
};

struct OracleReport {
  std::string model;
  std::string factual;
  std::string action;
  double factual_probability = 0.0;
  double value = 0.0;

  bool operator==(const OracleReport&) const = default;
};

BoundsReport make_bounds_report(const ModelBundle& bundle, std::span<const int> factual,
                                const Action& action, const EvaluationOptions& options,
                                const BoundsResult& result);
RecourseReport make_recourse_report(const ModelBundle& bundle, std::span<const int> factual,
                                    const EvaluationOptions& options, const Recommendation& rec,
                                    bool truncated);

nlohmann::json to_json(const BoundsReport& r);
nlohmann::json to_json(const RecourseReport& r);
nlohmann::json to_json(const OracleReport& r);
BoundsReport bounds_report_from_json(const nlohmann::json& j);
RecourseReport recourse_report_from_json(const nlohmann::json& j);
OracleReport oracle_report_from_json(const nlohmann::json& j);

// Fixed-width text tables; numbers printed with 6 decimals.
std::string to_table(const BoundsReport& r);
std::string to_table(const RecourseReport& r);
std::string to_table(const OracleReport& r);

}  // namespace recourse
