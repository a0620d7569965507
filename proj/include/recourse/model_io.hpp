#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "recourse/causal_model.hpp"
#include "recourse/errors.hpp"
#include "recourse/oracle.hpp"
#include "recourse/recourse_engine.hpp"

namespace recourse {

// Everything one model file describes, validated.
struct ModelBundle {
  std::string name;
  CausalModel model;
  ObservationalTable p;
  Classifier h;
  FeasibilitySpec feasibility;
  CostModel costs;
  std::optional<GroundTruthSCM> ground_truth;
  // False when the file omits the confounding section (full is assumed).
  bool confounding_declared = true;
  std::vector<std::string> warnings;
};

// Thrown for malformed documents. `where` is a JSON pointer such as
// "/variables/2/cardinality", or "line L, column C" for syntax errors.
class SchemaError : public ModelError {
 public:
  SchemaError(std::string where, const std::string& message)
      : ModelError(where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

inline constexpr int kModelFileVersion = 1;

// Tables in the file are listed in lexicographic order over the variables as
// declared (last declared variable varies fastest). samples_path is resolved
// against base_dir.
ModelBundle parse_model_json(std::string_view text, const std::filesystem::path& base_dir = ".");
ModelBundle parse_model_file(const std::filesystem::path& path);

// Writes a bundle back in file form (declared order, lexicographic tables).
nlohmann::json model_to_json(const ModelBundle& bundle);

// "X1=0,X2=1,X3=0" naming every variable, returned in canonical order.
Configuration parse_factual(const CausalModel& model, std::string_view text);
// JSON form: either the same string or an object {"X1": 0, ...}.
Configuration factual_from_json(const CausalModel& model, const nlohmann::json& value);
// "X2=1" or "X1=1,X2=0"; non-empty.
Action parse_action(const CausalModel& model, std::string_view text);
Action action_from_json(const CausalModel& model, const nlohmann::json& value);

// Lexicographic (declared order, last fastest) <-> canonical code.
std::uint64_t lexicographic_index(const CausalModel& model, std::span<const int> canonical_values);
std::vector<double> table_from_lexicographic(const CausalModel& model, std::span<const double> lex);
std::vector<double> table_to_lexicographic(const CausalModel& model, std::span<const double> canonical);

}  // namespace recourse
