#include "recourse/reports.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "recourse/errors.hpp"

namespace recourse {

using nlohmann::json;

double report_round(double value) {
  const double r = std::round(value * 1e9) / 1e9;
  return r == 0.0 ? 0.0 : r;
}

BoundsReport make_bounds_report(const ModelBundle& bundle, std::span<const int> factual,
                                const Action& action, const EvaluationOptions& options,
                                const BoundsResult& result) {
  BoundsReport r;
  r.model = bundle.name;
  r.factual = format_configuration(bundle.model, factual);
  r.action = format_action(bundle.model, action);
  r.mode = std::string(to_string(options.mode));
  r.objective = std::string(to_string(options.objective));
  r.lb = report_round(result.lb);
  r.ub = report_round(result.ub);
  r.certified = result.certified;
  r.method = std::string(to_string(result.method));
  r.cost = report_round(bundle.costs.cost(action, factual));
  return r;
}

RecourseReport make_recourse_report(const ModelBundle& bundle, std::span<const int> factual,
                                    const EvaluationOptions& options, const Recommendation& rec,
                                    bool truncated) {
  RecourseReport r;
  r.model = bundle.name;
  r.factual = format_configuration(bundle.model, factual);
  r.mode = std::string(to_string(options.mode));
  r.objective = std::string(to_string(options.objective));
  r.threshold = rec.threshold;
  r.epsilon = rec.epsilon;
  r.truncated = truncated;
  r.chosen = rec.chosen;
  for (const auto& e : rec.ranked) {
    ActionRow row;
    row.action = format_action(bundle.model, e.action);
    row.set_size = e.action.targets.size();
    row.cost = report_round(e.cost);
    if (e.bounds) {
      row.lb = report_round(e.bounds->lb);
      row.ub = report_round(e.bounds->ub);
      row.certified = e.bounds->certified;
      row.method = std::string(to_string(e.bounds->method));
      row.qualifies = e.bounds->certified && e.bounds->lb > rec.threshold + rec.epsilon;
    } else {
      row.error = e.error;
      row.error_kind = e.error_kind;
    }
    r.actions.push_back(std::move(row));
  }
  return r;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional_number(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

std::optional<std::string> read_optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<std::string>();
}

json row_json(const ActionRow& row) {
  json j = {{"action", row.action},
            {"set_size", row.set_size},
            {"cost", row.cost},
            {"lb", optional_number(row.lb)},
            {"ub", optional_number(row.ub)},
            {"certified", row.certified},
            {"method", row.method},
            {"qualifies", row.qualifies}};
  if (row.error) {
    j["error"] = *row.error;
    j["error_kind"] = row.error_kind.value_or("");
  }
  return j;
}

ActionRow row_from_json(const json& j) {
  ActionRow row;
  row.action = j.at("action").get<std::string>();
  row.set_size = j.at("set_size").get<std::size_t>();
  row.cost = j.at("cost").get<double>();
  row.lb = read_optional_number(j, "lb");
  row.ub = read_optional_number(j, "ub");
  row.certified = j.at("certified").get<bool>();
  row.method = j.at("method").get<std::string>();
  row.qualifies = j.at("qualifies").get<bool>();
  row.error = read_optional_string(j, "error");
  row.error_kind = read_optional_string(j, "error_kind");
  return row;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fixed6(const std::optional<double>& v) { return v ? fixed6(*v) : "-"; }

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

json to_json(const BoundsReport& r) {
  json j = {{"model", r.model},         {"factual", r.factual}, {"action", r.action},
            {"mode", r.mode},           {"objective", r.objective}, {"lb", r.lb},
            {"ub", r.ub},               {"certified", r.certified}, {"method", r.method}};
  j["cost"] = optional_number(r.cost);
  return j;
}

json to_json(const RecourseReport& r) {
  json rows = json::array();
  for (const auto& row : r.actions) rows.push_back(row_json(row));
  json j = {{"model", r.model},
            {"factual", r.factual},
            {"mode", r.mode},
            {"objective", r.objective},
            {"threshold", r.threshold},
            {"epsilon", r.epsilon},
            {"truncated", r.truncated},
            {"actions", rows}};
  if (r.chosen) {
    j["chosen"] = row_json(r.actions.at(*r.chosen));
    j["chosen_rank"] = *r.chosen;
  } else {
    j["chosen"] = nullptr;
    j["chosen_rank"] = nullptr;
  }
  return j;
}

json to_json(const OracleReport& r) {
  return {{"model", r.model},
          {"factual", r.factual},
          {"action", r.action},
          {"factual_probability", r.factual_probability},
          {"value", r.value}};
}

BoundsReport bounds_report_from_json(const json& j) {
  BoundsReport r;
  r.model = j.at("model").get<std::string>();
  r.factual = j.at("factual").get<std::string>();
  r.action = j.at("action").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  r.objective = j.at("objective").get<std::string>();
  r.lb = j.at("lb").get<double>();
  r.ub = j.at("ub").get<double>();
  r.certified = j.at("certified").get<bool>();
  r.method = j.at("method").get<std::string>();
  r.cost = read_optional_number(j, "cost");
  return r;
}

RecourseReport recourse_report_from_json(const json& j) {
  RecourseReport r;
  r.model = j.at("model").get<std::string>();
  r.factual = j.at("factual").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  r.objective = j.at("objective").get<std::string>();
  r.threshold = j.at("threshold").get<double>();
  r.epsilon = j.at("epsilon").get<double>();
  r.truncated = j.at("truncated").get<bool>();
  for (const auto& row : j.at("actions")) r.actions.push_back(row_from_json(row));
  const json& rank = j.at("chosen_rank");
  if (!rank.is_null()) r.chosen = rank.get<std::size_t>();
  return r;
}

OracleReport oracle_report_from_json(const json& j) {
  OracleReport r;
  r.model = j.at("model").get<std::string>();
  r.factual = j.at("factual").get<std::string>();
  r.action = j.at("action").get<std::string>();
  r.factual_probability = j.at("factual_probability").get<double>();
  r.value = j.at("value").get<double>();
  return r;
}

std::string to_table(const BoundsReport& r) {
  std::ostringstream out;
  out << "model      " << r.model << "\n"
      << "factual    " << r.factual << "\n"
      << "action     " << r.action << "\n"
      << "mode       " << r.mode << " / " << r.objective << "\n"
      << "lb         " << fixed6(r.lb) << "\n"
      << "ub         " << fixed6(r.ub) << "\n"
      << "certified  " << (r.certified ? "yes" : "no") << "\n"
      << "method     " << r.method << "\n"
      << "cost       " << fixed6(r.cost) << "\n";
  return out.str();
}

std::string to_table(const RecourseReport& r) {
  std::ostringstream out;
  out << "model " << r.model << "  factual " << r.factual << "  mode " << r.mode << " / "
      << r.objective << "  threshold " << fixed6(r.threshold) << "  epsilon " << fixed6(r.epsilon)
      << "\n";
  std::size_t width = 6;
  for (const auto& row : r.actions) width = std::max(width, row.action.size());
  out << "  " << pad("action", width) << "  " << pad("cost", 10) << "  " << pad("lb", 10) << "  "
      << pad("ub", 10) << "  " << pad("method", 8) << "  note\n";
  for (std::size_t k = 0; k < r.actions.size(); ++k) {
    const auto& row = r.actions[k];
    std::string note;
    if (row.error) note = "error: " + *row.error;
    else if (!row.certified) note = "heuristic";
    else if (row.qualifies) note = "qualifies";
    out << (r.chosen && *r.chosen == k ? "* " : "  ") << pad(row.action, width) << "  "
        << pad(fixed6(row.cost), 10) << "  " << pad(fixed6(row.lb), 10) << "  "
        << pad(fixed6(row.ub), 10) << "  " << pad(row.method, 8) << "  " << note << "\n";
  }
  if (r.chosen) {
    out << "chosen: " << r.actions[*r.chosen].action << "\n";
  } else {
    out << "chosen: none (no certified action clears the threshold)\n";
  }
  if (r.truncated) out << "warning: action list truncated at the enumeration cap\n";
  return out.str();
}

std::string to_table(const OracleReport& r) {
  std::ostringstream out;
  out << "model      " << r.model << "\n"
      << "factual    " << r.factual << "  (p = " << fixed6(r.factual_probability) << ")\n"
      << "action     " << r.action << "\n"
      << "value      " << fixed6(r.value) << "\n";
  return out.str();
}

}  // namespace recourse
