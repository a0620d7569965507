#pragma once

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "recourse/causal_model.hpp"
#include "recourse/detail/random.hpp"
#include "recourse/fc_bounds.hpp"
#include "recourse/oracle.hpp"

namespace recourse::test {

inline std::filesystem::path source_dir() { return RECOURSE_SOURCE_DIR; }
inline std::filesystem::path models_dir() { return source_dir() / "models"; }
inline std::filesystem::path golden_dir() { return source_dir() / "tests" / "golden"; }

struct Instance {
  CausalModel model;
  ObservationalTable p;
  Classifier h;
};

inline std::vector<Variable> binary(std::size_t n) {
  std::vector<Variable> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back({"X" + std::to_string(i + 1), 2});
  return v;
}

// X1 -> X2, p = (0.25, 0.25, 0.1, 0.4) over (x1, x2) in {00, 01, 10, 11}, h = x2.
inline Instance two_node(ConfoundingSpec spec = ConfoundingSpec::none()) {
  CausalModel m = CausalModel::create(binary(2), {{}, {0}}, spec);
  // Canonical code puts X1 in the low digit: 00, 10, 01, 11.
  ObservationalTable p({0.25, 0.1, 0.25, 0.4});
  Classifier h = Classifier::indicator(m, 1);
  return {m, p, h};
}

// X1 -> X2, X1 -> X3, X2 -> X3.
inline CausalModel fig1(ConfoundingSpec spec = ConfoundingSpec::full()) {
  return CausalModel::create(binary(3), {{}, {0}, {0, 1}}, spec);
}

// A factual with P >= min_probability, drawn uniformly among such cells.
inline std::optional<Configuration> draw_factual(detail::Rng& rng, const CausalModel& m,
                                                 const ObservationalTable& p,
                                                 double min_probability) {
  std::vector<std::uint64_t> cells;
  for (std::uint64_t x = 0; x < p.size(); ++x) {
    if (p[x] >= min_probability) cells.push_back(x);
  }
  if (cells.empty()) return std::nullopt;
  return decode_index(cells[rng.below(cells.size())], m.cardinalities());
}

inline Classifier random_table(detail::Rng& rng, const CausalModel& m) {
  std::vector<double> t(m.configuration_count());
  for (double& v : t) v = rng.uniform();
  return Classifier::table(m, std::move(t));
}

// Literal double sum over descendant outcomes, with one indicator per
// descendant evaluated from its own response function.
inline std::vector<double> double_sum_oracle(const ConstraintSystem& sys, const Classifier& h,
                                      const Configuration& xf, const Action& a) {
  const CausalModel& m = sys.model();
  const ResponseSpace& s = sys.space();
  const auto split = descendants(m, a.targets);
  const std::uint64_t fx = canonical_index(xf, m.cardinalities());
  const double pf = sys.p()[fx];
  std::vector<int> dk;
  for (std::size_t d : split.descendants) dk.push_back(m.cardinality(d));
  const std::uint64_t outcomes = checked_product(dk);
  std::vector<double> c(sys.cols(), 0.0);
  for (auto cur = s.begin(); cur.valid(); cur.next()) {
    const ResponseDigits& r = cur.digits();
    if (s.simulate(r) != xf) continue;
    for (std::uint64_t o = 0; o < outcomes; ++o) {
      const Configuration od = decode_index(o, dk);
      Configuration x = apply_action(xf, a);
      for (std::size_t k = 0; k < od.size(); ++k) x[split.descendants[k]] = od[k];
      double indicator = 1.0;
      for (std::size_t d : split.descendants) {
        std::vector<int> pa;
        for (std::size_t j : m.parents(d)) pa.push_back(x[j]);
        if (eval_response(m, d, r[d], pa) != x[d]) indicator = 0.0;
      }
      c[cur.index()] += indicator * h(x) / pf;
    }
  }
  return c;
}

// Structural comparison; numbers may differ by `tolerance`. Returns the JSON
// pointer of the first mismatch, or an empty string.
inline std::string json_mismatch(const nlohmann::json& a, const nlohmann::json& b, double tolerance,
                                 const std::string& where = "") {
  if (a.is_number() && b.is_number()) {
    return std::abs(a.get<double>() - b.get<double>()) <= tolerance ? "" : where.empty() ? "/" : where;
  }
  if (a.type() != b.type()) return where.empty() ? "/" : where;
  if (a.is_object()) {
    if (a.size() != b.size()) return where.empty() ? "/" : where;
    for (auto it = a.begin(); it != a.end(); ++it) {
      if (!b.contains(it.key())) return where + "/" + it.key();
      auto m = json_mismatch(it.value(), b.at(it.key()), tolerance, where + "/" + it.key());
      if (!m.empty()) return m;
    }
    return "";
  }
  if (a.is_array()) {
    if (a.size() != b.size()) return where.empty() ? "/" : where;
    for (std::size_t i = 0; i < a.size(); ++i) {
      auto m = json_mismatch(a[i], b[i], tolerance, where + "/" + std::to_string(i));
      if (!m.empty()) return m;
    }
    return "";
  }
  return a == b ? "" : where.empty() ? "/" : where;
}

// Compares against tests/golden/<name>. With RECOURSE_UPDATE_GOLDEN=1 set,
// rewrites the file instead.
inline std::string golden_mismatch(const std::string& name, const nlohmann::json& actual,
                                   double tolerance = 1e-9) {
  const auto path = golden_dir() / name;
  const char* update = std::getenv("RECOURSE_UPDATE_GOLDEN");
  if (update && std::string(update) == "1") {
    std::ofstream(path) << actual.dump(2) << '\n';
    return "";
  }
  std::ifstream in(path);
  if (!in) return "missing golden file " + path.string();
  const nlohmann::json expected = nlohmann::json::parse(in);
  return json_mismatch(expected, actual, tolerance);
}

}  // namespace recourse::test
