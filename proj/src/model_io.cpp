#include "recourse/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "recourse/errors.hpp"

namespace recourse {

using nlohmann::json;

namespace {

std::string child(const std::string& path, std::string_view key) {
  std::string escaped;
  for (char c : key) {
    if (c == '~') escaped += "~0";
    else if (c == '/') escaped += "~1";
    else escaped += c;
  }
  return path + "/" + escaped;
}

std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

std::string where_or_root(const std::string& path) { return path.empty() ? "/" : path; }

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw SchemaError(where_or_root(path), message);
}

const json& require_object(const json& j, const std::string& path,
                           std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      fail(child(path, it.key()), "unknown field");
    }
  }
  return j;
}

const json* find(const json& obj, std::string_view key) {
  auto it = obj.find(std::string(key));
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path, std::string_view key) {
  const json* v = find(obj, key);
  if (!v) fail(child(path, key), "missing required field");
  return *v;
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

long long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::vector<double> get_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(get_number(j[k], child(path, k)));
  return out;
}

// Declared position -> canonical index.
std::vector<std::size_t> canonical_of(const CausalModel& model) {
  std::vector<std::size_t> out(model.size());
  for (std::size_t i = 0; i < model.size(); ++i) out[model.declared_index(i)] = i;
  return out;
}

std::size_t variable_index(const CausalModel& model, const std::string& name,
                           const std::string& path) {
  auto idx = model.index_of(name);
  if (!idx) fail(path, "unknown variable '" + name + "'");
  return *idx;
}

// Declared index by name, before the model exists.
std::size_t declared_lookup(const std::map<std::string, std::size_t>& names, const std::string& name,
                            const std::string& path) {
  auto it = names.find(name);
  if (it == names.end()) fail(path, "unknown variable '" + name + "'");
  return it->second;
}

std::vector<double> read_table(const json& j, const std::string& path, const CausalModel& model,
                               bool probability) {
  const std::vector<double> lex = get_numbers(j, path);
  if (lex.size() != model.configuration_count()) {
    fail(path, "table has " + std::to_string(lex.size()) + " entries, expected " +
                   std::to_string(model.configuration_count()));
  }
  for (std::size_t k = 0; k < lex.size(); ++k) {
    if (lex[k] < 0.0) {
      fail(child(path, k), std::string(probability ? "negative probability" : "negative value") +
                               " at index " + std::to_string(k));
    }
    if (!probability && lex[k] > 1.0) fail(child(path, k), "value above 1 at index " + std::to_string(k));
  }
  if (probability) {
    double sum = 0.0;
    for (double v : lex) sum += v;
    if (std::abs(sum - 1.0) > 1e-9) fail(path, "probabilities sum to " + std::to_string(sum));
  }
  return table_from_lexicographic(model, lex);
}

ObservationalTable read_samples(const std::filesystem::path& file, const CausalModel& model,
                                const std::string& path) {
  std::ifstream in(file);
  if (!in) fail(path, "cannot open samples file '" + file.string() + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      cells.push_back(cell);
    }
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) fail(path, "samples file is empty");
  const auto header = split(line);
  if (header.size() != model.size()) fail(path, "samples header must name every variable once");
  std::vector<std::size_t> column_var;
  std::set<std::size_t> seen;
  for (const auto& name : header) {
    auto idx = model.index_of(name);
    if (!idx || !seen.insert(*idx).second) fail(path, "bad samples header entry '" + name + "'");
    column_var.push_back(*idx);
  }
  std::vector<Configuration> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      fail(path, file.filename().string() + " line " + std::to_string(line_no) + ": expected " +
                     std::to_string(header.size()) + " values");
    }
    Configuration x(model.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      int v = -1;
      try {
        std::size_t used = 0;
        v = std::stoi(cells[c], &used);
        if (used != cells[c].size()) v = -1;
      } catch (const std::exception&) {
      }
      const std::size_t i = column_var[c];
      if (v < 0 || v >= model.cardinality(i)) {
        fail(path, file.filename().string() + " line " + std::to_string(line_no) +
                       ": invalid state '" + cells[c] + "' for " + model.variable(i).name);
      }
      x[i] = v;
    }
    samples.push_back(std::move(x));
  }
  if (samples.empty()) fail(path, "samples file has no rows");
  return ObservationalTable::from_samples(model, samples);
}

Classifier read_classifier(const json& j, const std::string& path, const CausalModel& model) {
  require_object(j, path, {"table", "linear_logit"});
  const json* table = find(j, "table");
  const json* logit = find(j, "linear_logit");
  if ((table != nullptr) == (logit != nullptr)) fail(path, "give exactly one of table, linear_logit");
  if (table) return Classifier::table(model, read_table(*table, child(path, "table"), model, false));
  const std::string lp = child(path, "linear_logit");
  require_object(*logit, lp, {"bias", "weights"});
  const double bias = get_number(require(*logit, lp, "bias"), child(lp, "bias"));
  std::vector<double> weights(model.size(), 0.0);
  if (const json* w = find(*logit, "weights")) {
    const std::string wp = child(lp, "weights");
    if (!w->is_object()) fail(wp, "expected an object mapping variable names to weights");
    for (auto it = w->begin(); it != w->end(); ++it) {
      weights[variable_index(model, it.key(), child(wp, it.key()))] =
          get_number(it.value(), child(wp, it.key()));
    }
  }
  return Classifier::linear_logit(bias, std::move(weights));
}

void read_actionability(const json& j, const std::string& path, const CausalModel& model,
                        ModelBundle& bundle) {
  require_object(j, path, {"max_set_size", "max_actions", "variables"});
  const std::size_t n = model.size();
  bundle.feasibility.actionable.assign(n, false);
  bundle.feasibility.allowed.assign(n, {});
  if (const json* v = find(j, "max_set_size")) {
    const long long k = get_integer(*v, child(path, "max_set_size"));
    if (k < 1) fail(child(path, "max_set_size"), "must be at least 1");
    bundle.feasibility.max_set_size = static_cast<std::size_t>(k);
  }
  if (const json* v = find(j, "max_actions")) {
    const long long k = get_integer(*v, child(path, "max_actions"));
    if (k < 1) fail(child(path, "max_actions"), "must be at least 1");
    bundle.feasibility.max_actions = static_cast<std::size_t>(k);
  }
  const json* vars = find(j, "variables");
  if (!vars) return;
  const std::string vp = child(path, "variables");
  if (!vars->is_object()) fail(vp, "expected an object keyed by variable name");
  for (auto it = vars->begin(); it != vars->end(); ++it) {
    const std::string ep = child(vp, it.key());
    const std::size_t i = variable_index(model, it.key(), ep);
    const json& e = require_object(it.value(), ep, {"actionable", "allowed", "weight", "activation"});
    bundle.feasibility.actionable[i] = true;
    if (const json* a = find(e, "actionable")) {
      bundle.feasibility.actionable[i] = get_bool(*a, child(ep, "actionable"));
    }
    if (const json* a = find(e, "allowed")) {
      const std::string ap = child(ep, "allowed");
      if (!a->is_array() || a->empty()) fail(ap, "expected a non-empty array of states");
      std::set<int> values;
      for (std::size_t k = 0; k < a->size(); ++k) {
        const long long s = get_integer((*a)[k], child(ap, k));
        if (s < 0 || s >= model.cardinality(i)) fail(child(ap, k), "state outside the domain");
        values.insert(static_cast<int>(s));
      }
      bundle.feasibility.allowed[i].assign(values.begin(), values.end());
    }
    if (const json* a = find(e, "weight")) {
      const double w = get_number(*a, child(ep, "weight"));
      if (w < 0.0) fail(child(ep, "weight"), "cost weight must be non-negative");
      bundle.costs.weights[i] = w;
    }
    if (const json* a = find(e, "activation")) {
      const double w = get_number(*a, child(ep, "activation"));
      if (w < 0.0) fail(child(ep, "activation"), "activation cost must be non-negative");
      bundle.costs.activation[i] = w;
    }
  }
}

// Parents of canonical i in declared order, as canonical indices.
std::vector<std::size_t> parents_in_declared_order(const CausalModel& model, std::size_t i) {
  std::vector<std::size_t> pa = model.parents(i);
  std::sort(pa.begin(), pa.end(), [&](std::size_t a, std::size_t b) {
    return model.declared_index(a) < model.declared_index(b);
  });
  return pa;
}

GroundTruthSCM read_ground_truth(const json& j, const std::string& path, const CausalModel& model) {
  require_object(j, path, {"exogenous", "mechanisms", "p_u"});
  const std::size_t n = model.size();
  GroundTruthSCM scm{model, std::vector<std::uint64_t>(n, 0), std::vector<std::vector<int>>(n), {}};

  const std::string ep = child(path, "exogenous");
  const json& exo = require(j, path, "exogenous");
  if (!exo.is_object()) fail(ep, "expected an object keyed by variable name");
  for (auto it = exo.begin(); it != exo.end(); ++it) {
    const long long k = get_integer(it.value(), child(ep, it.key()));
    if (k < 1 || k > 1'000'000) fail(child(ep, it.key()), "exogenous domain size out of range");
    scm.exogenous[variable_index(model, it.key(), child(ep, it.key()))] = static_cast<std::uint64_t>(k);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (scm.exogenous[i] == 0) fail(ep, "missing exogenous domain for " + model.variable(i).name);
  }

  const std::string mp = child(path, "mechanisms");
  const json& mech = require(j, path, "mechanisms");
  if (!mech.is_object()) fail(mp, "expected an object keyed by variable name");
  std::vector<bool> given(n, false);
  for (auto it = mech.begin(); it != mech.end(); ++it) {
    const std::string vp = child(mp, it.key());
    const std::size_t i = variable_index(model, it.key(), vp);
    given[i] = true;
    const auto declared_parents = parents_in_declared_order(model, i);
    std::vector<int> pa_cards;
    for (std::size_t p : declared_parents) pa_cards.push_back(model.cardinality(p));
    const std::uint64_t configs = checked_product(pa_cards);
    if (!it.value().is_array() || it.value().size() != scm.exogenous[i]) {
      fail(vp, "expected one row per exogenous state");
    }
    std::vector<int>& table = scm.mechanisms[i];
    table.assign(configs * scm.exogenous[i], 0);
    for (std::uint64_t u = 0; u < scm.exogenous[i]; ++u) {
      const json& row = it.value()[u];
      const std::string rp = child(vp, u);
      if (!row.is_array() || row.size() != configs) {
        fail(rp, "expected " + std::to_string(configs) + " outputs, one per parent configuration");
      }
      for (std::uint64_t lex = 0; lex < configs; ++lex) {
        const long long v = get_integer(row[lex], child(rp, lex));
        if (v < 0 || v >= model.cardinality(i)) fail(child(rp, lex), "output outside the domain");
        // Lexicographic over declared-order parents -> ascending-canonical code.
        std::uint64_t rest = lex;
        std::vector<int> values(declared_parents.size());
        for (std::size_t k = declared_parents.size(); k-- > 0;) {
          values[k] = static_cast<int>(rest % static_cast<std::uint64_t>(pa_cards[k]));
          rest /= static_cast<std::uint64_t>(pa_cards[k]);
        }
        std::uint64_t code = 0;
        std::uint64_t stride = 1;
        for (std::size_t p : model.parents(i)) {
          const auto pos = static_cast<std::size_t>(
              std::find(declared_parents.begin(), declared_parents.end(), p) - declared_parents.begin());
          code += static_cast<std::uint64_t>(values[pos]) * stride;
          stride *= static_cast<std::uint64_t>(model.cardinality(p));
        }
        table[code + configs * u] = static_cast<int>(v);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!given[i]) fail(mp, "missing mechanism for " + model.variable(i).name);
  }

  const std::string pp = child(path, "p_u");
  const std::vector<double> lex = get_numbers(require(j, path, "p_u"), pp);
  const std::uint64_t total = scm.exogenous_total();
  if (lex.size() != total) {
    fail(pp, "expected " + std::to_string(total) + " entries, got " + std::to_string(lex.size()));
  }
  scm.p_u.assign(total, 0.0);
  const auto canon = canonical_of(model);
  for (std::uint64_t k = 0; k < total; ++k) {
    if (lex[k] < 0.0) fail(child(pp, k), "negative probability at index " + std::to_string(k));
    std::uint64_t rest = k;
    std::uint64_t code = 0;
    std::vector<std::uint64_t> u(n);
    for (std::size_t d = n; d-- > 0;) {
      const std::size_t i = canon[d];
      u[i] = rest % scm.exogenous[i];
      rest /= scm.exogenous[i];
    }
    std::uint64_t stride = 1;
    for (std::size_t i = 0; i < n; ++i) {
      code += u[i] * stride;
      stride *= scm.exogenous[i];
    }
    scm.p_u[code] = lex[k];
  }
  try {
    scm.check();
  } catch (const ModelError& e) {
    fail(path, e.what());
  }
  return scm;
}

}  // namespace

std::uint64_t lexicographic_index(const CausalModel& model, std::span<const int> values) {
  std::uint64_t code = 0;
  const auto canon = canonical_of(model);
  for (std::size_t d = 0; d < model.size(); ++d) {
    const std::size_t i = canon[d];
    code = code * static_cast<std::uint64_t>(model.cardinality(i)) + static_cast<std::uint64_t>(values[i]);
  }
  return code;
}

std::vector<double> table_from_lexicographic(const CausalModel& model, std::span<const double> lex) {
  if (lex.size() != model.configuration_count()) throw DomainError("table size mismatch");
  std::vector<double> out(lex.size());
  for (std::uint64_t code = 0; code < out.size(); ++code) {
    out[code] = lex[lexicographic_index(model, decode_index(code, model.cardinalities()))];
  }
  return out;
}

std::vector<double> table_to_lexicographic(const CausalModel& model, std::span<const double> canonical) {
  if (canonical.size() != model.configuration_count()) throw DomainError("table size mismatch");
  std::vector<double> out(canonical.size());
  for (std::uint64_t code = 0; code < out.size(); ++code) {
    out[lexicographic_index(model, decode_index(code, model.cardinalities()))] = canonical[code];
  }
  return out;
}

ModelBundle parse_model_json(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports "... at line L, column C: ..."
    std::string what = e.what();
    const auto at = what.find("line ");
    std::string where = "byte " + std::to_string(e.byte);
    if (at != std::string::npos) {
      const auto colon = what.find(':', at);
      where = what.substr(at, colon == std::string::npos ? std::string::npos : colon - at);
    }
    throw SchemaError(where, "invalid JSON");
  }

  const std::string root;
  require_object(doc, root,
                 {"version", "name", "description", "variables", "edges", "confounding",
                  "observational", "classifier", "actionability", "ground_truth"});
  const long long version = get_integer(require(doc, root, "version"), "/version");
  if (version != kModelFileVersion) {
    fail("/version", "unsupported version " + std::to_string(version) + " (expected " +
                         std::to_string(kModelFileVersion) + ")");
  }

  ModelBundle bundle{"", CausalModel::create({{"_", 2}}, {{}}), ObservationalTable(),
                     Classifier(), {}, {}, std::nullopt, true, {}};
  if (const json* name = find(doc, "name")) bundle.name = get_string(*name, "/name");
  if (const json* d = find(doc, "description")) get_string(*d, "/description");

  const json& vars = require(doc, root, "variables");
  if (!vars.is_array() || vars.empty()) fail("/variables", "expected a non-empty array");
  std::vector<Variable> variables;
  std::map<std::string, std::size_t> names;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const std::string vp = child("/variables", k);
    require_object(vars[k], vp, {"name", "cardinality"});
    Variable v;
    v.name = get_string(require(vars[k], vp, "name"), child(vp, "name"));
    const long long card = get_integer(require(vars[k], vp, "cardinality"), child(vp, "cardinality"));
    if (card < 2 || card > 64) fail(child(vp, "cardinality"), "cardinality must be between 2 and 64");
    v.cardinality = static_cast<int>(card);
    if (!names.emplace(v.name, k).second) fail(child(vp, "name"), "duplicate variable '" + v.name + "'");
    variables.push_back(std::move(v));
  }

  std::vector<std::vector<std::size_t>> parents(variables.size());
  if (const json* edges = find(doc, "edges")) {
    if (!edges->is_array()) fail("/edges", "expected an array of [parent, child] pairs");
    for (std::size_t k = 0; k < edges->size(); ++k) {
      const std::string ep = child("/edges", k);
      const json& e = (*edges)[k];
      if (!e.is_array() || e.size() != 2) fail(ep, "expected [parent, child]");
      const std::size_t from = declared_lookup(names, get_string(e[0], child(ep, 0)), child(ep, 0));
      const std::size_t to = declared_lookup(names, get_string(e[1], child(ep, 1)), child(ep, 1));
      parents[to].push_back(from);
    }
  }

  ConfoundingSpec spec;
  if (const json* conf = find(doc, "confounding")) {
    require_object(*conf, "/confounding", {"mode", "response_parents"});
    const std::string mode = get_string(require(*conf, "/confounding", "mode"), "/confounding/mode");
    if (mode == "full") {
      spec = ConfoundingSpec::full();
    } else if (mode == "none") {
      spec = ConfoundingSpec::none();
    } else if (mode == "partial") {
      std::vector<std::vector<std::size_t>> rp(variables.size());
      const json* listed = find(*conf, "response_parents");
      if (!listed || !listed->is_object()) {
        fail("/confounding/response_parents", "partial mode needs an object keyed by variable name");
      }
      for (auto it = listed->begin(); it != listed->end(); ++it) {
        const std::string ep = child("/confounding/response_parents", it.key());
        const std::size_t i = declared_lookup(names, it.key(), ep);
        if (!it.value().is_array()) fail(ep, "expected an array of variable names");
        for (std::size_t k = 0; k < it.value().size(); ++k) {
          rp[i].push_back(declared_lookup(names, get_string(it.value()[k], child(ep, k)), child(ep, k)));
        }
      }
      spec = ConfoundingSpec::partial(std::move(rp));
    } else {
      fail("/confounding/mode", "expected full, partial or none");
    }
    if (mode != "partial" && find(*conf, "response_parents")) {
      fail("/confounding/response_parents", "only allowed in partial mode");
    }
  } else {
    bundle.confounding_declared = false;
    bundle.warnings.push_back("no confounding section; assuming full confounding");
  }

  try {
    bundle.model = CausalModel::create(variables, parents, spec);
  } catch (const ModelError& e) {
    const bool conf = std::string_view(e.what()).find("response parent") != std::string_view::npos;
    fail(conf ? "/confounding" : "/edges", e.what());
  }
  const CausalModel& model = bundle.model;

  const json& obs = require(doc, root, "observational");
  require_object(obs, "/observational", {"table", "samples_path"});
  const json* table = find(obs, "table");
  const json* samples = find(obs, "samples_path");
  if ((table != nullptr) == (samples != nullptr)) {
    fail("/observational", "give exactly one of table, samples_path");
  }
  if (table) {
    bundle.p = ObservationalTable(read_table(*table, "/observational/table", model, true));
  } else {
    const std::filesystem::path rel = get_string(*samples, "/observational/samples_path");
    bundle.p = read_samples(rel.is_absolute() ? rel : base_dir / rel, model, "/observational/samples_path");
  }

  bundle.h = read_classifier(require(doc, root, "classifier"), "/classifier", model);

  bundle.costs = CostModel::uniform(model);
  if (const json* act = find(doc, "actionability")) {
    read_actionability(*act, "/actionability", model, bundle);
  } else {
    bundle.feasibility = FeasibilitySpec::all_actionable(model);
  }

  if (const json* gt = find(doc, "ground_truth")) {
    bundle.ground_truth = read_ground_truth(*gt, "/ground_truth", model);
    const ObservationalTable implied = observational_distribution(*bundle.ground_truth);
    double gap = 0.0;
    for (std::size_t x = 0; x < implied.size() && x < bundle.p.size(); ++x) {
      gap = std::max(gap, std::abs(implied[x] - bundle.p[x]));
    }
    if (gap > 1e-9) {
      fail("/ground_truth", "implied observational distribution differs from the table by " +
                                std::to_string(gap));
    }
  }

  try {
    validate(model, bundle.p, bundle.h);
  } catch (const ModelError& e) {
    fail("/", e.what());
  }
  return bundle;
}

ModelBundle parse_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError("cannot open model file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  ModelBundle bundle = parse_model_json(buffer.str(), path.parent_path().empty() ? "." : path.parent_path());
  if (bundle.name.empty()) bundle.name = path.stem().string();
  return bundle;
}

json model_to_json(const ModelBundle& bundle) {
  const CausalModel& model = bundle.model;
  const std::size_t n = model.size();
  const auto canon = canonical_of(model);
  json doc;
  doc["version"] = kModelFileVersion;
  if (!bundle.name.empty()) doc["name"] = bundle.name;
  doc["variables"] = json::array();
  for (std::size_t d = 0; d < n; ++d) {
    const auto& v = model.variable(canon[d]);
    doc["variables"].push_back({{"name", v.name}, {"cardinality", v.cardinality}});
  }
  doc["edges"] = json::array();
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t p : parents_in_declared_order(model, canon[d])) {
      doc["edges"].push_back({model.variable(p).name, model.variable(canon[d]).name});
    }
  }
  const ConfoundingSpec& spec = model.confounding();
  doc["confounding"] = {{"mode", std::string(to_string(spec.mode))}};
  if (spec.mode == ConfoundingMode::Partial) {
    json rp = json::object();
    for (std::size_t d = 0; d < n; ++d) {
      const std::size_t i = canon[d];
      json names = json::array();
      for (std::size_t j : spec.response_parents[i]) names.push_back(model.variable(j).name);
      rp[model.variable(i).name] = names;
    }
    doc["confounding"]["response_parents"] = rp;
  }
  doc["observational"] = {{"table", table_to_lexicographic(model, bundle.p.probabilities())}};
  if (bundle.h.kind() == Classifier::Kind::Table) {
    doc["classifier"] = {{"table", table_to_lexicographic(model, bundle.h.table_values())}};
  } else {
    json w = json::object();
    for (std::size_t d = 0; d < n; ++d) w[model.variable(canon[d]).name] = bundle.h.weights()[canon[d]];
    doc["classifier"] = {{"linear_logit", {{"bias", bundle.h.bias()}, {"weights", w}}}};
  }
  json act = {{"max_set_size", bundle.feasibility.max_set_size},
              {"max_actions", bundle.feasibility.max_actions},
              {"variables", json::object()}};
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t i = canon[d];
    json e = {{"actionable", i < bundle.feasibility.actionable.size() && bundle.feasibility.actionable[i]}};
    if (i < bundle.feasibility.allowed.size() && !bundle.feasibility.allowed[i].empty()) {
      e["allowed"] = bundle.feasibility.allowed[i];
    }
    if (i < bundle.costs.weights.size()) e["weight"] = bundle.costs.weights[i];
    if (i < bundle.costs.activation.size()) e["activation"] = bundle.costs.activation[i];
    act["variables"][model.variable(i).name] = e;
  }
  doc["actionability"] = act;

  if (bundle.ground_truth) {
    const GroundTruthSCM& scm = *bundle.ground_truth;
    json exo = json::object();
    json mech = json::object();
    for (std::size_t d = 0; d < n; ++d) {
      const std::size_t i = canon[d];
      exo[model.variable(i).name] = scm.exogenous[i];
      const auto declared_parents = parents_in_declared_order(model, i);
      std::vector<int> pa_cards;
      for (std::size_t p : declared_parents) pa_cards.push_back(model.cardinality(p));
      const std::uint64_t configs = checked_product(pa_cards);
      json rows = json::array();
      for (std::uint64_t u = 0; u < scm.exogenous[i]; ++u) {
        json row = json::array();
        for (std::uint64_t lex = 0; lex < configs; ++lex) {
          std::uint64_t rest = lex;
          std::vector<int> values(declared_parents.size());
          for (std::size_t k = declared_parents.size(); k-- > 0;) {
            values[k] = static_cast<int>(rest % static_cast<std::uint64_t>(pa_cards[k]));
            rest /= static_cast<std::uint64_t>(pa_cards[k]);
          }
          std::uint64_t code = 0;
          std::uint64_t stride = 1;
          for (std::size_t p : model.parents(i)) {
            const auto pos = static_cast<std::size_t>(
                std::find(declared_parents.begin(), declared_parents.end(), p) - declared_parents.begin());
            code += static_cast<std::uint64_t>(values[pos]) * stride;
            stride *= static_cast<std::uint64_t>(model.cardinality(p));
          }
          row.push_back(scm.mechanisms[i][code + configs * u]);
        }
        rows.push_back(row);
      }
      mech[model.variable(i).name] = rows;
    }
    std::vector<double> lex(scm.p_u.size());
    for (std::uint64_t code = 0; code < lex.size(); ++code) {
      std::uint64_t rest = code;
      std::vector<std::uint64_t> u(n);
      for (std::size_t i = 0; i < n; ++i) {
        u[i] = rest % scm.exogenous[i];
        rest /= scm.exogenous[i];
      }
      std::uint64_t k = 0;
      for (std::size_t d = 0; d < n; ++d) k = k * scm.exogenous[canon[d]] + u[canon[d]];
      lex[k] = scm.p_u[code];
    }
    doc["ground_truth"] = {{"exogenous", exo}, {"mechanisms", mech}, {"p_u", lex}};
  }
  return doc;
}

namespace {

// "A=1, B=0" -> [(index of A, 1), (index of B, 0)].
std::vector<std::pair<std::size_t, int>> parse_assignments(const CausalModel& model,
                                                           std::string_view text) {
  std::vector<std::pair<std::size_t, int>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw DomainError("expected NAME=STATE, got '" + std::string(item) + "'");
    const std::string name(item.substr(0, eq));
    auto idx = model.index_of(name);
    if (!idx) throw DomainError("unknown variable '" + name + "'");
    const std::string value(item.substr(eq + 1));
    int v = -1;
    try {
      std::size_t used = 0;
      v = std::stoi(value, &used);
      if (used != value.size()) v = -1;
    } catch (const std::exception&) {
    }
    if (v < 0 || v >= model.cardinality(*idx)) {
      throw DomainError("state '" + value + "' out of range for '" + name + "'");
    }
    out.emplace_back(*idx, v);
    start = end + 1;
  }
  return out;
}

Configuration complete_factual(const CausalModel& model,
                               const std::vector<std::pair<std::size_t, int>>& assignments) {
  Configuration x(model.size(), -1);
  for (auto [i, v] : assignments) {
    if (x[i] != -1) throw DomainError("variable '" + model.variable(i).name + "' given twice");
    x[i] = v;
  }
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (x[i] == -1) throw DomainError("missing value for '" + model.variable(i).name + "'");
  }
  return x;
}

}  // namespace

Configuration parse_factual(const CausalModel& model, std::string_view text) {
  return complete_factual(model, parse_assignments(model, text));
}

namespace {

std::vector<std::pair<std::size_t, int>> assignments_from_json(const CausalModel& model, const json& value) {
  if (!value.is_object()) throw DomainError("expected a string or an object of NAME: STATE");
  std::vector<std::pair<std::size_t, int>> out;
  for (auto it = value.begin(); it != value.end(); ++it) {
    auto idx = model.index_of(it.key());
    if (!idx) throw DomainError("unknown variable '" + it.key() + "'");
    if (!it.value().is_number_integer()) throw DomainError("state of '" + it.key() + "' must be an integer");
    const long long v = it.value().get<long long>();
    if (v < 0 || v >= model.cardinality(*idx)) throw DomainError("state out of range for '" + it.key() + "'");
    out.emplace_back(*idx, static_cast<int>(v));
  }
  return out;
}

}  // namespace

Configuration factual_from_json(const CausalModel& model, const json& value) {
  if (value.is_string()) return parse_factual(model, std::string_view(value.get_ref<const std::string&>()));
  return complete_factual(model, assignments_from_json(model, value));
}

Action parse_action(const CausalModel& model, std::string_view text) {
  Action a = Action::make(parse_assignments(model, text));
  check_action(model, a);
  return a;
}

Action action_from_json(const CausalModel& model, const json& value) {
  if (value.is_string()) return parse_action(model, std::string_view(value.get_ref<const std::string&>()));
  Action a = Action::make(assignments_from_json(model, value));
  check_action(model, a);
  return a;
}

}  // namespace recourse
