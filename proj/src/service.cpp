#include "recourse/service.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

#include <httplib.h>

#include "recourse/errors.hpp"

namespace recourse {

using nlohmann::json;

ModelStore ModelStore::load_directory(const std::filesystem::path& dir,
                                      std::vector<std::string>* skipped) {
  if (!std::filesystem::is_directory(dir)) {
    throw ModelError("model directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  ModelStore store;
  for (const auto& file : files) {
    try {
      store.add(file.stem().string(), parse_model_file(file));
    } catch (const std::exception& e) {
      if (skipped) skipped->push_back(file.filename().string() + ": " + e.what());
    }
  }
  return store;
}

void ModelStore::add(std::string id, ModelBundle bundle) {
  if (!bundles_.emplace(std::move(id), std::move(bundle)).second) {
    throw ModelError("duplicate model id");
  }
}

const ModelBundle* ModelStore::find(std::string_view id) const {
  auto it = bundles_.find(id);
  return it == bundles_.end() ? nullptr : &it->second;
}

std::vector<std::string> ModelStore::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : bundles_) out.push_back(id);
  return out;
}

namespace {

struct HttpError {
  int status;
  std::string message;
};

HttpReply error_reply(int status, std::string message, std::string_view kind = {}) {
  HttpReply r;
  r.status = status;
  r.body = {{"error", std::move(message)}};
  if (!kind.empty()) r.body["kind"] = std::string(kind);
  return r;
}

std::string opaque_id() {
  static std::atomic<std::uint64_t> counter{0};
  const auto now = std::chrono::steady_clock::now().time_since_epoch().count();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%08llx-%04llx",
                static_cast<unsigned long long>(now) & 0xffffffffULL,
                static_cast<unsigned long long>(++counter) & 0xffffULL);
  return buf;
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  const auto q = path.find('?');
  if (q != std::string_view::npos) path = path.substr(0, q);
  std::size_t start = 0;
  while (start < path.size()) {
    const std::size_t end = std::min(path.find('/', start), path.size());
    if (end > start) parts.push_back(path.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

json parse_body(std::string_view body, std::initializer_list<std::string_view> allowed) {
  json j;
  try {
    j = body.empty() ? json::object() : json::parse(body.begin(), body.end());
  } catch (const json::parse_error&) {
    throw HttpError{400, "request body is not valid JSON"};
  }
  if (!j.is_object()) throw HttpError{400, "request body must be a JSON object"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw HttpError{422, "unknown field '" + it.key() + "'"};
    }
  }
  return j;
}

BoundMode body_mode(const json& j) {
  auto it = j.find("mode");
  if (it == j.end()) return BoundMode::Fc;
  if (!it->is_string()) throw HttpError{422, "mode must be \"fc\" or \"pc\""};
  auto m = parse_mode(it->get<std::string>());
  if (!m) throw HttpError{422, "mode must be \"fc\" or \"pc\""};
  return *m;
}

ObjectiveKind body_objective(const json& j) {
  auto it = j.find("objective");
  if (it == j.end()) return ObjectiveKind::Expected;
  if (!it->is_string()) throw HttpError{422, "objective must be \"expected\" or \"worst\""};
  auto o = parse_objective(it->get<std::string>());
  if (!o) throw HttpError{422, "objective must be \"expected\" or \"worst\""};
  return *o;
}

double body_number(const json& j, const char* key, double fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) throw HttpError{422, std::string(key) + " must be a number"};
  return it->get<double>();
}

const json& body_required(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw HttpError{422, std::string("missing field '") + key + "'"};
  return *it;
}

json model_summary(const std::string& id, const ModelBundle& b) {
  return {{"id", id},
          {"name", b.name},
          {"variables", b.model.size()},
          {"confounding", std::string(to_string(b.model.confounding().mode))},
          {"has_ground_truth", b.ground_truth.has_value()}};
}

json model_schema(const std::string& id, const ModelBundle& b) {
  const CausalModel& m = b.model;
  json vars = json::array();
  for (std::size_t d = 0; d < m.size(); ++d) {
    std::size_t i = 0;
    while (m.declared_index(i) != d) ++i;
    json parents = json::array();
    for (std::size_t p : m.parents(i)) parents.push_back(m.variable(p).name);
    json v = {{"name", m.variable(i).name},
              {"cardinality", m.cardinality(i)},
              {"parents", parents},
              {"actionable", b.feasibility.actionable[i]},
              {"allowed", b.feasibility.allowed_values(m, i)},
              {"weight", b.costs.weights[i]},
              {"activation", b.costs.activation[i]}};
    vars.push_back(v);
  }
  json conf = {{"mode", std::string(to_string(m.confounding().mode))},
               {"declared", b.confounding_declared}};
  if (m.confounding().mode == ConfoundingMode::Partial) {
    json rp = json::object();
    for (std::size_t i = 0; i < m.size(); ++i) {
      json names = json::array();
      for (std::size_t j : m.confounding().response_parents[i]) names.push_back(m.variable(j).name);
      rp[m.variable(i).name] = names;
    }
    conf["response_parents"] = rp;
  }
  return {{"id", id},
          {"name", b.name},
          {"variables", vars},
          {"confounding", conf},
          {"max_set_size", b.feasibility.max_set_size},
          {"max_actions", b.feasibility.max_actions}};
}

HttpReply dispatch(const ModelStore& store, std::string_view method, std::string_view path,
                   std::string_view body, const ServiceOptions& options) {
  const auto parts = split_path(path);
  if (parts.size() == 1 && parts[0] == "health") {
    if (method != "GET") return error_reply(405, "method not allowed");
    return {200, {{"status", "ok"}}};
  }
  if (parts.empty() || parts[0] != "models") return error_reply(404, "no such route");
  if (parts.size() == 1) {
    if (method != "GET") return error_reply(405, "method not allowed");
    json list = json::array();
    for (const auto& id : store.ids()) list.push_back(model_summary(id, *store.find(id)));
    return {200, {{"models", list}}};
  }
  const std::string id(parts[1]);
  const ModelBundle* bundle = store.find(id);
  if (!bundle) return error_reply(404, "unknown model '" + id + "'");
  if (parts.size() == 2) {
    if (method != "GET") return error_reply(405, "method not allowed");
    return {200, model_schema(id, *bundle)};
  }
  if (parts.size() != 3 || (parts[2] != "bounds" && parts[2] != "recourse")) {
    return error_reply(404, "no such route");
  }
  if (method != "POST") return error_reply(405, "method not allowed");

  SolverSettings settings = options.solver;
  settings.deadline = std::chrono::steady_clock::now() + options.request_cap;

  if (parts[2] == "bounds") {
    const json j = parse_body(body, {"factual", "action", "mode", "objective"});
    BoundsQuery q;
    q.factual = factual_from_json(bundle->model, body_required(j, "factual"));
    q.action = action_from_json(bundle->model, body_required(j, "action"));
    q.mode = body_mode(j);
    q.objective = body_objective(j);
    return {200, to_json(run_bounds(*bundle, q, settings))};
  }
  const json j = parse_body(body, {"factual", "threshold", "epsilon", "mode", "objective"});
  RecourseQuery q;
  q.factual = factual_from_json(bundle->model, body_required(j, "factual"));
  q.threshold = body_number(j, "threshold", 0.5);
  q.epsilon = body_number(j, "epsilon", 0.0);
  q.mode = body_mode(j);
  q.objective = body_objective(j);
  return {200, to_json(run_recourse(*bundle, q, settings))};
}

}  // namespace

HttpReply handle_request(const ModelStore& store, std::string_view method, std::string_view path,
                         std::string_view body, const ServiceOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  HttpReply reply;
  try {
    reply = dispatch(store, method, path, body, options);
  } catch (const HttpError& e) {
    reply = error_reply(e.status, e.message);
  } catch (const DomainError& e) {
    reply = error_reply(422, e.what(), error_kind(e));
  } catch (const ConditioningError& e) {
    reply = error_reply(422, e.what(), error_kind(e));
  } catch (const MisuseError& e) {
    reply = error_reply(422, e.what(), error_kind(e));
  } catch (const ModelError& e) {
    reply = error_reply(422, e.what(), error_kind(e));
  } catch (const CapacityError& e) {
    reply = error_reply(422, e.what(), error_kind(e));
  } catch (const InfeasibleError& e) {
    reply = error_reply(409, e.what(), error_kind(e));
  } catch (const TimeoutError& e) {
    reply = error_reply(503, e.what(), error_kind(e));
    reply.body["retry_after_s"] = 30;
  } catch (const std::exception& e) {
    const std::string id = opaque_id();
    std::fprintf(stderr, "internal error %s: %s\n", id.c_str(), e.what());
    reply = error_reply(500, "internal error");
    reply.body["id"] = id;
  }
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
  reply.body["compute_ms"] = std::round(elapsed.count() * 1000.0) / 1000.0;
  return reply;
}

int serve(const ModelStore& store, const std::string& host, int port, const ServiceOptions& options,
          std::ostream& log, const ReadyCallback& on_ready) {
  httplib::Server server;
  const unsigned workers = std::max(1u, options.workers);
  server.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  std::mutex log_mutex;

  auto handler = [&](const httplib::Request& req, httplib::Response& res) {
    const HttpReply reply = handle_request(store, req.method, req.path, req.body, options);
    res.status = reply.status;
    if (reply.status == 503) res.set_header("Retry-After", "30");
    res.set_content(reply.body.dump(), "application/json");
    std::lock_guard lock(log_mutex);
    log << req.method << ' ' << req.path << ' ' << reply.status << '\n' << std::flush;
  };
  server.Get(R"(/.*)", handler);
  server.Post(R"(/.*)", handler);
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  int bound = port;
  if (port == 0) {
    bound = server.bind_to_any_port(host);
  } else if (!server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    log << "cannot bind " << host << ':' << port << '\n';
    return 1;
  }
  log << "listening on http://" << host << ':' << bound << " with " << store.ids().size()
      << " model(s)\n"
      << std::flush;
  if (on_ready) on_ready(bound, [&server] { server.stop(); });
  return server.listen_after_bind() ? 0 : 1;
}

}  // namespace recourse
