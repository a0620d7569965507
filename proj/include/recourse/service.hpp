#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "recourse/model_io.hpp"
#include "recourse/query.hpp"

namespace recourse {

// Validated bundles keyed by id; read-only once loading is done.
class ModelStore {
 public:
  // Every *.json file in dir; id = file stem. Files that fail to parse are
  // reported through `skipped` and left out.
  static ModelStore load_directory(const std::filesystem::path& dir,
                                   std::vector<std::string>* skipped = nullptr);

  void add(std::string id, ModelBundle bundle);
  const ModelBundle* find(std::string_view id) const;
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, ModelBundle, std::less<>> bundles_;
};

struct ServiceOptions {
  std::chrono::milliseconds request_cap{30'000};
  unsigned workers = 4;
  SolverSettings solver;
};

struct HttpReply {
  int status = 200;
  nlohmann::json body;
};

// Routing and handlers without the socket layer. compute_ms is added to
// every body.
HttpReply handle_request(const ModelStore& store, std::string_view method, std::string_view path,
                         std::string_view body, const ServiceOptions& options = {});

// Blocks until the server stops. Returns non-zero if the port cannot be bound.
// `on_ready` receives the bound port (useful with port 0) and a callable that
// stops the server from another thread.
using ReadyCallback = std::function<void(int port, std::function<void()> stop)>;
int serve(const ModelStore& store, const std::string& host, int port, const ServiceOptions& options,
          std::ostream& log, const ReadyCallback& on_ready = {});

}  // namespace recourse
