// SPDX-License-Identifier: Apache-2.0

// Session registry and protocol dispatcher. Sessions are independent;
// each has its own lock, so all events of one session are totally ordered.

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uat/llm/backend.hpp"
#include "uat/session/protocol.hpp"
#include "uat/session/scenario.hpp"
#include "uat/session/session.hpp"
#include "uat/session/store.hpp"
#include "uat/tools/catalog.hpp"

namespace uat::session {

using BackendFactory = std::function<std::unique_ptr<llm::Backend>(const Scenario&, Side)>;
using ToolDepsFactory = std::function<tools::ToolDeps(const Scenario&)>;

/// Scripted backends when the scenario names script files, otherwise the
/// live provider configured from the environment.
BackendFactory default_backends();

/// Lexical-embedder index over the scenario corpus, and the given lookup
/// client (live Wikipedia when null).
ToolDepsFactory default_tool_deps(std::shared_ptr<tools::LookupClient> lookup = nullptr);

struct ServiceOptions {
  BackendFactory backends = default_backends();
  ToolDepsFactory tool_deps = default_tool_deps();
  Clock clock = system_clock();
  IdGenerator session_ids = random_id_generator();
  std::optional<std::filesystem::path> data_dir;
  agent::RunnerOptions runner_options;
  bool parallel_chains = true;
};

class SessionService {
 public:
  SessionService(ScenarioCatalog catalog, ServiceOptions options);

  /// Protocol entry point for one connection. `bound` is the connection's
  /// session id, set by start_session. Returns the frames to send back;
  /// failures come back as error frames, never as exceptions.
  std::vector<std::string> handle_frame(std::string& bound, std::string_view frame);

  /// Frames caused by insert timeouts in one session.
  std::vector<std::string> tick(std::string_view session_id);

  std::string start_session(std::string_view scenario_id, std::string participant_id = {});
  SessionRecord snapshot(std::string_view session_id) const;
  std::vector<std::string> session_ids() const;
  std::vector<SessionRecord> finished_sessions() const;

  nlohmann::json health() const;
  const ScenarioCatalog& catalog() const { return catalog_; }
  const std::optional<SessionStore>& store() const { return store_; }

 private:
  struct Entry {
    mutable std::mutex mutex;
    std::unique_ptr<Session> session;
  };
  struct Registries {
    std::shared_ptr<const tools::ToolRegistry> left;
    std::shared_ptr<const tools::ToolRegistry> right;
  };

  std::shared_ptr<Entry> find(std::string_view session_id) const;
  Registries registries_for(const Scenario& scenario);
  std::vector<std::string> dispatch(std::string& bound, const ClientFrame& frame);

  ScenarioCatalog catalog_;
  ServiceOptions options_;
  std::optional<SessionStore> store_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>, std::less<>> sessions_;
  std::map<std::string, Registries, std::less<>> registries_;
};

}  // namespace uat::session
