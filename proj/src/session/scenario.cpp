// SPDX-License-Identifier: Apache-2.0

#include "uat/session/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "uat/tools/registry.hpp"

namespace uat::session {

using nlohmann::json;

const char* to_string(SessionErrc code) {
  switch (code) {
    case SessionErrc::UnknownScenario: return "UnknownScenario";
    case SessionErrc::InvalidScenario: return "InvalidScenario";
    case SessionErrc::UnknownSession: return "UnknownSession";
    case SessionErrc::Busy: return "Busy";
    case SessionErrc::SessionFinished: return "SessionFinished";
    case SessionErrc::UnknownCorrelation: return "UnknownCorrelation";
    case SessionErrc::AlreadyAnswered: return "AlreadyAnswered";
    case SessionErrc::GateClosed: return "GateClosed";
    case SessionErrc::RatingMissing: return "RatingMissing";
    case SessionErrc::InvalidRating: return "InvalidRating";
    case SessionErrc::InvalidEvent: return "InvalidEvent";
    case SessionErrc::ProtocolError: return "ProtocolError";
    case SessionErrc::StoreCorrupt: return "StoreCorrupt";
    case SessionErrc::StoreUnavailable: return "StoreUnavailable";
    case SessionErrc::UnfinishedSession: return "UnfinishedSession";
    case SessionErrc::BackendFailure: return "BackendFailure";
  }
  return "Unknown";
}

void validate(const Scenario& s) {
  auto fail = [&](const std::string& why) {
    throw SessionError(SessionErrc::InvalidScenario, "scenario '" + s.scenario_id + "': " + why);
  };
  if (s.scenario_id.empty()) fail("empty scenario_id");
  if (s.min_bot_messages < 1) fail("min_bot_messages must be at least 1");
  if (s.insert_timeout_ms <= 0) fail("insert timeout must be positive");
  if (s.max_steps == 0) fail("max_steps must be positive");
  for (const auto& name : s.tool_names_vanilla)
    if (tools::is_user_as_a_tool(name)) fail("vanilla agent lists user-as-a-tool tool " + name);
  for (const auto& name : s.tool_names_vanilla)
    if (std::find(s.tool_names_enabled.begin(), s.tool_names_enabled.end(), name) == s.tool_names_enabled.end())
      fail("enabled agent lacks vanilla tool " + name);
  std::size_t human = 0;
  for (const auto& name : s.tool_names_enabled) {
    if (tools::is_user_as_a_tool(name)) {
      ++human;
    } else if (std::find(s.tool_names_vanilla.begin(), s.tool_names_vanilla.end(), name) ==
               s.tool_names_vanilla.end()) {
      fail("enabled agent has extra non-human tool " + name);
    }
  }
  if (human == 0) fail("enabled agent needs at least one user-as-a-tool tool");
  if (s.insert_cap == 0) fail("enabled agent needs a positive insert cap");
}

agent::AgentConfig enabled_config(const Scenario& s) {
  auto config = agent::AgentConfig::enabled(s.tool_names_enabled, s.insert_cap);
  config.max_steps = s.max_steps;
  return config;
}

agent::AgentConfig vanilla_config(const Scenario& s) {
  auto config = agent::AgentConfig::vanilla(s.tool_names_vanilla);
  config.max_steps = s.max_steps;
  return config;
}

json to_json(const Scenario& s) {
  json doc = {{"scenario_id", s.scenario_id},
              {"placeholder_text", s.placeholder_text},
              {"tool_names_vanilla", s.tool_names_vanilla},
              {"tool_names_enabled", s.tool_names_enabled},
              {"min_bot_messages", s.min_bot_messages},
              {"rating_variant", std::string(eval::to_string(s.rating_variant))},
              {"corpus_paths", s.corpus_paths},
              {"insert_cap", s.insert_cap},
              {"max_steps", s.max_steps},
              {"insert_timeout_ms", s.insert_timeout_ms}};
  if (s.left_script) doc["left_script"] = *s.left_script;
  if (s.right_script) doc["right_script"] = *s.right_script;
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  Scenario s;
  try {
    s.scenario_id = doc.at("scenario_id").get<std::string>();
    s.placeholder_text = doc.at("placeholder_text").get<std::string>();
    s.tool_names_vanilla = doc.at("tool_names_vanilla").get<std::vector<std::string>>();
    s.tool_names_enabled = doc.at("tool_names_enabled").get<std::vector<std::string>>();
    s.min_bot_messages = doc.at("min_bot_messages").get<int>();
    const auto variant = eval::variant_from_string(doc.at("rating_variant").get<std::string>());
    if (!variant) throw SessionError(SessionErrc::InvalidScenario, "unknown rating_variant");
    s.rating_variant = *variant;
    s.corpus_paths = doc.value("corpus_paths", std::vector<std::string>{});
    s.insert_cap = doc.value("insert_cap", agent::kDefaultInsertCap);
    s.max_steps = doc.value("max_steps", agent::kDefaultMaxSteps);
    s.insert_timeout_ms = doc.value("insert_timeout_ms", std::int64_t{300000});
    if (doc.contains("left_script")) s.left_script = doc.at("left_script").get<std::string>();
    if (doc.contains("right_script")) s.right_script = doc.at("right_script").get<std::string>();
  } catch (const json::exception& e) {
    throw SessionError(SessionErrc::InvalidScenario, e.what());
  }
  validate(s);
  return s;
}

ScenarioCatalog::ScenarioCatalog(std::vector<Scenario> scenarios) : scenarios_(std::move(scenarios)) {
  for (std::size_t i = 0; i < scenarios_.size(); ++i) {
    validate(scenarios_[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (scenarios_[j].scenario_id == scenarios_[i].scenario_id)
        throw SessionError(SessionErrc::InvalidScenario, "duplicate scenario " + scenarios_[i].scenario_id);
  }
}

ScenarioCatalog ScenarioCatalog::parse(std::string_view text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SessionError(SessionErrc::InvalidScenario, e.what());
  }
  if (!doc.contains("scenarios") || !doc["scenarios"].is_array())
    throw SessionError(SessionErrc::InvalidScenario, "expected a \"scenarios\" array");
  auto resolve = [&](std::string& p) {
    if (!base_dir.empty() && std::filesystem::path(p).is_relative()) p = (base_dir / p).lexically_normal().string();
  };
  std::vector<Scenario> scenarios;
  for (const auto& entry : doc["scenarios"]) {
    auto s = scenario_from_json(entry);
    for (auto& p : s.corpus_paths) resolve(p);
    if (s.left_script) resolve(*s.left_script);
    if (s.right_script) resolve(*s.right_script);
    scenarios.push_back(std::move(s));
  }
  return ScenarioCatalog(std::move(scenarios));
}

ScenarioCatalog ScenarioCatalog::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw SessionError(SessionErrc::InvalidScenario, "cannot read " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), file.parent_path());
}

const Scenario& ScenarioCatalog::at(std::string_view scenario_id) const {
  for (const auto& s : scenarios_)
    if (s.scenario_id == scenario_id) return s;
  throw SessionError(SessionErrc::UnknownScenario, "no scenario " + std::string(scenario_id));
}

bool ScenarioCatalog::contains(std::string_view scenario_id) const {
  return std::any_of(scenarios_.begin(), scenarios_.end(),
                     [&](const Scenario& s) { return s.scenario_id == scenario_id; });
}

std::vector<std::string> ScenarioCatalog::ids() const {
  std::vector<std::string> out;
  for (const auto& s : scenarios_) out.push_back(s.scenario_id);
  return out;
}

}  // namespace uat::session
