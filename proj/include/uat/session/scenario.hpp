// SPDX-License-Identifier: Apache-2.0

// Scenario definitions, loaded from a JSON configuration file.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "uat/agent/chain.hpp"
#include "uat/eval/rating.hpp"
#include "uat/session/error.hpp"

namespace uat::session {

struct Scenario {
  std::string scenario_id;
  std::string placeholder_text;
  std::vector<std::string> tool_names_vanilla;
  std::vector<std::string> tool_names_enabled;
  int min_bot_messages = 1;
  eval::RatingVariant rating_variant = eval::RatingVariant::Midpoint7;
  std::vector<std::string> corpus_paths;
  std::size_t insert_cap = agent::kDefaultInsertCap;
  std::size_t max_steps = agent::kDefaultMaxSteps;
  std::int64_t insert_timeout_ms = 300000;
  // Optional scripted-backend files, one per side, for offline runs.
  std::optional<std::string> left_script;
  std::optional<std::string> right_script;

  bool operator==(const Scenario&) const = default;
};

/// min_bot_messages >= 1; the enabled tool list is the vanilla list plus
/// at least one user-as-a-tool tool; vanilla holds none.
void validate(const Scenario& scenario);

agent::AgentConfig enabled_config(const Scenario& scenario);
agent::AgentConfig vanilla_config(const Scenario& scenario);

nlohmann::json to_json(const Scenario& scenario);
/// Throws SessionError(InvalidScenario) for missing or mistyped fields.
Scenario scenario_from_json(const nlohmann::json& doc);

inline constexpr std::string_view kStudy2Placeholder =
    "You want to work on the most important sustainable development goal in the 2022 UN report but do "
    "not know which it is. Type your message and hit enter to send to both chatbots.";

class ScenarioCatalog {
 public:
  ScenarioCatalog() = default;
  explicit ScenarioCatalog(std::vector<Scenario> scenarios);

  /// {"scenarios": [...]}. Relative corpus and script paths resolve
  /// against base_dir.
  static ScenarioCatalog parse(std::string_view text, const std::filesystem::path& base_dir = {});
  static ScenarioCatalog load(const std::filesystem::path& file);

  /// Throws SessionError(UnknownScenario).
  const Scenario& at(std::string_view scenario_id) const;
  bool contains(std::string_view scenario_id) const;
  std::vector<std::string> ids() const;
  const std::vector<Scenario>& scenarios() const { return scenarios_; }

 private:
  std::vector<Scenario> scenarios_;
};

}  // namespace uat::session
