// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace uat {

// Pane placement of a bot. The enabled agent is always on the left.
enum class Side { Left, Right };

std::string_view to_string(Side side);
std::optional<Side> side_from_string(std::string_view text);

// Milliseconds since the Unix epoch.
using Timestamp = std::int64_t;
using Clock = std::function<Timestamp()>;

Clock system_clock();

// Produces unique identifiers (session ids, correlation ids).
using IdGenerator = std::function<std::string()>;

IdGenerator random_id_generator();
// Deterministic "<prefix>-1", "<prefix>-2", ... for tests and replays.
IdGenerator counting_id_generator(std::string prefix);

std::string trim(std::string_view text);

}  // namespace uat
