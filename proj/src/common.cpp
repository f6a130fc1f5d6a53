// SPDX-License-Identifier: Apache-2.0

#include "uat/common.hpp"

#include <memory>
#include <mutex>
#include <random>

namespace uat {

std::string_view to_string(Side side) { return side == Side::Left ? "left" : "right"; }

std::optional<Side> side_from_string(std::string_view text) {
  if (text == "left") return Side::Left;
  if (text == "right") return Side::Right;
  return std::nullopt;
}

Clock system_clock() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
  };
}

IdGenerator random_id_generator() {
  struct State {
    std::mutex mutex;
    std::mt19937_64 engine{std::random_device{}()};
  };
  auto state = std::make_shared<State>();
  return [state] {
    static constexpr char kHex[] = "0123456789abcdef";
    std::lock_guard lock(state->mutex);
    std::string id(32, '0');
    for (std::size_t i = 0; i < id.size(); i += 16) {
      auto bits = state->engine();
      for (std::size_t j = 0; j < 16; ++j, bits >>= 4) id[i + j] = kHex[bits & 0xF];
    }
    return id;
  };
}

IdGenerator counting_id_generator(std::string prefix) {
  auto counter = std::make_shared<std::uint64_t>(0);
  return [prefix = std::move(prefix), counter] {
    return prefix + "-" + std::to_string(++*counter);
  };
}

std::string trim(std::string_view text) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return std::string(text.substr(first, last - first + 1));
}

}  // namespace uat
