// SPDX-License-Identifier: Apache-2.0

// The concrete tool set and the per-study registries.

#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uat/tools/registry.hpp"
#include "uat/tools/retrieval.hpp"
#include "uat/tools/wiki.hpp"

namespace uat::tools {

inline constexpr std::string_view kCalculatorDescription =
    "useful for when you need to answer questions about math";
inline constexpr std::string_view kWikipediaDescription =
    "useful for when you need to look up general knowledge about people, places, events or topics";
inline constexpr std::string_view kReportRetrievalDescription =
    "useful for when you need to answer questions about the UN sustainable development goals report 2022";

inline constexpr std::size_t kDefaultTopK = 3;

/// Formats like printf %.15g, so 512 prints as "512".
std::string format_number(double value);

ToolExecutor calculator_executor();
ToolExecutor wikipedia_executor(std::shared_ptr<LookupClient> client, std::size_t max_chars = kDefaultSummaryChars);
/// Joins the top-k chunks with blank lines.
ToolExecutor retrieval_executor(std::shared_ptr<const DocIndex> index, std::shared_ptr<const Embedder> embedder,
                                std::size_t k = kDefaultTopK);

/// Backing services for the non-human tools; only the ones a registry
/// actually names are required.
struct ToolDeps {
  std::shared_ptr<LookupClient> lookup;
  std::shared_ptr<const DocIndex> index;
  std::shared_ptr<const Embedder> embedder;
  std::size_t top_k = kDefaultTopK;
  std::size_t max_chars = kDefaultSummaryChars;
};

/// Registry holding exactly the named tools, in order. Throws
/// ToolError(UnknownTool) for a name outside the catalog and
/// ToolError(InvalidSpec) when a needed dependency is missing.
ToolRegistry make_registry(std::span<const std::string> names, const ToolDeps& deps);

std::vector<std::string> study1_vanilla_tools();
std::vector<std::string> study1_enabled_tools();
std::vector<std::string> study2_vanilla_tools();
std::vector<std::string> study2_enabled_tools();

}  // namespace uat::tools
