// SPDX-License-Identifier: Apache-2.0

#include "uat/tools/catalog.hpp"

#include <cstdio>

#include "uat/tools/expression.hpp"

namespace uat::tools {

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  return buf;
}

ToolExecutor calculator_executor() {
  return [](std::string_view input) { return format_number(eval_expr(input)); };
}

ToolExecutor wikipedia_executor(std::shared_ptr<LookupClient> client, std::size_t max_chars) {
  return [client = std::move(client), max_chars](std::string_view input) {
    return wiki_search(input, *client, max_chars);
  };
}

ToolExecutor retrieval_executor(std::shared_ptr<const DocIndex> index, std::shared_ptr<const Embedder> embedder,
                                std::size_t k) {
  return [index = std::move(index), embedder = std::move(embedder), k](std::string_view input) {
    std::string out;
    for (const auto& hit : doc_retrieve(input, *index, k, *embedder)) {
      if (!out.empty()) out += "\n\n";
      out += hit.text;
    }
    return out;
  };
}

ToolRegistry make_registry(std::span<const std::string> names, const ToolDeps& deps) {
  ToolRegistry registry;
  for (const auto& name : names) {
    if (is_user_as_a_tool(name)) {
      registry.add(human_tool_spec(name));
    } else if (name == kCalculator) {
      registry.add({name, std::string(kCalculatorDescription), ToolKind::Computation, agent::ExpansionKind::None},
                   calculator_executor());
    } else if (name == kWikipedia) {
      if (!deps.lookup) throw ToolError(ToolErrc::InvalidSpec, "Wikipedia needs a lookup client");
      registry.add({name, std::string(kWikipediaDescription), ToolKind::ExternalLookup, agent::ExpansionKind::None},
                   wikipedia_executor(deps.lookup, deps.max_chars));
    } else if (name == kReportRetrieval) {
      if (!deps.index || !deps.embedder)
        throw ToolError(ToolErrc::InvalidSpec, std::string(kReportRetrieval) + " needs an index and an embedder");
      registry.add({name, std::string(kReportRetrievalDescription), ToolKind::Retrieval, agent::ExpansionKind::None},
                   retrieval_executor(deps.index, deps.embedder, deps.top_k));
    } else {
      throw ToolError(ToolErrc::UnknownTool, "no tool named " + name + " in the catalog");
    }
  }
  return registry;
}

std::vector<std::string> study1_vanilla_tools() { return {std::string(kWikipedia), std::string(kCalculator)}; }

std::vector<std::string> study1_enabled_tools() {
  return {std::string(kWikipedia), std::string(kCalculator), std::string(kClarifyIntent),
          std::string(kScopeResponse), std::string(kEnhanceAppeal)};
}

std::vector<std::string> study2_vanilla_tools() { return {std::string(kReportRetrieval)}; }

std::vector<std::string> study2_enabled_tools() {
  return {std::string(kReportRetrieval), std::string(kScopeResponse)};
}

}  // namespace uat::tools
