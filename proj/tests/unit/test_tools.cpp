// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <memory>
#include <random>

#include "support/expr_gen.hpp"
#include "uat/tools/catalog.hpp"
#include "uat/tools/expression.hpp"
#include "uat/tools/human.hpp"
#include "uat/tools/retrieval.hpp"
#include "uat/tools/wiki.hpp"

using namespace uat::tools;
using uat::Side;

namespace {

EvalErrc eval_error_of(std::string_view text) {
  try {
    eval_expr(text);
  } catch (const EvalError& e) {
    return e.code();
  }
  FAIL("expected EvalError for " << text);
  return EvalErrc::Syntax;
}

bool close_to(double actual, double expected, double rel = 1e-12) {
  return std::abs(actual - expected) <= rel * std::max(1.0, std::abs(expected));
}

class FixedEmbedder final : public Embedder {
 public:
  Eigen::VectorXd embed(std::string_view) const override { return Eigen::VectorXd::Ones(2); }
  Eigen::Index dimension() const override { return 2; }
};

}  // namespace

TEST_CASE("calculator golden values") {
  CHECK(eval_expr("2^3^2") == 512.0);
  CHECK(eval_expr("-2^2") == -4.0);
  CHECK(eval_expr("(1 + 2) * 3") == 9.0);
  CHECK(eval_expr("10 / 4") == 2.5);
  CHECK(eval_expr("7 - 2 - 1") == 4.0);
  CHECK(eval_expr("2 * -3") == -6.0);
  CHECK(eval_expr("  42 ") == 42.0);
  CHECK(eval_expr("0.5^2") == 0.25);
  CHECK(eval_expr("--3") == 3.0);
  CHECK(format_number(eval_expr("2^3^2")) == "512");
  CHECK(format_number(0.1 + 0.2) == "0.3");
}

TEST_CASE("calculator errors") {
  CHECK(eval_error_of("") == EvalErrc::Syntax);
  CHECK(eval_error_of("2 +") == EvalErrc::Syntax);
  CHECK(eval_error_of("(1 + 2") == EvalErrc::Syntax);
  CHECK(eval_error_of("1 2") == EvalErrc::Syntax);
  CHECK(eval_error_of("sqrt(4)") == EvalErrc::Syntax);
  CHECK(eval_error_of("1 / 0") == EvalErrc::DivisionByZero);
  CHECK(eval_error_of("1 / (2 - 2)") == EvalErrc::DivisionByZero);
  CHECK(eval_error_of("10^400") == EvalErrc::Overflow);
}

TEST_CASE("calculator agrees with a tree evaluator on random expressions") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> depth(1, 5);
  int checked = 0;
  while (checked < 1000) {
    const auto expr = uat::testing::random_expr(rng, depth(rng));
    if (!std::isfinite(expr.value) || std::abs(expr.value) > 1e200) continue;
    INFO(expr.text);
    CHECK(close_to(eval_expr(expr.text), expr.value));
    ++checked;
  }
}

TEST_CASE("calculator tool reports errors as ToolError") {
  ToolRegistry registry;
  registry.add({std::string(kCalculator), std::string(kCalculatorDescription)}, calculator_executor());
  CHECK(registry.execute("Calculator", "2^3^2") == "512");
  try {
    registry.execute("Calculator", "1/0");
    FAIL("expected ToolError");
  } catch (const ToolError& e) {
    CHECK(e.code() == ToolErrc::ExecutionFailed);
    CHECK(std::string(e.what()) == "division by zero");
  }
}

TEST_CASE("lexical embedder and cosine similarity by hand") {
  const std::vector<std::string> chunks = {"apple banana", "banana cherry cherry", "durian"};
  const auto embedder = LexicalEmbedder::fit(chunks);
  CHECK(embedder.vocabulary() == std::vector<std::string>{"apple", "banana", "cherry", "durian"});
  const auto index = build_index(chunks, embedder, "fruit");
  Eigen::MatrixXd expected(3, 4);
  expected << 1, 1, 0, 0, 0, 1, 2, 0, 0, 0, 0, 1;
  CHECK(index.vectors().isApprox(expected));

  const auto hits = doc_retrieve("Banana, cherry!", index, 3, embedder);
  REQUIRE(hits.size() == 3);
  CHECK(hits[0].id == 1);
  CHECK(hits[0].similarity == doctest::Approx(3.0 / std::sqrt(10.0)).epsilon(1e-12));
  CHECK(hits[1].id == 0);
  CHECK(hits[1].similarity == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hits[2].id == 2);
  CHECK(hits[2].similarity == 0.0);

  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const auto self = doc_retrieve(chunks[i], index, 1, embedder);
    CHECK(self.front().id == i);
    CHECK(self.front().similarity == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(doc_retrieve("zebra", index, 10, embedder).size() == 3);
  CHECK_THROWS_AS(doc_retrieve("apple", index, 0, embedder), std::invalid_argument);
}

TEST_CASE("retrieval ties break by id and smaller k is a prefix") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> words = {"goal", "poverty", "water", "energy", "work", "growth", "climate", "peace"};
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1), len(1, 6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> chunks(12);
    for (auto& c : chunks)
      for (std::size_t i = len(rng); i > 0; --i) c += words[pick(rng)] + " ";
    const auto embedder = LexicalEmbedder::fit(chunks);
    const auto index = build_index(chunks, embedder);
    const std::string query = words[pick(rng)] + " " + words[pick(rng)];
    const auto all = doc_retrieve(query, index, chunks.size(), embedder);
    for (std::size_t i = 1; i < all.size(); ++i) {
      CHECK(all[i - 1].similarity >= all[i].similarity);
      if (all[i - 1].similarity == all[i].similarity) CHECK(all[i - 1].id < all[i].id);
    }
    for (std::size_t k = 1; k <= chunks.size(); ++k) {
      const auto top = doc_retrieve(query, index, k, embedder);
      REQUIRE(top.size() == k);
      for (std::size_t i = 0; i < k; ++i) CHECK(top[i].id == all[i].id);
    }
  }
  const auto flat = std::make_shared<FixedEmbedder>();
  const std::vector<std::string> same = {"a", "b", "c"};
  const auto index = build_index(same, *flat);
  const auto hits = doc_retrieve("q", index, 3, *flat);
  CHECK(hits[0].id == 0);
  CHECK(hits[1].id == 1);
  CHECK(hits[2].id == 2);
}

TEST_CASE("chunk_text windows overlap and cover the text") {
  std::string text;
  for (int i = 0; i < 400; ++i) text += "word" + std::to_string(i) + (i % 37 == 36 ? "\n\n" : " ");
  const ChunkingOptions options{300, 60};
  const auto chunks = chunk_text(text, options);
  REQUIRE(chunks.size() > 1);
  for (const auto& c : chunks) {
    CHECK(c.size() <= options.window);
    CHECK_FALSE(c.empty());
  }
  for (int i : {0, 123, 399}) {
    const auto token = "word" + std::to_string(i);
    CHECK(std::any_of(chunks.begin(), chunks.end(), [&](const auto& c) { return c.find(token) != std::string::npos; }));
  }
  CHECK(chunk_text("").empty());
  CHECK(chunk_text("short") == std::vector<std::string>{"short"});
}

TEST_CASE("retrieval tool joins top chunks") {
  const std::vector<std::string> chunks = {"Goal 8 decent work and economic growth", "Goal 6 clean water",
                                           "Goal 13 climate action"};
  auto embedder = std::make_shared<LexicalEmbedder>(LexicalEmbedder::fit(chunks));
  auto index = std::make_shared<DocIndex>(build_index(chunks, *embedder));
  const auto run = retrieval_executor(index, embedder, 2);
  CHECK(run("economic growth") == chunks[0] + "\n\n" + chunks[1]);
}

TEST_CASE("wiki search over recorded responses") {
  auto client = FixtureLookupClient::from_directory(UAT_FIXTURE_DIR "/wiki");
  const auto summary = wiki_search("Eiffel Tower height", *client);
  CHECK(summary.starts_with("The Eiffel Tower is a wrought-iron lattice tower"));
  CHECK(client->requests() == std::vector<std::string>{wiki_search_target("Eiffel Tower height"),
                                                       wiki_summary_target("Eiffel Tower")});
  CHECK(wiki_summary_target("Sustainable Development Goals") == "/api/rest_v1/page/summary/Sustainable_Development_Goals");
  CHECK(wiki_search_target("a b&c").ends_with("srsearch=a%20b%26c"));

  const auto cut = wiki_search("Eiffel Tower height", *client, 40);
  CHECK(cut.size() <= 40);
  CHECK(summary.starts_with(cut));

  try {
    wiki_search("qwxzv nonsense", *client);
    FAIL("expected NoResults");
  } catch (const LookupError& e) {
    CHECK(e.code() == LookupErrc::NoResults);
  }
  CHECK_THROWS_AS(wiki_search("   ", *client), std::invalid_argument);

  CHECK(wiki_search("sustainable development goals", *client).starts_with("The Sustainable Development Goals are seventeen"));

  const auto tool = wikipedia_executor(client);
  CHECK(tool("Eiffel Tower height") == summary);
}

TEST_CASE("truncate_utf8 never splits a code point") {
  const std::string text = "Apr\xC3\xA8s";  // "Après"
  CHECK(truncate_utf8(text, 4) == "Apr");
  CHECK(truncate_utf8(text, 5) == "Apr\xC3\xA8");
  CHECK(truncate_utf8(text, 100) == text);
}

TEST_CASE("unreachable lookup endpoint is a network error") {
  HttpLookupClient client("http://127.0.0.1:1", std::chrono::milliseconds(500));
  try {
    wiki_search("anything", client);
    FAIL("expected LookupError");
  } catch (const LookupError& e) {
    CHECK((e.code() == LookupErrc::Network || e.code() == LookupErrc::Timeout));
  }
}

TEST_CASE("human channel") {
  HumanChannel channel(Side::Left, std::chrono::milliseconds(1000));
  const auto ids = uat::counting_id_generator("q");

  SUBCASE("reply is returned verbatim, including the empty string") {
    const auto q = ask_user("What is your field?", Side::Left, channel, ids, 0);
    CHECK(q.correlation_id == "q-1");
    CHECK(channel.open_query(Side::Left) == q);
    CHECK(channel.answer(q.correlation_id, "  Finance\n") == "  Finance\n");
    CHECK_FALSE(channel.open_query(Side::Left));
    const auto q2 = ask_user("Anything else?", Side::Left, channel, ids, 10);
    CHECK(channel.answer(q2.correlation_id, "") == "");
  }
  SUBCASE("errors") {
    const auto q = channel.ask(Side::Left, "Q?", "c1", 0);
    auto code_of = [](auto&& fn) {
      try {
        fn();
      } catch (const HumanError& e) {
        return e.code();
      }
      FAIL("expected HumanError");
      return HumanErrc::Timeout;
    };
    CHECK(code_of([&] { channel.ask(Side::Left, "again", "c2", 1); }) == HumanErrc::QueryPending);
    CHECK(code_of([&] { channel.ask(Side::Right, "me too", "c3", 1); }) == HumanErrc::WrongSide);
    CHECK(code_of([&] { channel.answer("nope", "x"); }) == HumanErrc::UnknownCorrelation);
    channel.answer(q.correlation_id, "yes");
    CHECK(code_of([&] { channel.answer(q.correlation_id, "again"); }) == HumanErrc::AlreadyAnswered);
    CHECK(code_of([&] { channel.ask(Side::Left, "reuse", "c1", 2); }) == HumanErrc::UnknownCorrelation);
    channel.close();
    CHECK(code_of([&] { channel.ask(Side::Left, "closed", "c4", 3); }) == HumanErrc::SessionClosed);
  }
  SUBCASE("timeout through the clock") {
    const auto q = channel.ask(Side::Left, "Q?", "c1", 5000);
    CHECK(channel.expire(5999).empty());
    const auto expired = channel.expire(6000);
    REQUIRE(expired.size() == 1);
    CHECK(expired.front() == q);
    CHECK_FALSE(channel.open_query(Side::Left));
    CHECK(channel.expire(100000).empty());
  }
}

TEST_CASE("study registries") {
  ToolDeps deps;
  deps.lookup = std::make_shared<FixtureLookupClient>(std::map<std::string, std::string>{});
  const std::vector<std::string> chunks = {"report text"};
  auto embedder = std::make_shared<LexicalEmbedder>(LexicalEmbedder::fit(chunks));
  deps.embedder = embedder;
  deps.index = std::make_shared<DocIndex>(build_index(chunks, *embedder));

  const auto s1 = make_registry(study1_enabled_tools(), deps);
  CHECK(s1.names() == study1_enabled_tools());
  CHECK(s1.at("clarify_intent").expansion == uat::agent::ExpansionKind::PostFirst);
  CHECK(s1.at("scope_response").description == kScopeResponseDescription);
  CHECK(s1.is_human("enhance_appeal"));
  CHECK_FALSE(s1.is_human("Calculator"));
  CHECK_THROWS_AS(s1.execute("scope_response", "Who?"), ToolError);

  const auto s2v = make_registry(study2_vanilla_tools(), deps);
  const auto s2e = make_registry(study2_enabled_tools(), deps);
  CHECK(s2v.names() == std::vector<std::string>{"UN info"});
  CHECK(s2e.names() == std::vector<std::string>{"UN info", "scope_response"});

  auto code_of = [&](std::vector<std::string> names, const ToolDeps& d) {
    try {
      make_registry(names, d);
    } catch (const ToolError& e) {
      return e.code();
    }
    FAIL("expected ToolError");
    return ToolErrc::InvalidSpec;
  };
  CHECK(code_of({"Teleporter"}, deps) == ToolErrc::UnknownTool);
  CHECK(code_of({"UN info"}, ToolDeps{}) == ToolErrc::InvalidSpec);
  CHECK(code_of({"Calculator", "Calculator"}, deps) == ToolErrc::DuplicateName);
}
