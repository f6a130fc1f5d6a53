// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <thread>

#include "support/session_fixture.hpp"
#include "uat/session/error.hpp"
#include "uat/session/events.hpp"
#include "uat/session/export.hpp"
#include "uat/session/protocol.hpp"
#include "uat/session/server.hpp"
#include "uat/session/service.hpp"
#include "uat/session/store.hpp"

#include <httplib.h>

using namespace uat;
using namespace uat::session;
using nlohmann::json;

namespace {

SessionErrc session_error_of(auto&& fn) {
  try {
    fn();
  } catch (const SessionError& e) {
    return e.code();
  }
  FAIL("expected SessionError");
  return SessionErrc::InvalidEvent;
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("uat-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

SessionEvent event(std::uint64_t seq, EventKind kind, std::optional<Side> side = std::nullopt, std::string payload = "x",
                   std::string cid = {}) {
  SessionEvent e;
  e.seq = seq;
  e.kind = kind;
  e.side = side;
  e.payload = std::move(payload);
  e.correlation_id = std::move(cid);
  e.at = static_cast<Timestamp>(seq);
  return e;
}

std::vector<json> parse_all(const std::vector<std::string>& frames) {
  std::vector<json> out;
  for (const auto& f : frames) {
    CHECK(f.find('\n') == std::string::npos);
    out.push_back(json::parse(f));
  }
  return out;
}

std::string frame(json doc) { return doc.dump(); }

const std::vector<int> kPositions = {1, 2, 3, 4, 5, 6, 6, 5, 4, 3};

// Drives one session through the service: the first message triggers an
// insert query, the reply finishes both sides.
void run_turn(SessionService& service, std::string& bound, const std::string& text) {
  auto out = parse_all(service.handle_frame(bound, frame({{"type", "user_message"}, {"text", text}})));
  const auto q = std::find_if(out.begin(), out.end(), [](const json& m) { return m["type"] == "insert_query"; });
  REQUIRE(q != out.end());
  service.handle_frame(bound, frame({{"type", "insert_reply"}, {"correlation_id", (*q)["correlation_id"]}, {"text", "Finance"}}));
}

}  // namespace

TEST_CASE("scenario catalog from the shipped config") {
  const auto catalog = ScenarioCatalog::load(UAT_SOURCE_DIR "/config/scenarios.json");
  const auto& s = catalog.at("study2");
  CHECK(s.min_bot_messages == 2);
  CHECK(s.rating_variant == eval::RatingVariant::ForcedChoice6);
  REQUIRE(s.corpus_paths.size() == 1);
  CHECK(std::filesystem::exists(s.corpus_paths.front()));
  CHECK(catalog.contains("study1-travel"));
  CHECK(session_error_of([&] { catalog.at("nope"); }) == SessionErrc::UnknownScenario);

  const auto record = create_session(s, "s-1", "p-1");
  CHECK(record.left_agent.label == agent::AgentLabel::Enabled);
  CHECK(record.left_agent.tool_names == std::vector<std::string>{"UN info", "scope_response"});
  CHECK(record.left_agent.insert_cap == 2);
  CHECK(record.right_agent.label == agent::AgentLabel::Vanilla);
  CHECK(record.right_agent.tool_names == std::vector<std::string>{"UN info"});
  CHECK(record.events.empty());
  CHECK_FALSE(record.finished);
}

TEST_CASE("scenario validation") {
  auto bad = testing::sdg_scenario();
  bad.tool_names_vanilla.push_back("scope_response");
  CHECK(session_error_of([&] { validate(bad); }) == SessionErrc::InvalidScenario);
  bad = testing::sdg_scenario();
  bad.tool_names_enabled = bad.tool_names_vanilla;
  CHECK(session_error_of([&] { validate(bad); }) == SessionErrc::InvalidScenario);
  bad = testing::sdg_scenario(0);
  CHECK(session_error_of([&] { validate(bad); }) == SessionErrc::InvalidScenario);
  CHECK(session_error_of([] { ScenarioCatalog::parse(R"({"scenarios":[{"scenario_id":"x"}]})"); }) ==
        SessionErrc::InvalidScenario);
  const auto round = scenario_from_json(to_json(testing::travel_scenario()));
  CHECK(round == testing::travel_scenario());
}

TEST_CASE("rating gate counts bot messages per side") {
  auto r = create_session(testing::travel_scenario(3), "s");
  std::uint64_t seq = 0;
  auto add = [&](EventKind kind, std::optional<Side> side = std::nullopt, std::string cid = {}) {
    apply_event(r, event(++seq, kind, side, "x", std::move(cid)));
  };
  for (int turn = 0; turn < 2; ++turn) {
    add(EventKind::UserMessage);
    add(EventKind::BotMessage, Side::Left);
    add(EventKind::BotMessage, Side::Right);
  }
  add(EventKind::UserMessage);
  add(EventKind::InsertQuery, Side::Left, "q-1");
  CHECK(r.bot_messages == std::array<int, 2>{3, 2});
  CHECK_FALSE(gate_rating(r));
  add(EventKind::BotMessage, Side::Right);
  CHECK(gate_rating(r));
  CHECK(session_error_of([&] { apply_event(r, event(seq + 1, EventKind::ScenarioFinished)); }) ==
        SessionErrc::RatingMissing);
}

TEST_CASE("apply_event rejects out-of-order and conflicting events and leaves the record untouched") {
  auto r = create_session(testing::sdg_scenario(1), "s");
  apply_event(r, event(1, EventKind::UserMessage));
  const auto before = to_json(r).dump();
  CHECK(session_error_of([&] { apply_event(r, event(2, EventKind::UserMessage)); }) == SessionErrc::Busy);
  CHECK(session_error_of([&] { apply_event(r, event(3, EventKind::BotMessage, Side::Left)); }) == SessionErrc::InvalidEvent);
  CHECK(session_error_of([&] { apply_event(r, event(2, EventKind::InsertQuery, Side::Right, "q", "c")); }) ==
        SessionErrc::InvalidEvent);
  CHECK(session_error_of([&] { apply_event(r, event(2, EventKind::InsertReply, std::nullopt, "a", "c")); }) ==
        SessionErrc::UnknownCorrelation);
  CHECK(session_error_of([&] { apply_event(r, event(2, EventKind::ScenarioFinished)); }) == SessionErrc::GateClosed);
  CHECK(to_json(r).dump() == before);

  apply_event(r, event(2, EventKind::InsertQuery, Side::Left, "q", "c"));
  CHECK(session_error_of([&] { apply_event(r, event(3, EventKind::BotMessage, Side::Left)); }) == SessionErrc::InvalidEvent);
  apply_event(r, event(3, EventKind::InsertReply, std::nullopt, "a", "c"));
  CHECK(session_error_of([&] { apply_event(r, event(4, EventKind::InsertReply, std::nullopt, "a", "c")); }) ==
        SessionErrc::AlreadyAnswered);
  CHECK(session_error_of([&] { apply_event(r, event(4, EventKind::InsertQuery, Side::Left, "q", "c")); }) ==
        SessionErrc::InvalidEvent);
}

TEST_CASE("ratings are validated against the variant") {
  auto r = create_session(testing::sdg_scenario(1), "s");
  std::uint64_t seq = 0;
  for (auto kind : {EventKind::UserMessage, EventKind::BotMessage, EventKind::BotMessage})
    apply_event(r, event(++seq, kind, kind == EventKind::BotMessage ? std::optional(seq == 2 ? Side::Left : Side::Right)
                                                                     : std::nullopt));
  const std::vector<int> seven = {7, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  CHECK(session_error_of([&] { apply_event(r, event(++seq, EventKind::RatingSubmitted, std::nullopt, encode_positions(seven))); }) ==
        SessionErrc::InvalidRating);
  const std::vector<int> short_list = {1, 2, 3};
  CHECK(session_error_of([&] { apply_event(r, event(seq, EventKind::RatingSubmitted, std::nullopt, encode_positions(short_list))); }) ==
        SessionErrc::InvalidRating);
  apply_event(r, event(seq, EventKind::RatingSubmitted, std::nullopt, encode_positions(kPositions)));
  CHECK(r.ratings.size() == 10);
  CHECK(decode_positions(encode_positions(kPositions)) == kPositions);
  apply_event(r, event(++seq, EventKind::ScenarioFinished));
  CHECK(r.finished);
  CHECK(session_error_of([&] { apply_event(r, event(++seq, EventKind::UserMessage)); }) == SessionErrc::SessionFinished);
}

TEST_CASE("service runs a full session over protocol frames") {
  SessionService service(ScenarioCatalog({testing::sdg_scenario(2)}), testing::test_options());
  std::string bound;
  auto started = parse_all(service.handle_frame(bound, frame({{"type", "start_session"}, {"scenario_id", "sdg"}, {"participant_id", "p1"}})));
  REQUIRE(started.size() == 1);
  CHECK(started[0]["type"] == "session_started");
  CHECK(started[0]["scale_points"] == 6);
  CHECK(started[0]["items"].size() == 10);
  CHECK(bound == started[0]["session_id"]);

  auto out = parse_all(service.handle_frame(bound, frame({{"type", "user_message"}, {"text", "Which goal matters most?"}})));
  // The enabled side asks first, the vanilla side answers in the same turn.
  REQUIRE(out.size() == 2);
  CHECK(out[0]["type"] == "insert_query");
  CHECK(out[0]["side"] == "left");
  CHECK(out[0]["is_insert"] == true);
  CHECK(out[0]["text"] == "What is your field?");
  CHECK(out[1]["type"] == "bot_message");
  CHECK(out[1]["side"] == "right");
  CHECK(out[1]["text"] == "generic answer");
  const std::string cid = out[0]["correlation_id"];

  auto busy = parse_all(service.handle_frame(bound, frame({{"type", "user_message"}, {"text", "again"}})));
  CHECK(busy[0]["code"] == "Busy");
  auto unknown = parse_all(service.handle_frame(bound, frame({{"type", "insert_reply"}, {"correlation_id", "zzz"}, {"text", "x"}})));
  CHECK(unknown[0]["code"] == "UnknownCorrelation");

  out = parse_all(service.handle_frame(bound, frame({{"type", "insert_reply"}, {"correlation_id", cid}, {"text", "Finance"}})));
  REQUIRE(out.size() == 1);
  CHECK(out[0]["type"] == "bot_message");
  CHECK(out[0]["text"] == "tailored answer");

  auto twice = parse_all(service.handle_frame(bound, frame({{"type", "insert_reply"}, {"correlation_id", cid}, {"text", "again"}})));
  CHECK(twice[0]["code"] == "AlreadyAnswered");

  // The chain saw the reply verbatim as its observation.
  const auto snap = service.snapshot(bound);
  const auto reply = std::find_if(snap.events.begin(), snap.events.end(),
                                  [](const auto& e) { return e.kind == EventKind::InsertReply; });
  REQUIRE(reply != snap.events.end());
  CHECK(reply->payload == "Finance");
  const auto left_bot = std::find_if(snap.events.begin(), snap.events.end(), [](const auto& e) {
    return e.kind == EventKind::BotMessage && e.side == Side::Left;
  });
  CHECK(left_bot->trace.find("Observation: Finance") != std::string::npos);

  auto closed = parse_all(service.handle_frame(bound, frame({{"type", "submit_rating"}, {"positions", kPositions}})));
  CHECK(closed[0]["code"] == "GateClosed");

  // Second turn: the right side reaches its second message and opens the gate.
  out = parse_all(service.handle_frame(bound, frame({{"type", "user_message"}, {"text", "And for me?"}})));
  REQUIRE(out.size() == 3);
  CHECK(out[0]["type"] == "insert_query");
  CHECK(out[1]["side"] == "right");
  CHECK(out[2]["type"] == "rating_enabled");
  service.handle_frame(bound, frame({{"type", "insert_reply"}, {"correlation_id", out[0]["correlation_id"]}, {"text", "Energy"}}));

  auto early = parse_all(service.handle_frame(bound, frame({{"type", "finish_scenario"}})));
  CHECK(early[0]["code"] == "RatingMissing");
  CHECK(service.handle_frame(bound, frame({{"type", "submit_rating"}, {"positions", kPositions}})).empty());
  CHECK(service.handle_frame(bound, frame({{"type", "submit_feedback"}, {"text", "left was nicer"}})).empty());
  auto done = parse_all(service.handle_frame(bound, frame({{"type", "finish_scenario"}})));
  CHECK(done[0]["type"] == "scenario_done");
  CHECK(service.finished_sessions().size() == 1);
  CHECK(service.snapshot(bound).feedback == "left was nicer");
}

TEST_CASE("protocol errors come back as error frames") {
  SessionService service(ScenarioCatalog({testing::sdg_scenario()}), testing::test_options());
  std::string bound;
  auto code = [&](std::string_view f) { return parse_all(service.handle_frame(bound, f))[0]["code"].get<std::string>(); };
  CHECK(code("not json") == "ProtocolError");
  CHECK(code(R"({"type":"teleport"})") == "ProtocolError");
  CHECK(code("{\"type\":\"user_message\",\n\"text\":\"hi\"}") == "ProtocolError");
  CHECK(code(R"({"type":"user_message"})") == "ProtocolError");
  CHECK(code(R"({"type":"user_message","text":"hi"})") == "UnknownSession");
  CHECK(code(R"({"type":"start_session","scenario_id":"missing"})") == "UnknownScenario");
  CHECK(code(R"({"type":"submit_rating","positions":[1,"a"]})") == "ProtocolError");

  ClientFrame f;
  f.type = ClientFrameType::InsertReply;
  f.session_id = "s-1";
  f.correlation_id = "c";
  f.text = "line one\nline two";
  const auto wire = serialize(f);
  CHECK(wire.find('\n') == std::string::npos);
  const auto back = parse_client_frame(wire);
  CHECK(back.text == f.text);
  CHECK(back.correlation_id == "c");
}

TEST_CASE("unanswered insert queries time out") {
  testing::ManualClock clock;
  SessionService service(ScenarioCatalog({testing::sdg_scenario(2, 1000)}), testing::test_options(clock));
  const auto id = service.start_session("sdg");
  std::string bound = id;
  service.handle_frame(bound, frame({{"type", "user_message"}, {"text", "hi"}}));
  clock.advance(999);
  CHECK(service.tick(id).empty());
  clock.advance(1);
  auto out = parse_all(service.tick(id));
  REQUIRE_FALSE(out.empty());
  CHECK(out[0]["type"] == "bot_message");
  CHECK(out[0]["side"] == "left");
  const auto snap = service.snapshot(id);
  const auto reply = std::find_if(snap.events.begin(), snap.events.end(),
                                  [](const auto& e) { return e.kind == EventKind::InsertReply; });
  REQUIRE(reply != snap.events.end());
  CHECK(reply->timed_out);
  CHECK(reply->payload == tools::kNoAnswerObservation);
  CHECK_FALSE(snap.turn_in_flight());
}

TEST_CASE("backend failure yields a forced answer and an error frame") {
  auto options = testing::test_options();
  options.backends = [](const Scenario&, Side) { return std::make_unique<llm::ScriptedBackend>(std::vector<std::string>{}); };
  SessionService service(ScenarioCatalog({testing::sdg_scenario(1)}), options);
  std::string bound = service.start_session("sdg");
  auto out = parse_all(service.handle_frame(bound, frame({{"type", "user_message"}, {"text", "hi"}})));
  REQUIRE(out.size() >= 4);
  CHECK(out[0]["type"] == "bot_message");
  CHECK(out[0]["text"].get<std::string>().starts_with(agent::kAbortPrefix));
  CHECK(out[1]["code"] == "BackendFailure");
  CHECK_FALSE(service.snapshot(bound).turn_in_flight());
}

TEST_CASE("store round-trips sessions and detects tampering") {
  const auto dir = fresh_dir("store");
  auto options = testing::test_options();
  options.data_dir = dir;
  SessionService service(ScenarioCatalog({testing::sdg_scenario(1)}), options);
  std::string bound;
  service.handle_frame(bound, frame({{"type", "start_session"}, {"scenario_id", "sdg"}}));
  run_turn(service, bound, "first");
  service.handle_frame(bound, frame({{"type", "submit_rating"}, {"positions", kPositions}}));
  service.handle_frame(bound, frame({{"type", "finish_scenario"}}));

  const SessionStore store(dir);
  CHECK(store.list() == std::vector<std::string>{bound});
  const auto loaded = store.load(bound);
  CHECK(to_json(loaded).dump() == to_json(service.snapshot(bound)).dump());
  CHECK(loaded.finished);

  CHECK(session_error_of([&] { store.load("missing"); }) == SessionErrc::StoreUnavailable);
  CHECK_THROWS(store.path_for("../escape"));

  // Flip one character inside an event body: the checksum no longer matches.
  const auto path = store.path_for(bound);
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  const auto pos = content.find("Finance");
  REQUIRE(pos != std::string::npos);
  auto tampered = content;
  tampered[pos] = 'f';
  std::ofstream(path, std::ios::trunc) << tampered;
  CHECK(session_error_of([&] { store.load(bound); }) == SessionErrc::StoreCorrupt);

  // Dropping a line leaves a sequence gap.
  auto second_line_end = content.find('\n', content.find('\n') + 1);
  std::ofstream(path, std::ios::trunc) << content.substr(0, content.find('\n') + 1) + content.substr(second_line_end + 1);
  CHECK(session_error_of([&] { store.load(bound); }) == SessionErrc::StoreCorrupt);

  std::ofstream(path, std::ios::trunc) << content << "{\"crc\":\"00000000\",\"event\":{}}\n";
  CHECK(session_error_of([&] { store.load(bound); }) == SessionErrc::StoreCorrupt);
  std::filesystem::remove_all(dir);
}

TEST_CASE("store line encoding") {
  const auto line = SessionStore::encode_line("event", json{{"a", 1}});
  CHECK(line.find('\n') == std::string::npos);
  const auto [key, body] = SessionStore::decode_line(line);
  CHECK(key == "event");
  CHECK(body == json{{"a", 1}});
  CHECK(session_error_of([] { SessionStore::decode_line("{}"); }) == SessionErrc::StoreCorrupt);
}

TEST_CASE("sessions are independent under concurrency") {
  SessionService service(ScenarioCatalog({testing::sdg_scenario(1)}), testing::test_options());
  std::vector<std::future<std::string>> runs;
  for (int i = 0; i < 8; ++i)
    runs.push_back(std::async(std::launch::async, [&service, i] {
      std::string bound;
      service.handle_frame(bound, frame({{"type", "start_session"}, {"scenario_id", "sdg"}, {"participant_id", "p" + std::to_string(i)}}));
      for (int turn = 0; turn < 3; ++turn) run_turn(service, bound, "turn " + std::to_string(turn));
      return bound;
    }));
  std::set<std::string> ids;
  for (auto& r : runs) ids.insert(r.get());
  CHECK(ids.size() == 8);
  for (const auto& id : ids) {
    const auto snap = service.snapshot(id);
    CHECK(snap.events.size() == 3 * 5);
    for (std::size_t i = 0; i < snap.events.size(); ++i) CHECK(snap.events[i].seq == i + 1);
    CHECK(snap.bot_messages == std::array<int, 2>{6, 3});
  }
  CHECK(service.health()["sessions"] == 8);
}

TEST_CASE("rating export") {
  SessionService service(ScenarioCatalog({testing::sdg_scenario(1), testing::travel_scenario(1)}), testing::test_options());
  auto finish = [&](const std::string& scenario, const std::vector<int>& positions) {
    std::string bound;
    service.handle_frame(bound, frame({{"type", "start_session"}, {"scenario_id", scenario}, {"participant_id", "p"}}));
    run_turn(service, bound, "hello");
    service.handle_frame(bound, frame({{"type", "submit_rating"}, {"positions", positions}}));
    service.handle_frame(bound, frame({{"type", "finish_scenario"}}));
    return bound;
  };
  const auto header = std::string("participant_id,session_id,scenario_id,variant,construct,item_index,ui_position,value\n");
  CHECK(export_ratings({}) == header);

  finish("sdg", kPositions);
  auto sessions = service.finished_sessions();
  const auto rows = rating_rows(sessions);
  REQUIRE(rows.size() == 10);
  CHECK(rows[0].value == -2.5);
  CHECK(rows[5].value == 2.5);
  const auto csv = export_ratings(sessions);
  CHECK(csv.starts_with(header));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);

  finish("travel", {4, 4, 4, 7, 7, 7, 1, 1, 2, 6});
  sessions = service.finished_sessions();
  const auto mixed = rating_rows(sessions);
  CHECK(mixed.size() == 20);
  CHECK(std::count_if(mixed.begin(), mixed.end(), [](const auto& r) { return r.variant == eval::RatingVariant::Midpoint7; }) == 10);
  const auto back = eval::read_ratings_csv(export_ratings(sessions));
  CHECK(back.size() == 20);

  std::string open_bound;
  service.handle_frame(open_bound, frame({{"type", "start_session"}, {"scenario_id", "sdg"}}));
  const std::vector unfinished = {service.snapshot(open_bound)};
  CHECK(session_error_of([&] { rating_rows(unfinished); }) == SessionErrc::UnfinishedSession);
}

TEST_CASE("websocket and health endpoints") {
  namespace beast = boost::beast;
  namespace websocket = beast::websocket;
  namespace net = boost::asio;

  SessionService service(ScenarioCatalog({testing::sdg_scenario(1)}), testing::test_options());
  ServerOptions options;
  options.port = 0;
  options.tick_interval = std::chrono::milliseconds(50);
  Server server(service, options);
  server.start();
  const auto port = server.port();
  REQUIRE(port != 0);

  httplib::Client http("127.0.0.1", port);
  const auto health = http.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  const auto doc = json::parse(health->body);
  CHECK(doc["status"] == "ok");
  CHECK(doc["sessions"] == 0);
  const auto missing = http.Get("/nope");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  net::io_context ioc;
  net::ip::tcp::resolver resolver(ioc);
  websocket::stream<net::ip::tcp::socket> ws(ioc);
  net::connect(ws.next_layer(), resolver.resolve("127.0.0.1", std::to_string(port)));
  ws.handshake("127.0.0.1", "/ws");
  auto send = [&](const json& m) { ws.write(net::buffer(m.dump())); };
  auto receive = [&] {
    beast::flat_buffer buffer;
    ws.read(buffer);
    return json::parse(beast::buffers_to_string(buffer.data()));
  };

  send({{"type", "start_session"}, {"scenario_id", "sdg"}});
  const auto started = receive();
  CHECK(started["type"] == "session_started");
  send({{"type", "user_message"}, {"text", "hello"}});
  const auto query = receive();
  CHECK(query["type"] == "insert_query");
  CHECK(receive()["side"] == "right");
  CHECK(receive()["type"] == "rating_enabled");
  send({{"type", "insert_reply"}, {"correlation_id", query["correlation_id"]}, {"text", "Finance"}});
  CHECK(receive()["text"] == "tailored answer");
  send({{"type", "finish_scenario"}});
  CHECK(receive()["code"] == "RatingMissing");
  send({{"type", "submit_rating"}, {"positions", kPositions}});
  send({{"type", "finish_scenario"}});
  CHECK(receive()["type"] == "scenario_done");
  ws.close(websocket::close_code::normal);

  const auto after = http.Get("/health");
  REQUIRE(after);
  CHECK(json::parse(after->body)["sessions"] == 1);
  server.stop();
}
