// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "uat/eval/power.hpp"
#include "uat/eval/report.hpp"
#include "uat/session/export.hpp"
#include "uat/session/server.hpp"
#include "uat/session/service.hpp"

namespace {

std::atomic<bool> g_stop{false};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

uat::eval::Alternative parse_alternative(const std::string& text) {
  if (text == "less") return uat::eval::Alternative::Less;
  if (text == "greater") return uat::eval::Alternative::Greater;
  return uat::eval::Alternative::TwoSided;
}

int serve(const std::string& config, const std::string& address, unsigned short port, const std::string& data_dir) {
  uat::session::ServiceOptions options;
  if (!data_dir.empty()) options.data_dir = data_dir;
  uat::session::SessionService service(uat::session::ScenarioCatalog::load(config), std::move(options));
  uat::session::Server server(service, {.address = address, .port = port});
  server.start();
  std::cerr << "listening on " << address << ":" << server.port() << " (/ws, /health)\n";
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
  server.stop();
  return 0;
}

int analyze(const std::string& ratings, const std::string& alternative, const std::string& table) {
  const auto rows = uat::eval::read_ratings_csv(read_file(ratings));
  const auto report = uat::eval::analyze(rows, parse_alternative(alternative));
  std::cout << uat::eval::format_text(report);
  if (!table.empty()) write_file(table, uat::eval::format_table(report));
  return 0;
}

int export_ratings(const std::string& data_dir, const std::string& out, bool skip_unfinished) {
  uat::session::SessionStore store(data_dir);
  std::vector<uat::session::SessionRecord> records;
  for (const auto& id : store.list()) {
    auto record = store.load(id);
    if (!record.finished && skip_unfinished) continue;
    records.push_back(std::move(record));
  }
  const auto csv = uat::session::export_ratings(records);
  if (out.empty())
    std::cout << csv;
  else
    write_file(out, csv);
  return 0;
}

int power(double d, double alpha, double target, bool two_tailed) {
  const auto tail = two_tailed ? uat::eval::Tail::Two : uat::eval::Tail::One;
  const auto n = uat::eval::power_n_one_sample_t(d, alpha, target, tail);
  std::cout << "n=" << n << " achieved_power=" << uat::eval::power_one_sample_t(d, n, alpha, tail) << "\n";
  return 0;
}

// Runs one scripted session in-process and prints the frames.
int demo(const std::string& config, const std::string& scenario_id, const std::string& message,
         const std::string& reply) {
  uat::session::ServiceOptions options;
  options.session_ids = uat::counting_id_generator("demo");
  options.parallel_chains = false;
  uat::session::SessionService service(uat::session::ScenarioCatalog::load(config), std::move(options));
  std::string bound;
  auto send = [&](const uat::session::ClientFrame& frame) {
    const auto text = uat::session::serialize(frame);
    std::cout << "> " << text << "\n";
    std::vector<std::string> replies = service.handle_frame(bound, text);
    for (const auto& r : replies) std::cout << "< " << r << "\n";
    return replies;
  };
  using uat::session::ClientFrameType;
  send({.type = ClientFrameType::StartSession, .scenario_id = scenario_id});
  auto replies = send({.type = ClientFrameType::UserMessage, .text = message});
  for (int guard = 0; guard < 8; ++guard) {
    const auto query = service.snapshot(bound).open_correlation();
    if (!query) break;
    replies = send({.type = ClientFrameType::InsertReply, .text = reply, .correlation_id = *query});
  }
  const auto record = service.snapshot(bound);
  for (const auto& e : record.events)
    if (e.kind == uat::session::EventKind::BotMessage)
      std::cout << "\n[" << uat::to_string(*e.side) << "]\n" << e.trace << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"User-as-a-tool study harness"};
  app.require_subcommand(1);

  std::string config = "config/scenarios.json";
  std::string address = "127.0.0.1";
  unsigned short port = 8080;
  std::string data_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Run the websocket session service");
  serve_cmd->add_option("--config", config, "Scenario configuration file")->check(CLI::ExistingFile);
  serve_cmd->add_option("--address", address);
  serve_cmd->add_option("--port", port);
  serve_cmd->add_option("--data-dir", data_dir, "Directory for session logs");

  std::string ratings, alternative = "less", table;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a ratings export");
  analyze_cmd->add_option("ratings", ratings, "Ratings CSV")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--alternative", alternative, "less, greater or two-sided")
      ->check(CLI::IsMember({"less", "greater", "two-sided"}));
  analyze_cmd->add_option("--table", table, "Also write the machine-readable table here");

  std::string export_dir, export_out;
  bool skip_unfinished = false;
  auto* export_cmd = app.add_subcommand("export", "Export ratings of stored sessions as CSV");
  export_cmd->add_option("--data-dir", export_dir)->required()->check(CLI::ExistingDirectory);
  export_cmd->add_option("--out", export_out, "Output file (stdout when omitted)");
  export_cmd->add_flag("--skip-unfinished", skip_unfinished);

  double d = 0.5, alpha = 0.05, target = 0.8;
  bool two_tailed = false;
  auto* power_cmd = app.add_subcommand("power", "Minimal n for a one-sample t-test");
  power_cmd->add_option("--d", d, "Effect size (Cohen's d)")->check(CLI::PositiveNumber);
  power_cmd->add_option("--alpha", alpha)->check(CLI::Range(0.0, 1.0));
  power_cmd->add_option("--power", target)->check(CLI::Range(0.0, 1.0));
  power_cmd->add_flag("--two-tailed", two_tailed);

  std::string scenario = "study2", message = "Which goal is the most important one?", reply = "Finance";
  auto* demo_cmd = app.add_subcommand("demo", "Run one scripted session and print the frames");
  demo_cmd->add_option("--config", config)->check(CLI::ExistingFile);
  demo_cmd->add_option("--scenario", scenario);
  demo_cmd->add_option("--message", message);
  demo_cmd->add_option("--reply", reply, "Answer given to every insert query");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*serve_cmd) return serve(config, address, port, data_dir);
    if (*analyze_cmd) return analyze(ratings, alternative, table);
    if (*export_cmd) return export_ratings(export_dir, export_out, skip_unfinished);
    if (*power_cmd) return power(d, alpha, target, two_tailed);
    if (*demo_cmd) return demo(config, scenario, message, reply);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
