// Command-line front end: playouts, winning-strategy analysis, theorem-matrix
// verification, invariant computation, and DOT export over JSON game files.
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qsg/automaton.hpp"
#include "qsg/serialize.hpp"
#include "qsg/strategy.hpp"
#include "qsg/table.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIndeterminate = 2;
constexpr int kExitInternal = 3;

qsg::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qsg::ParseError(path, "cannot open file");
  try {
    return qsg::json::parse(in);
  } catch (const qsg::json::parse_error& e) {
    throw qsg::ParseError(path, e.what());
  }
}

void emit(const qsg::json& report) { std::cout << report.dump(2) << "\n"; }

int cmd_play(const std::string& game_path, const std::string& s1_path, const std::string& s2_path) {
  qsg::GameSpec spec = qsg::parse_game_file(load_json(game_path));
  qsg::Strategy s1 = qsg::parse_strategy_file(load_json(s1_path), spec.n);
  qsg::Strategy s2 = qsg::parse_strategy_file(load_json(s2_path), spec.n);
  if (s1.owner != qsg::Player::one) throw qsg::ParseError(s1_path + "#/player", "expected player 1");
  if (s2.owner != qsg::Player::two) throw qsg::ParseError(s2_path + "#/player", "expected player 2");
  for (const auto* s : {&s1, &s2}) {
    qsg::ViolationReport r = qsg::validate(spec, *s);
    if (!r.ok)
      throw qsg::ParseError((s == &s1 ? s1_path : s2_path) + "#/moves/" +
                                (r.move_index < 0 ? "length" : std::to_string(r.move_index)),
                            r.reason);
  }
  qsg::Playout p = qsg::play(spec, s1, s2);
  emit(qsg::play_report(spec, p, qsg::measure(p, spec)));
  return kExitOk;
}

int cmd_analyze(const std::string& game_path, int player, const std::string& strength,
                std::uint64_t cap) {
  qsg::GameSpec spec = qsg::parse_game_file(load_json(game_path));
  qsg::Player p = player == 1 ? qsg::Player::one : qsg::Player::two;
  qsg::SearchBudget budget{cap, 0};
  qsg::AnalysisVerdict v = strength == "weak" ? qsg::find_weak(spec, p, &budget)
                                              : qsg::find_strong(spec, p, &budget);
  emit(qsg::analysis_report(spec, v));
  return v.kind == qsg::AnalysisVerdict::Kind::indeterminate ? kExitIndeterminate : kExitOk;
}

int cmd_verify_theorems(int max_n, int max_m) {
  qsg::TableReport report = qsg::verify_table(max_n, max_m);
  emit(qsg::table_report_json(report));
  return report.all_pass ? kExitOk : kExitIndeterminate;
}

int cmd_invariants(const std::string& game_path) {
  qsg::GameSpec spec = qsg::parse_game_file(load_json(game_path));
  emit(qsg::invariants_report(spec));
  return kExitOk;
}

int cmd_export_dot(const std::string& game_path, const std::string& alphabet_path,
                   std::optional<int> depth) {
  qsg::GameSpec spec = qsg::parse_game_file(load_json(game_path));
  qsg::AlphabetFile alphabet = qsg::parse_alphabet_file(load_json(alphabet_path), spec.n);
  int d = depth.value_or(spec.schedule.total_rounds());
  qsg::Automaton a = qsg::explore(spec, alphabet.player1, alphabet.player2, d);
  std::cout << qsg::to_dot(a);
  if (a.truncated) {
    std::cerr << "export-dot: exploration truncated at " << qsg::kMaxAutomatonNodes << " nodes\n";
    return kExitIndeterminate;
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequential quantum games over unitary action groups"};
  app.require_subcommand(1);

  std::string game_path, s1_path, s2_path, alphabet_path;
  int player = 1;
  std::string strength = "strong";
  std::uint64_t cap = qsg::kDefaultPlayoutCap;
  int max_n = 3, max_m = 2;
  std::optional<int> depth;

  CLI::App* play = app.add_subcommand("play", "Play out one strategy pair and report the outcome");
  play->add_option("game", game_path, "game file (JSON)")->required();
  play->add_option("strategy_p1", s1_path, "player 1 strategy file (JSON)")->required();
  play->add_option("strategy_p2", s2_path, "player 2 strategy file (JSON)")->required();

  CLI::App* analyze = app.add_subcommand("analyze", "Search for a winning strategy");
  analyze->add_option("game", game_path, "game file (JSON)")->required();
  analyze->add_option("--player", player, "player to analyze (1 or 2)")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  analyze->add_option("--strength", strength, "strong or weak (default strong)")
      ->check(CLI::IsMember({"strong", "weak"}));
  analyze->add_option("--cap", cap, "playout budget")->check(CLI::PositiveNumber);

  CLI::App* verify = app.add_subcommand("verify-theorems", "Check the summary matrix of verdicts");
  verify->add_option("--max-n", max_n, "largest dimension (default 3)")->check(CLI::Range(2, 4));
  verify->add_option("--max-m", max_m, "largest round parameter (default 2)")->check(CLI::Range(1, 3));

  CLI::App* invariants =
      app.add_subcommand("invariants", "Report player 2's invariant subspace and reachability");
  invariants->add_option("game", game_path, "game file (JSON)")->required();

  CLI::App* export_dot = app.add_subcommand("export-dot", "Emit the reachable-state automaton as DOT");
  export_dot->add_option("game", game_path, "game file (JSON)")->required();
  export_dot->add_option("alphabet", alphabet_path, "alphabet file (JSON)")->required();
  export_dot->add_option("--depth", depth, "rounds to explore (default: all)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (play->parsed()) return cmd_play(game_path, s1_path, s2_path);
    if (analyze->parsed()) return cmd_analyze(game_path, player, strength, cap);
    if (verify->parsed()) return cmd_verify_theorems(max_n, max_m);
    if (invariants->parsed()) return cmd_invariants(game_path);
    if (export_dot->parsed()) return cmd_export_dot(game_path, alphabet_path, depth);
  } catch (const qsg::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
