// JSON interchange: game files, strategy files, alphabet files, gate terms,
// and machine-readable reports. Complex numbers are [re, im] pairs.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsg/automaton.hpp"
#include "qsg/game.hpp"
#include "qsg/groups.hpp"
#include "qsg/linalg.hpp"
#include "qsg/strategy.hpp"
#include "qsg/table.hpp"
#include "qsg/version.hpp"

namespace qsg {

using json = nlohmann::json;

// Parse failure carrying the offending key path.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace detail {

inline const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "/" + key, "missing");
  return *it;
}

inline int need_int(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_number_integer()) throw ParseError(path + "/" + key, "expected an integer");
  return v.get<int>();
}

inline std::string need_str(const json& j, const char* key, const std::string& path) {
  const json& v = need(j, key, path);
  if (!v.is_string()) throw ParseError(path + "/" + key, "expected a string");
  return v.get<std::string>();
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace detail

inline json complex_to_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

inline cplx parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(path, "expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json state_to_json(const StateVector& v) {
  json out = json::array();
  for (int k = 0; k < v.dim(); ++k) out.push_back(complex_to_json(v[k]));
  return out;
}

// --- gate terms ------------------------------------------------------------

inline UnitaryMatrix parse_gate_term(const json& j, int n, const std::string& path) {
  const std::string op = detail::need_str(j, "op", path);
  if (op == "I") return identity(n);
  if (op == "T") {
    int a = detail::need_int(j, "i", path);
    int b = detail::need_int(j, "j", path);
    if (a < 0 || b < 0 || a >= n || b >= n) throw ParseError(path, "transposition index out of range");
    if (a == b) throw ParseError(path, "transposition indices must differ");
    return transposition(n, a, b);
  }
  if (op == "QFT") return qft(n);
  if (op == "QFT_DAG") return adjoint(qft(n));
  if (op == "MATRIX") {
    const json& rows = detail::need(j, "rows", path);
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n))
      throw ParseError(path + "/rows", "expected " + std::to_string(n) + " rows");
    std::vector<cplx> entries;
    entries.reserve(static_cast<std::size_t>(n) * n);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array() || rows[r].size() != static_cast<std::size_t>(n))
        throw ParseError(path + "/rows/" + std::to_string(r),
                         "expected " + std::to_string(n) + " entries");
      for (std::size_t c = 0; c < rows[r].size(); ++c)
        entries.push_back(
            parse_complex(rows[r][c], path + "/rows/" + std::to_string(r) + "/" + std::to_string(c)));
    }
    try {
      return UnitaryMatrix(n, std::move(entries));
    } catch (const std::invalid_argument& e) {
      throw ParseError(path, e.what());
    }
  }
  if (op == "COMPOSE") {
    const json& terms = detail::need(j, "terms", path);
    if (!terms.is_array() || terms.empty())
      throw ParseError(path + "/terms", "expected a nonempty array of gate terms");
    std::optional<UnitaryMatrix> acc;
    for (std::size_t k = 0; k < terms.size(); ++k) {
      UnitaryMatrix t = parse_gate_term(terms[k], n, path + "/terms/" + std::to_string(k));
      acc = acc ? compose(*acc, t) : std::move(t);
    }
    return *acc;
  }
  throw ParseError(path + "/op", "unknown gate term '" + op + "'");
}

namespace detail {

inline json expr_to_json(const GateExpr& e, const std::vector<cplx>* fallback_entries) {
  using K = GateExpr::Kind;
  switch (e.kind) {
    case K::Identity: return json{{"op", "I"}};
    case K::Transposition: return json{{"op", "T"}, {"i", e.a}, {"j", e.b}};
    case K::Fourier: return json{{"op", "QFT"}};
    case K::FourierDag: return json{{"op", "QFT_DAG"}};
    case K::Opaque: {
      const std::vector<cplx>* entries = e.entries.empty() ? fallback_entries : &e.entries;
      if (!entries || entries->empty())
        throw std::logic_error("gate term serialization: opaque factor without entries");
      const int n = e.dim > 0 ? e.dim : static_cast<int>(std::lround(std::sqrt(double(entries->size()))));
      json rows = json::array();
      for (int r = 0; r < n; ++r) {
        json row = json::array();
        for (int c = 0; c < n; ++c)
          row.push_back(complex_to_json((*entries)[static_cast<std::size_t>(r) * n + c]));
        rows.push_back(std::move(row));
      }
      return json{{"op", "MATRIX"}, {"rows", std::move(rows)}};
    }
    case K::Product: {
      json terms = json::array();
      for (const GateExpr& f : e.factors) terms.push_back(expr_to_json(f, nullptr));
      return json{{"op", "COMPOSE"}, {"terms", std::move(terms)}};
    }
  }
  throw std::logic_error("gate term serialization: unhandled kind");
}

} // namespace detail

inline json move_to_json(const UnitaryMatrix& u) {
  return detail::expr_to_json(u.expr(), &u.entries());
}

// --- groups and game files ---------------------------------------------------

inline ActionGroup parse_group(const json& j, int n, const std::string& path) {
  const std::string kind = detail::need_str(j, "kind", path);
  if (kind == "symmetric") return ActionGroup::symmetric(n);
  if (kind == "unitary") return ActionGroup::unitary(n);
  if (kind == "generated") {
    const json& gens = detail::need(j, "generators", path);
    if (!gens.is_array() || gens.empty())
      throw ParseError(path + "/generators", "expected a nonempty array of gate terms");
    std::vector<UnitaryMatrix> generators;
    for (std::size_t k = 0; k < gens.size(); ++k)
      generators.push_back(parse_gate_term(gens[k], n, path + "/generators/" + std::to_string(k)));
    std::size_t cap = kDefaultClosureCap;
    if (auto it = j.find("closure_cap"); it != j.end()) {
      if (!it->is_number_integer() || it->get<long long>() <= 0)
        throw ParseError(path + "/closure_cap", "expected a positive integer");
      cap = it->get<std::size_t>();
    }
    return ActionGroup::finite_generated(n, std::move(generators), cap);
  }
  throw ParseError(path + "/kind", "expected one of symmetric, unitary, generated");
}

inline json group_to_json(const ActionGroup& g) {
  switch (g.kind()) {
    case ActionGroup::Kind::NamedSymmetric: return json{{"kind", "symmetric"}};
    case ActionGroup::Kind::NamedUnitary: return json{{"kind", "unitary"}};
    case ActionGroup::Kind::FiniteGenerated: {
      json gens = json::array();
      for (const auto& u : g.generators()) gens.push_back(move_to_json(u));
      return json{{"kind", "generated"},
                  {"generators", std::move(gens)},
                  {"closure_cap", g.closure_cap()}};
    }
  }
  throw std::logic_error("group serialization: unhandled kind");
}

inline GameSpec parse_game_file(const json& j) {
  const int n = detail::need_int(j, "dimension", "");
  if (n <= 0) throw ParseError("/dimension", "expected a positive integer");
  const int q0 = detail::need_int(j, "initial", "");
  const int qa = detail::need_int(j, "target_p1", "");
  const int qb = detail::need_int(j, "target_p2", "");
  for (auto [key, v] : {std::pair{"/initial", q0}, {"/target_p1", qa}, {"/target_p2", qb}})
    if (v < 0 || v >= n) throw ParseError(key, "state index out of range");
  if (qa == qb) throw ParseError("/target_p2", "target states must differ");

  const json& sched = detail::need(j, "schedule", "");
  const std::string type = detail::need_str(sched, "type", "/schedule");
  if (type != "canonical" && type != "noncanonical")
    throw ParseError("/schedule/type", "expected canonical or noncanonical");
  const int m = detail::need_int(sched, "m", "/schedule");
  if (m < 1) throw ParseError("/schedule/m", "expected m >= 1");

  ActionGroup ga = parse_group(detail::need(j, "group_a", ""), n, "/group_a");
  ActionGroup gb = parse_group(detail::need(j, "group_b", ""), n, "/group_b");
  Schedule schedule{type == "canonical" ? ScheduleKind::canonical : ScheduleKind::noncanonical, m};
  return GameSpec(n, q0, qa, qb, schedule, std::move(ga), std::move(gb));
}

inline json game_spec_to_json(const GameSpec& spec) {
  return json{{"dimension", spec.n},
              {"initial", spec.initial},
              {"target_p1", spec.target_p1},
              {"target_p2", spec.target_p2},
              {"schedule",
               {{"type", spec.schedule.kind == ScheduleKind::canonical ? "canonical" : "noncanonical"},
                {"m", spec.schedule.m}}},
              {"group_a", group_to_json(spec.group_a)},
              {"group_b", group_to_json(spec.group_b)}};
}

// Content hash of the canonical game serialization, quoted in every report.
inline std::string spec_hash(const GameSpec& spec) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(detail::fnv1a(game_spec_to_json(spec).dump())));
  return std::string("fnv1a:") + buf;
}

// --- strategies and alphabets ------------------------------------------------

inline Strategy parse_strategy_file(const json& j, int n) {
  const int player = detail::need_int(j, "player", "");
  if (player != 1 && player != 2) throw ParseError("/player", "expected 1 or 2");
  const json& moves = detail::need(j, "moves", "");
  if (!moves.is_array() || moves.empty())
    throw ParseError("/moves", "expected a nonempty array of gate terms");
  Strategy s{player == 1 ? Player::one : Player::two, {}};
  for (std::size_t k = 0; k < moves.size(); ++k)
    s.moves.push_back(parse_gate_term(moves[k], n, "/moves/" + std::to_string(k)));
  return s;
}

inline json strategy_to_json(const Strategy& s) {
  json moves = json::array();
  for (const auto& mv : s.moves) moves.push_back(move_to_json(mv));
  return json{{"player", s.owner == Player::one ? 1 : 2}, {"moves", std::move(moves)}};
}

struct AlphabetFile {
  std::vector<NamedMove> player1;
  std::vector<NamedMove> player2;
};

inline AlphabetFile parse_alphabet_file(const json& j, int n) {
  AlphabetFile out;
  for (auto [key, dst] : {std::pair{"player1", &out.player1}, {"player2", &out.player2}}) {
    const json& list = detail::need(j, key, "");
    const std::string path = std::string("/") + key;
    if (!list.is_array() || list.empty())
      throw ParseError(path, "expected a nonempty array of named gate terms");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string entry_path = path + "/" + std::to_string(k);
      UnitaryMatrix op =
          parse_gate_term(detail::need(list[k], "term", entry_path), n, entry_path + "/term");
      std::string name = op.label();
      if (auto it = list[k].find("name"); it != list[k].end()) {
        if (!it->is_string()) throw ParseError(entry_path + "/name", "expected a string");
        name = it->get<std::string>();
      }
      dst->push_back({std::move(name), std::move(op)});
    }
  }
  return out;
}

// --- reports -------------------------------------------------------------

inline json report_header(const GameSpec& spec) {
  return json{{"tool_version", kToolVersion}, {"spec_hash", spec_hash(spec)}};
}

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::player1_sure_win: return "player1_sure_win";
    case Verdict::player2_sure_win: return "player2_sure_win";
    case Verdict::probabilistic: return "probabilistic";
  }
  return "probabilistic";
}

inline json play_report(const GameSpec& spec, const Playout& p, const Outcome& o) {
  json report = report_header(spec);
  report["rounds"] = spec.schedule.total_rounds();
  json traj = json::array();
  for (const auto& state : p.trajectory) traj.push_back(state_to_json(state));
  report["trajectory"] = std::move(traj);
  report["distribution"] = o.distribution;
  report["verdict"] = verdict_name(o.verdict);
  return report;
}

inline json analysis_report(const GameSpec& spec, const AnalysisVerdict& v) {
  json report = report_header(spec);
  report["player"] = v.player == Player::one ? 1 : 2;
  report["strength"] = v.strength == Strength::strong ? "strong" : "weak";
  switch (v.kind) {
    case AnalysisVerdict::Kind::exists: report["result"] = "exists"; break;
    case AnalysisVerdict::Kind::not_exists: report["result"] = "not_exists"; break;
    case AnalysisVerdict::Kind::indeterminate: report["result"] = "indeterminate"; break;
  }
  if (v.witness) report["witness"] = strategy_to_json(*v.witness)["moves"];
  if (v.co_witness) report["co_witness"] = strategy_to_json(*v.co_witness)["moves"];
  if (v.method)
    report["method"] = *v.method == Method::exhaustion ? "exhaustion" : "proof_construction";
  report["detail"] = v.detail;
  report["playouts"] = v.playouts;
  return report;
}

inline json invariants_report(const GameSpec& spec) {
  json report = report_header(spec);
  const std::vector<StateVector> basis = invariant_subspace(spec.group_b);
  json basis_json = json::array();
  for (const auto& v : basis) basis_json.push_back(state_to_json(v));
  report["invariant_basis"] = std::move(basis_json);
  if (spec.group_b.kind() == ActionGroup::Kind::NamedUnitary)
    report["note"] = "the full unitary group fixes only the zero vector";

  InvariantReach reach = reachable_invariant(spec.group_a, spec.group_b, spec.initial_state());
  if (reach.found == Ternary::yes) {
    report["reachable"] = json{{"action", move_to_json(*reach.action)},
                               {"state", state_to_json(*reach.state)}};
  } else {
    report["reachable"] = nullptr;
    report["reachable_note"] = reach.found == Ternary::no
                                   ? "no reachable invariant state"
                                   : "indeterminate: closure enumeration was capped";
  }
  return report;
}

inline json table_report_json(const TableReport& r) {
  json rows = json::array();
  for (const TableRow& row : r.rows) {
    json checks = json::array();
    for (const TableCheck& c : row.checks)
      checks.push_back(json{{"n", c.n},
                            {"m", c.m},
                            {"mode", c.mode},
                            {"got_p1", c.got_p1},
                            {"got_p2", c.got_p2},
                            {"pass", c.pass},
                            {"note", c.note}});
    rows.push_back(json{{"id", row.id},
                        {"description", row.description},
                        {"expected_p1", row.expect_p1 ? "yes" : "no"},
                        {"expected_p2", row.expect_p2 ? "yes" : "no"},
                        {"checks", std::move(checks)},
                        {"pass", row.pass}});
  }
  return json{{"tool_version", kToolVersion},
              {"max_n", r.max_n},
              {"max_m", r.max_m},
              {"rows", std::move(rows)},
              {"all_pass", r.all_pass}};
}

} // namespace qsg
