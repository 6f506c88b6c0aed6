// Reachable-state automaton of a game under curated move alphabets, with
// deterministic DOT rendering.
#pragma once

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsg/game.hpp"
#include "qsg/linalg.hpp"

namespace qsg {

// Phase-canonical node identity: the global phase is fixed so the first
// nonzero amplitude is positive real, then entries are rounded to the
// 1e-7 grid. Phase-equal states map to the same key.
inline std::string canonical_key(const StateVector& v) {
  std::vector<cplx> amps(v.amps());
  for (const cplx& z : amps) {
    if (detail::grid(z.real()) != 0 || detail::grid(z.imag()) != 0) {
      cplx phase = std::conj(z) / std::abs(z);
      for (cplx& w : amps) w *= phase;
      break;
    }
  }
  return detail::rounded_key(amps);
}

struct NamedMove {
  std::string name;
  UnitaryMatrix op;
};

struct StateNode {
  std::string key;
  std::string label; // basis index ("|k>") when a basis state, else "psi_j"
  StateVector representative;
  bool is_initial = false;
  bool is_target_p1 = false;
  bool is_target_p2 = false;
};

struct Automaton {
  std::vector<StateNode> nodes; // discovery order
  std::map<std::pair<std::string, std::string>, std::set<std::string>> edges;
  bool truncated = false;
};

inline constexpr int kMaxAutomatonNodes = 10'000;

// Breadth-first closure of the states reachable from the initial state by
// applying, at each round, every alphabet move of the player whose turn it
// is. Nodes are deduplicated by canonical key; parallel edges merge labels.
inline Automaton explore(const GameSpec& spec, const std::vector<NamedMove>& alphabet_p1,
                         const std::vector<NamedMove>& alphabet_p2, int depth) {
  if (alphabet_p1.empty() || alphabet_p2.empty())
    throw std::invalid_argument("explore: alphabets must be nonempty");
  if (depth < 1 || depth > spec.schedule.total_rounds())
    throw std::invalid_argument("explore: depth must lie within the schedule's rounds");
  for (const auto& alphabet : {alphabet_p1, alphabet_p2})
    for (const auto& mv : alphabet)
      if (mv.op.dim() != spec.n) throw std::invalid_argument("explore: alphabet dimension mismatch");

  Automaton a;
  std::map<std::string, int> by_key;
  int psi_counter = 0;

  const std::string initial_key = canonical_key(spec.initial_state());
  const std::string target1_key = canonical_key(basis_state(spec.n, spec.target_p1));
  const std::string target2_key = canonical_key(basis_state(spec.n, spec.target_p2));

  auto intern = [&](const StateVector& state) -> int {
    std::string key = canonical_key(state);
    if (auto it = by_key.find(key); it != by_key.end()) return it->second;

    StateNode node{key, "", state, key == initial_key, key == target1_key, key == target2_key};
    int basis_index = -1;
    for (int k = 0; k < state.dim(); ++k) {
      double mass = std::norm(state[k]);
      if (mass > 0.5) basis_index = k;
    }
    if (basis_index >= 0 && std::abs(std::abs(state[basis_index]) - 1.0) <= kGridStep)
      node.label = "|" + std::to_string(basis_index) + ">";
    else
      node.label = "psi_" + std::to_string(++psi_counter);

    by_key.emplace(key, static_cast<int>(a.nodes.size()));
    a.nodes.push_back(std::move(node));
    return static_cast<int>(a.nodes.size()) - 1;
  };

  std::vector<int> frontier{intern(spec.initial_state())};
  for (int round = 1; round <= depth && !a.truncated; ++round) {
    const auto& alphabet =
        spec.schedule.mover(round) == Player::one ? alphabet_p1 : alphabet_p2;
    std::vector<int> next;
    std::set<int> seen_next;
    for (int src : frontier) {
      const std::string src_key = a.nodes[static_cast<std::size_t>(src)].key;
      StateVector rep = a.nodes[static_cast<std::size_t>(src)].representative;
      for (const auto& mv : alphabet) {
        if (static_cast<int>(a.nodes.size()) >= kMaxAutomatonNodes) {
          a.truncated = true;
          break;
        }
        StateVector dst_state = apply(mv.op, rep);
        int dst = intern(dst_state);
        a.edges[{src_key, a.nodes[static_cast<std::size_t>(dst)].key}].insert(mv.name);
        if (seen_next.insert(dst).second) next.push_back(dst);
      }
      if (a.truncated) break;
    }
    frontier = std::move(next);
  }
  return a;
}

// Deterministic DOT text: nodes are ordered by canonical key, edge labels
// are sorted and comma-joined, and identical automata render byte-equal.
inline std::string to_dot(const Automaton& a) {
  std::map<std::string, int> order; // key -> output id
  for (const auto& node : a.nodes) order.emplace(node.key, 0);
  int next_id = 0;
  for (auto& [key, id] : order) id = next_id++;

  std::ostringstream out;
  out << "digraph game {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle];\n";

  const StateNode* initial = nullptr;
  std::map<int, const StateNode*> by_id;
  for (const auto& node : a.nodes) {
    by_id[order.at(node.key)] = &node;
    if (node.is_initial) initial = &node;
  }
  if (initial) out << "  __start [shape=point, label=\"\"];\n";

  for (const auto& [id, node] : by_id) {
    out << "  n" << id << " [label=\"" << node->label << "\"";
    if (node->is_target_p1) out << ", shape=doublecircle";
    if (node->is_target_p2) out << ", style=filled, fillcolor=lightgray";
    out << "];\n";
  }
  if (initial) out << "  __start -> n" << order.at(initial->key) << ";\n";

  std::map<std::pair<int, int>, const std::set<std::string>*> sorted_edges;
  for (const auto& [fromto, labels] : a.edges)
    sorted_edges[{order.at(fromto.first), order.at(fromto.second)}] = &labels;
  for (const auto& [fromto, labels] : sorted_edges) {
    out << "  n" << fromto.first << " -> n" << fromto.second << " [label=\"";
    bool first = true;
    for (const std::string& l : *labels) {
      if (!first) out << ", ";
      out << l;
      first = false;
    }
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

} // namespace qsg
