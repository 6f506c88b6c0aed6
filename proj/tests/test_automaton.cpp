#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "qsg/automaton.hpp"
#include "test_support.hpp"

using namespace qsg;
using qsgtest::random_state;
using qsgtest::random_unitary;

namespace {

GameSpec example_asymmetric(ScheduleKind kind, int m) {
  return GameSpec(7, 0, 6, 0, Schedule{kind, m}, ActionGroup::unitary(7),
                  ActionGroup::symmetric(7));
}

std::vector<NamedMove> full_swap_alphabet(int n) {
  std::vector<NamedMove> moves{{"I", identity(n)}};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      moves.push_back({transposition(n, i, j).label(), transposition(n, i, j)});
  return moves;
}

const StateNode* find_label(const Automaton& a, const std::string& label) {
  for (const auto& node : a.nodes)
    if (node.label == label) return &node;
  return nullptr;
}

bool has_edge(const Automaton& a, const std::string& from_label, const std::string& to_label,
              const std::string& label) {
  const StateNode* from = find_label(a, from_label);
  const StateNode* to = find_label(a, to_label);
  if (!from || !to) return false;
  auto it = a.edges.find({from->key, to->key});
  return it != a.edges.end() && it->second.count(label) > 0;
}

} // namespace

TEST_CASE("canonical keys identify states up to global phase") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + static_cast<int>(rng() % 7);
    StateVector v = random_state(rng, n);
    double theta = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    std::vector<cplx> rotated(v.amps());
    for (cplx& z : rotated) z *= std::polar(1.0, theta);
    CHECK(canonical_key(v) == canonical_key(StateVector(rotated)));
  }

  CHECK(canonical_key(basis_state(3, 0)) != canonical_key(basis_state(3, 1)));
}

TEST_CASE("explore reproduces the 5-round game's automaton structure") {
  GameSpec spec = example_asymmetric(ScheduleKind::noncanonical, 2);
  UnitaryMatrix t06f7d = compose(transposition(7, 0, 6), adjoint(qft(7)));
  std::vector<NamedMove> alpha1{{"F7", qft(7)},
                                {"T_{0,6}", transposition(7, 0, 6)},
                                {"T_{0,6} F7†", t06f7d},
                                {"I", identity(7)}};
  Automaton a = explore(spec, alpha1, full_swap_alphabet(7), 5);
  CHECK_FALSE(a.truncated);

  const StateNode* q0 = find_label(a, "|0>");
  const StateNode* q6 = find_label(a, "|6>");
  const StateNode* psi = find_label(a, "psi_1");
  REQUIRE(q0 != nullptr);
  REQUIRE(q6 != nullptr);
  REQUIRE(psi != nullptr);
  CHECK(q0->is_initial);
  CHECK(q0->is_target_p2);
  CHECK(q6->is_target_p1);
  std::vector<cplx> uniform(7, cplx(1.0 / std::sqrt(7.0)));
  CHECK(states_equal_up_to_phase(psi->representative, StateVector(uniform)));

  CHECK(has_edge(a, "|0>", "psi_1", "F7"));
  CHECK(has_edge(a, "psi_1", "|6>", "T_{0,6} F7†"));
  CHECK(has_edge(a, "|0>", "|6>", "T_{0,6}"));
  CHECK(has_edge(a, "|6>", "|0>", "T_{0,6}"));
  CHECK(has_edge(a, "psi_1", "psi_1", "I"));
  CHECK(has_edge(a, "psi_1", "psi_1", "T_{0,1}"));
}

TEST_CASE("an identity-only alphabet yields a single self-looped node") {
  GameSpec spec(3, 1, 0, 2, Schedule{ScheduleKind::canonical, 2}, ActionGroup::symmetric(3),
                ActionGroup::symmetric(3));
  std::vector<NamedMove> idle{{"I", identity(3)}};
  Automaton a = explore(spec, idle, idle, 4);
  REQUIRE(a.nodes.size() == 1);
  CHECK(a.nodes[0].label == "|1>");
  REQUIRE(a.edges.size() == 1);
  CHECK(a.edges.begin()->second == std::set<std::string>{"I"});
}

TEST_CASE("a swap alphabet walks between two basis states") {
  GameSpec spec(2, 0, 1, 0, Schedule{ScheduleKind::canonical, 1}, ActionGroup::symmetric(2),
                ActionGroup::symmetric(2));
  std::vector<NamedMove> swap{{"T_{0,1}", transposition(2, 0, 1)}};
  Automaton a = explore(spec, swap, swap, 2);
  REQUIRE(a.nodes.size() == 2);
  CHECK(has_edge(a, "|0>", "|1>", "T_{0,1}"));
  CHECK(has_edge(a, "|1>", "|0>", "T_{0,1}"));
  CHECK(a.edges.size() == 2);
}

TEST_CASE("explore validates its inputs") {
  GameSpec spec(2, 0, 1, 0, Schedule{ScheduleKind::canonical, 1}, ActionGroup::symmetric(2),
                ActionGroup::symmetric(2));
  std::vector<NamedMove> swap{{"T_{0,1}", transposition(2, 0, 1)}};
  CHECK_THROWS_AS(explore(spec, {}, swap, 2), std::invalid_argument);
  CHECK_THROWS_AS(explore(spec, swap, swap, 3), std::invalid_argument);
  CHECK_THROWS_AS(explore(spec, swap, {{"I", identity(3)}}, 2), std::invalid_argument);
}

TEST_CASE("every emitted edge re-validates against its move") {
  GameSpec spec = example_asymmetric(ScheduleKind::noncanonical, 2);
  UnitaryMatrix t06f7d = compose(transposition(7, 0, 6), adjoint(qft(7)));
  std::vector<NamedMove> alpha1{{"F7", qft(7)},
                                {"T_{0,6}", transposition(7, 0, 6)},
                                {"T_{0,6} F7†", t06f7d},
                                {"I", identity(7)}};
  std::vector<NamedMove> alpha2 = full_swap_alphabet(7);
  Automaton a = explore(spec, alpha1, alpha2, 5);

  std::map<std::string, const UnitaryMatrix*> ops;
  for (const auto& mv : alpha1) ops.emplace(mv.name, &mv.op);
  for (const auto& mv : alpha2) ops.emplace(mv.name, &mv.op);
  std::map<std::string, const StateNode*> by_key;
  for (const auto& node : a.nodes) by_key.emplace(node.key, &node);

  for (const auto& [fromto, labels] : a.edges) {
    const StateNode* from = by_key.at(fromto.first);
    const StateNode* to = by_key.at(fromto.second);
    for (const std::string& l : labels) {
      StateVector image = apply(*ops.at(l), from->representative);
      CHECK(std::abs(std::abs(inner_product(image, to->representative)) - 1.0) <= 1e-8);
    }
  }
}

TEST_CASE("exploration truncates at the node cap and reports it") {
  std::mt19937_64 rng(97);
  GameSpec spec(3, 0, 1, 2, Schedule{ScheduleKind::noncanonical, 4}, ActionGroup::unitary(3),
                ActionGroup::unitary(3));
  std::vector<NamedMove> alphabet;
  for (int k = 0; k < 3; ++k)
    alphabet.push_back({"U" + std::to_string(k), qsgtest::random_unitary(rng, 3)});
  Automaton a = explore(spec, alphabet, alphabet, 9);
  CHECK(a.truncated);
  CHECK(a.nodes.size() <= 10'000);
}

TEST_CASE("to_dot output is byte-stable under insertion order") {
  StateVector s0 = basis_state(2, 0);
  StateVector s1 = basis_state(2, 1);
  StateNode n0{canonical_key(s0), "|0>", s0, true, false, true};
  StateNode n1{canonical_key(s1), "|1>", s1, false, true, false};

  std::mt19937_64 rng(13);
  std::string reference;
  for (int trial = 0; trial < 50; ++trial) {
    Automaton a;
    a.nodes = {n0, n1};
    if (rng() % 2) std::swap(a.nodes[0], a.nodes[1]);
    std::vector<std::pair<std::pair<std::string, std::string>, std::string>> edges{
        {{n0.key, n1.key}, "T_{0,1}"},
        {{n1.key, n0.key}, "T_{0,1}"},
        {{n0.key, n0.key}, "I"},
        {{n0.key, n0.key}, "Z"}};
    std::shuffle(edges.begin(), edges.end(), rng);
    for (const auto& [fromto, label] : edges) a.edges[fromto].insert(label);
    std::string dot = to_dot(a);
    if (trial == 0) reference = dot;
    CHECK(dot == reference);
  }
  CHECK(reference.find("digraph game {") == 0);
  CHECK(reference.find("__start") != std::string::npos);
  CHECK(reference.find("I, Z") != std::string::npos);
}

TEST_CASE("a single-node automaton renders one node and a self-loop") {
  StateVector s = basis_state(2, 0);
  Automaton a;
  a.nodes.push_back({canonical_key(s), "|0>", s, true, false, false});
  a.edges[{a.nodes[0].key, a.nodes[0].key}].insert("I");
  std::string dot = to_dot(a);
  CHECK(dot.find("n0 [label=\"|0>\"]") != std::string::npos);
  CHECK(dot.find("n0 -> n0 [label=\"I\"]") != std::string::npos);
}
