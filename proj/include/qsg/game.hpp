// Game definitions, strategy representation, deterministic playout, and the
// sure-win predicate on measurement statistics.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsg/groups.hpp"
#include "qsg/linalg.hpp"

namespace qsg {

enum class Player { one, two };

inline Player opponent_of(Player p) { return p == Player::one ? Player::two : Player::one; }

enum class ScheduleKind { canonical, noncanonical };

// Round structure: players alternate, player 1 moves first. Canonical games
// run 2m rounds (player 2 moves last); noncanonical games run 2m+1 rounds
// (player 1 moves first and last).
struct Schedule {
  ScheduleKind kind;
  int m;

  int total_rounds() const { return kind == ScheduleKind::canonical ? 2 * m : 2 * m + 1; }
  Player mover(int round) const { return round % 2 == 1 ? Player::one : Player::two; }
  int moves_for(Player p) const {
    if (kind == ScheduleKind::canonical) return m;
    return p == Player::one ? m + 1 : m;
  }
};

struct GameSpec {
  int n;
  int initial;   // q0, basis index
  int target_p1; // qA
  int target_p2; // qB
  Schedule schedule;
  ActionGroup group_a;
  ActionGroup group_b;

  GameSpec(int n_, int q0, int qa, int qb, Schedule sched, ActionGroup ga, ActionGroup gb)
      : n(n_), initial(q0), target_p1(qa), target_p2(qb), schedule(sched),
        group_a(std::move(ga)), group_b(std::move(gb)) {
    if (n <= 0) throw std::invalid_argument("game: dimension must be positive");
    auto in_range = [this](int k) { return k >= 0 && k < n; };
    if (!in_range(initial) || !in_range(target_p1) || !in_range(target_p2))
      throw std::invalid_argument("game: state index out of range");
    if (target_p1 == target_p2) throw std::invalid_argument("game: target states must differ");
    if (schedule.m < 1) throw std::invalid_argument("game: schedule requires m >= 1");
    if (group_a.dim() != n || group_b.dim() != n)
      throw std::invalid_argument("game: action group dimension mismatch");
  }

  const ActionGroup& group_of(Player p) const { return p == Player::one ? group_a : group_b; }
  int target_of(Player p) const { return p == Player::one ? target_p1 : target_p2; }
  StateVector initial_state() const { return basis_state(n, initial); }
};

// An ordered sequence of moves for one player, one per round they act.
struct Strategy {
  Player owner;
  std::vector<UnitaryMatrix> moves;
};

struct ViolationReport {
  bool ok = true;
  int move_index = -1; // -1 for length violations
  std::string reason;

  static ViolationReport pass() { return {}; }
  static ViolationReport fail(int index, std::string why) { return {false, index, std::move(why)}; }
};

// Checks length against the schedule and membership of every move in the
// owner's action group. Indeterminate membership is rejected.
inline ViolationReport validate(const GameSpec& spec, const Strategy& s) {
  const int want = spec.schedule.moves_for(s.owner);
  if (static_cast<int>(s.moves.size()) != want)
    return ViolationReport::fail(-1, "expected " + std::to_string(want) + " moves, got " +
                                         std::to_string(s.moves.size()));
  const ActionGroup& g = spec.group_of(s.owner);
  for (std::size_t i = 0; i < s.moves.size(); ++i) {
    if (s.moves[i].dim() != spec.n)
      return ViolationReport::fail(static_cast<int>(i), "move dimension mismatch");
    switch (contains(g, s.moves[i])) {
      case Ternary::yes: break;
      case Ternary::no:
        return ViolationReport::fail(static_cast<int>(i), "move is not in the player's action group");
      case Ternary::unknown:
        return ViolationReport::fail(static_cast<int>(i),
                                     "membership indeterminate: closure enumeration was capped");
    }
  }
  return ViolationReport::pass();
}

struct Playout {
  std::vector<StateVector> trajectory; // state after each round; [0] is the initial state

  const StateVector& final_state() const { return trajectory.back(); }
};

// Deterministic playout in interleaved round order.
inline Playout play(const GameSpec& spec, const Strategy& s1, const Strategy& s2) {
  if (s1.owner != Player::one || s2.owner != Player::two)
    throw std::invalid_argument("play: strategies must be given as (player 1, player 2)");
  for (const Strategy* s : {&s1, &s2}) {
    ViolationReport r = validate(spec, *s);
    if (!r.ok)
      throw std::invalid_argument("play: invalid strategy for player " +
                                  std::string(s->owner == Player::one ? "1" : "2") + ": " + r.reason);
  }

  Playout p;
  p.trajectory.reserve(static_cast<std::size_t>(spec.schedule.total_rounds()) + 1);
  p.trajectory.push_back(spec.initial_state());
  std::size_t i1 = 0, i2 = 0;
  for (int round = 1; round <= spec.schedule.total_rounds(); ++round) {
    const UnitaryMatrix& mv =
        spec.schedule.mover(round) == Player::one ? s1.moves[i1++] : s2.moves[i2++];
    p.trajectory.push_back(apply(mv, p.trajectory.back()));
  }
  return p;
}

inline constexpr double kSureWinTol = 1e-9;

enum class Verdict { player1_sure_win, player2_sure_win, probabilistic };

struct Outcome {
  std::vector<double> distribution;
  Verdict verdict;
};

// Computational-basis measurement statistics of the final state, classified
// against both targets. Sure wins require the full probability mass on the
// winner's target, which makes the verdict insensitive to global phase.
inline Outcome measure(const Playout& p, const GameSpec& spec) {
  const StateVector& f = p.final_state();
  Outcome out;
  out.distribution.resize(static_cast<std::size_t>(f.dim()));
  for (int k = 0; k < f.dim(); ++k) out.distribution[static_cast<std::size_t>(k)] = std::norm(f[k]);
  if (out.distribution[static_cast<std::size_t>(spec.target_p1)] >= 1.0 - kSureWinTol)
    out.verdict = Verdict::player1_sure_win;
  else if (out.distribution[static_cast<std::size_t>(spec.target_p2)] >= 1.0 - kSureWinTol)
    out.verdict = Verdict::player2_sure_win;
  else
    out.verdict = Verdict::probabilistic;
  return out;
}

} // namespace qsg
