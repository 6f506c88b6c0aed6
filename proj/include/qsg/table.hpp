// Verification matrix: instantiates each row of the strong-winning-strategy
// summary with enumerable groups, decides both players by exhaustion, and
// exercises the non-enumerable endpoints through explicit witnesses and
// refutations.
#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "qsg/strategy.hpp"

namespace qsg {

struct TableCheck {
  int n = 0;
  int m = 0;
  std::string mode; // "exhaustion" | "witness-checked" | "skipped"
  std::string got_p1;
  std::string got_p2;
  bool pass = false;
  std::string note;
};

struct TableRow {
  int id = 0;
  std::string description;
  bool expect_p1 = false;
  bool expect_p2 = false;
  std::vector<TableCheck> checks;
  bool pass = true;
};

struct TableReport {
  int max_n = 0;
  int max_m = 0;
  std::vector<TableRow> rows;
  bool all_pass = true;
};

namespace detail {

inline UnitaryMatrix sign_diagonal(int n, const std::vector<int>& minus) {
  std::vector<cplx> e(static_cast<std::size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) e[static_cast<std::size_t>(k) * n + k] = 1.0;
  for (int k : minus) e[static_cast<std::size_t>(k) * n + k] = -1.0;
  return UnitaryMatrix(n, std::move(e));
}

// A small finite group strictly between S_n and U(n).
inline ActionGroup quantum_group(int n) {
  std::vector<UnitaryMatrix> gens;
  for (int i = 0; i + 1 < n; ++i) gens.push_back(transposition(n, i, i + 1));
  if (n == 2)
    gens.push_back(qft(2)); // dihedral group of order 16
  else
    gens.push_back(sign_diagonal(n, {1, 2}));
  return ActionGroup::finite_generated(n, std::move(gens));
}

inline std::string verdict_word(const AnalysisVerdict& v) {
  switch (v.kind) {
    case AnalysisVerdict::Kind::exists: return "yes";
    case AnalysisVerdict::Kind::not_exists: return "no";
    case AnalysisVerdict::Kind::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

inline TableCheck run_exhaustion(const GameSpec& spec, int n, int m, bool expect_p1,
                                 bool expect_p2) {
  TableCheck c{n, m, "exhaustion", "", "", false, ""};
  double cand1 = std::pow(static_cast<double>(spec.group_a.closure().size()),
                          spec.schedule.moves_for(Player::one));
  double cand2 = std::pow(static_cast<double>(spec.group_b.closure().size()),
                          spec.schedule.moves_for(Player::two));
  if (cand1 > 250'000 || cand2 > 250'000) {
    c.mode = "skipped";
    c.pass = true;
    c.note = "candidate space too large for exhaustion at this size";
    return c;
  }
  AnalysisVerdict v1 = find_strong(spec, Player::one);
  AnalysisVerdict v2 = find_strong(spec, Player::two);
  c.got_p1 = verdict_word(v1);
  c.got_p2 = verdict_word(v2);
  c.pass = c.got_p1 == (expect_p1 ? "yes" : "no") && c.got_p2 == (expect_p2 ? "yes" : "no");
  return c;
}

inline UnitaryMatrix haar_like_unitary(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  std::vector<std::vector<cplx>> cols(static_cast<std::size_t>(n),
                                      std::vector<cplx>(static_cast<std::size_t>(n)));
  for (auto& col : cols)
    for (auto& z : col) z = cplx(g(rng), g(rng));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    for (std::size_t p = 0; p < c; ++p) {
      cplx proj = 0.0;
      for (int k = 0; k < n; ++k)
        proj += std::conj(cols[p][static_cast<std::size_t>(k)]) * cols[c][static_cast<std::size_t>(k)];
      for (int k = 0; k < n; ++k)
        cols[c][static_cast<std::size_t>(k)] -= proj * cols[p][static_cast<std::size_t>(k)];
    }
    double n2 = 0.0;
    for (const auto& z : cols[c]) n2 += std::norm(z);
    for (auto& z : cols[c]) z /= std::sqrt(n2);
  }
  std::vector<cplx> e(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      e[static_cast<std::size_t>(r) * n + c] = cols[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
  return UnitaryMatrix(n, std::move(e));
}

inline UnitaryMatrix random_permutation_matrix(std::mt19937_64& rng, int n) {
  std::vector<int> image(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) image[static_cast<std::size_t>(k)] = k;
  std::shuffle(image.begin(), image.end(), rng);
  std::vector<cplx> e(static_cast<std::size_t>(n) * n, 0.0);
  for (int c = 0; c < n; ++c) e[static_cast<std::size_t>(image[static_cast<std::size_t>(c)]) * n + c] = 1.0;
  return UnitaryMatrix(n, std::move(e));
}

// Refutes a handful of sampled claimed strategies through the constructed
// opponent pairs. Sampling is seeded, so the report is reproducible.
inline bool refute_samples(const GameSpec& spec, Player claimant, bool quantum_moves,
                           std::mt19937_64& rng, std::string& note) {
  const int moves = spec.schedule.moves_for(claimant);
  for (int trial = 0; trial < 3; ++trial) {
    Strategy claimed{claimant, {}};
    for (int k = 0; k < moves; ++k)
      claimed.moves.push_back(quantum_moves ? haar_like_unitary(rng, spec.n)
                                            : random_permutation_matrix(rng, spec.n));
    try {
      construct_counterexample(spec, claimed);
    } catch (const std::exception& e) {
      note = e.what();
      return false;
    }
  }
  return true;
}

} // namespace detail

// Runs every instantiable row of the summary matrix for 2 <= n <= max_n and
// 1 <= m <= max_m. Rows whose hypotheses name the full unitary group carry
// an extra witness-checked entry.
inline TableReport verify_table(int max_n, int max_m) {
  if (max_n < 2 || max_n > 4 || max_m < 1 || max_m > 3)
    throw std::invalid_argument("verify_table: bounds must satisfy 2 <= max_n <= 4, 1 <= max_m <= 3");

  TableReport report;
  report.max_n = max_n;
  report.max_m = max_m;

  report.rows = {
      {1, "canonical, both players share the symmetric group", false, false, {}, true},
      {2, "canonical, both players share a quantum group containing all permutations", false,
       false, {}, true},
      {3, "noncanonical, both players share the symmetric group", false, false, {}, true},
      {4, "noncanonical, both players share a quantum group containing all permutations", false,
       false, {}, true},
      {5, "canonical, player 1's permutations sit inside player 2's larger group", false, false,
       {}, true},
      {6, "canonical, player 2's permutations sit inside player 1's larger group", false, false,
       {}, true},
      {7, "noncanonical, smaller opponent group, all permutations available, invariant state "
          "reachable", true, false, {}, true},
      {8, "noncanonical, smaller opponent group, no permutations needed, target is the initial "
          "state", true, false, {}, true},
  };

  auto add_check = [&report](int row_id, TableCheck c) {
    TableRow& row = report.rows[static_cast<std::size_t>(row_id - 1)];
    row.pass = row.pass && c.pass;
    row.checks.push_back(std::move(c));
  };

  for (int n = 2; n <= max_n; ++n) {
    ActionGroup sn = ActionGroup::symmetric(n);
    ActionGroup qn = detail::quantum_group(n);
    for (int m = 1; m <= max_m; ++m) {
      Schedule can{ScheduleKind::canonical, m};
      Schedule non{ScheduleKind::noncanonical, m};

      add_check(1, detail::run_exhaustion(GameSpec(n, 0, 1, 0, can, sn, sn), n, m, false, false));
      add_check(2, detail::run_exhaustion(GameSpec(n, 0, 1, 0, can, qn, qn), n, m, false, false));
      add_check(3, detail::run_exhaustion(GameSpec(n, 0, 1, 0, non, sn, sn), n, m, false, false));
      add_check(4, detail::run_exhaustion(GameSpec(n, 0, 1, 0, non, qn, qn), n, m, false, false));
      add_check(5, detail::run_exhaustion(GameSpec(n, 0, 1, 0, can, sn, qn), n, m, false, false));
      add_check(6, detail::run_exhaustion(GameSpec(n, 0, 1, 0, can, qn, sn), n, m, false, false));

      // Row 7: the opponent cannot move the initial state, and player 1 has
      // every permutation available for the final conversion.
      {
        ActionGroup a = n == 2 ? ActionGroup::finite_generated(
                                     2, {transposition(2, 0, 1), detail::sign_diagonal(2, {1})})
                               : sn;
        ActionGroup b = n == 2
                            ? ActionGroup::finite_generated(2, {detail::sign_diagonal(2, {1})})
                            : ActionGroup::finite_generated(n, {transposition(n, 1, 2)});
        add_check(7, detail::run_exhaustion(GameSpec(n, 0, 1, 0, non, a, b), n, m, true, false));
      }

      // Row 8: player 1's repertoire is a small Fourier-generated group with
      // no transpositions beyond the opponent's, and her target is the start.
      if (n >= 3) {
        UnitaryMatrix f = qft(n);
        ActionGroup a = ActionGroup::finite_generated(n, {f});
        ActionGroup b = ActionGroup::finite_generated(n, {compose(f, f)});
        add_check(8, detail::run_exhaustion(GameSpec(n, 0, 0, 1, non, a, b), n, m, true, false));
      }
    }
  }

  // Non-enumerable endpoints: the same rows with the larger group taken to
  // be all of U(n), checked through witnesses and constructed refutations.
  {
    const int n = std::min(3, max_n);
    std::mt19937_64 rng(0x715eedULL);
    ActionGroup sn = ActionGroup::symmetric(n);
    ActionGroup un = ActionGroup::unitary(n);

    {
      TableCheck c{n, 1, "witness-checked", "no", "no", true, ""};
      GameSpec spec(n, 0, 1, 0, Schedule{ScheduleKind::canonical, 1}, sn, un);
      c.pass = detail::refute_samples(spec, Player::one, false, rng, c.note) &&
               detail::refute_samples(spec, Player::two, true, rng, c.note);
      if (c.note.empty()) c.note = "sampled claims for both players refuted by constructed pairs";
      add_check(5, std::move(c));
    }
    {
      TableCheck c{n, 1, "witness-checked", "no", "no", true, ""};
      GameSpec spec(n, 0, 1, 0, Schedule{ScheduleKind::canonical, 1}, un, sn);
      c.pass = detail::refute_samples(spec, Player::one, true, rng, c.note) &&
               detail::refute_samples(spec, Player::two, false, rng, c.note);
      if (c.note.empty()) c.note = "sampled claims for both players refuted by constructed pairs";
      add_check(6, std::move(c));
    }
    {
      TableCheck c{n, 1, "witness-checked", "", "no", false, ""};
      GameSpec spec(n, 0, n - 1, 0, Schedule{ScheduleKind::noncanonical, 1}, un, sn);
      std::optional<Strategy> w = witness_noncanonical(spec);
      bool p1_ok = w && is_strong_winning(spec, *w).verdict == Ternary::yes;
      c.got_p1 = p1_ok ? "yes" : "indeterminate";
      bool p2_ok = detail::refute_samples(spec, Player::two, false, rng, c.note);
      c.pass = p1_ok && p2_ok;
      if (c.note.empty())
        c.note = "player 1 verified by the invariant-state witness; player 2 samples refuted";
      add_check(7, std::move(c));
    }
  }

  for (const TableRow& row : report.rows) report.all_pass = report.all_pass && row.pass;
  return report;
}

} // namespace qsg
