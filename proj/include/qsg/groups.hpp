// Action groups: finitely generated closures, named groups (S_n, U(n)),
// three-valued membership, and invariant-subspace computation.
#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "qsg/linalg.hpp"

namespace qsg {

// Three-valued answer for queries that can be cut short by an incomplete
// closure enumeration. `unknown` is reported distinctly, never guessed.
enum class Ternary { no, yes, unknown };

inline constexpr std::size_t kDefaultClosureCap = 50'000;

namespace detail {

inline std::string element_key(const UnitaryMatrix& u) {
  if (u.permutation()) {
    std::string key = "p:";
    for (int i : *u.permutation()) {
      key += std::to_string(i);
      key += ',';
    }
    return key;
  }
  return "m:" + rounded_key(u.entries());
}

inline bool entries_close(const UnitaryMatrix& a, const UnitaryMatrix& b, double tol) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t k = 0; k < a.entries().size(); ++k)
    if (std::abs(a.entries()[k] - b.entries()[k]) > tol) return false;
  return true;
}

} // namespace detail

// All distinct elements reachable from the generators by products, in
// deterministic discovery order (identity first).
struct GroupClosure {
  std::vector<UnitaryMatrix> elements;
  std::unordered_map<std::string, int> index;
  bool complete = true;

  // Index of a matching element (entrywise within kUnitaryTol), or -1.
  int find(const UnitaryMatrix& u) const {
    auto it = index.find(detail::element_key(u));
    if (it != index.end() &&
        detail::entries_close(elements[static_cast<std::size_t>(it->second)], u, kUnitaryTol))
      return it->second;
    for (std::size_t k = 0; k < elements.size(); ++k)
      if (detail::entries_close(elements[k], u, kUnitaryTol)) return static_cast<int>(k);
    return -1;
  }

  std::size_t size() const { return elements.size(); }
};

// A player's move repertoire: a finitely generated subgroup of U(n), the
// full symmetric group S_n, or all of U(n). Immutable; the closure is
// computed once on demand and shared.
class ActionGroup {
 public:
  enum class Kind { FiniteGenerated, NamedSymmetric, NamedUnitary };

  static ActionGroup finite_generated(int n, std::vector<UnitaryMatrix> generators,
                                      std::size_t closure_cap = kDefaultClosureCap) {
    for (const auto& g : generators)
      if (g.dim() != n) throw std::invalid_argument("action group: generator dimension mismatch");
    return ActionGroup(Kind::FiniteGenerated, n, std::move(generators), closure_cap);
  }
  static ActionGroup symmetric(int n, std::size_t closure_cap = kDefaultClosureCap) {
    return ActionGroup(Kind::NamedSymmetric, n, {}, closure_cap);
  }
  static ActionGroup unitary(int n) { return ActionGroup(Kind::NamedUnitary, n, {}, 0); }

  Kind kind() const { return impl_->kind; }
  int dim() const { return impl_->n; }
  std::size_t closure_cap() const { return impl_->cap; }
  const std::vector<UnitaryMatrix>& generators() const { return impl_->generators; }
  bool enumerable() const { return impl_->kind != Kind::NamedUnitary; }

  const GroupClosure& closure() const {
    if (!enumerable()) throw std::invalid_argument("closure: U(n) is not enumerable");
    std::call_once(impl_->closure_once, [this] { impl_->closure = compute_closure(); });
    return *impl_->closure;
  }

  // Joint fixed space of the group, memoized; see invariant_subspace below.
  const std::vector<StateVector>& fixed_space(std::vector<StateVector> (*compute)(const ActionGroup&)) const {
    std::call_once(impl_->fixed_once, [this, compute] {
      impl_->fixed = std::make_unique<std::vector<StateVector>>(compute(*this));
    });
    return *impl_->fixed;
  }

 private:
  struct Impl {
    Kind kind;
    int n;
    std::vector<UnitaryMatrix> generators;
    std::size_t cap;
    mutable std::once_flag closure_once;
    mutable std::unique_ptr<GroupClosure> closure;
    mutable std::once_flag fixed_once;
    mutable std::unique_ptr<std::vector<StateVector>> fixed;
  };

  ActionGroup(Kind kind, int n, std::vector<UnitaryMatrix> generators, std::size_t cap)
      : impl_(std::make_shared<Impl>()) {
    if (n <= 0) throw std::invalid_argument("action group: dimension must be positive");
    impl_->kind = kind;
    impl_->n = n;
    impl_->generators = std::move(generators);
    impl_->cap = cap;
  }

  std::unique_ptr<GroupClosure> compute_closure() const {
    auto cl = std::make_unique<GroupClosure>();
    const int n = impl_->n;
    auto add = [&cl](UnitaryMatrix u) -> bool {
      std::string key = detail::element_key(u);
      if (cl->index.count(key)) return false;
      cl->index.emplace(std::move(key), static_cast<int>(cl->elements.size()));
      cl->elements.push_back(std::move(u));
      return true;
    };

    if (impl_->kind == Kind::NamedSymmetric) {
      std::vector<int> image(static_cast<std::size_t>(n));
      std::iota(image.begin(), image.end(), 0);
      do {
        if (cl->size() >= impl_->cap) {
          cl->complete = false;
          break;
        }
        std::vector<cplx> e(static_cast<std::size_t>(n) * n, 0.0);
        for (int c = 0; c < n; ++c)
          e[static_cast<std::size_t>(image[static_cast<std::size_t>(c)]) * n + c] = 1.0;
        add(UnitaryMatrix(n, std::move(e), GateExpr::opaque(n, {})));
      } while (std::next_permutation(image.begin(), image.end()));
      if (!cl->elements.empty()) {
        // next_permutation starts from the identity arrangement
        cl->elements.front() = identity(n);
      }
      return cl;
    }

    // Product saturation from the identity. Left and right products cover
    // generator sets that are not closed under inversion.
    add(identity(n));
    std::deque<int> work{0};
    while (!work.empty()) {
      int xi = work.front();
      work.pop_front();
      for (const auto& g : impl_->generators) {
        for (int side = 0; side < 2; ++side) {
          UnitaryMatrix x = cl->elements[static_cast<std::size_t>(xi)];
          UnitaryMatrix prod = side == 0 ? compose(x, g) : compose(g, x);
          if (cl->index.count(detail::element_key(prod))) continue;
          if (cl->size() >= impl_->cap) {
            cl->complete = false;
            return cl;
          }
          if (add(std::move(prod))) work.push_back(static_cast<int>(cl->size()) - 1);
        }
      }
    }
    return cl;
  }

  std::shared_ptr<Impl> impl_;
};

// Membership per the group's notion of identity: exact-matrix match, no
// quotient by global phase.
inline Ternary contains(const ActionGroup& g, const UnitaryMatrix& u) {
  if (g.dim() != u.dim()) throw std::invalid_argument("contains: dimension mismatch");
  switch (g.kind()) {
    case ActionGroup::Kind::NamedUnitary:
      return Ternary::yes; // certified unitary at construction
    case ActionGroup::Kind::NamedSymmetric:
      return u.permutation() ? Ternary::yes : Ternary::no;
    case ActionGroup::Kind::FiniteGenerated: {
      const GroupClosure& cl = g.closure();
      if (cl.find(u) >= 0) return Ternary::yes;
      return cl.complete ? Ternary::no : Ternary::unknown;
    }
  }
  return Ternary::no;
}

// Whether the group contains all of S_n. Adjacent transpositions generate
// S_n, so membership of each suffices.
inline Ternary contains_symmetric(const ActionGroup& g) {
  if (g.kind() != ActionGroup::Kind::FiniteGenerated) return Ternary::yes;
  bool unknown = false;
  for (int i = 0; i + 1 < g.dim(); ++i) {
    Ternary t = contains(g, transposition(g.dim(), i, i + 1));
    if (t == Ternary::no) return Ternary::no;
    if (t == Ternary::unknown) unknown = true;
  }
  return unknown ? Ternary::unknown : Ternary::yes;
}

namespace detail {

// Generators whose fixed spaces pin down the whole group's fixed space.
inline std::vector<UnitaryMatrix> invariance_generators(const ActionGroup& g) {
  if (g.kind() == ActionGroup::Kind::NamedSymmetric) {
    std::vector<UnitaryMatrix> gens;
    for (int i = 0; i + 1 < g.dim(); ++i) gens.push_back(transposition(g.dim(), i, i + 1));
    return gens;
  }
  return g.generators();
}

} // namespace detail

namespace detail {

inline std::vector<StateVector> compute_fixed_space(const ActionGroup& g) {
  const int n = g.dim();
  if (g.kind() == ActionGroup::Kind::NamedUnitary) return {}; // only the zero vector
  std::vector<UnitaryMatrix> gens = invariance_generators(g);
  if (gens.empty()) return Basis{n}.states(); // trivial group fixes everything

  std::vector<cplx> stacked;
  stacked.reserve(gens.size() * static_cast<std::size_t>(n) * n);
  for (const auto& gen : gens)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        stacked.push_back(gen.at(r, c) - (r == c ? cplx(1.0) : cplx(0.0)));
  return null_space(static_cast<int>(gens.size()) * n, n, std::move(stacked));
}

} // namespace detail

// Orthonormal basis of the joint fixed space of all group elements. A
// vector fixed by every generator is fixed by every product and inverse,
// so stacking (g - I) over generators is enough. The solve is memoized per
// group; returned by value so the result outlives temporary groups.
inline std::vector<StateVector> invariant_subspace(const ActionGroup& g) {
  return g.fixed_space(&detail::compute_fixed_space);
}

namespace detail {

inline bool in_span(const StateVector& v, const std::vector<StateVector>& basis) {
  std::vector<cplx> resid(v.amps());
  for (const auto& b : basis) {
    cplx proj = 0.0;
    for (int k = 0; k < v.dim(); ++k) proj += std::conj(b[k]) * resid[static_cast<std::size_t>(k)];
    for (int k = 0; k < v.dim(); ++k) resid[static_cast<std::size_t>(k)] -= proj * b[k];
  }
  double n2 = 0.0;
  for (const cplx& z : resid) n2 += std::norm(z);
  return std::sqrt(n2) <= kKernelTol;
}

// Unitary sending `from` to `to`, completed by orthonormal extension over
// the standard basis.
inline UnitaryMatrix map_state_unitary(const StateVector& from, const StateVector& to) {
  const int n = from.dim();
  auto extend = [n](const StateVector& first) {
    std::vector<std::vector<cplx>> basis{first.amps()};
    for (int k = 0; k < n && static_cast<int>(basis.size()) < n; ++k) {
      std::vector<cplx> cand(static_cast<std::size_t>(n), 0.0);
      cand[static_cast<std::size_t>(k)] = 1.0;
      for (const auto& b : basis) {
        cplx proj = 0.0;
        for (int i = 0; i < n; ++i) proj += std::conj(b[static_cast<std::size_t>(i)]) * cand[static_cast<std::size_t>(i)];
        for (int i = 0; i < n; ++i) cand[static_cast<std::size_t>(i)] -= proj * b[static_cast<std::size_t>(i)];
      }
      double n2 = 0.0;
      for (const cplx& z : cand) n2 += std::norm(z);
      if (std::sqrt(n2) < 1e-6) continue;
      for (cplx& z : cand) z /= std::sqrt(n2);
      basis.push_back(std::move(cand));
    }
    return basis;
  };
  auto src = extend(from);
  auto dst = extend(to);
  std::vector<cplx> e(static_cast<std::size_t>(n) * n, 0.0);
  for (std::size_t k = 0; k < src.size(); ++k)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        e[static_cast<std::size_t>(r) * n + c] += dst[k][static_cast<std::size_t>(r)] * std::conj(src[k][static_cast<std::size_t>(c)]);
  return UnitaryMatrix(n, std::move(e));
}

} // namespace detail

// Result of the search for a move driving the start state into the
// opponent's invariant subspace.
struct InvariantReach {
  Ternary found = Ternary::no;
  std::optional<UnitaryMatrix> action;
  std::optional<StateVector> state;
};

// Searches gA for a move sending q0 into gB's invariant subspace. For U(n)
// the named Fourier gate is preferred when it works; otherwise an explicit
// unitary is completed by orthonormal extension.
inline InvariantReach reachable_invariant(const ActionGroup& gA, const ActionGroup& gB,
                                          const StateVector& q0) {
  const std::vector<StateVector> inv = invariant_subspace(gB);
  if (inv.empty()) return {};

  if (gA.kind() == ActionGroup::Kind::NamedUnitary) {
    if (detail::in_span(q0, inv)) return {Ternary::yes, identity(gA.dim()), q0};
    UnitaryMatrix f = qft(gA.dim());
    StateVector fq = apply(f, q0);
    if (detail::in_span(fq, inv)) return {Ternary::yes, f, fq};
    UnitaryMatrix u = detail::map_state_unitary(q0, inv.front());
    return {Ternary::yes, std::move(u), inv.front()};
  }

  const GroupClosure& cl = gA.closure();
  for (const auto& u : cl.elements) {
    StateVector v = apply(u, q0);
    if (detail::in_span(v, inv)) return {Ternary::yes, u, std::move(v)};
  }
  return {cl.complete ? Ternary::no : Ternary::unknown, std::nullopt, std::nullopt};
}

} // namespace qsg
