// Dense complex linear algebra for small fixed dimensions: unit state
// vectors, certified unitary matrices, named gate constructors, and the
// kernel solver used by the invariant-subspace machinery.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsg {

using cplx = std::complex<double>;

// Tolerances used throughout. Game depths are tiny, so drift past these
// bounds indicates a bug rather than accumulated roundoff.
inline constexpr double kUnitaryTol = 1e-9;   // max-entry norm of U†U - I
inline constexpr double kStateNormTol = 1e-9; // | ||v|| - 1 |
inline constexpr double kPhaseTol = 1e-9;     // 1 - |<u|v>|
inline constexpr double kKernelTol = 1e-8;    // pivot threshold / residuals
inline constexpr double kGridStep = 1e-7;     // dedup rounding grid

// Structural description of how a unitary was assembled. Kept alongside the
// numeric entries so that moves can be reported and serialized as the terms
// they were built from instead of raw matrices.
struct GateExpr {
  enum class Kind { Identity, Transposition, Fourier, FourierDag, Opaque, Product };

  Kind kind = Kind::Opaque;
  int dim = 0;
  int a = 0, b = 0;              // Transposition indices
  std::vector<GateExpr> factors; // Product: factors[0]*...*factors[k], rightmost acts first
  std::vector<cplx> entries;     // Opaque payload (row-major)

  static GateExpr identity(int n) { return {Kind::Identity, n, 0, 0, {}, {}}; }
  static GateExpr transposition(int n, int i, int j) { return {Kind::Transposition, n, i, j, {}, {}}; }
  static GateExpr fourier(int n) { return {Kind::Fourier, n, 0, 0, {}, {}}; }
  static GateExpr fourier_dag(int n) { return {Kind::FourierDag, n, 0, 0, {}, {}}; }
  static GateExpr opaque(int n, std::vector<cplx> e) { return {Kind::Opaque, n, 0, 0, {}, std::move(e)}; }
  static GateExpr product(std::vector<GateExpr> fs) {
    GateExpr g{Kind::Product, 0, 0, 0, std::move(fs), {}};
    g.dim = g.factors.empty() ? 0 : g.factors.front().dim;
    return g;
  }

  std::string label() const {
    switch (kind) {
      case Kind::Identity: return "I";
      case Kind::Transposition: return "T_{" + std::to_string(a) + "," + std::to_string(b) + "}";
      case Kind::Fourier: return "F" + std::to_string(dim);
      case Kind::FourierDag: return "F" + std::to_string(dim) + "†";
      case Kind::Opaque: return "U";
      case Kind::Product: {
        std::string s;
        for (const auto& f : factors) {
          if (!s.empty()) s += ' ';
          s += f.label();
        }
        return s.empty() ? "I" : s;
      }
    }
    return "U";
  }
};

namespace detail {

// Rounds to the dedup grid, mapping -0.0 onto 0.0.
inline std::int64_t grid(double x, double step = kGridStep) {
  auto r = std::llround(x / step);
  return r == 0 ? 0 : r;
}

inline std::string rounded_key(const std::vector<cplx>& v, double step = kGridStep) {
  std::string key;
  key.reserve(v.size() * 8);
  for (const cplx& z : v) {
    key += std::to_string(grid(z.real(), step));
    key += ',';
    key += std::to_string(grid(z.imag(), step));
    key += ';';
  }
  return key;
}

} // namespace detail

// A unit-norm state of an n-dimensional system. Norm is certified on every
// construction, which keeps operator-application drift observable.
class StateVector {
 public:
  explicit StateVector(std::vector<cplx> amps) : amps_(std::move(amps)) {
    if (amps_.empty()) throw std::invalid_argument("state vector: empty");
    double n2 = 0.0;
    for (const cplx& z : amps_) n2 += std::norm(z);
    if (std::abs(std::sqrt(n2) - 1.0) > kStateNormTol)
      throw std::invalid_argument("state vector: norm deviates from 1 beyond tolerance");
  }

  int dim() const { return static_cast<int>(amps_.size()); }
  const cplx& operator[](int k) const { return amps_[static_cast<std::size_t>(k)]; }
  const std::vector<cplx>& amps() const { return amps_; }

 private:
  std::vector<cplx> amps_;
};

inline cplx inner_product(const StateVector& u, const StateVector& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
  cplx s = 0.0;
  for (int k = 0; k < u.dim(); ++k) s += std::conj(u[k]) * v[k];
  return s;
}

// Equality up to global phase: only the overlap magnitude is observable in a
// computational-basis measurement.
inline bool states_equal_up_to_phase(const StateVector& u, const StateVector& v) {
  return std::abs(inner_product(u, v)) >= 1.0 - kPhaseTol;
}

// An n-by-n matrix certified unitary at construction. Permutation matrices
// additionally carry their exact column-image map, so permutation-only
// computations stay exact.
class UnitaryMatrix {
 public:
  UnitaryMatrix(int n, std::vector<cplx> entries, GateExpr expr)
      : n_(n), entries_(std::move(entries)), expr_(std::move(expr)) {
    if (n_ <= 0 || entries_.size() != static_cast<std::size_t>(n_) * n_)
      throw std::invalid_argument("unitary: bad shape");
    certify_unitary();
    detect_permutation();
  }

  UnitaryMatrix(int n, std::vector<cplx> entries)
      : UnitaryMatrix(n, entries, GateExpr::opaque(n, entries)) {}

  int dim() const { return n_; }
  const cplx& at(int r, int c) const { return entries_[static_cast<std::size_t>(r) * n_ + c]; }
  const std::vector<cplx>& entries() const { return entries_; }
  const GateExpr& expr() const { return expr_; }
  std::string label() const { return expr_.label(); }

  // image[j] = i means basis column j is sent to basis row i.
  const std::optional<std::vector<int>>& permutation() const { return perm_; }

 private:
  void certify_unitary() {
    for (int r = 0; r < n_; ++r) {
      for (int c = 0; c < n_; ++c) {
        cplx s = 0.0; // (U†U)[r][c]
        for (int k = 0; k < n_; ++k) s += std::conj(at(k, r)) * at(k, c);
        if (r == c) s -= 1.0;
        if (std::abs(s) > kUnitaryTol)
          throw std::invalid_argument("unitary: U†U deviates from identity beyond tolerance");
      }
    }
  }

  void detect_permutation() {
    std::vector<int> image(static_cast<std::size_t>(n_), -1);
    for (int c = 0; c < n_; ++c) {
      for (int r = 0; r < n_; ++r) {
        const cplx& z = at(r, c);
        if (std::abs(z - 1.0) <= kUnitaryTol) {
          if (image[c] != -1) return; // two near-unit entries in one column
          image[c] = r;
        } else if (std::abs(z) > kUnitaryTol) {
          return;
        }
      }
      if (image[c] == -1) return;
    }
    // Snap entries so the classical path is exact from here on.
    std::fill(entries_.begin(), entries_.end(), cplx(0.0));
    for (int c = 0; c < n_; ++c) entries_[static_cast<std::size_t>(image[c]) * n_ + c] = 1.0;
    perm_ = std::move(image);
  }

  int n_;
  std::vector<cplx> entries_;
  GateExpr expr_;
  std::optional<std::vector<int>> perm_;
};

inline UnitaryMatrix identity(int n) {
  std::vector<cplx> e(static_cast<std::size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) e[static_cast<std::size_t>(k) * n + k] = 1.0;
  return UnitaryMatrix(n, std::move(e), GateExpr::identity(n));
}

inline StateVector basis_state(int n, int k) {
  if (k < 0 || k >= n) throw std::out_of_range("basis_state: index out of range");
  std::vector<cplx> a(static_cast<std::size_t>(n), 0.0);
  a[static_cast<std::size_t>(k)] = 1.0;
  return StateVector(std::move(a));
}

// Permutation matrix swapping basis columns i and j.
inline UnitaryMatrix transposition(int n, int i, int j) {
  if (i == j) throw std::invalid_argument("transposition: indices must differ");
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("transposition: index out of range");
  std::vector<cplx> e(static_cast<std::size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) {
    int img = k == i ? j : (k == j ? i : k);
    e[static_cast<std::size_t>(img) * n + k] = 1.0;
  }
  int lo = std::min(i, j), hi = std::max(i, j);
  return UnitaryMatrix(n, std::move(e), GateExpr::transposition(n, lo, hi));
}

// Discrete Fourier transform: entry (j,k) = exp(2*pi*i*j*k/n)/sqrt(n).
inline UnitaryMatrix qft(int n) {
  if (n < 1) throw std::invalid_argument("qft: dimension must be positive");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<cplx> e(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      // Reduce the exponent mod n to keep the angle small and accurate.
      int p = static_cast<int>((static_cast<long long>(j) * k) % n);
      e[static_cast<std::size_t>(j) * n + k] =
          std::polar(scale, 2.0 * std::numbers::pi * p / n);
    }
  return UnitaryMatrix(n, std::move(e), GateExpr::fourier(n));
}

namespace detail {

inline GateExpr adjoint_expr(const GateExpr& g, int n, const std::vector<cplx>& adj_entries) {
  using K = GateExpr::Kind;
  switch (g.kind) {
    case K::Identity:
    case K::Transposition: return g;
    case K::Fourier: return GateExpr::fourier_dag(n);
    case K::FourierDag: return GateExpr::fourier(n);
    case K::Opaque: return GateExpr::opaque(n, adj_entries);
    case K::Product: {
      std::vector<GateExpr> fs;
      fs.reserve(g.factors.size());
      for (auto it = g.factors.rbegin(); it != g.factors.rend(); ++it) {
        // Factor entries are not retained for non-opaque kinds; opaque
        // factors carry their own payload and adjoint it locally.
        std::vector<cplx> fa;
        if (it->kind == K::Opaque) {
          int m = it->dim;
          fa.resize(static_cast<std::size_t>(m) * m);
          for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
              fa[static_cast<std::size_t>(r) * m + c] =
                  std::conj(it->entries[static_cast<std::size_t>(c) * m + r]);
        }
        fs.push_back(adjoint_expr(*it, it->dim, fa));
      }
      return GateExpr::product(std::move(fs));
    }
  }
  return GateExpr::opaque(n, adj_entries);
}

} // namespace detail

inline UnitaryMatrix adjoint(const UnitaryMatrix& u) {
  const int n = u.dim();
  std::vector<cplx> e(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) e[static_cast<std::size_t>(r) * n + c] = std::conj(u.at(c, r));
  GateExpr expr = detail::adjoint_expr(u.expr(), n, e);
  return UnitaryMatrix(n, std::move(e), std::move(expr));
}

// Matrix product UV; V acts first. Exact on the permutation path.
inline UnitaryMatrix compose(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("compose: dimension mismatch");
  const int n = u.dim();
  std::vector<cplx> e(static_cast<std::size_t>(n) * n, 0.0);
  if (u.permutation() && v.permutation()) {
    const auto& pu = *u.permutation();
    const auto& pv = *v.permutation();
    for (int c = 0; c < n; ++c) e[static_cast<std::size_t>(pu[pv[c]]) * n + c] = 1.0;
  } else {
    for (int r = 0; r < n; ++r)
      for (int k = 0; k < n; ++k) {
        const cplx urk = u.at(r, k);
        if (urk == cplx(0.0)) continue;
        for (int c = 0; c < n; ++c) e[static_cast<std::size_t>(r) * n + c] += urk * v.at(k, c);
      }
  }

  std::vector<GateExpr> fs;
  auto push = [&fs](const GateExpr& g) {
    if (g.kind == GateExpr::Kind::Identity) return;
    if (g.kind == GateExpr::Kind::Product)
      fs.insert(fs.end(), g.factors.begin(), g.factors.end());
    else
      fs.push_back(g);
  };
  push(u.expr());
  push(v.expr());
  GateExpr expr = fs.empty()     ? GateExpr::identity(n)
                  : fs.size() == 1 ? fs.front()
                                   : GateExpr::product(std::move(fs));
  return UnitaryMatrix(n, std::move(e), std::move(expr));
}

inline StateVector apply(const UnitaryMatrix& u, const StateVector& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("apply: dimension mismatch");
  const int n = u.dim();
  std::vector<cplx> out(static_cast<std::size_t>(n), 0.0);
  if (u.permutation()) {
    const auto& p = *u.permutation();
    for (int c = 0; c < n; ++c) out[static_cast<std::size_t>(p[c])] = v[c];
  } else {
    for (int r = 0; r < n; ++r) {
      cplx s = 0.0;
      for (int c = 0; c < n; ++c) s += u.at(r, c) * v[c];
      out[static_cast<std::size_t>(r)] = s;
    }
  }
  return StateVector(std::move(out));
}

inline double max_entry_diff(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("max_entry_diff: dimension mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < u.entries().size(); ++k)
    m = std::max(m, std::abs(u.entries()[k] - v.entries()[k]));
  return m;
}

// Orthonormal basis of { x : M x = 0 } for a rows-by-cols complex matrix
// (row-major). Elimination with full pivoting; pivots below kKernelTol are
// treated as zero. Dimensions here are tiny, so conditioning is not a
// concern.
inline std::vector<StateVector> null_space(int rows, int cols, std::vector<cplx> m) {
  if (rows <= 0 || cols <= 0 || m.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("null_space: bad shape");
  auto at = [&m, cols](int r, int c) -> cplx& { return m[static_cast<std::size_t>(r) * cols + c]; };

  std::vector<int> colperm(static_cast<std::size_t>(cols));
  for (int c = 0; c < cols; ++c) colperm[static_cast<std::size_t>(c)] = c;

  int rank = 0;
  const int steps = std::min(rows, cols);
  for (int s = 0; s < steps; ++s) {
    int pr = -1, pc = -1;
    double best = kKernelTol;
    for (int r = s; r < rows; ++r)
      for (int c = s; c < cols; ++c)
        if (std::abs(at(r, c)) > best) { best = std::abs(at(r, c)); pr = r; pc = c; }
    if (pr < 0) break;
    if (pr != s)
      for (int c = 0; c < cols; ++c) std::swap(at(s, c), at(pr, c));
    if (pc != s) {
      for (int r = 0; r < rows; ++r) std::swap(at(r, s), at(r, pc));
      std::swap(colperm[static_cast<std::size_t>(s)], colperm[static_cast<std::size_t>(pc)]);
    }
    for (int r = s + 1; r < rows; ++r) {
      cplx f = at(r, s) / at(s, s);
      if (f == cplx(0.0)) continue;
      at(r, s) = 0.0;
      for (int c = s + 1; c < cols; ++c) at(r, c) -= f * at(s, c);
    }
    ++rank;
  }

  std::vector<std::vector<cplx>> basis;
  for (int f = rank; f < cols; ++f) {
    std::vector<cplx> xp(static_cast<std::size_t>(cols), 0.0);
    xp[static_cast<std::size_t>(f)] = 1.0;
    for (int i = rank - 1; i >= 0; --i) {
      cplx s = 0.0;
      for (int j = i + 1; j < cols; ++j) s += at(i, j) * xp[static_cast<std::size_t>(j)];
      xp[static_cast<std::size_t>(i)] = -s / at(i, i);
    }
    std::vector<cplx> x(static_cast<std::size_t>(cols), 0.0);
    for (int j = 0; j < cols; ++j) x[static_cast<std::size_t>(colperm[static_cast<std::size_t>(j)])] = xp[static_cast<std::size_t>(j)];
    basis.push_back(std::move(x));
  }

  // Modified Gram-Schmidt.
  std::vector<StateVector> out;
  for (auto& x : basis) {
    for (const auto& q : out) {
      cplx proj = 0.0;
      for (int k = 0; k < cols; ++k) proj += std::conj(q[k]) * x[static_cast<std::size_t>(k)];
      for (int k = 0; k < cols; ++k) x[static_cast<std::size_t>(k)] -= proj * q[k];
    }
    double n2 = 0.0;
    for (const cplx& z : x) n2 += std::norm(z);
    double nn = std::sqrt(n2);
    for (cplx& z : x) z /= nn;
    out.emplace_back(std::move(x));
  }
  return out;
}

// The computational basis of dimension n.
struct Basis {
  int n;
  StateVector state(int k) const { return basis_state(n, k); }
  std::vector<StateVector> states() const {
    std::vector<StateVector> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out.push_back(basis_state(n, k));
    return out;
  }
};

} // namespace qsg
