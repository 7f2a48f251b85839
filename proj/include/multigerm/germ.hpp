#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "multigerm/errors.hpp"
#include "multigerm/jet.hpp"
#include "multigerm/linalg.hpp"

namespace multigerm {

// Monomial x^alpha in the ambient coordinates.
struct Monomial {
  std::vector<int> exponents;

  int degree() const {
    return std::accumulate(exponents.begin(), exponents.end(), 0);
  }
};

// One parametrized branch: n coordinate jets at a common truncation order,
// each vanishing at the origin. An identically zero component is
// representable but flagged degenerate and rejected by analytic operations.
struct ComponentGerm {
  std::vector<Jet> coords;

  int ambient_dim() const { return static_cast<int>(coords.size()); }
  int truncation() const { return coords.empty() ? 0 : coords[0].truncation(); }

  bool degenerate() const {
    for (const auto& c : coords)
      if (!c.is_zero()) return false;
    return true;
  }

  friend bool operator==(const ComponentGerm& a, const ComponentGerm& b) {
    return a.coords == b.coords;
  }
};

inline ComponentGerm make_component(std::vector<Jet> coords) {
  if (coords.empty()) throw PreconditionError("component needs coordinates");
  int n = coords[0].truncation();
  for (const auto& j : coords) {
    if (j.truncation() != n)
      throw PreconditionError("component coordinates at mixed truncations");
    if (j.has_constant_term())
      throw PreconditionError("component coordinate with a constant term");
  }
  return ComponentGerm{std::move(coords)};
}

struct Multigerm {
  int ambient = 0;
  int truncation = 0;
  std::vector<ComponentGerm> components;

  int k() const { return static_cast<int>(components.size()); }

  friend bool operator==(const Multigerm& a, const Multigerm& b) {
    return a.ambient == b.ambient && a.truncation == b.truncation &&
           a.components == b.components;
  }
};

inline Multigerm make_multigerm(std::vector<ComponentGerm> comps) {
  if (comps.empty()) throw PreconditionError("multigerm needs components");
  int n = comps[0].ambient_dim();
  int trunc = comps[0].truncation();
  for (const auto& c : comps) {
    if (c.ambient_dim() != n)
      throw DimensionMismatchError("components in mixed ambient dimensions");
    if (c.truncation() != trunc)
      throw PreconditionError("components at mixed truncations");
  }
  return Multigerm{n, trunc, std::move(comps)};
}

// Convenience builder from term lists; coordinates sharing one truncation.
inline Multigerm multigerm_from_strings(
    const std::vector<std::vector<std::string>>& comps, int truncation) {
  std::vector<ComponentGerm> out;
  for (const auto& comp : comps) {
    std::vector<Jet> coords;
    for (const auto& s : comp) coords.push_back(parse_jet(s, truncation));
    out.push_back(make_component(std::move(coords)));
  }
  return make_multigerm(std::move(out));
}

inline int multiplicity(const ComponentGerm& c) {
  if (c.degenerate())
    throw DegenerateComponentError("multiplicity of a zero component");
  int best = c.truncation() + 1;
  for (const auto& j : c.coords) {
    auto o = j.order();
    if (o && *o < best) best = *o;
  }
  return best;
}

inline Jet pullback(const ComponentGerm& c, const Monomial& m) {
  if (static_cast<int>(m.exponents.size()) != c.ambient_dim())
    throw DimensionMismatchError("monomial arity != ambient dimension");
  Jet out = Jet::monomial(c.truncation(), 0);
  for (int i = 0; i < c.ambient_dim(); ++i)
    for (int p = 0; p < m.exponents[i]; ++p) {
      out = out * c.coords[i];
      if (out.is_zero()) return out;
    }
  return out;
}

// Order of the pullback without forming the product; nullopt = infinity.
inline std::optional<int> pullback_order(const ComponentGerm& c,
                                         const Monomial& m) {
  long long total = 0;
  for (int i = 0; i < c.ambient_dim(); ++i) {
    if (m.exponents[i] == 0) continue;
    auto o = c.coords[i].order();
    if (!o) return std::nullopt;
    total += static_cast<long long>(*o) * m.exponents[i];
    if (total > c.truncation()) return std::nullopt;
  }
  return static_cast<int>(total);
}

inline Multigerm jet_of(const Multigerm& f, int level) {
  if (level > f.truncation)
    throw TruncationError("jet level exceeds truncation order");
  Multigerm out = f;
  for (auto& comp : out.components)
    for (auto& j : comp.coords) j = j.truncate_at(level);
  return out;
}

// Copy with a larger truncation order; the tail is taken to be zero, which
// is exact for polynomial data such as catalog normal forms.
inline Multigerm pad_truncation(const Multigerm& f, int truncation) {
  if (truncation < f.truncation) throw PreconditionError("pad would truncate");
  Multigerm out = f;
  out.truncation = truncation;
  for (auto& comp : out.components)
    for (auto& j : comp.coords) j = j.retruncate(truncation);
  return out;
}

// Copy at an arbitrary truncation order, dropping terms beyond it.
inline Multigerm with_truncation(const Multigerm& f, int truncation) {
  Multigerm out = f;
  out.truncation = truncation;
  for (auto& comp : out.components)
    for (auto& j : comp.coords) j = j.retruncate(truncation);
  return out;
}

struct StabilizeResult {
  Multigerm germ;
  // Row r holds the expression of new coordinate r in the old coordinates.
  std::vector<std::vector<Rational>> change;
  bool changed = false;
};

// Reduce to the minimal essential ambient dimension with an invertible
// left linear change; already-minimal multigerms are returned untouched.
inline StabilizeResult stabilize(const Multigerm& f) {
  int n = f.ambient;
  int cols_per_comp = f.truncation;
  EchelonBasis rows(/*track_combinations=*/true);
  for (int j = 0; j < n; ++j) {
    SparseVec row;
    for (int i = 0; i < f.k(); ++i)
      for (const auto& [e, c] : f.components[i].coords[j].terms())
        row.emplace_back(i * cols_per_comp + (e - 1), c);
    std::sort(row.begin(), row.end());
    rows.insert(std::move(row));
  }
  int rank = rows.rank();
  if (rank == n) {
    StabilizeResult out{f, {}, false};
    out.change.assign(n, std::vector<Rational>(n, Rational(0)));
    for (int j = 0; j < n; ++j) out.change[j][j] = 1;
    return out;
  }
  if (rank == 0)
    throw DegenerateComponentError("stabilize of an all-zero multigerm");
  StabilizeResult out;
  out.changed = true;
  out.change.reserve(rank);
  std::vector<ComponentGerm> comps(f.k());
  for (auto& c : comps) c.coords.assign(rank, Jet::zero(f.truncation));
  int r = 0;
  for (const auto& [pivot, row] : rows.rows()) {
    std::vector<Rational> combo(n, Rational(0));
    for (const auto& [idx, c] : row.combo) combo[idx] = c;
    out.change.push_back(std::move(combo));
    for (const auto& [col, c] : row.v) {
      int comp = col / cols_per_comp;
      int power = col % cols_per_comp + 1;
      comps[comp].coords[r].add_term(power, c);
    }
    ++r;
  }
  out.germ = make_multigerm(std::move(comps));
  return out;
}

struct SeparationResult {
  bool verified = false;
  int first = 0, second = 0;  // offending pair when unverified (1-based)
};

namespace detail {

// Projective leading-direction of a branch: coefficient vector at t^p,
// scaled so the first nonzero entry is 1.
inline std::vector<Rational> tangent_direction(const ComponentGerm& c) {
  int p = multiplicity(c);
  std::vector<Rational> dir(c.ambient_dim(), Rational(0));
  for (int j = 0; j < c.ambient_dim(); ++j) dir[j] = c.coords[j].coeff(p);
  for (auto& v : dir)
    if (!is_zero(v)) {
      Rational lead = v;
      for (auto& w : dir) w /= lead;
      break;
    }
  return dir;
}

inline int exponent_gcd(const ComponentGerm& c) {
  int g = 0;
  for (const auto& j : c.coords)
    for (const auto& [e, coeff] : j.terms()) g = std::gcd(g, e);
  return g;
}

// Achieved pullback orders of function germs of order >= min_degree, up to
// the truncation order: echelon reduction of monomial pullbacks by leading
// order.
// Enumerates monomials whose pullback order along c stays within the
// truncation bound; zero coordinates and overshooting exponents are pruned.
template <typename Fn>
void for_each_bounded_monomial(const ComponentGerm& c, int min_degree,
                               int order_bound, Fn&& fn) {
  int n = c.ambient_dim();
  std::vector<int> expo(n, 0);
  auto rec = [&](auto&& self, int pos, long long order, int degree) -> void {
    if (pos == n) {
      if (degree >= min_degree) fn(Monomial{expo}, static_cast<int>(order));
      return;
    }
    auto coord_order = c.coords[pos].order();
    for (int e = 0;; ++e) {
      expo[pos] = e;
      if (e > 0) {
        if (!coord_order) break;
        if (order + static_cast<long long>(e) * *coord_order > order_bound)
          break;
      }
      long long o = order + (e > 0 ? static_cast<long long>(e) * *coord_order
                                   : 0);
      self(self, pos + 1, o, degree + e);
    }
    expo[pos] = 0;
  };
  rec(rec, 0, 0, 0);
}

inline std::set<int> achieved_order_set(const ComponentGerm& c,
                                        int min_degree) {
  int bound = c.truncation();
  std::vector<Jet> rows;
  for_each_bounded_monomial(c, min_degree, bound,
                            [&](const Monomial& m, int /*order*/) {
                              if (m.degree() == 0 && min_degree > 0) return;
                              rows.push_back(pullback(c, m));
                            });
  std::map<int, Jet> by_order;
  std::set<int> achieved;
  while (!rows.empty()) {
    Jet j = std::move(rows.back());
    rows.pop_back();
    while (!j.is_zero()) {
      int o = *j.order();
      auto it = by_order.find(o);
      if (it == by_order.end()) {
        by_order.emplace(o, j);
        achieved.insert(o);
        break;
      }
      j = j - it->second.scaled(j.leading_coeff() / it->second.leading_coeff());
    }
  }
  return achieved;
}

}  // namespace detail

namespace detail {

inline Rational rational_pow(const Rational& r, long long e) {
  Rational out = 1;
  Rational base = e < 0 ? Rational(1) / r : r;
  long long n = e < 0 ? -e : e;
  for (long long i = 0; i < n; ++i) out *= base;
  return out;
}

// Decides whether g = f∘σ for a unit reparametrization σ, assuming both
// branches are primitive with identical coordinate order patterns and
// pairwise-consistent leading coefficients. Only callable when the orders
// have gcd 1, which pins σ's linear coefficient rationally.
inline bool reparametrization_match(const ComponentGerm& f,
                                    const ComponentGerm& g) {
  int n = f.ambient_dim();
  int trunc = std::min(f.truncation(), g.truncation());
  std::vector<int> finite;
  for (int j = 0; j < n; ++j)
    if (f.coords[j].order()) finite.push_back(j);
  // Bezout combination of the orders reconstructs c = σ'(0).
  long long current_gcd = 0;
  Rational c = 1;
  for (int j : finite) {
    long long d = *f.coords[j].order();
    Rational r = g.coords[j].leading_coeff() / f.coords[j].leading_coeff();
    // Extended gcd of (current_gcd, d); c maintains c_true^current_gcd.
    long long a = current_gcd, b = d, x = 0, y = 1, px = 1, py = 0;
    while (b != 0) {
      long long q = a / b;
      std::swap(a, b);
      b -= q * a;
      std::swap(px, x);
      x -= q * px;
      std::swap(py, y);
      y -= q * py;
    }
    c = rational_pow(c, px) * rational_pow(r, py);
    current_gcd = a;
  }
  if (current_gcd != 1)
    throw InternalError("reparametrization solve needs gcd-1 orders");
  int j0 = finite.front();
  int d0 = *f.coords[j0].order();

  Jet sigma = Jet::monomial(trunc, 1, c);
  Rational lf = f.coords[j0].leading_coeff();
  for (int guard = 0; guard <= trunc + 2; ++guard) {
    Jet h = compose(f.coords[j0].retruncate(trunc), sigma) -
            g.coords[j0].retruncate(trunc);
    if (h.is_zero()) break;
    int deg = *h.order();
    int e = deg - d0 + 1;
    if (e < 2) return false;
    if (e > trunc) break;
    Rational fix =
        -h.coeff(deg) / (Rational(d0) * lf * rational_pow(c, d0 - 1));
    sigma.add_term(e, fix);
  }
  for (int j = 0; j < n; ++j)
    if (compose(f.coords[j].retruncate(trunc), sigma) !=
        g.coords[j].retruncate(trunc))
      return false;
  return true;
}

}  // namespace detail

// Best-effort certificate that component images intersect only at the
// origin. For branches certified primitive (exponent support with gcd 1,
// stable under any continuation of the jet), image equality forces an
// exact unit reparametrization, which is decided over Q: order patterns,
// leading-coefficient consistency, then a triangular solve. Pairs with a
// possible multiple cover or an indecisive solve stay unverified, since
// truncated jets cannot decide image intersection in general.
inline SeparationResult separate_images_check(const Multigerm& f) {
  for (int a = 0; a < f.k(); ++a) {
    for (int b = a + 1; b < f.k(); ++b) {
      const auto& ca = f.components[a];
      const auto& cb = f.components[b];
      if (ca.degenerate() || cb.degenerate())
        return {false, a + 1, b + 1};
      if (ca == cb) return {false, a + 1, b + 1};
      if (detail::tangent_direction(ca) != detail::tangent_direction(cb))
        continue;
      bool prim_a = detail::exponent_gcd(ca) == 1;
      bool prim_b = detail::exponent_gcd(cb) == 1;
      if (!prim_a || !prim_b) return {false, a + 1, b + 1};

      std::vector<std::optional<int>> orders_a, orders_b;
      for (int j = 0; j < f.ambient; ++j) {
        orders_a.push_back(ca.coords[j].order());
        orders_b.push_back(cb.coords[j].order());
      }
      if (orders_a != orders_b) continue;

      // Leading coefficients must satisfy r_j^{d_i} = r_i^{d_j} for a
      // shared reparametrization to exist at all.
      bool consistent = true;
      long long order_gcd = 0;
      for (int j = 0; j < f.ambient && consistent; ++j) {
        if (!orders_a[j]) continue;
        order_gcd = std::gcd(order_gcd, static_cast<long long>(*orders_a[j]));
        Rational rj = cb.coords[j].leading_coeff() / ca.coords[j].leading_coeff();
        for (int i = 0; i < j; ++i) {
          if (!orders_a[i]) continue;
          Rational ri =
              cb.coords[i].leading_coeff() / ca.coords[i].leading_coeff();
          if (detail::rational_pow(rj, *orders_a[i]) !=
              detail::rational_pow(ri, *orders_a[j]))
            consistent = false;
        }
      }
      if (!consistent) continue;
      if (order_gcd == 1) {
        if (!detail::reparametrization_match(ca, cb)) continue;
        return {false, a + 1, b + 1};
      }
      if (detail::achieved_order_set(ca, 1) != detail::achieved_order_set(cb, 1))
        continue;
      return {false, a + 1, b + 1};
    }
  }
  return {true, 0, 0};
}

// Polynomial map between coordinate spaces; the building block for left
// coordinate changes in property tests and catalog confirmation.
struct PolyMap {
  int n_in = 0;
  // coords[j]: the j-th output coordinate as a monomial combination.
  std::vector<std::vector<std::pair<Monomial, Rational>>> coords;

  int n_out() const { return static_cast<int>(coords.size()); }

  std::vector<Jet> apply(const ComponentGerm& c) const {
    if (c.ambient_dim() != n_in)
      throw DimensionMismatchError("poly map arity mismatch");
    std::vector<Jet> out;
    out.reserve(coords.size());
    for (const auto& coord : coords) {
      Jet j = Jet::zero(c.truncation());
      for (const auto& [m, coeff] : coord)
        j = j + pullback(c, m).scaled(coeff);
      out.push_back(std::move(j));
    }
    return out;
  }

  bool linear_part_invertible() const {
    if (n_in != n_out()) return false;
    EchelonBasis rows;
    for (const auto& coord : coords) {
      std::map<int, Rational> entries;
      for (const auto& [m, coeff] : coord)
        if (m.degree() == 1)
          for (int i = 0; i < n_in; ++i)
            if (m.exponents[i] == 1) entries[i] += coeff;
      SparseVec row;
      for (const auto& [i, v] : entries)
        if (!is_zero(v)) row.emplace_back(i, v);
      rows.insert(std::move(row));
    }
    return rows.rank() == n_in;
  }
};

// Applies a right-left change: new component i = L(f_i) composed with the
// unit reparametrization u_i.
inline Multigerm apply_change(const Multigerm& f, const PolyMap& left,
                              const std::vector<Jet>& rights) {
  if (left.n_in != f.ambient || left.n_out() != f.ambient)
    throw DimensionMismatchError("left change has wrong arity");
  if (static_cast<int>(rights.size()) != f.k())
    throw DimensionMismatchError("one reparametrization per component");
  if (!left.linear_part_invertible())
    throw PreconditionError("left change is not invertible");
  std::vector<ComponentGerm> comps;
  for (int i = 0; i < f.k(); ++i) {
    const Jet& u = rights[i];
    if (u.order() != std::optional<int>(1) || is_zero(u.coeff(1)))
      throw PreconditionError("reparametrization must be a unit jet");
    std::vector<Jet> moved = left.apply(f.components[i]);
    for (auto& j : moved) j = compose(j, u);
    comps.push_back(ComponentGerm{std::move(moved)});
  }
  return make_multigerm(std::move(comps));
}

// Canonical component ordering: by multiplicity, then by the coordinate
// jets themselves. Used wherever "up to permutation of components" must be
// resolved deterministically.
inline Multigerm sort_components(const Multigerm& f) {
  Multigerm out = f;
  std::stable_sort(out.components.begin(), out.components.end(),
                   [](const ComponentGerm& a, const ComponentGerm& b) {
                     bool da = a.degenerate(), db = b.degenerate();
                     if (da != db) return db;
                     if (!da && !db) {
                       int pa = multiplicity(a), pb = multiplicity(b);
                       if (pa != pb) return pa < pb;
                     }
                     return a.coords < b.coords;
                   });
  return out;
}

}  // namespace multigerm
