#pragma once

#include <string>
#include <vector>

#include "multigerm/errors.hpp"
#include "multigerm/germ.hpp"
#include "multigerm/linalg.hpp"

namespace multigerm {

// Finite-dimensional space of m-jets of multigerms with k components in
// n coordinates. Basis vectors are indexed by (component, coordinate,
// power) with 1 <= power <= level, ordered lexicographically; that order
// is fixed globally so echelon forms are reproducible.
struct JetSpaceShape {
  int k = 0;
  int n = 0;
  int level = 0;

  int dim() const { return k * n * level; }

  int index(int comp, int coord, int power) const {
    return (comp * n + coord) * level + (power - 1);
  }

  struct BasisKey {
    int comp, coord, power;
  };

  BasisKey key(int index) const {
    int power = index % level + 1;
    int rest = index / level;
    return BasisKey{rest / n, rest % n, power};
  }

  bool matches(const Multigerm& f) const {
    return f.k() == k && f.ambient == n && f.truncation >= level;
  }
};

inline JetSpaceShape shape_of(const Multigerm& f, int level) {
  if (level < 1) throw PreconditionError("jet level must be >= 1");
  if (level > f.truncation)
    throw TruncationError("jet level exceeds truncation order");
  return JetSpaceShape{f.k(), f.ambient, level};
}

inline SparseVec to_vector(const JetSpaceShape& s, const Multigerm& f) {
  if (f.k() != s.k || f.ambient != s.n)
    throw DimensionMismatchError("multigerm does not fit the jet space");
  SparseVec out;
  for (int i = 0; i < s.k; ++i)
    for (int j = 0; j < s.n; ++j)
      for (const auto& [e, c] : f.components[i].coords[j].terms())
        if (e <= s.level) out.emplace_back(s.index(i, j, e), c);
  std::sort(out.begin(), out.end());
  return out;
}

// Vector of per-component coordinate jets (same layout as a multigerm but
// without the order >= 1 requirement on entries).
inline SparseVec jets_to_vector(const JetSpaceShape& s,
                                const std::vector<std::vector<Jet>>& comps) {
  SparseVec out;
  for (int i = 0; i < s.k; ++i)
    for (int j = 0; j < s.n; ++j)
      for (const auto& [e, c] : comps[i][j].terms())
        if (e >= 1 && e <= s.level) out.emplace_back(s.index(i, j, e), c);
  std::sort(out.begin(), out.end());
  return out;
}

inline Multigerm from_vector(const JetSpaceShape& s, const SparseVec& v) {
  std::vector<ComponentGerm> comps(s.k);
  for (auto& c : comps) c.coords.assign(s.n, Jet::zero(s.level));
  for (const auto& [idx, c] : v) {
    auto key = s.key(idx);
    comps[key.comp].coords[key.coord].add_term(key.power, c);
  }
  return make_multigerm(std::move(comps));
}

inline std::string vector_str(const JetSpaceShape& s, const SparseVec& v) {
  Multigerm f = from_vector(s, v);
  std::string out = "(";
  for (int i = 0; i < s.k; ++i) {
    if (i) out += ", ";
    out += "(";
    for (int j = 0; j < s.n; ++j) {
      if (j) out += ", ";
      out += f.components[i].coords[j].str();
    }
    out += ")";
  }
  out += ")";
  return out;
}

}  // namespace multigerm
