#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "multigerm/errors.hpp"
#include "multigerm/rational.hpp"

namespace multigerm {

// Sparse vector over Q: (index, coefficient) pairs sorted by index, no
// zero coefficients stored.
using SparseVec = std::vector<std::pair<int, Rational>>;

inline SparseVec sv_scaled(const SparseVec& a, const Rational& c) {
  SparseVec out;
  if (is_zero(c)) return out;
  out.reserve(a.size());
  for (const auto& [i, v] : a) out.emplace_back(i, v * c);
  return out;
}

// a + c*b, merged by index.
inline SparseVec sv_axpy(const SparseVec& a, const Rational& c,
                         const SparseVec& b) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  size_t ia = 0, ib = 0;
  while (ia < a.size() || ib < b.size()) {
    if (ib == b.size() || (ia < a.size() && a[ia].first < b[ib].first)) {
      out.push_back(a[ia++]);
    } else if (ia == a.size() || b[ib].first < a[ia].first) {
      Rational v = c * b[ib].second;
      if (!is_zero(v)) out.emplace_back(b[ib].first, std::move(v));
      ++ib;
    } else {
      Rational v = a[ia].second + c * b[ib].second;
      if (!is_zero(v)) out.emplace_back(a[ia].first, std::move(v));
      ++ia;
      ++ib;
    }
  }
  return out;
}

inline Rational sv_at(const SparseVec& a, int index) {
  for (const auto& [i, v] : a)
    if (i == index) return v;
  return Rational(0);
}

// Row space maintained in reduced echelon form with unit pivots; rows are
// keyed by pivot column so the basis order is canonical. Optionally tracks
// each row as a combination of the inserted generators, which also yields
// kernel combinations for generators that reduce to zero.
class EchelonBasis {
 public:
  explicit EchelonBasis(bool track_combinations = false)
      : track_(track_combinations) {}

  struct Row {
    SparseVec v;
    SparseVec combo;  // over generator indices, valid when tracking
  };

  // Returns true when the vector enlarged the span.
  bool insert(SparseVec v) {
    SparseVec combo;
    if (track_) combo = {{n_inserted_, Rational(1)}};
    ++n_inserted_;
    reduce_tracked(v, combo);
    if (v.empty()) {
      if (track_) kernel_.push_back(std::move(combo));
      return false;
    }
    Rational lead = v.front().second;
    v = sv_scaled(v, 1 / lead);
    if (track_) combo = sv_scaled(combo, 1 / lead);
    int pivot = v.front().first;
    // Keep the form reduced: clear the new pivot column from older rows.
    for (auto& [p, row] : rows_) {
      Rational c = sv_at(row.v, pivot);
      if (!is_zero(c)) {
        row.v = sv_axpy(row.v, -c, v);
        if (track_) row.combo = sv_axpy(row.combo, -c, combo);
      }
    }
    rows_.emplace(pivot, Row{std::move(v), std::move(combo)});
    return true;
  }

  int rank() const { return static_cast<int>(rows_.size()); }
  int inserted() const { return n_inserted_; }
  const std::map<int, Row>& rows() const { return rows_; }
  const std::vector<SparseVec>& kernel_combos() const { return kernel_; }

  bool has_pivot(int column) const { return rows_.count(column) != 0; }

  std::vector<SparseVec> basis() const {
    std::vector<SparseVec> out;
    out.reserve(rows_.size());
    for (const auto& [p, row] : rows_) out.push_back(row.v);
    return out;
  }

  SparseVec residual(SparseVec v) const {
    SparseVec ignore;
    reduce_tracked(v, ignore, /*with_combo=*/false);
    return v;
  }

  bool contains(const SparseVec& v) const { return residual(v).empty(); }

  // Expresses v over the inserted generators; nullopt when v is outside
  // the span. Requires combination tracking.
  std::optional<SparseVec> solve(const SparseVec& v) const {
    if (!track_) throw InternalError("solve needs combination tracking");
    SparseVec rem = v;
    SparseVec combo;
    size_t guard = 0;
    while (!rem.empty()) {
      auto it = rows_.find(rem.front().first);
      if (it == rows_.end()) return std::nullopt;
      Rational c = rem.front().second;
      rem = sv_axpy(rem, -c, it->second.v);
      combo = sv_axpy(combo, c, it->second.combo);
      if (++guard > 100000) throw InternalError("solve failed to terminate");
    }
    return combo;
  }

 private:
  void reduce_tracked(SparseVec& v, SparseVec& combo,
                      bool with_combo = true) const {
    while (!v.empty()) {
      auto it = rows_.find(v.front().first);
      if (it == rows_.end()) {
        // Leading index is not a pivot; lower-index entries are final, but
        // deeper entries may still hit pivots.
        break;
      }
      Rational c = v.front().second;
      v = sv_axpy(v, -c, it->second.v);
      if (with_combo && track_) combo = sv_axpy(combo, -c, it->second.combo);
    }
    // Sweep the tail: the reduced form guarantees a single pass suffices
    // once the leading entry is pivot-free.
    if (!v.empty()) {
      SparseVec rest = v;
      for (size_t k = 1; k < rest.size();) {
        auto it = rows_.find(rest[k].first);
        if (it == rows_.end()) {
          ++k;
          continue;
        }
        Rational c = rest[k].second;
        rest = sv_axpy(rest, -c, it->second.v);
        if (with_combo && track_) combo = sv_axpy(combo, -c, it->second.combo);
      }
      v = std::move(rest);
    }
  }

  bool track_;
  int n_inserted_ = 0;
  std::map<int, Row> rows_;
  std::vector<SparseVec> kernel_;
};

inline int rank_of(const std::vector<SparseVec>& vectors) {
  EchelonBasis basis;
  for (const auto& v : vectors) basis.insert(v);
  return basis.rank();
}

// Basis of the intersection of two row spaces. Rows of a and b need not be
// independent; the result is echelon-canonical.
inline std::vector<SparseVec> intersect_rowspaces(
    const std::vector<SparseVec>& a, const std::vector<SparseVec>& b) {
  EchelonBasis joint(/*track_combinations=*/true);
  for (const auto& v : a) joint.insert(v);
  for (const auto& v : b) joint.insert(v);
  EchelonBasis result;
  for (const auto& combo : joint.kernel_combos()) {
    SparseVec v;
    for (const auto& [gen, c] : combo) {
      if (gen < static_cast<int>(a.size()))
        v = sv_axpy(v, c, a[static_cast<size_t>(gen)]);
    }
    if (!v.empty()) result.insert(std::move(v));
  }
  return result.basis();
}

}  // namespace multigerm
