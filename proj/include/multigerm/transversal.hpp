#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "multigerm/errors.hpp"
#include "multigerm/tangent.hpp"

namespace multigerm {

// The homogeneous degree-(m+1) slice of the (m+1)-jet space, dimension k*n.
struct HomogeneousSlice {
  JetSpaceShape shape;  // level = m+1

  int dim() const { return shape.k * shape.n; }

  int slot(int comp, int coord) const { return comp * shape.n + coord; }
};

// Complete transversal at one level: a canonical complement, inside the
// homogeneous slice, of the part of the A_1 orbit tangent space that lies
// in the slice. Basis vectors are coordinate directions of the slice under
// the global basis order.
struct Transversal {
  int level = 0;  // m+1
  JetSpaceShape shape;
  std::vector<SparseVec> basis;       // canonical complement directions
  int tangent_image_dim = 0;          // dim of (tangent space) ∩ (slice)
  int slice_dim = 0;

  bool is_trivial() const { return basis.empty(); }
};

namespace detail {

// Column order with all powers <= m first and the degree-(m+1) slice last;
// with this order, reduced echelon rows whose pivot lies in the slice are
// supported entirely inside the slice.
struct TransversalColumns {
  JetSpaceShape shape;  // level m+1

  int remap(int index) const {
    auto key = shape.key(index);
    return (key.power - 1) * (shape.k * shape.n) + key.comp * shape.n +
           key.coord;
  }

  int unmap(int column) const {
    int power = column / (shape.k * shape.n) + 1;
    int rest = column % (shape.k * shape.n);
    return shape.index(rest / shape.n, rest % shape.n, power);
  }

  int slice_start() const { return (shape.level - 1) * shape.k * shape.n; }

  SparseVec remap_vec(const SparseVec& v) const {
    SparseVec out;
    out.reserve(v.size());
    for (const auto& [i, c] : v) out.emplace_back(remap(i), c);
    std::sort(out.begin(), out.end());
    return out;
  }

  SparseVec unmap_vec(const SparseVec& v) const {
    SparseVec out;
    out.reserve(v.size());
    for (const auto& [i, c] : v) out.emplace_back(unmap(i), c);
    std::sort(out.begin(), out.end());
    return out;
  }
};

struct TransversalComputation {
  Transversal transversal;
  TransversalColumns columns;
  EchelonBasis reduced;              // power-major columns, with tracking
  std::vector<SparseVec> generators; // A_1 generators, standard columns
  std::vector<SparseVec> image_rows; // tangent ∩ slice, standard columns
};

inline TransversalComputation complete_transversal_full(const Multigerm& f,
                                                        int m) {
  if (m < 1) throw PreconditionError("transversal level must be >= 1");
  if (f.truncation < m + 1)
    throw TruncationError("transversal needs truncation >= m+1");
  // The computation only sees the m-jet; the derivative convention is safe
  // one level up, so work at truncation m+2.
  Multigerm g = pad_truncation(jet_of(f, m), std::max(f.truncation, m + 2));
  int level = m + 1;
  JetSpaceShape shape{g.k(), g.ambient, level};
  TransversalComputation out;
  out.columns = TransversalColumns{shape};
  out.reduced = EchelonBasis(/*track_combinations=*/true);
  GroupFilter a1 = GroupFilter::subgroup_a(1);
  for (auto& v : right_generators(g, level, a1.right_min_power()))
    out.generators.push_back(std::move(v));
  for (auto& v : left_generators(g, level, a1.left_min_degree()))
    out.generators.push_back(std::move(v));
  for (const auto& v : out.generators)
    out.reduced.insert(out.columns.remap_vec(v));

  int slice_start = out.columns.slice_start();
  HomogeneousSlice slice{shape};
  std::vector<bool> pivot_in_slice(slice.dim(), false);
  for (const auto& [pivot, row] : out.reduced.rows()) {
    if (pivot < slice_start) continue;
    pivot_in_slice[pivot - slice_start] = true;
    out.image_rows.push_back(out.columns.unmap_vec(row.v));
  }
  Transversal& t = out.transversal;
  t.level = level;
  t.shape = shape;
  t.slice_dim = slice.dim();
  t.tangent_image_dim = static_cast<int>(out.image_rows.size());
  for (int s = 0; s < slice.dim(); ++s)
    if (!pivot_in_slice[s]) {
      int index = shape.index(s / shape.n, s % shape.n, level);
      t.basis.push_back(SparseVec{{index, Rational(1)}});
    }
  return out;
}

}  // namespace detail

inline Transversal complete_transversal(const Multigerm& f, int m) {
  return detail::complete_transversal_full(f, m).transversal;
}

// Transversals of the fixed jet F at each target level in [from, to].
inline std::vector<Transversal> transversal_scan(const Multigerm& f, int from,
                                                 int to) {
  if (from < 2) throw PreconditionError("scan starts at level >= 2");
  if (to > f.truncation)
    throw TruncationError("scan beyond the truncation order");
  std::vector<Transversal> out;
  for (int target = from; target <= to; ++target)
    out.push_back(complete_transversal(f, target - 1));
  return out;
}

struct ReduceStepResult {
  SparseVec transversal_part;  // t, in the canonical complement
  // Certificate: coefficients over the A_1 generator list realizing the
  // tangent-image part of the difference. The group element itself is not
  // reconstructed.
  SparseVec certificate;
  int generator_count = 0;
};

// Splits the homogeneous difference between an (m+1)-jet G and its m-jet F
// as (tangent image part) + (transversal part).
inline ReduceStepResult reduce_step(const Multigerm& g, const Multigerm& f) {
  if (g.k() != f.k() || g.ambient != f.ambient)
    throw DimensionMismatchError("jet shapes differ");
  if (g.truncation < 2) throw PreconditionError("need a level >= 2 jet");
  int level = g.truncation;
  int m = level - 1;
  if (f.truncation < m)
    throw TruncationError("base jet below level m");
  Multigerm base = with_truncation(jet_of(f, std::min(m, f.truncation)), level);
  if (jet_of(g, m) != base)
    throw PreconditionError("base is not the m-jet of the given jet");

  auto comp = detail::complete_transversal_full(base, m);
  JetSpaceShape shape = comp.transversal.shape;
  SparseVec diff =
      sv_axpy(to_vector(shape, g), Rational(-1), to_vector(shape, base));
  for (const auto& [idx, c] : diff)
    if (shape.key(idx).power != level)
      throw InternalError("difference is not homogeneous");

  SparseVec remapped = comp.columns.remap_vec(diff);
  SparseVec residual = comp.reduced.residual(remapped);
  SparseVec image_part = sv_axpy(remapped, Rational(-1), residual);
  auto combo = comp.reduced.solve(image_part);
  if (!combo)
    throw InternalError("tangent image decomposition failed");
  ReduceStepResult out;
  out.transversal_part = comp.columns.unmap_vec(residual);
  out.certificate = *combo;
  out.generator_count = static_cast<int>(comp.generators.size());
  return out;
}

}  // namespace multigerm
