#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "multigerm/errors.hpp"
#include "multigerm/tangent.hpp"

namespace multigerm {

struct MatherReport {
  bool contained = false;      // every family direction in the orbit tangent
  bool constant_rank = false;  // orbit tangent rank equal across samples
  std::vector<int> ranks;
  std::optional<SparseVec> witness_direction;  // first failing direction
  std::optional<std::pair<int, int>> witness_ranks;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string domain_note;
};

// Checks the two orbit-membership conditions for an affine family at
// seeded generic parameter values: tangency of the family to the orbit and
// constancy of the orbit dimension. Verdicts are sampling evidence, not
// proofs; reports carry the seed so runs reproduce exactly.
inline MatherReport mather_check(const AffineFamily& x, int level,
                                 const GroupFilter& filter, int samples,
                                 std::uint64_t seed) {
  if (samples < 2) throw PreconditionError("mather check needs >= 2 samples");
  if (level != x.shape.level)
    throw PreconditionError("family level mismatch");
  if (rank_of(x.directions) != x.dim())
    throw PreconditionError("family directions are linearly dependent");
  MatherReport report;
  report.samples = samples;
  report.seed = seed;
  report.domain_note = x.domain_note;
  report.contained = true;
  SeededRng rng(seed);
  for (int s = 0; s < samples; ++s) {
    auto params = x.sample_params(rng);
    Multigerm point = from_vector(x.shape, x.point_at(params));
    TangentSpace orbit = tangent_space(point, level, filter);
    report.ranks.push_back(orbit.rank());
    for (const auto& d : x.directions) {
      if (!orbit.contains(d)) {
        report.contained = false;
        if (!report.witness_direction) report.witness_direction = d;
      }
    }
  }
  report.constant_rank = true;
  for (size_t i = 1; i < report.ranks.size(); ++i)
    if (report.ranks[i] != report.ranks[0]) {
      report.constant_rank = false;
      report.witness_ranks = {report.ranks[0], report.ranks[i]};
    }
  return report;
}

struct MergeResult {
  bool merged = false;
  std::optional<Multigerm> jet;  // base at the canonical parameter value
  MatherReport report;
};

// Eliminates a one-parameter direction when both orbit conditions hold; the
// canonical parameter value is 0 unless the family's domain excludes it,
// in which case the caller passes the value to keep (usually 1).
inline MergeResult merge_parameter(const AffineFamily& x, int level,
                                   const GroupFilter& filter, int samples,
                                   std::uint64_t seed,
                                   Rational canonical_value = Rational(0)) {
  if (x.dim() != 1)
    throw PreconditionError("merge needs exactly one direction");
  MergeResult out;
  out.report = mather_check(x, level, filter, samples, seed);
  if (!out.report.contained || !out.report.constant_rank) return out;
  out.merged = true;
  out.jet = from_vector(x.shape, x.point_at({canonical_value}));
  return out;
}

}  // namespace multigerm
