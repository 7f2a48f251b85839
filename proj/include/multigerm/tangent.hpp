#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "multigerm/errors.hpp"
#include "multigerm/germ.hpp"
#include "multigerm/jet_space.hpp"
#include "multigerm/linalg.hpp"
#include "multigerm/rng.hpp"

namespace multigerm {

// Which part of the right-left group contributes orbit directions.
struct GroupFilter {
  enum class Kind {
    FullA,
    SubgroupAr,          // changes whose r-jet is the identity
    LeftOnly,
    RightOnly,
    LeftOnlyDegreeMin,   // left changes of degree >= d only
    RightOnlyDegreeMin,  // reparametrizations t + c t^s, s >= d, only
  };

  Kind kind = Kind::FullA;
  int param = 0;

  static GroupFilter full() { return {Kind::FullA, 0}; }
  static GroupFilter subgroup_a(int r) {
    if (r < 0) throw PreconditionError("A_r needs r >= 0");
    return {Kind::SubgroupAr, r};
  }
  static GroupFilter left_only(int min_degree = 1) {
    if (min_degree < 1) throw PreconditionError("degree minimum must be >= 1");
    return {min_degree == 1 ? Kind::LeftOnly : Kind::LeftOnlyDegreeMin,
            min_degree};
  }
  static GroupFilter right_only(int min_power = 1) {
    if (min_power < 1) throw PreconditionError("power minimum must be >= 1");
    return {min_power == 1 ? Kind::RightOnly : Kind::RightOnlyDegreeMin,
            min_power};
  }

  // -1 disables the respective side.
  int right_min_power() const {
    switch (kind) {
      case Kind::FullA: return 1;
      case Kind::SubgroupAr: return param + 1;
      case Kind::RightOnly: return 1;
      case Kind::RightOnlyDegreeMin: return param;
      default: return -1;
    }
  }
  int left_min_degree() const {
    switch (kind) {
      case Kind::FullA: return 1;
      case Kind::SubgroupAr: return param + 1;
      case Kind::LeftOnly: return 1;
      case Kind::LeftOnlyDegreeMin: return param;
      default: return -1;
    }
  }

  std::string str() const {
    switch (kind) {
      case Kind::FullA: return "full";
      case Kind::SubgroupAr: return "a" + std::to_string(param);
      case Kind::LeftOnly: return "left";
      case Kind::RightOnly: return "right";
      case Kind::LeftOnlyDegreeMin: return "left_min" + std::to_string(param);
      case Kind::RightOnlyDegreeMin:
        return "right_min" + std::to_string(param);
    }
    return "?";
  }
};

// Reparametrization directions: t^s f_i'(t) in the slot of component i,
// one vector per component and power.
inline std::vector<SparseVec> right_generators(const Multigerm& f, int level,
                                               int min_power) {
  if (min_power < 1) throw PreconditionError("min_power must be >= 1");
  JetSpaceShape s = shape_of(f, level);
  std::vector<SparseVec> out;
  for (int i = 0; i < s.k; ++i) {
    std::vector<Jet> der;
    der.reserve(s.n);
    for (const auto& c : f.components[i].coords) der.push_back(c.derivative());
    for (int power = min_power; power <= level; ++power) {
      SparseVec v;
      for (int j = 0; j < s.n; ++j) {
        Jet moved = der[j].shifted(power);
        for (const auto& [e, coeff] : moved.terms())
          if (e >= 1 && e <= level) v.emplace_back(s.index(i, j, e), coeff);
      }
      std::sort(v.begin(), v.end());
      if (!v.empty()) out.push_back(std::move(v));
    }
  }
  return out;
}

namespace detail {

// Monomials whose pullback order is within the level on at least one
// component; the same monomial field acts on every component at once.
template <typename Fn>
void for_each_live_monomial(const Multigerm& f, int level, int min_degree,
                            Fn&& fn) {
  int n = f.ambient;
  std::vector<int> expo(n, 0);
  // Orders per component and coordinate; -1 marks a zero coordinate.
  std::vector<std::vector<long long>> ord(f.k(),
                                          std::vector<long long>(n, -1));
  for (int i = 0; i < f.k(); ++i)
    for (int j = 0; j < n; ++j) {
      auto o = f.components[i].coords[j].order();
      if (o) ord[i][j] = *o;
    }
  long long inf = level + 1;
  std::vector<long long> partial(f.k(), 0);
  auto rec = [&](auto&& self, int pos, int degree) -> void {
    bool alive = false;
    for (int i = 0; i < f.k(); ++i)
      if (partial[i] <= level) alive = true;
    if (!alive) return;
    if (pos == n) {
      if (degree >= min_degree) fn(Monomial{expo});
      return;
    }
    std::vector<long long> saved = partial;
    for (int e = 0;; ++e) {
      expo[pos] = e;
      if (e > 0) {
        for (int i = 0; i < f.k(); ++i) {
          long long step = ord[i][pos] < 0 ? inf : ord[i][pos];
          partial[i] = std::min(partial[i] + step, inf);
        }
        bool any = false;
        for (int i = 0; i < f.k(); ++i)
          if (partial[i] <= level) any = true;
        if (!any) break;
      }
      self(self, pos + 1, degree + e);
    }
    partial = saved;
    expo[pos] = 0;
  };
  rec(rec, 0, 0);
}

}  // namespace detail

// Coordinate-change directions: the monomial field x^a e_j evaluated along
// every component simultaneously.
inline std::vector<SparseVec> left_generators(const Multigerm& f, int level,
                                              int min_degree) {
  if (min_degree < 1) throw PreconditionError("min_degree must be >= 1");
  JetSpaceShape s = shape_of(f, level);
  std::vector<SparseVec> out;
  detail::for_each_live_monomial(
      f, level, min_degree, [&](const Monomial& m) {
        if (m.degree() == 0) return;
        std::vector<Jet> pulls;
        pulls.reserve(s.k);
        for (int i = 0; i < s.k; ++i)
          pulls.push_back(pullback(f.components[i], m).truncate_at(level));
        for (int j = 0; j < s.n; ++j) {
          SparseVec v;
          for (int i = 0; i < s.k; ++i)
            for (const auto& [e, coeff] : pulls[i].terms())
              if (e >= 1 && e <= level) v.emplace_back(s.index(i, j, e), coeff);
          std::sort(v.begin(), v.end());
          if (!v.empty()) out.push_back(std::move(v));
        }
      });
  return out;
}

// Span of the orbit directions of F in the level-jet space, echelon
// reduced. The echelon form is canonical for the fixed basis order.
class TangentSpace {
 public:
  TangentSpace(JetSpaceShape shape, std::vector<SparseVec> generators)
      : shape_(shape), generators_(std::move(generators)) {
    for (const auto& g : generators_) basis_.insert(g);
  }

  const JetSpaceShape& shape() const { return shape_; }
  const std::vector<SparseVec>& generators() const { return generators_; }
  const EchelonBasis& echelon() const { return basis_; }
  int rank() const { return basis_.rank(); }

  bool contains(const SparseVec& v) const {
    for (const auto& [idx, c] : v)
      if (idx < 0 || idx >= shape_.dim())
        throw DimensionMismatchError("vector outside the jet space");
    return basis_.contains(v);
  }

 private:
  JetSpaceShape shape_;
  std::vector<SparseVec> generators_;
  EchelonBasis basis_;
};

inline TangentSpace tangent_space(const Multigerm& f, int level,
                                  const GroupFilter& filter) {
  JetSpaceShape s = shape_of(f, level);
  std::vector<SparseVec> gens;
  int rmin = filter.right_min_power();
  int lmin = filter.left_min_degree();
  if (rmin >= 0)
    for (auto& g : right_generators(f, level, rmin)) gens.push_back(std::move(g));
  if (lmin >= 0)
    for (auto& g : left_generators(f, level, lmin)) gens.push_back(std::move(g));
  return TangentSpace(s, std::move(gens));
}

inline std::vector<int> orbit_dim_sequence(const Multigerm& f, int m_max) {
  for (const auto& c : f.components)
    if (c.degenerate())
      throw DegenerateComponentError("orbit dimensions of a degenerate germ");
  if (m_max > f.truncation)
    throw TruncationError("orbit dimension level exceeds truncation");
  std::vector<int> out;
  out.reserve(m_max);
  for (int m = 1; m <= m_max; ++m)
    out.push_back(tangent_space(f, m, GroupFilter::full()).rank());
  return out;
}

// Affine family of jets: base + span of direction vectors, with declared
// parameter-domain exclusions handled at sampling time.
struct AffineFamily {
  JetSpaceShape shape;
  SparseVec base;
  std::vector<SparseVec> directions;
  std::vector<std::vector<Rational>> excluded_values;  // per direction
  std::string domain_note;

  int dim() const { return static_cast<int>(directions.size()); }

  SparseVec point_at(const std::vector<Rational>& params) const {
    if (params.size() != directions.size())
      throw DimensionMismatchError("one parameter per direction");
    SparseVec v = base;
    for (size_t i = 0; i < directions.size(); ++i)
      v = sv_axpy(v, params[i], directions[i]);
    return v;
  }

  std::vector<Rational> sample_params(SeededRng& rng) const {
    std::vector<Rational> params;
    params.reserve(directions.size());
    for (size_t i = 0; i < directions.size(); ++i) {
      std::vector<Rational> excl =
          i < excluded_values.size() ? excluded_values[i]
                                     : std::vector<Rational>{};
      params.push_back(rng.nonzero_rational_excluding(excl));
    }
    return params;
  }
};

inline AffineFamily make_family(const Multigerm& base, int level,
                                const std::vector<Multigerm>& directions,
                                std::string domain_note = "parameters nonzero") {
  JetSpaceShape s{base.k(), base.ambient, level};
  if (base.truncation < level)
    throw TruncationError("family base below the requested level");
  AffineFamily out;
  out.shape = s;
  out.base = to_vector(s, jet_of(base, level));
  for (const auto& d : directions) {
    if (d.k() != s.k || d.ambient != s.n)
      throw DimensionMismatchError("direction shape mismatch");
    out.directions.push_back(to_vector(s, d));
  }
  out.domain_note = std::move(domain_note);
  return out;
}

struct FamilyDeficiencyReport {
  int dim_x = 0;
  std::vector<int> intersection_dims;  // one per sample
  std::vector<int> orbit_ranks;        // one per sample
  int max_intersection = 0;
  bool not_simple_evidence = false;    // intersection < dimX at every sample
  int samples = 0;
  std::uint64_t seed = 0;
  std::string domain_note;
};

// At seeded generic points of the family, measures how much of the family's
// own tangent space the orbit tangent space captures. A strict deficit at
// every sample is evidence of a modulus.
inline FamilyDeficiencyReport family_deficiency(const AffineFamily& x,
                                                int level,
                                                const GroupFilter& filter,
                                                int samples,
                                                std::uint64_t seed) {
  if (samples <= 0) throw PreconditionError("samples must be positive");
  if (level != x.shape.level)
    throw PreconditionError("family level mismatch");
  if (rank_of(x.directions) != x.dim())
    throw PreconditionError("family directions are linearly dependent");
  FamilyDeficiencyReport report;
  report.dim_x = x.dim();
  report.samples = samples;
  report.seed = seed;
  report.domain_note = x.domain_note;
  SeededRng rng(seed);
  for (int s = 0; s < samples; ++s) {
    auto params = x.sample_params(rng);
    Multigerm point = from_vector(x.shape, x.point_at(params));
    TangentSpace orbit = tangent_space(point, level, filter);
    auto inter = intersect_rowspaces(x.directions, orbit.echelon().basis());
    report.intersection_dims.push_back(static_cast<int>(inter.size()));
    report.orbit_ranks.push_back(orbit.rank());
  }
  report.max_intersection = 0;
  for (int d : report.intersection_dims)
    report.max_intersection = std::max(report.max_intersection, d);
  report.not_simple_evidence =
      x.dim() > 0 && report.max_intersection < report.dim_x;
  return report;
}

}  // namespace multigerm
