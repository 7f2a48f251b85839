#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "multigerm/catalog.hpp"
#include "multigerm/mather.hpp"
#include "multigerm/semigroup.hpp"
#include "multigerm/transversal.hpp"

namespace multigerm {

// ---------------------------------------------------------------------------
// Rule screens: cheap structural certificates of non-simplicity.

struct RuleWitness {
  std::string rule;
  std::string detail;
};

namespace classify_detail {

inline std::vector<std::vector<Rational>> distinct_tangent_lines(
    const Multigerm& f, bool regular_only) {
  std::vector<std::vector<Rational>> lines;
  for (const auto& comp : f.components) {
    if (comp.degenerate()) continue;
    if (regular_only && multiplicity(comp) != 1) continue;
    auto dir = detail::tangent_direction(comp);
    if (std::find(lines.begin(), lines.end(), dir) == lines.end())
      lines.push_back(dir);
  }
  return lines;
}

}  // namespace classify_detail

// Structural non-simplicity screens, applied to a stabilized multigerm:
// three or more singular components; more pairwise-transverse regular
// components than the ambient dimension plus one; four or more distinct
// tangent lines in the plane (a cross-ratio modulus); and a component whose
// exponent support has gcd >= 2 through the truncation (indistinguishable
// from a multiple cover, which admits arbitrarily late perturbations).
inline std::optional<RuleWitness> rule_screens(const Multigerm& f) {
  int singular = 0;
  for (const auto& comp : f.components)
    if (!comp.degenerate() && multiplicity(comp) >= 2) ++singular;
  if (singular >= 3)
    return RuleWitness{"three-singular-components",
                       std::to_string(singular) +
                           " components of multiplicity >= 2"};

  if (f.ambient >= 2) {
    auto regular_lines =
        classify_detail::distinct_tangent_lines(f, /*regular_only=*/true);
    if (static_cast<int>(regular_lines.size()) > f.ambient + 1)
      return RuleWitness{
          "regular-components-exceed-bound",
          std::to_string(regular_lines.size()) +
              " pairwise-transverse regular components in dimension " +
              std::to_string(f.ambient)};
  }

  if (f.ambient == 2) {
    auto lines = classify_detail::distinct_tangent_lines(f, false);
    if (lines.size() >= 4)
      return RuleWitness{"four-lines-in-the-plane",
                         std::to_string(lines.size()) +
                             " distinct tangent lines in the plane carry a "
                             "cross-ratio modulus"};
  }

  for (int i = 0; i < f.k(); ++i) {
    const auto& comp = f.components[i];
    if (comp.degenerate()) continue;
    int g = detail::exponent_gcd(comp);
    if (g >= 2)
      return RuleWitness{
          "multiple-cover-support",
          "component " + std::to_string(i + 1) + " has exponent gcd " +
              std::to_string(g) +
              " through the truncation; such jets admit arbitrarily late "
              "independent perturbations"};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Determinacy evidence.

struct DeterminacyLevel {
  int level = 0;
  int transversal_dim = 0;
};

struct DeterminacyReport {
  bool necessary_ok = false;
  int claimed_degree = 0;
  int scanned_to = 0;
  std::vector<DeterminacyLevel> levels;
};

// Necessary-condition scan: the jet of F at the claimed degree must have
// trivial complete transversals at every level in (d, scan_to]. Sufficiency
// beyond scan_to is not claimed.
inline DeterminacyReport verify_determinacy(const Multigerm& f, int degree,
                                            int scan_to) {
  if (scan_to <= degree)
    throw PreconditionError("scan must go past the claimed degree");
  DeterminacyReport out;
  out.claimed_degree = degree;
  out.scanned_to = scan_to;
  Multigerm base = pad_truncation(
      jet_of(f, std::min(degree, f.truncation)), std::max(f.truncation, scan_to));
  out.necessary_ok = true;
  for (int target = degree + 1; target <= scan_to; ++target) {
    Transversal t = complete_transversal(base, target - 1);
    out.levels.push_back({target, static_cast<int>(t.basis.size())});
    if (!t.is_trivial()) out.necessary_ok = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The obstruction-family library.

struct NamedFamily {
  std::string id;
  std::string title;
  int level = 0;
  int dim_x = 0;
  AffineFamily family;
};

namespace classify_detail {

inline Multigerm zero_padded(int k, int n, int trunc) {
  std::vector<ComponentGerm> comps(k);
  for (auto& c : comps) c.coords.assign(n, Jet::zero(trunc));
  return make_multigerm(std::move(comps));
}

// Family whose base fixes some components and whose directions sweep a
// coordinate/power box of one or more components.
inline AffineFamily box_family(
    const Multigerm& base, int level,
    const std::vector<std::tuple<int, int, int, int>>& boxes) {
  JetSpaceShape s{base.k(), base.ambient, level};
  AffineFamily out;
  out.shape = s;
  out.base = to_vector(s, jet_of(base, level));
  for (const auto& [comp, coord, from, to] : boxes)
    for (int e = from; e <= to; ++e)
      out.directions.push_back(SparseVec{{s.index(comp, coord, e), Rational(1)}});
  out.domain_note = "parameters nonzero";
  return out;
}

inline Multigerm axes_in(int n, int ambient, int trunc) {
  std::vector<ComponentGerm> comps;
  for (int i = 0; i < n; ++i) {
    std::vector<Jet> coords(ambient, Jet::zero(trunc));
    coords[i] = Jet::variable(trunc);
    comps.push_back(ComponentGerm{std::move(coords)});
  }
  return make_multigerm(std::move(comps));
}

}  // namespace classify_detail

// Ready-made deformation families witnessing non-simplicity, for replay
// through family_deficiency or mather_check. The parametrized axes families
// take the number of regular components.
inline NamedFamily nonsimple_family(const std::string& id, int n = 0) {
  using classify_detail::axes_in;
  using classify_detail::box_family;
  using classify_detail::zero_padded;
  auto pair_with_line = [&](int ambient, int trunc) {
    std::vector<ComponentGerm> comps;
    std::vector<Jet> line(ambient, Jet::zero(trunc));
    line[0] = Jet::variable(trunc);
    comps.push_back(ComponentGerm{line});
    comps.push_back(ComponentGerm{
        std::vector<Jet>(ambient, Jet::zero(trunc))});
    return make_multigerm(comps);
  };
  if (id == "pair-t3-t6-t7") {
    NamedFamily out{id,
                    "deformations of a second component with support "
                    "(t^3..t^8, t^6..t^8, t^7..t^8) next to a line",
                    8, 11, {}};
    out.family = box_family(pair_with_line(3, 8), 8,
                            {{1, 0, 3, 8}, {1, 1, 6, 8}, {1, 2, 7, 8}});
    return out;
  }
  if (id == "pair-t4-t4-t4") {
    NamedFamily out{id,
                    "deformations of a second component with full support "
                    "t^4..t^7 in three coordinates next to a line",
                    7, 12, {}};
    out.family = box_family(pair_with_line(3, 7), 7,
                            {{1, 0, 4, 7}, {1, 1, 4, 7}, {1, 2, 4, 7}});
    return out;
  }
  if (id == "pair-t8-t5-t6-t7") {
    NamedFamily out{id,
                    "deformations of a second component with support "
                    "(t^8.., t^5.., t^6.., t^7..) next to a line",
                    9, 14, {}};
    out.family = box_family(pair_with_line(4, 9), 9,
                            {{1, 0, 8, 9}, {1, 1, 5, 9}, {1, 2, 6, 9}, {1, 3, 7, 9}});
    return out;
  }
  if (id == "pair-equal-2jets") {
    NamedFamily out{id,
                    "pairs of multiplicity-2 branches with equal 2-jets and "
                    "proportional cubic terms",
                    3, 1, {}};
    out.family = box_family(
        multigerm_from_strings({{"t^2", "t^3"}, {"t^2", "0"}}, 3), 3,
        {{1, 1, 3, 3}});
    out.family.excluded_values = {{Rational(0), Rational(1)}};
    out.family.domain_note = "parameter differs from 0 and 1";
    return out;
  }
  if (id == "pair-t5-t4-t3") {
    NamedFamily out{id,
                    "5-jets (t^5, t^4 + a t^5, t^3) next to a planar cusp",
                    5, 1, {}};
    out.family = box_family(
        multigerm_from_strings({{"t^2", "t^3", "0"}, {"t^5", "t^4", "t^3"}}, 5),
        5, {{1, 1, 5, 5}});
    return out;
  }
  if (id == "triple-tangent-conics") {
    NamedFamily out{id,
                    "a line with two tangent parabolic branches; the ratio "
                    "of quadratic terms is a modulus",
                    2, 1, {}};
    out.family = box_family(
        multigerm_from_strings({{"t", "0"}, {"t", "t^2"}, {"t", "0"}}, 2), 2,
        {{2, 1, 2, 2}});
    out.family.excluded_values = {{Rational(0), Rational(1)}};
    out.family.domain_note = "parameter differs from 0 and 1";
    return out;
  }
  if (id == "axes-quadratic") {
    if (n < 2) throw PreconditionError("axes-quadratic needs n >= 2");
    NamedFamily out{id,
                    "axes plus one component with free 2- and 3-jet in "
                    "every coordinate",
                    3, 2 * n, {}};
    Multigerm base = classify_detail::axes_in(n, n, 3);
    base.components.push_back(
        ComponentGerm{std::vector<Jet>(n, Jet::zero(3))});
    base = make_multigerm(base.components);
    std::vector<std::tuple<int, int, int, int>> boxes;
    for (int j = 0; j < n; ++j) boxes.emplace_back(n, j, 2, 3);
    out.family = box_family(base, 3, boxes);
    return out;
  }
  if (id == "axes-cubic") {
    if (n < 2) throw PreconditionError("axes-cubic needs n >= 2");
    NamedFamily out{id,
                    "axes plus one component with free 3-, 4- and 5-jet in "
                    "every coordinate",
                    5, 3 * (n + 1), {}};
    Multigerm base = classify_detail::axes_in(n, n + 1, 5);
    base.components.push_back(
        ComponentGerm{std::vector<Jet>(n + 1, Jet::zero(5))});
    base = make_multigerm(base.components);
    std::vector<std::tuple<int, int, int, int>> boxes;
    for (int j = 0; j <= n; ++j) boxes.emplace_back(n, j, 3, 5);
    out.family = box_family(base, 5, boxes);
    return out;
  }
  if (id == "axes-plane-quartic") {
    NamedFamily out{id,
                    "plane axes in 4-space plus one component with full "
                    "support t^4..t^7",
                    7, 16, {}};
    Multigerm base = classify_detail::axes_in(2, 4, 7);
    base.components.push_back(
        ComponentGerm{std::vector<Jet>(4, Jet::zero(7))});
    base = make_multigerm(base.components);
    std::vector<std::tuple<int, int, int, int>> boxes;
    for (int j = 0; j < 4; ++j) boxes.emplace_back(2, j, 4, 7);
    out.family = box_family(base, 7, boxes);
    return out;
  }
  if (id == "triple-two-singular") {
    NamedFamily out{id,
                    "a line plus two components with free 2- and 3-jets in "
                    "all three coordinates",
                    3, 12, {}};
    std::vector<ComponentGerm> comps;
    std::vector<Jet> line(3, Jet::zero(3));
    line[0] = Jet::variable(3);
    comps.push_back(ComponentGerm{line});
    comps.push_back(ComponentGerm{std::vector<Jet>(3, Jet::zero(3))});
    comps.push_back(ComponentGerm{std::vector<Jet>(3, Jet::zero(3))});
    Multigerm base = make_multigerm(comps);
    std::vector<std::tuple<int, int, int, int>> boxes;
    for (int comp : {1, 2})
      for (int j = 0; j < 3; ++j) boxes.emplace_back(comp, j, 2, 3);
    out.family = box_family(base, 3, boxes);
    return out;
  }
  throw PreconditionError("unknown obstruction family '" + id + "'");
}

inline std::vector<NamedFamily> nonsimple_library() {
  return {nonsimple_family("pair-t3-t6-t7"),
          nonsimple_family("pair-t4-t4-t4"),
          nonsimple_family("pair-t8-t5-t6-t7"),
          nonsimple_family("pair-equal-2jets"),
          nonsimple_family("pair-t5-t4-t3"),
          nonsimple_family("triple-tangent-conics"),
          nonsimple_family("axes-quadratic", 3),
          nonsimple_family("axes-cubic", 2),
          nonsimple_family("axes-plane-quartic"),
          nonsimple_family("triple-two-singular")};
}

// ---------------------------------------------------------------------------
// Classification.

enum class Verdict { Simple, NotSimpleEvidence, Unknown };

inline std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Simple: return "simple";
    case Verdict::NotSimpleEvidence: return "not-simple-evidence";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

struct TrailStep {
  int level = 0;
  int orbit_rank = 0;
  int transversal_dim = -1;   // complement dimension at this target level
  bool residual_nonzero = false;  // input's own jet steps off its lower jet
};

struct ClassificationReport {
  Verdict verdict = Verdict::Unknown;
  std::string entry_id;
  std::map<std::string, int> params;
  std::string witness;   // rule or deficiency note for non-simplicity
  std::string reason;    // explanation for Unknown
  std::vector<TrailStep> trail;
  std::vector<std::string> notes;
  std::optional<Fingerprint> input_fingerprint;
  int levels_scanned = 0;
  int samples_used = 0;
  std::uint64_t seed = 0;
};

struct ClassifyOptions {
  int max_level = 0;  // 0: truncation - 1
  std::uint64_t seed = 42;
  int samples = 5;
  bool support_family_check = true;
};

// Recognition engine; caches per-instance invariants so batch verification
// over the catalog stays fast.
class ClassifyEngine {
 public:
  explicit ClassifyEngine(const Catalog& catalog) : catalog_(catalog) {}

  const Catalog& catalog() const { return catalog_; }

  ClassificationReport classify(const Multigerm& input,
                                const ClassifyOptions& opts = {});

 private:
  struct CandidateData {
    CatalogInstance instance;
    Fingerprint fp;
  };

  std::string cache_key(const CatalogInstance& inst) const {
    std::string key = inst.id;
    for (const auto& [k, v] : inst.params)
      key += ";" + k + "=" + std::to_string(v);
    return key;
  }

  const Fingerprint& instance_fingerprint(const CatalogInstance& inst,
                                          int depth, int trunc) {
    auto key = cache_key(inst) + "@" + std::to_string(depth) + "/" +
               std::to_string(trunc);
    auto it = fp_cache_.find(key);
    if (it != fp_cache_.end()) return it->second;
    Multigerm padded = pad_truncation(inst.germ, trunc);
    auto [slot, fresh] = fp_cache_.emplace(key, fingerprint(padded, depth));
    return slot->second;
  }

  const std::vector<int>& instance_tdims(const CatalogInstance& inst,
                                         int to_level) {
    auto key = cache_key(inst) + "#" + std::to_string(to_level);
    auto it = td_cache_.find(key);
    if (it != td_cache_.end()) return it->second;
    Multigerm padded =
        pad_truncation(inst.germ, std::max(inst.germ.truncation, to_level));
    std::vector<int> dims;
    for (int target = 2; target <= to_level; ++target)
      dims.push_back(
          static_cast<int>(complete_transversal(padded, target - 1).basis.size()));
    auto [slot, fresh] = td_cache_.emplace(key, std::move(dims));
    return slot->second;
  }

  const Catalog& catalog_;
  std::map<std::string, Fingerprint> fp_cache_;
  std::map<std::string, std::vector<int>> td_cache_;
};

inline ClassificationReport ClassifyEngine::classify(
    const Multigerm& input, const ClassifyOptions& opts) {
  ClassificationReport report;
  report.seed = opts.seed;
  for (const auto& comp : input.components)
    if (comp.degenerate())
      throw DegenerateComponentError("classify of a degenerate multigerm");

  Multigerm s = stabilize(input).germ;
  int max_level = opts.max_level > 0
                      ? std::min(opts.max_level, s.truncation)
                      : std::max(1, s.truncation - 1);

  auto separation = separate_images_check(s);
  if (!separation.verified) {
    report.verdict = Verdict::Unknown;
    report.reason = "image separation unverified for components " +
                    std::to_string(separation.first) + "," +
                    std::to_string(separation.second);
    return report;
  }

  if (auto witness = rule_screens(s)) {
    report.verdict = Verdict::NotSimpleEvidence;
    report.witness = witness->rule + ": " + witness->detail;
    return report;
  }

  Fingerprint fp;
  try {
    fp = fingerprint(s, max_level);
  } catch (const TruncationError& e) {
    report.verdict = Verdict::Unknown;
    report.reason = std::string("invariants not certifiable: ") + e.what();
    return report;
  }
  report.input_fingerprint = fp;
  report.levels_scanned = max_level;

  // Trail: per-level orbit ranks plus the input's own transversal ladder.
  std::vector<int> input_tdims;
  for (int level = 1; level <= max_level; ++level) {
    TrailStep step;
    step.level = level;
    step.orbit_rank = fp.orbit_dims[level - 1];
    if (level >= 2) {
      Transversal t = complete_transversal(s, level - 1);
      step.transversal_dim = static_cast<int>(t.basis.size());
      input_tdims.push_back(step.transversal_dim);
      auto rs = reduce_step(with_truncation(s, level), jet_of(s, level - 1));
      step.residual_nonzero = !rs.transversal_part.empty();
    }
    report.trail.push_back(step);
  }

  // Candidate search: cheap discrete invariants first, then the orbit
  // dimension sequence and the transversal ladder.
  long long weight_cap =
      static_cast<long long>(s.k()) * (max_level + 2) + s.ambient;
  std::vector<CandidateData> survivors;
  for (const auto& entry : catalog_.entries) {
    for (auto& inst : enumerate_instances(catalog_, entry.id, weight_cap)) {
      if (inst.germ.k() != fp.k) continue;
      if (inst.germ.ambient != fp.essential_dim) continue;
      int maxexp = inst.germ.truncation;
      if (maxexp > max_level) continue;
      int trunc = std::max(s.truncation, maxexp + 1);
      Fingerprint cand_fp;
      try {
        cand_fp = instance_fingerprint(inst, max_level, trunc);
      } catch (const TruncationError&) {
        continue;  // needs more room than the input provides
      }
      if (!(cand_fp == fp)) continue;
      survivors.push_back(CandidateData{std::move(inst), std::move(cand_fp)});
    }
  }

  // Transversal-ladder comparison.
  if (!input_tdims.empty()) {
    std::vector<CandidateData> filtered;
    for (auto& cand : survivors) {
      const auto& dims = instance_tdims(cand.instance, max_level);
      if (dims == input_tdims) filtered.push_back(std::move(cand));
    }
    survivors = std::move(filtered);
  }

  if (survivors.empty()) {
    if (opts.support_family_check) {
      // Deficiency test on the input's own support family.
      JetSpaceShape shape{s.k(), s.ambient, max_level};
      AffineFamily x;
      x.shape = shape;
      x.domain_note = "support coefficients nonzero";
      SparseVec support = to_vector(shape, jet_of(s, max_level));
      for (const auto& [idx, c] : support)
        x.directions.push_back(SparseVec{{idx, Rational(1)}});
      if (!x.directions.empty()) {
        auto def = family_deficiency(x, max_level, GroupFilter::full(),
                                     opts.samples, opts.seed);
        report.samples_used = def.samples;
        if (def.not_simple_evidence) {
          report.verdict = Verdict::NotSimpleEvidence;
          report.witness =
              "support-family deficiency: dimX=" + std::to_string(def.dim_x) +
              ", orbit captures at most " +
              std::to_string(def.max_intersection) + " directions";
          return report;
        }
      }
    }
    report.verdict = Verdict::Unknown;
    report.reason = "no catalog instance matches the invariants at depth " +
                    std::to_string(max_level);
    return report;
  }

  // Prefer an exact jet match (catalog instances classify themselves);
  // otherwise the lexicographically smallest id, with the tie recorded.
  std::sort(survivors.begin(), survivors.end(),
            [](const CandidateData& a, const CandidateData& b) {
              if (a.instance.id != b.instance.id)
                return a.instance.id < b.instance.id;
              return a.instance.params < b.instance.params;
            });
  const CandidateData* winner = nullptr;
  Multigerm canon = sort_components(s);
  for (const auto& cand : survivors) {
    Multigerm cg = sort_components(
        stabilize(pad_truncation(cand.instance.germ, s.truncation)).germ);
    if (cg == canon) {
      winner = &cand;
      break;
    }
  }
  if (!winner) winner = &survivors.front();
  if (survivors.size() > 1) {
    std::string tie = "invariant tie between:";
    for (const auto& cand : survivors) tie += " " + cand.instance.id;
    report.notes.push_back(tie);
  }

  // Determinacy budget: refuse rather than conclude on a short jet.
  int d_claim = winner->instance.stated_determinacy.value_or(
      winner->instance.germ.truncation);
  if (s.truncation < d_claim + 1) {
    report.verdict = Verdict::Unknown;
    report.reason = "truncation " + std::to_string(s.truncation) +
                    " below determinacy requirement " +
                    std::to_string(d_claim + 1) + " of candidate " +
                    winner->instance.id;
    return report;
  }
  int scan_to = std::min(s.truncation, d_claim + 4);
  if (scan_to > d_claim) {
    auto det = verify_determinacy(s, d_claim, scan_to);
    if (!det.necessary_ok) {
      report.verdict = Verdict::Unknown;
      report.reason = "input carries a nontrivial transversal above level " +
                      std::to_string(d_claim) +
                      "; candidate " + winner->instance.id + " rejected";
      return report;
    }
  }

  report.verdict = Verdict::Simple;
  report.entry_id = winner->instance.id;
  report.params = winner->instance.params;
  return report;
}

}  // namespace multigerm
