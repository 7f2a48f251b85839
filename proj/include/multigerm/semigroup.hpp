#pragma once

#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "multigerm/errors.hpp"
#include "multigerm/germ.hpp"

namespace multigerm {

// Achieved pullback orders of a branch, with the conductor certified when
// the stopping rule fired within the truncation bound.
struct NumericalSemigroup {
  int degree_floor = 0;          // order >= degree_floor functions only
  std::set<int> achieved;        // orders found, up to order_bound
  int order_bound = 0;
  int conductor = -1;            // every integer >= conductor is achieved
  bool complete = false;         // conductor certified within the bound
};

struct GapData {
  std::vector<int> gaps;         // positive integers below the conductor
  std::optional<int> largest_gap;  // N_k; nullopt when there are no gaps
};

inline GapData gap_data(const NumericalSemigroup& s) {
  if (!s.complete)
    throw PreconditionError("gap data needs a certified conductor");
  GapData out;
  for (int v = 1; v < s.conductor; ++v)
    if (!s.achieved.count(v)) out.gaps.push_back(v);
  if (!out.gaps.empty()) out.largest_gap = out.gaps.back();
  return out;
}

// Orders of pullbacks of all function germs of order >= k along the
// branch. Elements are tracked as explicit jets; whenever two tracked
// elements collide in order, the leading-coefficient-cancelling
// combination is queued, lowest colliding order first, until a fixed
// point. The conductor is certified once p consecutive integers are
// achieved, p being the least positive achieved order.
inline NumericalSemigroup value_semigroup(const ComponentGerm& c, int k,
                                          int order_bound) {
  if (c.degenerate())
    throw DegenerateComponentError("value semigroup of a zero component");
  if (k < 0) throw PreconditionError("degree floor must be >= 0");
  if (order_bound > c.truncation())
    throw TruncationError("order bound exceeds the truncation order");
  NumericalSemigroup out;
  out.degree_floor = k;
  out.order_bound = order_bound;

  // Seed: monomial pullbacks of degree >= k, pruned by order.
  std::map<int, Jet> by_order;  // representative jet per achieved order
  std::multimap<int, Jet> pending;
  detail::for_each_bounded_monomial(c, k, order_bound,
                            [&](const Monomial& m, int order) {
                              if (m.degree() == 0 && k > 0) return;
                              Jet j = pullback(c, m);
                              if (!j.is_zero() && *j.order() <= order_bound)
                                pending.emplace(*j.order(), j);
                              (void)order;
                            });
  if (k == 0) {
    // Units contribute order 0.
    by_order.emplace(0, Jet::monomial(c.truncation(), 0));
    out.achieved.insert(0);
  }
  while (!pending.empty()) {
    auto it = pending.begin();
    Jet j = it->second;
    pending.erase(it);
    if (j.is_zero()) continue;
    int o = *j.order();
    if (o > order_bound) continue;
    auto [slot, fresh] = by_order.emplace(o, j);
    if (fresh) {
      out.achieved.insert(o);
      continue;
    }
    Jet cancelled =
        j - slot->second.scaled(j.leading_coeff() / slot->second.leading_coeff());
    if (!cancelled.is_zero() && *cancelled.order() <= order_bound)
      pending.emplace(*cancelled.order(), cancelled);
  }

  // Stopping rule: p consecutive achieved integers certify the conductor.
  auto first_positive = out.achieved.upper_bound(0);
  if (first_positive != out.achieved.end()) {
    int p = *first_positive;
    int run = 0;
    for (int v = 1; v <= order_bound; ++v) {
      run = out.achieved.count(v) ? run + 1 : 0;
      if (run == p) {
        out.conductor = v - p + 1;
        out.complete = true;
        break;
      }
    }
  }
  return out;
}

struct InvariantPair {
  int p = 0;
  std::optional<int> q;  // nullopt: no non-multiple of p within the bound
};

// p = least positive achieved order, q = least achieved order above p that
// is not a multiple of p.
inline InvariantPair invariant_pair(const ComponentGerm& c) {
  NumericalSemigroup s = value_semigroup(c, 1, c.truncation());
  if (!s.complete)
    throw PreconditionError(
        "invariant pair needs a certified semigroup; raise the truncation");
  InvariantPair out;
  auto it = s.achieved.upper_bound(0);
  if (it == s.achieved.end())
    throw InternalError("complete semigroup without positive elements");
  out.p = *it;
  for (++it; it != s.achieved.end(); ++it)
    if (*it % out.p != 0) {
      out.q = *it;
      return out;
    }
  // Beyond the conductor the residues cycle, so absence up to the bound is
  // conclusive once conductor + p fits under it.
  return out;
}

// Largest integer missing from S_k; the cited determinacy bound for the
// left subgroup of changes with identity (k-1)-jet. Stated for n >= 2.
inline int determinacy_bound(const ComponentGerm& c, int k) {
  if (k < 1) throw PreconditionError("determinacy bound needs k >= 1");
  if (c.ambient_dim() < 2)
    throw PreconditionError("determinacy bound requires ambient dimension >= 2");
  NumericalSemigroup s = value_semigroup(c, k, c.truncation());
  if (!s.complete)
    throw TruncationError(
        "semigroup incomplete at this truncation; raise the truncation");
  GapData g = gap_data(s);
  return g.largest_gap.value_or(0);
}

}  // namespace multigerm
