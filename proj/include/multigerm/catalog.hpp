#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "multigerm/errors.hpp"
#include "multigerm/germ.hpp"
#include "multigerm/semigroup.hpp"
#include "multigerm/tangent.hpp"

namespace multigerm {

// ---------------------------------------------------------------------------
// Small affine expressions in the entry parameters (m, n, k, l, s, r).

struct AffineExpr {
  long long constant = 0;
  std::map<std::string, long long> coeffs;

  long long eval(const std::map<std::string, int>& params) const {
    long long v = constant;
    for (const auto& [var, c] : coeffs) {
      auto it = params.find(var);
      if (it == params.end())
        throw PreconditionError("unbound catalog parameter '" + var + "'");
      v += c * it->second;
    }
    return v;
  }

  void collect_vars(std::set<std::string>& out) const {
    for (const auto& [var, c] : coeffs) out.insert(var);
  }

  std::string str() const {
    std::string out;
    bool first = true;
    auto append = [&](long long c, const std::string& var) {
      if (c == 0) return;
      if (first) {
        if (c < 0) out += '-';
      } else {
        out += c < 0 ? " - " : " + ";
      }
      long long a = c < 0 ? -c : c;
      if (var.empty() || a != 1) out += std::to_string(a);
      out += var;
      first = false;
    };
    for (const auto& [var, c] : coeffs) append(c, var);
    if (constant != 0 || first) append(constant == 0 ? 0 : constant, "");
    if (out.empty()) out = "0";
    return out;
  }
};

enum class CmpOp { Lt, Le, Eq, Ge, Gt };

inline bool cmp_eval(long long a, CmpOp op, long long b) {
  switch (op) {
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Eq: return a == b;
    case CmpOp::Ge: return a >= b;
    case CmpOp::Gt: return a > b;
  }
  return false;
}

inline std::string cmp_str(CmpOp op) {
  switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

// Chained comparison such as "1 <= m < n <= 2m".
struct ConstraintChain {
  std::vector<AffineExpr> exprs;
  std::vector<CmpOp> ops;

  bool holds(const std::map<std::string, int>& params) const {
    for (size_t i = 0; i < ops.size(); ++i)
      if (!cmp_eval(exprs[i].eval(params), ops[i], exprs[i + 1].eval(params)))
        return false;
    return true;
  }

  std::string str() const {
    std::string out = exprs[0].str();
    for (size_t i = 0; i < ops.size(); ++i)
      out += " " + cmp_str(ops[i]) + " " + exprs[i + 1].str();
    return out;
  }
};

// ---------------------------------------------------------------------------
// Component templates.

struct CoordTemplate {
  std::vector<AffineExpr> exponents;  // sum of unit-coefficient powers; empty = 0
};

struct CompTemplate {
  bool axes = false;          // expands to the coordinate axes of dimension n
  AffineExpr axes_n;
  std::vector<std::pair<CoordTemplate, AffineExpr>> coords;  // (coord, repeat)
  bool fixed = false;         // header component; exempt from the weight
};

struct DeterminacyRule {
  std::vector<ConstraintChain> guard;  // empty guard = default rule
  AffineExpr value;
};

struct CatalogEntry {
  std::string id;
  std::string part;
  std::vector<std::string> params;
  std::vector<ConstraintChain> where;
  std::vector<std::vector<ConstraintChain>> besides;  // each: NOT(all hold)
  std::vector<CompTemplate> comps;                    // in component order
  std::vector<DeterminacyRule> determinacy;
};

struct Catalog {
  int version = 0;
  std::vector<CatalogEntry> entries;
  std::map<std::string, size_t> by_id;

  const CatalogEntry& entry(const std::string& id) const {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw PreconditionError("unknown catalog id " + id);
    return entries[it->second];
  }
};

// ---------------------------------------------------------------------------
// Parsing.

namespace catalog_detail {

inline void skip_ws(std::string_view s, size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

inline AffineExpr parse_expr(std::string_view s, size_t& i);

inline AffineExpr parse_factor(std::string_view s, size_t& i) {
  skip_ws(s, i);
  AffineExpr out;
  if (i < s.size() && s[i] == '(') {
    ++i;
    out = parse_expr(s, i);
    skip_ws(s, i);
    if (i >= s.size() || s[i] != ')') throw ParseError("expected ')'");
    ++i;
    return out;
  }
  bool have = false;
  long long value = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    value = value * 10 + (s[i] - '0');
    ++i;
    have = true;
  }
  if (have) {
    out.constant = value;
    // Implicit multiplication: 2m, 3(m+n).
    if (i < s.size() &&
        (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '(')) {
      AffineExpr rhs = parse_factor(s, i);
      AffineExpr scaled;
      scaled.constant = rhs.constant * value;
      for (const auto& [var, c] : rhs.coeffs) scaled.coeffs[var] = c * value;
      return scaled;
    }
    return out;
  }
  if (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) {
    std::string var(1, s[i]);
    ++i;
    out.coeffs[var] = 1;
    return out;
  }
  throw ParseError("malformed expression near '" + std::string(s.substr(i)) +
                   "'");
}

inline AffineExpr parse_expr(std::string_view s, size_t& i) {
  skip_ws(s, i);
  int sign = 1;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    sign = s[i] == '-' ? -1 : 1;
    ++i;
  }
  AffineExpr out = parse_factor(s, i);
  if (sign < 0) {
    out.constant = -out.constant;
    for (auto& [var, c] : out.coeffs) c = -c;
  }
  for (;;) {
    skip_ws(s, i);
    if (i >= s.size() || (s[i] != '+' && s[i] != '-')) break;
    int term_sign = s[i] == '-' ? -1 : 1;
    ++i;
    AffineExpr term = parse_factor(s, i);
    out.constant += term_sign * term.constant;
    for (const auto& [var, c] : term.coeffs) {
      out.coeffs[var] += term_sign * c;
      if (out.coeffs[var] == 0) out.coeffs.erase(var);
    }
  }
  return out;
}

inline AffineExpr parse_expr_all(std::string_view s) {
  size_t i = 0;
  AffineExpr out = parse_expr(s, i);
  skip_ws(s, i);
  if (i != s.size())
    throw ParseError("trailing text in expression: '" + std::string(s) + "'");
  return out;
}

inline ConstraintChain parse_chain(std::string_view s) {
  ConstraintChain chain;
  size_t i = 0;
  chain.exprs.push_back(parse_expr(s, i));
  for (;;) {
    skip_ws(s, i);
    if (i >= s.size()) break;
    CmpOp op;
    if (s.compare(i, 2, "<=") == 0) {
      op = CmpOp::Le;
      i += 2;
    } else if (s.compare(i, 2, ">=") == 0) {
      op = CmpOp::Ge;
      i += 2;
    } else if (s[i] == '<') {
      op = CmpOp::Lt;
      ++i;
    } else if (s[i] == '>') {
      op = CmpOp::Gt;
      ++i;
    } else if (s[i] == '=') {
      op = CmpOp::Eq;
      ++i;
    } else {
      throw ParseError("expected comparison in '" + std::string(s) + "'");
    }
    chain.ops.push_back(op);
    chain.exprs.push_back(parse_expr(s, i));
  }
  if (chain.ops.empty())
    throw ParseError("constraint without comparison: '" + std::string(s) + "'");
  return chain;
}

inline std::vector<std::string> split_top_commas(std::string_view s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(' || ch == '{') ++depth;
    if (ch == ')' || ch == '}') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// Coordinate grammar: "0" or "t^{expr}[+...]" with "t" = t^1 and
// "t^3" = literal power; an optional "*{expr}" suffix repeats the
// coordinate.
inline std::pair<CoordTemplate, AffineExpr> parse_coord(std::string_view raw) {
  std::string text = trim(raw);
  AffineExpr repeat;
  repeat.constant = 1;
  auto star = text.find("*{");
  if (star != std::string::npos) {
    if (text.back() != '}') throw ParseError("bad repeat suffix: " + text);
    repeat = parse_expr_all(text.substr(star + 2, text.size() - star - 3));
    text = trim(text.substr(0, star));
  }
  CoordTemplate coord;
  if (text == "0") return {coord, repeat};
  size_t i = 0;
  bool first = true;
  while (i < text.size()) {
    skip_ws(text, i);
    if (!first) {
      if (text[i] != '+') throw ParseError("expected '+' in coordinate " + text);
      ++i;
      skip_ws(text, i);
    }
    first = false;
    if (text[i] != 't') throw ParseError("expected 't' in coordinate " + text);
    ++i;
    AffineExpr e;
    if (i < text.size() && text[i] == '^') {
      ++i;
      if (i < text.size() && text[i] == '{') {
        size_t close = text.find('}', i);
        if (close == std::string::npos) throw ParseError("missing '}'");
        e = parse_expr_all(text.substr(i + 1, close - i - 1));
        i = close + 1;
      } else {
        size_t start = i;
        while (i < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[i])))
          ++i;
        if (i == start) throw ParseError("missing exponent in " + text);
        e.constant = std::stoll(text.substr(start, i - start));
      }
    } else {
      e.constant = 1;
    }
    coord.exponents.push_back(e);
    skip_ws(text, i);
  }
  return {coord, repeat};
}

inline CompTemplate parse_component(std::string_view raw, bool fixed) {
  CompTemplate out;
  out.fixed = fixed;
  std::string text = trim(raw);
  if (text.rfind("axes{", 0) == 0) {
    if (text.back() != '}') throw ParseError("bad axes spec: " + text);
    out.axes = true;
    out.axes_n = parse_expr_all(text.substr(5, text.size() - 6));
    return out;
  }
  if (text.front() != '(' || text.back() != ')')
    throw ParseError("component must be parenthesized: " + text);
  for (const auto& piece :
       split_top_commas(std::string_view(text).substr(1, text.size() - 2)))
    out.coords.push_back(parse_coord(piece));
  return out;
}

}  // namespace catalog_detail

inline Catalog parse_catalog(std::string_view text) {
  using namespace catalog_detail;
  Catalog catalog;
  std::vector<CompTemplate> part_pre, part_post;
  std::string part_id;
  CatalogEntry* entry = nullptr;
  std::vector<DeterminacyRule> pending_rules;

  auto finish_entry = [&]() {
    if (!entry) return;
    // Fixed part components wrap the entry's own ones.
    std::vector<CompTemplate> comps = part_pre;
    for (auto& c : entry->comps) comps.push_back(c);
    for (const auto& c : part_post) comps.push_back(c);
    entry->comps = std::move(comps);
    entry = nullptr;
  };

  size_t line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    auto fail = [&](const std::string& what) {
      throw ParseError("catalog line " + std::to_string(line_no) + ": " + what);
    };
    if (line.empty() || line[0] == '#') {
      if (pos > text.size()) break;
      continue;
    }
    try {
      if (line.rfind("version", 0) == 0) {
        catalog.version = std::stoi(trim(line.substr(7)));
      } else if (line.rfind("part ", 0) == 0) {
        finish_entry();
        part_id = trim(line.substr(5));
        part_pre.clear();
        part_post.clear();
      } else if (line.rfind("entry ", 0) == 0) {
        finish_entry();
        catalog.entries.emplace_back();
        entry = &catalog.entries.back();
        entry->id = trim(line.substr(6));
        entry->part = part_id;
        if (catalog.by_id.count(entry->id)) fail("duplicate id " + entry->id);
        catalog.by_id[entry->id] = catalog.entries.size() - 1;
      } else {
        auto colon = line.find(':');
        if (colon == std::string::npos) fail("expected 'key: value'");
        std::string key = trim(line.substr(0, colon));
        std::string value = trim(line.substr(colon + 1));
        if (key == "fixed") {
          if (entry) fail("fixed components belong to a part block");
          part_pre.push_back(parse_component(value, /*fixed=*/true));
        } else if (key == "fixed_post") {
          if (entry) fail("fixed components belong to a part block");
          part_post.push_back(parse_component(value, /*fixed=*/true));
        } else if (key == "note") {
          // Informational only.
        } else if (!entry) {
          fail("field outside an entry: " + key);
        } else if (key == "params") {
          size_t i = 0;
          while (i < value.size()) {
            while (i < value.size() &&
                   std::isspace(static_cast<unsigned char>(value[i])))
              ++i;
            if (i < value.size()) {
              entry->params.push_back(std::string(1, value[i]));
              ++i;
            }
          }
        } else if (key == "where") {
          for (const auto& clause : split_top_commas(value))
            if (!trim(clause).empty())
              entry->where.push_back(parse_chain(trim(clause)));
        } else if (key == "besides") {
          std::vector<ConstraintChain> group;
          for (const auto& clause : split_top_commas(value))
            group.push_back(parse_chain(trim(clause)));
          entry->besides.push_back(std::move(group));
        } else if (key == "comp") {
          entry->comps.push_back(parse_component(value, /*fixed=*/false));
        } else if (key == "determinacy") {
          DeterminacyRule rule;
          rule.value = parse_expr_all(value);
          entry->determinacy.push_back(std::move(rule));
        } else if (key.rfind("determinacy_if ", 0) == 0) {
          DeterminacyRule rule;
          rule.guard.push_back(parse_chain(key.substr(15)));
          rule.value = parse_expr_all(value);
          entry->determinacy.push_back(std::move(rule));
        } else {
          fail("unknown field '" + key + "'");
        }
      }
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
    if (pos > text.size()) break;
  }
  finish_entry();

  // Schema validation: every variable must be a declared parameter.
  for (const auto& e : catalog.entries) {
    std::set<std::string> declared(e.params.begin(), e.params.end());
    std::set<std::string> used;
    for (const auto& c : e.where)
      for (const auto& ex : c.exprs) ex.collect_vars(used);
    for (const auto& group : e.besides)
      for (const auto& c : group)
        for (const auto& ex : c.exprs) ex.collect_vars(used);
    for (const auto& comp : e.comps) {
      if (comp.axes) comp.axes_n.collect_vars(used);
      for (const auto& [coord, rep] : comp.coords) {
        rep.collect_vars(used);
        for (const auto& ex : coord.exponents) ex.collect_vars(used);
      }
    }
    for (const auto& rule : e.determinacy) {
      rule.value.collect_vars(used);
      for (const auto& c : rule.guard)
        for (const auto& ex : c.exprs) ex.collect_vars(used);
    }
    for (const auto& var : used)
      if (!declared.count(var))
        throw ParseError("entry " + e.id + " uses undeclared parameter '" +
                         var + "'");
    if (e.comps.empty())
      throw ParseError("entry " + e.id + " has no components");
  }
  return catalog;
}

// ---------------------------------------------------------------------------
// Instantiation.

struct CatalogInstance {
  std::string id;
  std::map<std::string, int> params;
  Multigerm germ;
  long long weight = 0;
  std::optional<int> stated_determinacy;
};

struct ConstraintCheck {
  bool ok = true;
  std::string violated;
};

inline ConstraintCheck check_constraints(const CatalogEntry& entry,
                                         const std::map<std::string, int>& p) {
  for (const auto& chain : entry.where)
    if (!chain.holds(p)) return {false, chain.str() + " violated"};
  for (const auto& group : entry.besides) {
    bool all = true;
    for (const auto& chain : group) all = all && chain.holds(p);
    if (all) {
      std::string what = "besides ";
      for (size_t i = 0; i < group.size(); ++i)
        what += (i ? ", " : "") + group[i].str();
      return {false, what + " excluded"};
    }
  }
  return {true, ""};
}

inline std::optional<int> stated_determinacy(
    const CatalogEntry& entry, const std::map<std::string, int>& p) {
  for (const auto& rule : entry.determinacy) {
    bool match = true;
    for (const auto& chain : rule.guard) match = match && chain.holds(p);
    if (match) return static_cast<int>(rule.value.eval(p));
  }
  return std::nullopt;
}

inline CatalogInstance instantiate(const Catalog& catalog,
                                   const std::string& id,
                                   const std::map<std::string, int>& params) {
  const CatalogEntry& entry = catalog.entry(id);
  for (const auto& name : entry.params)
    if (!params.count(name))
      throw PreconditionError("entry " + id + " needs parameter " + name);
  auto check = check_constraints(entry, params);
  if (!check.ok)
    throw PreconditionError("entry " + id + ": " + check.violated);

  // Realize coordinate lists and the weight.
  struct RawComp {
    std::vector<std::vector<int>> exponent_sums;  // per coordinate
    bool fixed;
  };
  std::vector<RawComp> raw;
  long long weight = 0;
  int ambient = 0;
  for (const auto& comp : entry.comps) {
    if (comp.axes) {
      int n = static_cast<int>(comp.axes_n.eval(params));
      if (n < 1) throw PreconditionError("axes dimension must be positive");
      for (int i = 0; i < n; ++i) {
        RawComp rc;
        rc.fixed = comp.fixed;
        rc.exponent_sums.assign(n, {});
        rc.exponent_sums[i] = {1};
        raw.push_back(std::move(rc));
        if (!comp.fixed) weight += 1;
      }
      ambient = std::max(ambient, n);
      continue;
    }
    RawComp rc;
    rc.fixed = comp.fixed;
    for (const auto& [coord, rep] : comp.coords) {
      long long copies = rep.eval(params);
      if (copies < 0)
        throw PreconditionError("negative coordinate repeat in " + id);
      for (long long c = 0; c < copies; ++c) {
        std::vector<int> exps;
        for (const auto& e : coord.exponents) {
          long long v = e.eval(params);
          if (v < 1)
            throw PreconditionError("nonpositive exponent in entry " + id);
          exps.push_back(static_cast<int>(v));
          if (!comp.fixed) weight += v;
        }
        rc.exponent_sums.push_back(std::move(exps));
      }
    }
    ambient = std::max(ambient, static_cast<int>(rc.exponent_sums.size()));
    raw.push_back(std::move(rc));
  }

  int truncation = 1;
  for (const auto& rc : raw)
    for (const auto& coord : rc.exponent_sums)
      for (int e : coord) truncation = std::max(truncation, e);

  std::vector<ComponentGerm> comps;
  for (const auto& rc : raw) {
    std::vector<Jet> coords;
    for (const auto& exps : rc.exponent_sums) {
      Jet j(truncation);
      for (int e : exps) j.add_term(e, 1);
      coords.push_back(std::move(j));
    }
    while (static_cast<int>(coords.size()) < ambient)
      coords.push_back(Jet::zero(truncation));
    comps.push_back(ComponentGerm{std::move(coords)});
  }

  CatalogInstance out;
  out.id = id;
  out.params = params;
  out.germ = make_multigerm(std::move(comps));
  out.weight = weight;
  out.stated_determinacy = stated_determinacy(entry, params);
  return out;
}

// All constraint-satisfying assignments whose weight stays within the
// bound, ordered by (weight, parameter tuple).
inline std::vector<CatalogInstance> enumerate_instances(
    const Catalog& catalog, const std::string& id, long long weight_bound) {
  const CatalogEntry& entry = catalog.entry(id);
  std::vector<CatalogInstance> out;
  std::map<std::string, int> params;
  int nparams = static_cast<int>(entry.params.size());
  // Parameters appear in the weight with positive coefficients, so the
  // bound caps each one; scanning 0..bound is exhaustive.
  int cap = static_cast<int>(weight_bound);
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == nparams) {
      auto check = check_constraints(entry, params);
      if (!check.ok) return;
      CatalogInstance inst = instantiate(catalog, id, params);
      if (inst.weight <= weight_bound) out.push_back(std::move(inst));
      return;
    }
    for (int v = 0; v <= cap; ++v) {
      params[entry.params[pos]] = v;
      self(self, pos + 1);
    }
    params.erase(entry.params[pos]);
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(),
            [&](const CatalogInstance& a, const CatalogInstance& b) {
              if (a.weight != b.weight) return a.weight < b.weight;
              for (const auto& name : entry.params) {
                int av = a.params.at(name), bv = b.params.at(name);
                if (av != bv) return av < bv;
              }
              return false;
            });
  return out;
}

// First `count` admissible assignments in enumeration order.
inline std::vector<CatalogInstance> smallest_instances(const Catalog& catalog,
                                                       const std::string& id,
                                                       int count,
                                                       long long max_weight = 64) {
  std::vector<CatalogInstance> all = enumerate_instances(catalog, id, max_weight);
  if (static_cast<int>(all.size()) > count) all.resize(count);
  return all;
}

// ---------------------------------------------------------------------------
// Fingerprints.

struct ComponentSignature {
  int multiplicity = 0;
  int p = 0;
  int q = -1;  // -1: no element above p outside pZ
  std::vector<int> s0_gaps;

  friend bool operator==(const ComponentSignature& a,
                         const ComponentSignature& b) {
    return a.multiplicity == b.multiplicity && a.p == b.p && a.q == b.q &&
           a.s0_gaps == b.s0_gaps;
  }
  friend bool operator<(const ComponentSignature& a,
                        const ComponentSignature& b) {
    if (a.multiplicity != b.multiplicity) return a.multiplicity < b.multiplicity;
    if (a.p != b.p) return a.p < b.p;
    if (a.q != b.q) return a.q < b.q;
    return a.s0_gaps < b.s0_gaps;
  }
};

struct Fingerprint {
  int k = 0;
  int essential_dim = 0;
  std::vector<ComponentSignature> components;  // canonically sorted
  std::vector<int> orbit_dims;

  friend bool operator==(const Fingerprint& a, const Fingerprint& b) {
    return a.k == b.k && a.essential_dim == b.essential_dim &&
           a.components == b.components && a.orbit_dims == b.orbit_dims;
  }
  friend bool operator!=(const Fingerprint& a, const Fingerprint& b) {
    return !(a == b);
  }

  // Cheap invariants only; used to pre-filter catalog candidates.
  bool same_discrete_part(const Fingerprint& other) const {
    return k == other.k && essential_dim == other.essential_dim &&
           components == other.components;
  }

  std::string str() const {
    std::string out = "k=" + std::to_string(k) +
                      " dim=" + std::to_string(essential_dim) + " comps=[";
    for (size_t i = 0; i < components.size(); ++i) {
      const auto& c = components[i];
      if (i) out += " ";
      out += "(m" + std::to_string(c.multiplicity) + ",p" + std::to_string(c.p) +
             ",q" + std::to_string(c.q) + ",g{";
      for (size_t j = 0; j < c.s0_gaps.size(); ++j)
        out += (j ? "," : "") + std::to_string(c.s0_gaps[j]);
      out += "})";
    }
    out += "] orbit=[";
    for (size_t i = 0; i < orbit_dims.size(); ++i)
      out += (i ? "," : "") + std::to_string(orbit_dims[i]);
    out += "]";
    return out;
  }
};

// A-invariant fingerprint: stabilized shape, per-component branch
// invariants as a sorted multiset, and the orbit dimension sequence.
// Throws TruncationError when the truncation cannot certify the branch
// semigroups.
inline Fingerprint fingerprint(const Multigerm& f, int depth) {
  Multigerm g = stabilize(f).germ;
  Fingerprint out;
  out.k = g.k();
  out.essential_dim = g.ambient;
  for (const auto& comp : g.components) {
    if (comp.degenerate())
      throw DegenerateComponentError("fingerprint of a degenerate component");
    ComponentSignature sig;
    sig.multiplicity = multiplicity(comp);
    NumericalSemigroup s0 = value_semigroup(comp, 0, g.truncation);
    if (!s0.complete)
      throw TruncationError(
          "branch semigroup incomplete; raise the truncation");
    auto gaps = gap_data(s0);
    sig.s0_gaps = gaps.gaps;
    auto pq = invariant_pair(comp);
    sig.p = pq.p;
    sig.q = pq.q.value_or(-1);
    out.components.push_back(std::move(sig));
  }
  std::sort(out.components.begin(), out.components.end());
  out.orbit_dims = orbit_dim_sequence(g, std::min(depth, g.truncation));
  return out;
}

}  // namespace multigerm
