#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "multigerm/errors.hpp"
#include "multigerm/rational.hpp"

namespace multigerm {

// Truncated univariate power series over Q. A jet carries its own
// truncation order N; every stored coefficient has exponent <= N and is
// nonzero. Exponent 0 is admitted (some internal bookkeeping needs
// constants); germ coordinates are required to have order >= 1 and that
// is enforced where components are built.
class Jet {
 public:
  Jet() : trunc_(1) {}

  explicit Jet(int truncation) : trunc_(truncation) {
    if (truncation < 1) throw PreconditionError("truncation must be >= 1");
  }

  static Jet zero(int truncation) { return Jet(truncation); }

  static Jet monomial(int truncation, int exponent, Rational coeff = 1) {
    Jet j(truncation);
    j.set(exponent, std::move(coeff));
    return j;
  }

  static Jet variable(int truncation) { return monomial(truncation, 1); }

  static Jet from_terms(int truncation,
                        std::vector<std::pair<int, Rational>> terms) {
    Jet j(truncation);
    for (auto& [e, c] : terms) j.add_term(e, c);
    return j;
  }

  int truncation() const { return trunc_; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::map<int, Rational>& terms() const { return coeffs_; }

  Rational coeff(int exponent) const {
    auto it = coeffs_.find(exponent);
    return it == coeffs_.end() ? Rational(0) : it->second;
  }

  // Smallest exponent with nonzero coefficient; nullopt means the jet is
  // zero through its truncation order (order "infinity").
  std::optional<int> order() const {
    if (coeffs_.empty()) return std::nullopt;
    return coeffs_.begin()->first;
  }

  Rational leading_coeff() const {
    if (coeffs_.empty()) return Rational(0);
    return coeffs_.begin()->second;
  }

  bool has_constant_term() const { return coeffs_.count(0) != 0; }

  // Copy with a new truncation order; lowering drops terms, raising keeps
  // the same terms (the caller asserts the tail is genuinely zero).
  Jet retruncate(int truncation) const {
    Jet out(truncation);
    for (const auto& [e, c] : coeffs_)
      if (e <= truncation) out.coeffs_.emplace(e, c);
    return out;
  }

  Jet truncate_at(int level) const {
    if (level > trunc_)
      throw TruncationError("truncate_at beyond truncation order");
    Jet out(trunc_);
    for (const auto& [e, c] : coeffs_)
      if (e <= level) out.coeffs_.emplace(e, c);
    return out;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet out(std::min(a.trunc_, b.trunc_));
    for (const auto& [e, c] : a.coeffs_)
      if (e <= out.trunc_) out.add_term(e, c);
    for (const auto& [e, c] : b.coeffs_)
      if (e <= out.trunc_) out.add_term(e, c);
    return out;
  }

  friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

  Jet operator-() const {
    Jet out(trunc_);
    for (const auto& [e, c] : coeffs_) out.coeffs_.emplace(e, -c);
    return out;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet out(std::min(a.trunc_, b.trunc_));
    for (const auto& [ea, ca] : a.coeffs_) {
      if (ea > out.trunc_) break;
      for (const auto& [eb, cb] : b.coeffs_) {
        int e = ea + eb;
        if (e > out.trunc_) break;
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }

  Jet scaled(const Rational& c) const {
    Jet out(trunc_);
    if (c.is_zero()) return out;
    for (const auto& [e, co] : coeffs_) out.coeffs_.emplace(e, co * c);
    return out;
  }

  // Multiplication by t^s.
  Jet shifted(int s) const {
    Jet out(trunc_);
    for (const auto& [e, c] : coeffs_)
      if (e + s <= trunc_) out.coeffs_.emplace(e + s, c);
    return out;
  }

  // Formal derivative. The truncation order is kept, so the coefficient of
  // t^N in the result is not represented (it would need the t^{N+1} term of
  // the input); callers that need the top degree work one level higher.
  Jet derivative() const {
    Jet out(trunc_);
    for (const auto& [e, c] : coeffs_)
      if (e >= 1 && e - 1 <= trunc_) out.coeffs_.emplace(e - 1, c * e);
    return out;
  }

  // outer(inner(t)); inner must have order >= 1.
  friend Jet compose(const Jet& outer, const Jet& inner) {
    if (!inner.is_zero() && *inner.order() < 1)
      throw PreconditionError("compose: inner jet has a constant term");
    int n = std::min(outer.trunc_, inner.trunc_);
    Jet out(n);
    if (outer.has_constant_term()) out.add_term(0, outer.coeff(0));
    Jet power = Jet::monomial(n, 0);  // inner^0
    int done = 0;
    for (const auto& [e, c] : outer.coeffs_) {
      if (e == 0) continue;
      if (inner.is_zero()) break;
      if (e * (*inner.order()) > n) break;
      while (done < e) {
        power = power * inner.retruncate(n);
        ++done;
      }
      for (const auto& [pe, pc] : power.terms()) out.add_term(pe, pc * c);
    }
    return out;
  }

  // Compositional inverse of a unit jet (order 1, invertible linear term).
  Jet reverted() const {
    if (order() != std::optional<int>(1) || coeff(1).is_zero())
      throw PreconditionError("reversion needs a unit jet");
    Rational c1 = coeff(1);
    Jet v = Jet::monomial(trunc_, 1, 1 / c1);
    for (int e = 2; e <= trunc_; ++e) {
      Jet w = compose(*this, v);
      Rational bad = w.coeff(e);
      if (!bad.is_zero()) v.add_term(e, -bad / c1);
    }
    return v;
  }

  friend bool operator==(const Jet& a, const Jet& b) {
    return a.trunc_ == b.trunc_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const Jet& a, const Jet& b) { return !(a == b); }

  // Strict weak order usable as a canonical sort key.
  friend bool operator<(const Jet& a, const Jet& b) {
    if (a.trunc_ != b.trunc_) return a.trunc_ < b.trunc_;
    return a.coeffs_ < b.coeffs_;
  }

  std::string str() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : coeffs_) {
      Rational a = c;
      if (first) {
        if (a < 0) {
          out += '-';
          a = -a;
        }
      } else {
        out += (a < 0) ? " - " : " + ";
        if (a < 0) a = -a;
      }
      first = false;
      if (e == 0) {
        out += to_string(a);
      } else {
        if (a != 1) out += to_string(a);
        out += 't';
        if (e != 1) {
          out += '^';
          out += std::to_string(e);
        }
      }
    }
    return out;
  }

  void add_term(int exponent, const Rational& c) {
    if (exponent < 0) throw PreconditionError("negative exponent");
    if (exponent > trunc_ || c.is_zero()) return;
    auto [it, fresh] = coeffs_.emplace(exponent, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

 private:
  void set(int exponent, Rational c) {
    if (exponent < 0 || exponent > trunc_)
      throw PreconditionError("exponent out of range");
    if (!c.is_zero()) coeffs_[exponent] = std::move(c);
  }

  int trunc_;
  std::map<int, Rational> coeffs_;
};

// Parses the polynomial string syntax: terms "c t^e" joined by + or -,
// e.g. "t^2 + 3/2t^5", "-t", "2t^3", "0". Constant terms are accepted
// only when allow_constant is set.
inline Jet parse_jet(std::string_view text, int truncation,
                     bool allow_constant = false) {
  Jet out(truncation);
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };
  skip_ws();
  if (i == text.size()) throw ParseError("empty jet literal");
  bool first = true;
  while (i < text.size()) {
    skip_ws();
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      if (first && text[i] == '+')
        throw ParseError("jet literal starts with '+'");
      sign = (text[i] == '-') ? -1 : 1;
      ++i;
      skip_ws();
    } else if (!first) {
      throw ParseError("expected '+' or '-' between jet terms");
    }
    first = false;
    size_t num_start = i;
    while (i < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[i])) ||
            text[i] == '/'))
      ++i;
    Rational coeff = 1;
    bool have_coeff = i > num_start;
    if (have_coeff) coeff = parse_rational(text.substr(num_start, i - num_start));
    skip_ws();
    int exponent = 0;
    bool have_t = i < text.size() && text[i] == 't';
    if (have_t) {
      ++i;
      exponent = 1;
      if (i < text.size() && text[i] == '^') {
        ++i;
        size_t e_start = i;
        while (i < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[i])))
          ++i;
        if (i == e_start) throw ParseError("missing exponent after '^'");
        exponent = std::stoi(std::string(text.substr(e_start, i - e_start)));
      }
    }
    if (!have_coeff && !have_t) throw ParseError("malformed jet term");
    if (!have_t && !allow_constant && !is_zero(coeff))
      throw ParseError("constant term not allowed in a germ jet");
    if (exponent == 0 && have_t)
      throw ParseError("malformed jet term");
    out.add_term(exponent, coeff * sign);
    skip_ws();
  }
  return out;
}

}  // namespace multigerm
