#pragma once

#include <cstdint>
#include <random>

#include "multigerm/rational.hpp"

namespace multigerm {

// All randomness in the engine flows through one of these, seeded once, so
// identical (input, seed) pairs reproduce byte-identical results.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  // Nonzero rational with numerator and denominator in [1, 97] and a
  // random sign; generic sample points are built from these.
  Rational nonzero_rational() {
    std::uniform_int_distribution<int> d(1, 97);
    std::uniform_int_distribution<int> sign(0, 1);
    int num = d(gen_);
    int den = d(gen_);
    return Rational(sign(gen_) ? num : -num, den);
  }

  Rational nonzero_rational_excluding(const std::vector<Rational>& excluded) {
    for (int tries = 0; tries < 1000; ++tries) {
      Rational r = nonzero_rational();
      bool bad = false;
      for (const auto& e : excluded)
        if (r == e) bad = true;
      if (!bad) return r;
    }
    throw InternalError("could not sample outside excluded set");
  }

  int uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(gen_);
  }

  bool coin() { return uniform_int(0, 1) == 1; }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace multigerm
