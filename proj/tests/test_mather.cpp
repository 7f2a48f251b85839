#include <catch2/catch_amalgamated.hpp>

#include "multigerm/mather.hpp"
#include "multigerm/rng.hpp"

using namespace multigerm;

namespace {

Multigerm mg(const std::vector<std::vector<std::string>>& comps, int trunc) {
  return multigerm_from_strings(comps, trunc);
}

}  // namespace

TEST_CASE("top-degree term of a (3,5) branch merges away") {
  // (t^3, t^5+t^6+a t^9) is in one orbit across a; canonical value a = 0.
  AffineFamily x = make_family(mg({{"t^3", "t^5 + t^6"}}, 9), 9,
                               {mg({{"0", "t^9"}}, 9)});
  auto res = merge_parameter(x, 9, GroupFilter::full(), 4, 42);
  CHECK(res.report.contained);
  CHECK(res.report.constant_rank);
  REQUIRE(res.merged);
  CHECK(*res.jet == mg({{"t^3", "t^5 + t^6"}}, 9));
}

TEST_CASE("the equal-2-jet pair family is refused") {
  AffineFamily x = make_family(mg({{"t^2", "t^3"}, {"t^2", "0"}}, 3), 3,
                               {mg({{"0", "0"}, {"0", "t^3"}}, 3)});
  x.excluded_values = {{Rational(0), Rational(1)}};
  x.domain_note = "parameter differs from 0 and 1";
  auto report = mather_check(x, 3, GroupFilter::full(), 4, 42);
  CHECK_FALSE(report.contained);
  CHECK(report.constant_rank);
  REQUIRE(report.witness_direction.has_value());
  JetSpaceShape s{2, 2, 3};
  CHECK(*report.witness_direction ==
        SparseVec{{s.index(1, 1, 3), Rational(1)}});
  auto res = merge_parameter(x, 3, GroupFilter::full(), 4, 42);
  CHECK_FALSE(res.merged);
}

TEST_CASE("a single point passes vacuously") {
  AffineFamily x = make_family(mg({{"t", "0"}}, 3), 3, {});
  auto report = mather_check(x, 3, GroupFilter::full(), 2, 7);
  CHECK(report.contained);
  CHECK(report.constant_rank);
  CHECK_THROWS_AS(mather_check(x, 3, GroupFilter::full(), 1, 7),
                  PreconditionError);
}

TEST_CASE("verdicts are stable under reseeding") {
  AffineFamily x = make_family(mg({{"t^2", "t^3"}, {"t^2", "0"}}, 3), 3,
                               {mg({{"0", "0"}, {"0", "t^3"}}, 3)});
  x.excluded_values = {{Rational(0), Rational(1)}};
  for (std::uint64_t seed : {1ull, 77ull, 4242ull}) {
    auto report = mather_check(x, 3, GroupFilter::full(), 4, seed);
    CHECK_FALSE(report.contained);
    CHECK(report.constant_rank);
  }
}

TEST_CASE("families built inside one orbit always pass") {
  SeededRng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2;
    int trunc = 6;
    std::vector<ComponentGerm> comps;
    int k = rng.uniform_int(1, 2);
    for (int i = 0; i < k; ++i) {
      std::vector<Jet> coords;
      for (int j = 0; j < n; ++j) {
        Jet jet(trunc);
        for (int terms = rng.uniform_int(1, 2); terms-- > 0;)
          jet.add_term(rng.uniform_int(1, 4), rng.nonzero_rational());
        coords.push_back(jet);
      }
      comps.push_back(ComponentGerm{coords});
    }
    Multigerm f = make_multigerm(comps);
    bool degenerate = false;
    for (const auto& c : f.components) degenerate |= c.degenerate();
    if (degenerate) continue;

    // Deform along the flow of a quadratic coordinate field: the whole
    // line stays inside one orbit, so both conditions must hold.
    Monomial quad{{rng.uniform_int(0, 2) == 0 ? 2 : 1,
                   rng.uniform_int(0, 1) == 0 ? 0 : 1}};
    if (quad.degree() < 2) quad.exponents[1] += 1;
    int target = rng.uniform_int(0, n - 1);
    std::vector<ComponentGerm> dir_comps;
    for (int i = 0; i < k; ++i) {
      std::vector<Jet> coords(n, Jet::zero(trunc));
      coords[target] = pullback(f.components[i], quad);
      dir_comps.push_back(ComponentGerm{coords});
    }
    Multigerm dir = make_multigerm(dir_comps);
    bool dir_zero = true;
    for (const auto& c : dir.components) dir_zero &= c.degenerate();
    if (dir_zero) continue;
    AffineFamily x = make_family(f, trunc, {dir});
    auto report = mather_check(x, trunc, GroupFilter::full(), 3, 1000 + trial);
    CHECK(report.contained);
    CHECK(report.constant_rank);
  }
}

TEST_CASE("dependent directions are rejected") {
  auto f = mg({{"t^2", "t^3"}}, 4);
  AffineFamily x = make_family(
      f, 4, {mg({{"0", "t^4"}}, 4), mg({{"0", "2t^4"}}, 4)});
  CHECK_THROWS_AS(mather_check(x, 4, GroupFilter::full(), 2, 1),
                  PreconditionError);
}
