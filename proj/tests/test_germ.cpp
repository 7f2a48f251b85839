#include <catch2/catch_amalgamated.hpp>

#include "multigerm/germ.hpp"
#include "multigerm/rng.hpp"

using namespace multigerm;

namespace {

Multigerm mg(const std::vector<std::vector<std::string>>& comps, int trunc) {
  return multigerm_from_strings(comps, trunc);
}

}  // namespace

TEST_CASE("multiplicity is the minimal coordinate order") {
  CHECK(multiplicity(mg({{"t^2", "t^3"}}, 8).components[0]) == 2);
  CHECK(multiplicity(mg({{"t", "0"}}, 8).components[0]) == 1);
  CHECK(multiplicity(mg({{"t^3", "t^5 + t^6"}}, 8).components[0]) == 3);
  CHECK_THROWS_AS(multiplicity(mg({{"0", "0"}}, 8).components[0]),
                  DegenerateComponentError);
}

TEST_CASE("monomial pullback") {
  auto c1 = mg({{"t^2", "t^2", "t^3"}}, 8).components[0];
  CHECK(pullback(c1, Monomial{{1, 1, 0}}) == parse_jet("t^4", 8));

  auto c2 = mg({{"t^2", "t^3"}}, 8).components[0];
  CHECK(pullback(c2, Monomial{{1, 1}}) == parse_jet("t^5", 8));

  // x2 - x1^2 on (t^2, t^4+t^5) realizes order 5.
  auto c3 = mg({{"t^2", "t^4 + t^5"}}, 8).components[0];
  Jet combo = pullback(c3, Monomial{{0, 1}}) - pullback(c3, Monomial{{2, 0}});
  CHECK(combo == parse_jet("t^5", 8));
}

TEST_CASE("pullback is multiplicative") {
  SeededRng rng(3);
  auto c = mg({{"t^2 + t^3", "t^3 - t^4"}}, 12).components[0];
  for (int trial = 0; trial < 20; ++trial) {
    Monomial a{{rng.uniform_int(0, 2), rng.uniform_int(0, 2)}};
    Monomial b{{rng.uniform_int(0, 2), rng.uniform_int(0, 2)}};
    Monomial ab{{a.exponents[0] + b.exponents[0],
                 a.exponents[1] + b.exponents[1]}};
    CHECK(pullback(c, ab) == pullback(c, a) * pullback(c, b));
  }
}

TEST_CASE("stabilize drops inessential coordinates") {
  // Zero third coordinate in C^3.
  auto f = mg({{"t", "0", "0"}, {"0", "t", "0"}}, 6);
  auto res = stabilize(f);
  CHECK(res.changed);
  CHECK(res.germ.ambient == 2);
  CHECK(res.germ == mg({{"t", "0"}, {"0", "t"}}, 6));

  // Rank-1 image of a single regular branch in C^2.
  auto g = stabilize(mg({{"t", "t"}}, 6));
  CHECK(g.germ.ambient == 1);
  CHECK(g.germ == mg({{"t"}}, 6));

  // Already minimal: unchanged, identity change.
  auto g2 = mg({{"t", "0"}, {"0", "t"}}, 6);
  auto res2 = stabilize(g2);
  CHECK_FALSE(res2.changed);
  CHECK(res2.germ == g2);
  CHECK(res2.change[0][0] == 1);
  CHECK(res2.change[0][1] == 0);
}

TEST_CASE("stabilize is idempotent and preserves the component count") {
  SeededRng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    int n = rng.uniform_int(2, 4);
    int k = rng.uniform_int(1, 3);
    std::vector<ComponentGerm> comps;
    for (int i = 0; i < k; ++i) {
      std::vector<Jet> coords;
      for (int j = 0; j < n; ++j) {
        Jet jet(8);
        for (int terms = rng.uniform_int(0, 2); terms-- > 0;)
          jet.add_term(rng.uniform_int(1, 8), rng.nonzero_rational());
        coords.push_back(jet);
      }
      comps.push_back(ComponentGerm{coords});
    }
    Multigerm f = make_multigerm(comps);
    bool all_zero = true;
    for (const auto& c : f.components) all_zero = all_zero && c.degenerate();
    if (all_zero) continue;
    auto once = stabilize(f);
    auto twice = stabilize(once.germ);
    CHECK(once.germ.k() == f.k());
    CHECK(twice.germ == once.germ);
  }
}

TEST_CASE("image separation witnesses") {
  CHECK(separate_images_check(mg({{"t", "0"}, {"0", "t"}}, 6)).verified);
  auto dup = separate_images_check(mg({{"t", "0"}, {"t", "0"}}, 6));
  CHECK_FALSE(dup.verified);
  CHECK(dup.first == 1);
  CHECK(dup.second == 2);
  CHECK(separate_images_check(mg({{"t", "0"}, {"t", "t^3"}}, 6)).verified);

  // Same image under a different parametrization stays unverified.
  CHECK_FALSE(separate_images_check(mg({{"t", "0"}, {"t + t^2", "0"}}, 6)).verified);
  // A double cover of a line against the line itself stays unverified.
  CHECK_FALSE(separate_images_check(mg({{"t", "0"}, {"t^2", "0"}}, 6)).verified);
  // Regular plus singular branch with the same tangent: multiplicities differ.
  CHECK(separate_images_check(mg({{"t", "0"}, {"t^2", "t^3"}}, 6)).verified);
  // Cusps with the same orders but incompatible leading coefficients.
  CHECK(
      separate_images_check(mg({{"t^2", "t^3"}, {"t^2", "2t^3"}}, 6)).verified);
  // The same cusp under a genuine reparametrization stays unverified.
  CHECK_FALSE(separate_images_check(
                  mg({{"t^2", "t^3"}, {"t^2 + 2t^3 + t^4", "t^3 + 3t^4 + 3t^5 + t^6"}}, 6))
                  .verified);
  // Double covers with matching squares stay unverified.
  CHECK_FALSE(
      separate_images_check(mg({{"t^2", "t^4"}, {"t^2", "t^4"}}, 6)).verified);
}

TEST_CASE("jet_of truncates every coordinate") {
  auto f = mg({{"t", "0"}, {"t^2", "t^3"}}, 6);
  CHECK(jet_of(f, 2) == mg({{"t", "0"}, {"t^2", "0"}}, 6));
  CHECK(jet_of(f, 6) == f);
  CHECK_THROWS_AS(jet_of(f, 7), TruncationError);

  auto g = mg({{"t", "0"}, {"t^2", "t^3 + t^4"}}, 6);
  CHECK(jet_of(g, 3) == mg({{"t", "0"}, {"t^2", "t^3"}}, 6));
}

TEST_CASE("multiplicity is invariant under changes of either side") {
  SeededRng rng(23);
  auto f = mg({{"t^2", "t^3"}, {"0", "t^2"}}, 9);
  for (int trial = 0; trial < 10; ++trial) {
    // Random invertible linear left change plus unit reparametrizations.
    PolyMap left;
    left.n_in = 2;
    left.coords.resize(2);
    do {
      for (auto& c : left.coords) c.clear();
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          if (rng.uniform_int(0, 2) == 0 && r != c) continue;
          Monomial m{{c == 0 ? 1 : 0, c == 1 ? 1 : 0}};
          left.coords[r].emplace_back(m, rng.nonzero_rational());
        }
    } while (!left.linear_part_invertible());
    std::vector<Jet> rights;
    for (int i = 0; i < 2; ++i) {
      Jet u = Jet::monomial(9, 1, rng.nonzero_rational());
      u.add_term(rng.uniform_int(2, 9), rng.nonzero_rational());
      rights.push_back(u);
    }
    Multigerm moved = apply_change(f, left, rights);
    for (int i = 0; i < f.k(); ++i)
      CHECK(multiplicity(moved.components[i]) ==
            multiplicity(f.components[i]));
  }
}
