#include <catch2/catch_amalgamated.hpp>

#include "multigerm/builtin_catalog.hpp"
#include "multigerm/rng.hpp"

using namespace multigerm;

namespace {

Multigerm mg(const std::vector<std::vector<std::string>>& comps, int trunc) {
  return multigerm_from_strings(comps, trunc);
}

}  // namespace

TEST_CASE("catalog loads and validates") {
  const Catalog& cat = builtin_catalog();
  CHECK(cat.version == 1);
  CHECK(cat.entries.size() == 145);
  CHECK_THROWS_AS(cat.entry("9.9.9"), PreconditionError);
}

TEST_CASE("catalog rejects malformed data") {
  CHECK_THROWS_AS(parse_catalog("entry x\n  comp: (t^2, t^{2q+1})\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_catalog("entry x\n  frobnicate: 1\n"), ParseError);
  CHECK_THROWS_AS(parse_catalog("entry x\nentry x\n"), ParseError);
}

TEST_CASE("instantiation realizes templates with padding") {
  const Catalog& cat = builtin_catalog();
  auto inst = instantiate(cat, "1.2.3", {{"m", 1}, {"n", 2}});
  CHECK(inst.germ == mg({{"t", "0", "0"}, {"t^2", "t^3", "t^4"}}, 4));
  CHECK(inst.weight == 2 + 3 + 4);

  auto g3 = instantiate(cat, "3.1", {{"n", 3}});
  CHECK(g3.germ ==
        mg({{"t", "0", "0"}, {"0", "t", "0"}, {"0", "0", "t"}}, 1));

  auto five = instantiate(cat, "5.1", {{"m", 1}});
  CHECK(five.germ.ambient == 5);
  CHECK(five.germ.k() == 3);
  CHECK(five.germ.components[0].coords[0] == parse_jet("t", 3));
  CHECK(five.germ.components[2].coords[2] == parse_jet("t^2", 3));
  CHECK(five.germ.components[1].coords[4] == parse_jet("t^3", 3));
}

TEST_CASE("constraint violations are reported") {
  const Catalog& cat = builtin_catalog();
  CHECK_THROWS_WITH(instantiate(cat, "1.2.2", {{"m", 1}, {"n", 3}}),
                    Catch::Matchers::ContainsSubstring("violated"));
  CHECK_THROWS_WITH(
      instantiate(cat, "1.3.11", {{"m", 2}, {"n", 3}, {"l", 3}}),
      Catch::Matchers::ContainsSubstring("besides"));
  CHECK_THROWS_AS(instantiate(cat, "1.2.1", {}), PreconditionError);
}

TEST_CASE("enumeration respects the weight bound and ordering") {
  const Catalog& cat = builtin_catalog();
  auto insts = enumerate_instances(cat, "1.2.1", 9);
  REQUIRE(insts.size() == 3);
  CHECK(insts[0].params.at("m") == 1);
  CHECK(insts[1].params.at("m") == 2);
  CHECK(insts[2].params.at("m") == 3);
  CHECK(insts[2].germ.components[1].coords[1] == parse_jet("t^7", 7));

  for (const auto& inst : enumerate_instances(cat, "2.1.1", 14))
    CHECK(inst.params.at("m") <= inst.params.at("n"));

  CHECK(enumerate_instances(cat, "1.4.1", 3).empty());
}

TEST_CASE("stated determinacy evaluates per instance") {
  const Catalog& cat = builtin_catalog();
  CHECK(instantiate(cat, "1.2.1", {{"m", 2}}).stated_determinacy ==
        std::optional<int>(8));
  CHECK(instantiate(cat, "4.1.8", {{"n", 2}, {"k", 0}}).stated_determinacy ==
        std::optional<int>(7));
  CHECK(instantiate(cat, "4.1.8", {{"n", 2}, {"k", 1}}).stated_determinacy ==
        std::optional<int>(5));
  CHECK_FALSE(instantiate(cat, "1.4.19", {}).stated_determinacy.has_value());
}

TEST_CASE("every entry instantiates at its three smallest assignments") {
  const Catalog& cat = builtin_catalog();
  for (const auto& entry : cat.entries) {
    auto insts = smallest_instances(cat, entry.id, 3);
    INFO("entry " << entry.id);
    CHECK(!insts.empty());
    size_t expected = entry.params.empty() ? 1 : 3;
    CHECK(insts.size() == expected);
    for (const auto& inst : insts) {
      CHECK(inst.germ.k() >= 2);
      auto sep = separate_images_check(inst.germ);
      CHECK(sep.verified);
    }
  }
}

TEST_CASE("fingerprints separate close normal forms") {
  const Catalog& cat = builtin_catalog();
  // Axes versus a tangent regular pair: same branch invariants, different
  // orbit dimensions.
  auto axes = mg({{"t", "0"}, {"0", "t"}}, 4);
  auto tangent_pair = mg({{"t", "0"}, {"t", "t^2"}}, 4);
  CHECK(fingerprint(axes, 3) != fingerprint(tangent_pair, 3));

  auto a = instantiate(cat, "1.2.1", {{"m", 1}}).germ;   // (t^2, t^3)
  auto b = instantiate(cat, "1.2.1", {{"m", 2}}).germ;   // (t^2, t^5)
  CHECK(fingerprint(pad_truncation(a, 6), 3) !=
        fingerprint(pad_truncation(b, 6), 3));

  // Permutation invariance.
  auto g3 = instantiate(cat, "3.1", {{"n", 3}}).germ;
  Multigerm permuted = g3;
  std::swap(permuted.components[0], permuted.components[2]);
  CHECK(fingerprint(pad_truncation(g3, 4), 4) ==
        fingerprint(pad_truncation(permuted, 4), 4));
}

TEST_CASE("fingerprints are equivalence invariants") {
  SeededRng rng(12);
  const Catalog& cat = builtin_catalog();
  auto f = pad_truncation(instantiate(cat, "1.2.1", {{"m", 1}}).germ, 8);
  auto base = fingerprint(f, 4);
  for (int trial = 0; trial < 5; ++trial) {
    PolyMap left;
    left.n_in = 2;
    left.coords.resize(2);
    do {
      for (auto& c : left.coords) c.clear();
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
          if (r != c && rng.coin()) continue;
          left.coords[r].emplace_back(Monomial{{c == 0 ? 1 : 0, c == 1 ? 1 : 0}},
                                      rng.nonzero_rational());
        }
    } while (!left.linear_part_invertible());
    left.coords[rng.uniform_int(0, 1)].emplace_back(Monomial{{2, 0}},
                                                    rng.nonzero_rational());
    std::vector<Jet> rights;
    for (int i = 0; i < 2; ++i) {
      Jet u = Jet::monomial(8, 1, rng.nonzero_rational());
      u.add_term(rng.uniform_int(2, 8), rng.nonzero_rational());
      rights.push_back(u);
    }
    CHECK(fingerprint(apply_change(f, left, rights), 4) == base);
  }
}

TEST_CASE("fingerprint needs a certified semigroup") {
  auto f = mg({{"t", "0"}, {"t^2", "t^3"}}, 2);  // truncation hides t^3
  CHECK_THROWS_AS(fingerprint(f, 2), TruncationError);
  CHECK_THROWS_AS(fingerprint(mg({{"t", "0"}, {"0", "0"}}, 3), 2),
                  DegenerateComponentError);
}
