#include <catch2/catch_amalgamated.hpp>

#include "multigerm/tangent.hpp"
#include "multigerm/rng.hpp"

using namespace multigerm;

namespace {

Multigerm mg(const std::vector<std::vector<std::string>>& comps, int trunc) {
  return multigerm_from_strings(comps, trunc);
}

// Test-local dense rank, independent of the sparse echelon machinery.
int dense_rank(std::vector<SparseVec> rows, int dim) {
  std::vector<std::vector<Rational>> m;
  for (const auto& r : rows) {
    std::vector<Rational> d(dim, Rational(0));
    for (const auto& [i, c] : r) d[i] = c;
    m.push_back(std::move(d));
  }
  int rank = 0;
  for (int col = 0; col < dim && rank < static_cast<int>(m.size()); ++col) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(m.size()); ++r)
      if (!is_zero(m[r][col])) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = 0; r < static_cast<int>(m.size()); ++r) {
      if (r == rank || is_zero(m[r][col])) continue;
      Rational f = m[r][col] / m[rank][col];
      for (int c = col; c < dim; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

SparseVec jet_vec(const JetSpaceShape& s,
                  const std::vector<std::vector<std::string>>& comps) {
  std::vector<std::vector<Jet>> jets;
  for (const auto& comp : comps) {
    std::vector<Jet> coords;
    for (const auto& text : comp)
      coords.push_back(parse_jet(text, s.level, /*allow_constant=*/true));
    jets.push_back(std::move(coords));
  }
  return jets_to_vector(s, jets);
}

}  // namespace

TEST_CASE("right generators scale the component derivative") {
  auto f = mg({{"t^2", "t^3"}, {"t^2", "2t^3"}}, 4);
  auto gens = right_generators(f, 3, 1);
  JetSpaceShape s{2, 2, 3};
  // t * f1' in the first slot and t * f2' in the second slot.
  SparseVec a = jet_vec(s, {{"2t^2", "3t^3"}, {"0", "0"}});
  SparseVec b = jet_vec(s, {{"0", "0"}, {"2t^2", "6t^3"}});
  CHECK(std::find(gens.begin(), gens.end(), a) != gens.end());
  CHECK(std::find(gens.begin(), gens.end(), b) != gens.end());

  auto g = mg({{"t", "0"}}, 4);
  auto ggens = right_generators(g, 2, 1);
  JetSpaceShape gs{1, 2, 2};
  REQUIRE(ggens.size() == 2);
  CHECK(ggens[0] == jet_vec(gs, {{"t", "0"}}));
  CHECK(ggens[1] == jet_vec(gs, {{"t^2", "0"}}));
}

TEST_CASE("right generator count before truncation losses") {
  auto f = mg({{"t", "0"}, {"0", "t"}}, 6);
  // k * (m - min_power + 1) slots; none truncate away for regular branches.
  CHECK(right_generators(f, 5, 2).size() == 2 * (5 - 2 + 1));
}

TEST_CASE("left generators act through the same monomial on all components") {
  auto f = mg({{"t^2", "t^3"}, {"t^2", "2t^3"}}, 4);
  auto gens = left_generators(f, 3, 1);
  JetSpaceShape s{2, 2, 3};
  SparseVec x1_into_1 = jet_vec(s, {{"t^2", "0"}, {"t^2", "0"}});
  SparseVec x2_into_1 = jet_vec(s, {{"t^3", "0"}, {"2t^3", "0"}});
  CHECK(std::find(gens.begin(), gens.end(), x1_into_1) != gens.end());
  CHECK(std::find(gens.begin(), gens.end(), x2_into_1) != gens.end());

  auto g2 = mg({{"t", "0"}, {"0", "t"}}, 4);
  auto gens2 = left_generators(g2, 1, 1);
  JetSpaceShape s2{2, 2, 1};
  SparseVec x1_into_2 = jet_vec(s2, {{"0", "t"}, {"0", "0"}});
  CHECK(std::find(gens2.begin(), gens2.end(), x1_into_2) != gens2.end());
}

// The equal-2-jet pair ((t^2,t^3),(t^2,at^3)) carries a modulus: the
// orbit tangent space at jet level 3 misses the direction that moves a.
TEST_CASE("tangent space of the equal-2-jet singular pair") {
  for (int a : {2, 3, 5}) {
    std::string at3 = std::to_string(a) + "t^3";
    auto f = mg({{"t^2", "t^3"}, {"t^2", at3}}, 4);
    TangentSpace tangent = tangent_space(f, 3, GroupFilter::full());
    JetSpaceShape s = tangent.shape();

    // The eight published generating vectors of this orbit tangent space.
    std::vector<SparseVec> published = {
        jet_vec(s, {{"t^2", "0"}, {"t^2", "0"}}),
        jet_vec(s, {{"0", "t^2"}, {"0", "t^2"}}),
        jet_vec(s, {{"t^3", "0"}, {at3, "0"}}),
        jet_vec(s, {{"0", "t^3"}, {"0", at3}}),
        jet_vec(s, {{"2t^2", "3t^3"}, {"0", "0"}}),
        jet_vec(s, {{"t^3", "0"}, {"0", "0"}}),
        jet_vec(s, {{"0", "0"}, {"2t^2", std::to_string(3 * a) + "t^3"}}),
        jet_vec(s, {{"0", "0"}, {"2t^3", "0"}}),
    };

    // Same span in both directions.
    EchelonBasis published_span;
    for (const auto& v : published) published_span.insert(v);
    for (const auto& v : published) CHECK(tangent.contains(v));
    for (const auto& v : tangent.echelon().basis())
      CHECK(published_span.contains(v));

    // The stated relation g7 - 2 g1 + g5 = 3 g4 holds ...
    SparseVec relation = sv_axpy(published[6], Rational(-2), published[0]);
    relation = sv_axpy(relation, Rational(1), published[4]);
    CHECK(relation == sv_scaled(published[3], Rational(3)));
    // ... and so does a second one: g3 = g6 + (a/2) g8, which the
    // published count misses; the true rank is 6, not 7.
    SparseVec rel2 = sv_axpy(published[2], Rational(-1), published[5]);
    rel2 = sv_axpy(rel2, Rational(-a, 2), published[7]);
    CHECK(rel2.empty());
    CHECK(dense_rank(published, s.dim()) == 6);
    CHECK(tangent.rank() == 6);

    // The modulus direction ((0,0),(0,t^3)) is not in the span; the
    // component-1 slot direction ((0,0),(t^3,0)) is half of a generator.
    CHECK_FALSE(tangent.contains(jet_vec(s, {{"0", "0"}, {"0", "t^3"}})));
    CHECK(tangent.contains(jet_vec(s, {{"0", "0"}, {"t^3", "0"}})));

    // Every generator lies in its own span.
    for (const auto& g : tangent.generators()) CHECK(tangent.contains(g));
    CHECK(tangent.contains({}));
  }
}

TEST_CASE("coordinate axes fill the whole jet space") {
  auto g2 = mg({{"t", "0"}, {"0", "t"}}, 4);
  CHECK(tangent_space(g2, 1, GroupFilter::full()).rank() == 4);
  CHECK(orbit_dim_sequence(g2, 2) == std::vector<int>{4, 8});

  // Independent check by dense elimination over all generators.
  auto t2 = tangent_space(g2, 2, GroupFilter::full());
  CHECK(dense_rank(t2.generators(), t2.shape().dim()) == 8);

  auto line = mg({{"t", "0"}}, 4);
  CHECK(orbit_dim_sequence(line, 1) == std::vector<int>{2});

  CHECK_THROWS_AS(orbit_dim_sequence(mg({{"0", "0"}}, 4), 2),
                  DegenerateComponentError);
}

TEST_CASE("degree-filtered subgroups shrink the span monotonically") {
  auto f = mg({{"t", "0"}, {"t^2", "t^3"}}, 6);
  int previous = tangent_space(f, 5, GroupFilter::full()).rank();
  for (int r = 1; r <= 4; ++r) {
    int rank = tangent_space(f, 5, GroupFilter::subgroup_a(r)).rank();
    CHECK(rank <= previous);
    previous = rank;
  }
  // Left generators of degree above the level all truncate to zero.
  CHECK(tangent_space(f, 5, GroupFilter::left_only(6)).rank() == 0);
}

TEST_CASE("contains validates the ambient space") {
  auto f = mg({{"t", "0"}}, 4);
  auto t = tangent_space(f, 2, GroupFilter::full());
  CHECK_THROWS_AS(t.contains(SparseVec{{99, Rational(1)}}),
                  DimensionMismatchError);
}

TEST_CASE("orbit dimension is an equivalence invariant") {
  SeededRng rng(31);
  auto f = mg({{"t", "0"}, {"t^2", "t^3"}}, 6);
  auto base = orbit_dim_sequence(f, 5);
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
    // A nonlinear target term keeps the change honest.
    left.coords[rng.uniform_int(0, 1)].emplace_back(Monomial{{1, 1}},
                                                    rng.nonzero_rational());
    std::vector<Jet> rights;
    for (int i = 0; i < 2; ++i) {
      Jet u = Jet::monomial(6, 1, rng.nonzero_rational());
      u.add_term(rng.uniform_int(2, 6), rng.nonzero_rational());
      rights.push_back(u);
    }
    CHECK(orbit_dim_sequence(apply_change(f, left, rights), 5) == base);
  }
}

TEST_CASE("family deficiency on a single point is empty") {
  auto base = mg({{"t", "0"}}, 3);
  AffineFamily x = make_family(base, 3, {});
  auto report = family_deficiency(x, 3, GroupFilter::full(), 3, 42);
  CHECK(report.dim_x == 0);
  CHECK(report.max_intersection == 0);
  CHECK_FALSE(report.not_simple_evidence);
  CHECK_THROWS_AS(family_deficiency(x, 3, GroupFilter::full(), 0, 42),
                  PreconditionError);
}

TEST_CASE("axes with a quadratic extra component carry a modulus") {
  // dim X = 2n and the orbit captures at most n + 2 directions; evidence
  // appears for n = 3 and n = 4.
  for (int n : {3, 4}) {
    std::vector<std::vector<std::string>> base(n + 1,
                                               std::vector<std::string>(n, "0"));
    for (int i = 0; i < n; ++i) base[i][i] = "t";
    Multigerm base_mg = mg(base, 3);
    std::vector<Multigerm> dirs;
    for (int j = 0; j < n; ++j)
      for (int power : {2, 3}) {
        std::vector<std::vector<std::string>> d(
            n + 1, std::vector<std::string>(n, "0"));
        d[n][j] = "t^" + std::to_string(power);
        dirs.push_back(mg(d, 3));
      }
    AffineFamily x = make_family(base_mg, 3, dirs);
    auto report = family_deficiency(x, 3, GroupFilter::full(), 4, 42);
    CHECK(report.dim_x == 2 * n);
    CHECK(report.max_intersection <= n + 2);
    CHECK(report.not_simple_evidence);
  }
}
