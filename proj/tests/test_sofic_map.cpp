#include <catch2/catch_amalgamated.hpp>

#include "sofic/sofic_map.hpp"

using namespace sofic;

TEST_CASE("cyclic sofic map is an exact homomorphism on its support") {
  SoficMap sigma = cyclic_sofic_map(10, 4);
  CHECK(sigma.exact_homomorphism());
  // g=3 composed with g=-4 equals g=-1 pointwise
  CHECK(sigma.multiplicativity_defect(GroupElement::integer(3), GroupElement::integer(-4)) == 0.0);
  // every supported pair with supported product has zero defect
  for (int g = -2; g <= 2; ++g)
    for (int h = -2; h <= 2; ++h)
      CHECK(sigma.multiplicativity_defect(GroupElement::integer(g), GroupElement::integer(h)) ==
            0.0);
}

TEST_CASE("cyclic d=5 generator is the 5-cycle, 1-based in JSON") {
  SoficMap sigma = cyclic_sofic_map(5, 2);
  CHECK(sigma.perm(GroupElement::integer(1)) == SoficMap::Perm{1, 2, 3, 4, 0});
  auto j = sigma.to_json();
  CHECK(j.at("table").at("1") == std::vector<int>{2, 3, 4, 5, 1});
}

TEST_CASE("cyclic freeness: the cycle has no fixed points") {
  SoficMap sigma = cyclic_sofic_map(10, 4);
  CHECK(sigma.freeness_separation(GroupElement::integer(1), GroupElement::integer(0)) == 1.0);
  CHECK(sigma.freeness_separation(GroupElement::integer(2), GroupElement::integer(2)) == 0.0);
}

TEST_CASE("cyclic map rejects a wrapping support window") {
  CHECK_THROWS_AS(cyclic_sofic_map(10, 5), std::invalid_argument);
  CHECK_THROWS_AS(cyclic_sofic_map(0, 0), std::invalid_argument);
}

TEST_CASE("quotient map for Z onto Z/6") {
  SoficMap sigma = quotient_sofic_map(Group::integers(), {6}, 7);
  CHECK(sigma.d() == 6);
  CHECK(sigma.perm(GroupElement::integer(1)) == SoficMap::Perm{1, 2, 3, 4, 5, 0});
  // 6 = 0 in the quotient: freeness collapses, and the constructor warns
  CHECK(sigma.freeness_separation(GroupElement::integer(6), GroupElement::integer(0)) == 0.0);
  bool warned = false;
  for (const auto& w : sigma.warnings())
    if (w.find("injectivity") != std::string::npos) warned = true;
  CHECK(warned);
  // brute-force comparison of cycle powers 2 and 5
  CHECK(sigma.freeness_separation(GroupElement::integer(2), GroupElement::integer(5)) == 1.0);
}

TEST_CASE("quotient map for Z^2 onto (Z/3)^2") {
  Group z2 = Group::product({Group::integers(), Group::integers()});
  SoficMap sigma = quotient_sofic_map(z2, {3, 3}, 1);
  CHECK(sigma.d() == 9);
  for (const auto& [g, pg] : sigma.table())
    for (const auto& [h, ph] : sigma.table())
      if (sigma.supports(g * h))
        CHECK(sigma.multiplicativity_defect(g, h) == 0.0);
}

TEST_CASE("random free-group model is deterministic given the seed") {
  Group f2 = Group::free_group(2);
  SoficMap a = random_permutation_sofic_map(f2, 200, 2, 42);
  SoficMap b = random_permutation_sofic_map(f2, 200, 2, 42);
  SoficMap c = random_permutation_sofic_map(f2, 200, 2, 43);
  CHECK(a.table() == b.table());
  CHECK(a.table() != c.table());
}

TEST_CASE("random model: word defects shrink as d grows") {
  Group f2 = Group::free_group(2);
  auto mean_defect = [&](int d) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SoficMap sigma = random_permutation_sofic_map(f2, d, 3, seed);
      // w = a b a^-1: fixed-point overlap with the identity is O(1)/d
      total += 1.0 - sigma.freeness_separation(GroupElement::word({1, 2, -1}),
                                               GroupElement::word({}));
    }
    return total / 20.0;
  };
  double m500 = mean_defect(500);
  CHECK(m500 <= 0.05);
  // monotone decrease of the mean defect across growing d
  double m50 = mean_defect(50), m200 = mean_defect(200), m800 = mean_defect(800);
  CHECK(m200 <= m50 + 1e-12);
  CHECK(m800 <= m200 + 1e-12);
}

TEST_CASE("random model multiplicativity defect matches a direct recount") {
  Group f2 = Group::free_group(2);
  SoficMap sigma = random_permutation_sofic_map(f2, 500, 2, 9);
  auto a = GroupElement::word({1});
  auto b = GroupElement::word({2});
  const auto& pa = sigma.perm(a);
  const auto& pb = sigma.perm(b);
  const auto& pab = sigma.perm(a * b);
  int bad = 0;
  for (int k = 0; k < 500; ++k)
    if (pa[pb[k]] != pab[k]) ++bad;
  CHECK(sigma.multiplicativity_defect(a, b) == static_cast<double>(bad) / 500.0);
  // words get the corresponding permutation product, so this defect is 0
  CHECK(bad == 0);
}

TEST_CASE("r=1 random model is a single permutation and its powers") {
  Group f1 = Group::free_group(1);
  SoficMap sigma = random_permutation_sofic_map(f1, 50, 3, 5);
  auto a = GroupElement::word({1});
  CHECK(sigma.multiplicativity_defect(a, a) == 0.0);
  CHECK(sigma.multiplicativity_defect(a * a, a) == 0.0);
}

TEST_CASE("evaluation outside the support names the element") {
  SoficMap sigma = cyclic_sofic_map(10, 2);
  try {
    sigma.perm(GroupElement::integer(7));
    FAIL("expected out_of_range");
  } catch (const std::out_of_range& ex) {
    CHECK(std::string(ex.what()).find("7") != std::string::npos);
  }
}

TEST_CASE("constructor validates bijections and the identity image") {
  std::map<GroupElement, SoficMap::Perm> bad_table{{GroupElement::integer(0), {0, 1, 2}},
                                                   {GroupElement::integer(1), {0, 0, 1}}};
  CHECK_THROWS_AS(SoficMap(3, bad_table), std::invalid_argument);
  std::map<GroupElement, SoficMap::Perm> bad_id{{GroupElement::integer(0), {1, 0, 2}}};
  CHECK_THROWS_AS(SoficMap(3, bad_id), std::invalid_argument);
  std::map<GroupElement, SoficMap::Perm> no_id{{GroupElement::integer(1), {1, 2, 0}}};
  CHECK_THROWS_AS(SoficMap(3, no_id), std::invalid_argument);
}

TEST_CASE("JSON round-trip preserves the table") {
  Group f2 = Group::free_group(2);
  SoficMap sigma = random_permutation_sofic_map(f2, 17, 2, 1);
  auto j = sigma.to_json();
  CHECK(j.at("d") == 17);
  SoficMap back = SoficMap::from_json(j, f2);
  CHECK(back.d() == sigma.d());
  CHECK(back.table() == sigma.table());
}

TEST_CASE("sofic family sizes must strictly increase") {
  CHECK_THROWS_AS(SoficFamily::cyclic({10, 10}, 2), std::invalid_argument);
  SoficFamily fam = SoficFamily::cyclic({10, 20}, 2);
  CHECK(fam.make(20).d() == 20);
}
