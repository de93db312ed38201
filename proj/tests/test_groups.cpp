#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "extauto/constructions.hpp"
#include "extauto/group.hpp"
#include "extauto/iso.hpp"

using namespace extauto;

namespace {

std::vector<std::vector<Elem>> cyclic_table(int n) {
  std::vector<std::vector<Elem>> t(n, std::vector<Elem>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
  return t;
}

// Independent commutator-subgroup closure, used as an oracle for derived_series.
std::vector<Elem> brute_commutator_subgroup(const Group& g, const std::vector<Elem>& inside) {
  std::set<Elem> current;
  for (Elem a : inside)
    for (Elem b : inside) current.insert(g.commutator(a, b));
  // close under products
  for (;;) {
    std::set<Elem> next = current;
    for (Elem a : current)
      for (Elem b : current) next.insert(g.op(a, b));
    if (next == current) break;
    current = next;
  }
  return {current.begin(), current.end()};
}

}  // namespace

TEST_CASE("cayley table validation accepts groups and relocates the identity") {
  auto t = cyclic_table(5);
  // relabel so the identity is element 2: x -> (x+2) mod 5 renames 0 to 2
  std::vector<std::vector<Elem>> moved(5, std::vector<Elem>(5));
  auto rn = [](int x) { return (x + 2) % 5; };
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) moved[rn(i)][rn(j)] = rn(t[i][j]);
  Group g = Group::from_table(moved);
  REQUIRE(g.order() == 5);
  for (int x = 0; x < 5; ++x) {
    REQUIRE(g.op(0, x) == x);
    REQUIRE(g.op(x, 0) == x);
  }
  REQUIRE(g.elem_order(1) == 5);
}

TEST_CASE("cayley table validation rejects defects with located messages") {
  SECTION("non-square row") {
    auto t = cyclic_table(3);
    t[1].pop_back();
    REQUIRE_THROWS_AS(Group::from_table(t), NotAGroup);
  }
  SECTION("out-of-range entry") {
    auto t = cyclic_table(3);
    t[2][2] = 7;
    REQUIRE_THROWS_AS(Group::from_table(t), NotAGroup);
  }
  SECTION("identity located anywhere is fine") {
    // this is Z/2 written with the identity at position 1; relocation
    // renames it so index 0 is the identity
    Group g = Group::from_table({{1, 0}, {0, 1}});
    REQUIRE(g.op(0, 0) == 0);
    REQUIRE(g.elem_order(1) == 2);
  }
  SECTION("no two-sided identity") {
    // t[i][j] = (j - i) mod 3: row 0 is a left identity but no column works
    std::vector<std::vector<Elem>> t{{0, 1, 2}, {2, 0, 1}, {1, 2, 0}};
    REQUIRE_THROWS_AS(Group::from_table(t), NotAGroup);
  }
  SECTION("latin square that is not associative") {
    // swap the intercalate {1,4} x {1,4} of the Z/6 table; rows/columns stay
    // permutations and the identity row/column is untouched
    auto t = cyclic_table(6);
    std::swap(t[1][1], t[1][4]);
    std::swap(t[4][1], t[4][4]);
    // oracle: still Latin
    for (int i = 0; i < 6; ++i) {
      std::set<Elem> row(t[i].begin(), t[i].end());
      REQUIRE(row.size() == 6);
      std::set<Elem> col;
      for (int j = 0; j < 6; ++j) col.insert(t[j][i]);
      REQUIRE(col.size() == 6);
    }
    // oracle: associativity fails somewhere (e.g. at (1,1,2))
    REQUIRE(t[t[1][1]][2] != t[1][t[1][2]]);
    REQUIRE_THROWS_AS(Group::from_table(t), NotAGroup);
  }
}

TEST_CASE("standard constructors produce the advertised groups") {
  SECTION("cyclic") {
    Group z12 = standard_group("cyclic(12)");
    REQUIRE(z12.order() == 12);
    REQUIRE(z12.is_abelian());
    Group z43 = direct_product(cyclic(4), cyclic(3));
    REQUIRE(is_isomorphic(z12, z43).has_value());
    Group z62 = direct_product(cyclic(6), cyclic(2));
    REQUIRE_FALSE(is_isomorphic(z12, z62).has_value());
  }
  SECTION("dihedral indexing: rotations then reflections") {
    Group d4 = dihedral(8);
    REQUIRE(d4.order() == 8);
    for (int i = 0; i < 4; ++i) REQUIRE(d4.elem_order(4 + i) == 2);  // reflections
    REQUIRE(d4.elem_order(1) == 4);                                  // generator rotation
    REQUIRE(d4.op(1, 1) == 2);
    REQUIRE_FALSE(d4.is_abelian());
  }
  SECTION("quaternion groups") {
    Group q8 = quaternion(8);
    REQUIRE(q8.order() == 8);
    // exactly one involution (the central a^2)
    int involutions = 0;
    for (int x = 0; x < 8; ++x)
      if (q8.elem_order(x) == 2) ++involutions;
    REQUIRE(involutions == 1);
    Group q16 = quaternion(16);
    REQUIRE(q16.order() == 16);
    int inv16 = 0;
    for (int x = 0; x < 16; ++x)
      if (q16.elem_order(x) == 2) ++inv16;
    REQUIRE(inv16 == 1);
    REQUIRE(center(q16).order() == 2);
  }
  SECTION("dihedral(8) vs quaternion(8): different order statistics") {
    Group d4 = dihedral(8), q8 = quaternion(8);
    auto pd = d4.order_profile(), pq = q8.order_profile();
    REQUIRE(pd == std::vector<int>{1, 2, 2, 2, 2, 2, 4, 4});
    REQUIRE(pq == std::vector<int>{1, 2, 4, 4, 4, 4, 4, 4});
    REQUIRE_FALSE(is_isomorphic(d4, q8).has_value());
  }
  SECTION("symmetric and alternating") {
    REQUIRE(symmetric(3).order() == 6);
    REQUIRE(symmetric(4).order() == 24);
    REQUIRE(alternating(4).order() == 12);
    REQUIRE(alternating(5).order() == 60);
    REQUIRE_FALSE(symmetric(3).is_abelian());
    REQUIRE(is_isomorphic(symmetric(3), dihedral(6)).has_value());
  }
  SECTION("elementary abelian") {
    Group v = elem_abelian(2, 2);
    REQUIRE(v.order() == 4);
    for (int x = 1; x < 4; ++x) REQUIRE(v.elem_order(x) == 2);
  }
  SECTION("metacyclic(7,3)") {
    Group m = metacyclic(7, 3);
    REQUIRE(m.order() == 21);
    REQUIRE_FALSE(m.is_abelian());
    auto p = m.order_profile();
    REQUIRE(std::count(p.begin(), p.end(), 7) == 6);
    REQUIRE(std::count(p.begin(), p.end(), 3) == 14);
  }
  SECTION("semidirect validates the action") {
    Group v4 = elem_abelian(2, 2);
    // swap of the two coordinates: order-2 automorphism (indices 1 <-> 2)
    std::vector<std::vector<Elem>> action{{0, 1, 2, 3}, {0, 2, 1, 3}};
    Group g = semidirect(v4, cyclic(2), action);
    REQUIRE(g.order() == 8);
    REQUIRE(is_isomorphic(g, dihedral(8)).has_value());
    std::vector<std::vector<Elem>> bad{{0, 1, 2, 3}, {0, 2, 3, 1}};  // order 3, not an involution action
    REQUIRE_THROWS_AS(semidirect(v4, cyclic(2), bad), UnsupportedSpec);
  }
  SECTION("descriptor parsing errors") {
    REQUIRE_THROWS_AS(standard_group("frobnicate(8)"), UnsupportedSpec);
    REQUIRE_THROWS_AS(standard_group("cyclic(4"), UnsupportedSpec);
    REQUIRE_THROWS_AS(standard_group("symmetric(6)"), UnsupportedSpec);
  }
  SECTION("order cap") {
    Caps tight;
    tight.order_cap = 10;
    REQUIRE_THROWS_AS(cyclic(11, tight), OrderCapExceeded);
    REQUIRE_THROWS_AS(standard_group("dihedral(16)", tight), OrderCapExceeded);
  }
}

TEST_CASE("center and centralizer") {
  Group s3 = symmetric(3);
  // oracle: scan for elements commuting with everything
  std::vector<Elem> oracle;
  for (int a = 0; a < 6; ++a) {
    bool c = true;
    for (int b = 0; b < 6; ++b) c = c && s3.op(a, b) == s3.op(b, a);
    if (c) oracle.push_back(a);
  }
  REQUIRE(oracle == std::vector<Elem>{0});
  REQUIRE(center(s3).members == oracle);

  Group d4 = dihedral(8);
  REQUIRE(center(d4).members == std::vector<Elem>{0, 2});  // {1, r^2}
  Subgroup cz = centralizer(d4, {1});  // centralizer of the rotation generator
  REQUIRE(cz.members == std::vector<Elem>{0, 1, 2, 3});
}

TEST_CASE("subgroups, normality, quotients") {
  Group d4 = dihedral(8);
  Subgroup rot = subgroup_generated(d4, {1});
  REQUIRE(rot.members == std::vector<Elem>{0, 1, 2, 3});
  REQUIRE(is_normal(d4, rot));
  Subgroup refl = subgroup_generated(d4, {4});
  REQUIRE(refl.order() == 2);
  REQUIRE_FALSE(is_normal(d4, refl));

  REQUIRE_THROWS_AS(Subgroup::of(d4, {0, 1}), NotAGroup);  // not closed
  REQUIRE_THROWS_AS(quotient(d4, refl), NotNormal);

  auto q = quotient(d4, center(d4));
  REQUIRE(q.group.order() == 4);
  REQUIRE(is_isomorphic(q.group, elem_abelian(2, 2)).has_value());
  // canonical coset representatives: minimal element of each coset, ascending
  REQUIRE(q.reps == std::vector<Elem>{0, 1, 4, 5});
  for (int g = 0; g < 8; ++g) REQUIRE(q.proj.apply(g) == q.proj.apply(d4.op(g, 2)));

  auto q6 = quotient(cyclic(6), subgroup_generated(cyclic(6), {3}));
  REQUIRE(q6.reps == std::vector<Elem>{0, 1, 2});

  SubgroupView hv = subgroup_to_group(rot);
  REQUIRE(hv.group.order() == 4);
  REQUIRE(is_isomorphic(hv.group, cyclic(4)).has_value());
  REQUIRE(hv.to_parent == std::vector<Elem>{0, 1, 2, 3});
  REQUIRE(hv.from_parent[3] == 3);
  REQUIRE(hv.from_parent[5] == -1);
}

TEST_CASE("derived series and solvability match a brute-force oracle") {
  SECTION("symmetric(4): 24 > 12 > 4 > 1") {
    Group s4 = symmetric(4);
    auto series = derived_series(s4);
    std::vector<int> sizes;
    for (auto& s : series) sizes.push_back(s.order());
    REQUIRE(sizes == std::vector<int>{24, 12, 4, 1});
    REQUIRE(is_solvable(s4));
    // oracle cross-check, stage by stage
    std::vector<Elem> all(24);
    for (int i = 0; i < 24; ++i) all[i] = i;
    auto d1 = brute_commutator_subgroup(s4, all);
    REQUIRE(static_cast<int>(d1.size()) == 12);
    auto d2 = brute_commutator_subgroup(s4, d1);
    REQUIRE(static_cast<int>(d2.size()) == 4);
    auto d3 = brute_commutator_subgroup(s4, d2);
    REQUIRE(static_cast<int>(d3.size()) == 1);
  }
  SECTION("alternating(5) is not solvable") {
    Group a5 = alternating(5);
    auto series = derived_series(a5);
    REQUIRE(series.back().order() == 60);  // perfect
    REQUIRE_FALSE(is_solvable(a5));
  }
  SECTION("abelian and dihedral groups are solvable") {
    REQUIRE(is_solvable(cyclic(12)));
    REQUIRE(is_solvable(dihedral(16)));
    REQUIRE(is_solvable(quaternion(16)));
    REQUIRE(is_solvable(metacyclic(7, 3)));
  }
}

TEST_CASE("isomorphism search returns a verified witness") {
  Group a = direct_product(cyclic(2), cyclic(4));
  Group b = direct_product(cyclic(4), cyclic(2));
  auto iso = is_isomorphic(a, b);
  REQUIRE(iso.has_value());
  REQUIRE(iso->is_bijective());
  for (int x = 0; x < a.order(); ++x)
    for (int y = 0; y < a.order(); ++y)
      REQUIRE(iso->apply(a.op(x, y)) == b.op(iso->apply(x), iso->apply(y)));
  // determinism: the same witness twice
  auto again = is_isomorphic(a, b);
  REQUIRE(again->images == iso->images);

  REQUIRE_FALSE(is_isomorphic(cyclic(8), direct_product(cyclic(4), cyclic(2))).has_value());
  REQUIRE_FALSE(is_isomorphic(dihedral(12), cyclic(12)).has_value());
  REQUIRE(is_isomorphic(alternating(4),
                        semidirect(elem_abelian(2, 2), cyclic(3),
                                   {{0, 1, 2, 3}, {0, 3, 1, 2}, {0, 2, 3, 1}}))
              .has_value());

  Caps tight;
  tight.search_cap = 4;
  REQUIRE_THROWS_AS(is_isomorphic(cyclic(6), cyclic(6), tight), SearchCapExceeded);
}

TEST_CASE("hom validation") {
  Group z4 = cyclic(4), z2 = cyclic(2);
  auto h = Hom::checked(z4, z2, {0, 1, 0, 1});
  REQUIRE(h.is_surjective());
  REQUIRE_FALSE(h.is_injective());
  REQUIRE_THROWS_AS(Hom::checked(z4, z2, {0, 1, 1, 0}), NotAGroup);
  auto id = identity_automorphism(z4);
  REQUIRE(id.is_identity());
  auto neg = make_automorphism(z4, {0, 3, 2, 1});
  REQUIRE(compose(neg, neg).is_identity());
  REQUIRE(inverse(neg).images == neg.images);
}
