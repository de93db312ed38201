#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "extauto/cohomology.hpp"
#include "extauto/constructions.hpp"
#include "extauto/extension.hpp"
#include "extauto/group.hpp"
#include "extauto/iso.hpp"

using namespace extauto;

namespace {

Perm identity_perm(int n) {
  Perm p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  return p;
}

// multiplication by a unit on the cyclic group written additively
Perm mult_perm(int modulus, int a) {
  Perm p(static_cast<std::size_t>(modulus));
  for (int x = 0; x < modulus; ++x) p[static_cast<std::size_t>(x)] = (a * x) % modulus;
  return p;
}

// module over a cyclic group generated by one automorphism tau
QModule cyclic_action_module(int n, const Group& m, const Perm& tau) {
  std::vector<Perm> action(static_cast<std::size_t>(n));
  action[0] = identity_perm(m.order());
  for (int q = 1; q < n; ++q)
    action[static_cast<std::size_t>(q)] =
        detail::perm_compose(tau, action[static_cast<std::size_t>(q - 1)]);
  return make_module(cyclic(n), m, std::move(action));
}

// Oracle for cyclic acting groups: with tau the action of a generator and
// N = 1 + tau + ... + tau^(n-1) the norm, degree-1 cohomology is
// ker N / im(tau - 1) and degree-2 cohomology is ker(tau - 1) / im N.
struct CyclicOracle {
  std::size_t h0, h1, h2;
};

CyclicOracle cyclic_oracle(const Group& m, const Perm& tau, int n) {
  std::set<Elem> ker_tm1, im_tm1, ker_norm, im_norm;
  for (Elem x = 0; x < m.order(); ++x) {
    Elem tx = tau[static_cast<std::size_t>(x)];
    if (tx == x) ker_tm1.insert(x);
    im_tm1.insert(m.op(tx, m.inv(x)));
    Elem acc = 0, pw = x;
    for (int k = 0; k < n; ++k) {
      acc = m.op(acc, pw);
      pw = tau[static_cast<std::size_t>(pw)];
    }
    if (acc == 0) ker_norm.insert(x);
    im_norm.insert(acc);
  }
  return CyclicOracle{ker_tm1.size(), ker_norm.size() / im_tm1.size(),
                      ker_tm1.size() / im_norm.size()};
}

// Exhaustive cross-check of the linear engine: enumerate every cocycle and
// every coboundary directly and compare counts, the class partition, and the
// canonical representatives.
void check_against_enumeration(const QModule& qm, bool degree2, const Caps& caps) {
  Cohomology c = cohomology(qm, caps);

  auto z1 = enumerate_cocycles1(qm, caps);
  REQUIRE(z1.size() == c.one.cocycle_count());
  std::set<Cochain1> b1;
  for (Elem x = 0; x < qm.coeff.order(); ++x) b1.insert(d0(qm, x));
  REQUIRE(b1.size() == c.one.coboundary_count());
  for (const Cochain1& b : b1) REQUIRE(c.one.class_of(b) == 0);
  std::map<int, std::vector<Cochain1>> one_classes;
  for (const Cochain1& z : z1) one_classes[c.one.class_of(z)].push_back(z);
  REQUIRE(one_classes.size() == c.one.order());
  for (const auto& [cls, members] : one_classes) {
    REQUIRE(members.size() == b1.size());
    for (const Cochain1& z : members)
      REQUIRE(b1.count(cochain_add(qm.coeff, z, cochain_neg(qm.coeff, members.front()))) == 1);
    REQUIRE(c.one.reduce(members.front()) == c.one.reps()[static_cast<std::size_t>(cls)]);
  }

  if (!degree2) return;
  auto z2 = enumerate_cocycles2(qm, caps);
  REQUIRE(z2.size() == c.two.cocycle_count());
  // all coboundaries, from every 1-cochain
  std::set<Cochain2> b2;
  {
    const int nq = qm.base.order(), nm = qm.coeff.order();
    Cochain1 s(static_cast<std::size_t>(nq), 0);
    for (;;) {
      b2.insert(d1(qm, s));
      int i = nq - 1;
      while (i >= 1 && s[static_cast<std::size_t>(i)] + 1 == nm) {
        s[static_cast<std::size_t>(i)] = 0;
        --i;
      }
      if (i < 1) break;
      ++s[static_cast<std::size_t>(i)];
    }
  }
  REQUIRE(b2.size() == c.two.coboundary_count());
  for (const Cochain2& b : b2) REQUIRE(c.two.class_of(b) == 0);
  std::map<int, std::vector<Cochain2>> two_classes;
  for (const Cochain2& z : z2) two_classes[c.two.class_of(z)].push_back(z);
  REQUIRE(two_classes.size() == c.two.order());
  for (const auto& [cls, members] : two_classes) {
    REQUIRE(members.size() == b2.size());
    for (const Cochain2& z : members)
      REQUIRE(b2.count(cochain_add(qm.coeff, z, cochain_neg(qm.coeff, members.front()))) == 1);
    REQUIRE(c.two.reduce(members.front()) == c.two.reps()[static_cast<std::size_t>(cls)]);
  }
}

}  // namespace

TEST_CASE("cyclic decomposition of abelian groups", "[cohomology]") {
  SECTION("orders and coordinates") {
    struct Case {
      Group g;
      std::vector<int> orders;
    };
    std::vector<Case> cases;
    cases.push_back({cyclic(1), {}});
    cases.push_back({cyclic(6), {6}});
    cases.push_back({cyclic(8), {8}});
    cases.push_back({elem_abelian(2, 2), {2, 2}});
    cases.push_back({elem_abelian(2, 3), {2, 2, 2}});
    cases.push_back({elem_abelian(5, 2), {5, 5}});
    cases.push_back({direct_product(cyclic(2), cyclic(4)), {4, 2}});
    cases.push_back({direct_product(cyclic(2), cyclic(6)), {6, 2}});
    cases.push_back({direct_product(cyclic(4), cyclic(6)), {12, 2}});
    for (const Case& cs : cases) {
      ModuleBasis b = module_basis(cs.g);
      REQUIRE(b.orders == cs.orders);
      // each later order divides the previous one
      for (std::size_t i = 1; i < b.orders.size(); ++i)
        REQUIRE(b.orders[i - 1] % b.orders[i] == 0);
      // coordinates reconstruct every element uniquely
      std::set<std::vector<int>> seen;
      for (Elem e = 0; e < cs.g.order(); ++e) {
        REQUIRE(b.elem_of(b.coords[static_cast<std::size_t>(e)]) == e);
        REQUIRE(seen.insert(b.coords[static_cast<std::size_t>(e)]).second);
      }
    }
  }
  SECTION("non-abelian input is rejected") {
    REQUIRE_THROWS_AS(module_basis(symmetric(3)), ActionIncompatible);
  }
}

TEST_CASE("module validation", "[cohomology]") {
  SECTION("non-automorphism action entries are rejected") {
    Group q = cyclic(2), m = cyclic(3);
    // swapping 0 and 1 does not fix the identity, hence not an automorphism
    REQUIRE_THROWS_AS(make_module(q, m, {identity_perm(3), Perm{1, 0, 2}}),
                      ActionIncompatible);
  }
  SECTION("non-homomorphism actions are rejected") {
    Group q = cyclic(2), m = cyclic(7);
    // multiplication by 2 has order 3, so it cannot be the action of an involution
    REQUIRE_THROWS_AS(make_module(q, m, {identity_perm(7), mult_perm(7, 2)}),
                      ActionIncompatible);
  }
  SECTION("non-abelian coefficients are rejected") {
    REQUIRE_THROWS_AS(trivial_module(cyclic(2), symmetric(3)), ActionIncompatible);
  }
}

TEST_CASE("differential identities", "[cohomology]") {
  Group q = elem_abelian(2, 2);
  Group m = direct_product(cyclic(2), cyclic(4));
  std::vector<Perm> action(4, identity_perm(8));
  // one involution of Z2 x Z4 inverting the second factor
  Perm invsecond(8);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 4; ++b)
      invsecond[static_cast<std::size_t>(a * 4 + b)] = a * 4 + (4 - b) % 4;
  action[1] = invsecond;
  action[3] = invsecond;  // element 3 = 1 * 2 in the four-group
  QModule qm = make_module(q, m, action);

  SECTION("coboundaries of elements are cocycles") {
    for (Elem x = 0; x < m.order(); ++x) {
      Cochain1 s = d0(qm, x);
      REQUIRE(is_cocycle1(qm, s));
      // and their differentials vanish
      Cochain2 f = d1(qm, s);
      REQUIRE(f == zero_cochain2(qm));
    }
  }
  SECTION("differentials of 1-cochains are 2-cocycles") {
    // all 1-cochains over a smaller module to keep the sweep quick
    QModule small = cyclic_action_module(2, cyclic(4), mult_perm(4, 3));
    for (Elem v = 0; v < 4; ++v) {
      Cochain1 s{0, v};
      REQUIRE(is_cocycle2(small, d1(small, s)));
    }
    for (Elem a = 0; a < 8; ++a)
      for (Elem b = 0; b < 8; ++b)
        for (Elem c = 0; c < 8; ++c) {
          Cochain1 s{0, a, b, c};
          REQUIRE(is_cocycle2(qm, d1(qm, s)));
        }
  }
}

TEST_CASE("cyclic acting groups match the norm oracle", "[cohomology]") {
  struct Case {
    const char* name;
    int n;
    Group m;
    Perm tau;
  };
  std::vector<Case> cases;
  cases.push_back({"order 5 on Z5, trivial", 5, cyclic(5), identity_perm(5)});
  cases.push_back({"order 4 on Z4, trivial", 4, cyclic(4), identity_perm(4)});
  cases.push_back({"order 2 inverts Z4", 2, cyclic(4), mult_perm(4, 3)});
  cases.push_back({"order 2 inverts Z8", 2, cyclic(8), mult_perm(8, 7)});
  cases.push_back({"order 2 times 3 on Z8", 2, cyclic(8), mult_perm(8, 3)});
  cases.push_back({"order 2 times 5 on Z8", 2, cyclic(8), mult_perm(8, 5)});
  cases.push_back({"order 2 times 5 on Z12", 2, cyclic(12), mult_perm(12, 5)});
  cases.push_back({"order 3 times 4 on Z9", 3, cyclic(9), mult_perm(9, 4)});
  cases.push_back({"order 3 times 2 on Z7", 3, cyclic(7), mult_perm(7, 2)});
  cases.push_back({"order 6 on Z6, trivial", 6, cyclic(6), identity_perm(6)});
  {
    Group m = direct_product(cyclic(2), cyclic(4));
    Perm inv(8);
    for (Elem x = 0; x < 8; ++x) inv[static_cast<std::size_t>(x)] = m.inv(x);
    cases.push_back({"order 2 inverts Z2 x Z4", 2, m, inv});
  }
  for (const Case& cs : cases) {
    INFO(cs.name);
    CyclicOracle o = cyclic_oracle(cs.m, cs.tau, cs.n);
    QModule qm = cyclic_action_module(cs.n, cs.m, cs.tau);
    Cohomology c = cohomology(qm);
    CHECK(c.h0_order() == o.h0);
    CHECK(c.one.order() == o.h1);
    CHECK(c.two.order() == o.h2);
  }
}

TEST_CASE("linear engine agrees with exhaustive enumeration", "[cohomology]") {
  Caps caps = default_caps();
  SECTION("four-group on Z2, trivial action") {
    check_against_enumeration(trivial_module(elem_abelian(2, 2), cyclic(2)), true, caps);
  }
  SECTION("Z3 on Z3, trivial action") {
    check_against_enumeration(trivial_module(cyclic(3), cyclic(3)), true, caps);
  }
  SECTION("Z2 inverting Z4") {
    check_against_enumeration(cyclic_action_module(2, cyclic(4), mult_perm(4, 3)), true, caps);
  }
  SECTION("Z2 on Z2 x Z4, trivial action") {
    check_against_enumeration(trivial_module(cyclic(2), direct_product(cyclic(2), cyclic(4))),
                              true, caps);
  }
  SECTION("Z3 on Z2 x Z4, trivial action") {
    check_against_enumeration(trivial_module(cyclic(3), direct_product(cyclic(2), cyclic(4))),
                              true, caps);
  }
  SECTION("Z4 on Z4, trivial action") {
    check_against_enumeration(trivial_module(cyclic(4), cyclic(4)), true, caps);
  }
  SECTION("four-group acting on Z4 through inversions") {
    Group q = elem_abelian(2, 2);
    std::vector<Perm> action{identity_perm(4), mult_perm(4, 3), identity_perm(4),
                             mult_perm(4, 3)};
    check_against_enumeration(make_module(q, cyclic(4), action), true, caps);
  }
  SECTION("symmetric group on Z3: degree one only, space too large otherwise") {
    check_against_enumeration(trivial_module(symmetric(3), cyclic(3)), false, caps);
  }
}

TEST_CASE("known cohomology values", "[cohomology]") {
  SECTION("four-group with Z2 coefficients") {
    Cohomology c = cohomology(trivial_module(elem_abelian(2, 2), cyclic(2)));
    CHECK(c.one.cocycle_count() == 4);
    CHECK(c.one.coboundary_count() == 1);
    CHECK(c.two.cocycle_count() == 16);
    CHECK(c.two.coboundary_count() == 2);
    CHECK(c.two.order() == 8);
    CHECK(c.two.invariants() == std::vector<int>{2, 2, 2});
    Group view = c.two.group_view();
    REQUIRE(view.order() == 8);
    CHECK(view.is_abelian());
    // addition of representatives realizes the view's table
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        Cochain2 sum = cochain_add(c.mod.coeff, c.two.reps()[static_cast<std::size_t>(i)],
                                   c.two.reps()[static_cast<std::size_t>(j)]);
        CHECK(c.two.class_of(sum) == view.op(i, j));
      }
  }
  SECTION("symmetric group with Z2 coefficients") {
    Cohomology c = cohomology(trivial_module(symmetric(3), cyclic(2)));
    CHECK(c.one.order() == 2);  // the sign character
    CHECK(c.two.order() == 2);
  }
  SECTION("symmetric group with Z3 coefficients") {
    Cohomology c = cohomology(trivial_module(symmetric(3), cyclic(3)));
    CHECK(c.one.order() == 1);
    CHECK(c.two.order() == 1);
  }
  SECTION("cyclic on cyclic gives residues modulo the norm") {
    Cohomology c = cohomology(trivial_module(cyclic(4), cyclic(4)));
    CHECK(c.two.order() == 4);
    CHECK(c.two.invariants() == std::vector<int>{4});
  }
  SECTION("trivial module and trivial base") {
    Cohomology a = cohomology(trivial_module(cyclic(1), cyclic(6)));
    CHECK(a.one.order() == 1);
    CHECK(a.two.order() == 1);
    CHECK(a.h0_order() == 6);
    Cohomology b = cohomology(trivial_module(symmetric(3), cyclic(1)));
    CHECK(b.one.order() == 1);
    CHECK(b.two.order() == 1);
    CHECK(b.two.num_classes() == 1);
    CHECK(b.two.reps()[0] == zero_cochain2(b.mod));
  }
}

TEST_CASE("cocycle listings and class interfaces", "[cohomology]") {
  QModule qm = trivial_module(elem_abelian(2, 2), cyclic(2));
  Cohomology c = cohomology(qm);
  SECTION("all_cocycles lists the kernel exactly") {
    auto listed = c.one.all_cocycles(1000);
    auto brute = enumerate_cocycles1(qm);
    REQUIRE(listed.size() == brute.size());
    std::set<Cochain1> ls(listed.begin(), listed.end()), bs(brute.begin(), brute.end());
    REQUIRE(ls == bs);
    REQUIRE(listed.front() == zero_cochain1(qm));
  }
  SECTION("representatives are canonical cocycles") {
    REQUIRE(c.two.reps().size() == 8);
    REQUIRE(c.two.reps()[0] == zero_cochain2(qm));
    for (int i = 0; i < 8; ++i) {
      const Cochain2& rep = c.two.reps()[static_cast<std::size_t>(i)];
      REQUIRE(c.two.is_cocycle(rep));
      REQUIRE(c.two.class_of(rep) == i);
      REQUIRE(c.two.reduce(rep) == rep);
    }
  }
  SECTION("rebuilding is deterministic") {
    Cohomology again = cohomology(qm);
    REQUIRE(again.two.reps() == c.two.reps());
    REQUIRE(again.one.reps() == c.one.reps());
  }
  SECTION("non-cocycles are rejected") {
    Cochain2 junk = zero_cochain2(qm);
    c2_at(junk, 4, 1, 2) = 1;  // a lone nonzero entry fails the cocycle identity
    REQUIRE(!c.two.is_cocycle(junk));
    REQUIRE_THROWS_AS(c.two.class_of(junk), NotACocycle);
    Cochain1 unnormalized(static_cast<std::size_t>(4), 0);
    unnormalized[0] = 1;
    REQUIRE_THROWS_AS(c.one.class_of(unnormalized), NotACocycle);
  }
}

TEST_CASE("resource caps bound cohomology work", "[cohomology]") {
  SECTION("exhaustive enumeration refuses oversized spaces") {
    QModule qm = trivial_module(symmetric(3), cyclic(2));  // 2^25 2-cochains
    REQUIRE_THROWS_AS(enumerate_cocycles2(qm), SearchCapExceeded);
  }
  SECTION("class enumeration refuses oversized class groups") {
    Caps caps = default_caps();
    caps.cochain_cap = 4;  // the four-group family has 8 classes
    REQUIRE_THROWS_AS(cohomology_group(trivial_module(elem_abelian(2, 2), cyclic(2)), 2, caps),
                      SearchCapExceeded);
  }
  SECTION("only degrees one and two are implemented") {
    REQUIRE_THROWS_AS(cohomology_group(trivial_module(cyclic(2), cyclic(2)), 3),
                      UnsupportedSpec);
  }
}

TEST_CASE("center modules of factor systems", "[cohomology][torsor]") {
  SECTION("the center inherits a genuine action") {
    Group d4 = dihedral(8);
    Extension e = make_extension(d4, {0, 1, 2, 3}, "d4 over rotations");
    FactorSystem fs = factor_system(e);
    CenterModule zm = center_module(fs);
    REQUIRE(zm.mod.coeff.order() == 4);  // the rotation fiber is abelian
    zm.mod.validate();
    // invariants of the center module are the central elements of the total
    // group that lie in the fiber
    std::vector<Elem> inv = invariant_elements(zm.mod);
    Subgroup zg = center(d4);
    std::set<Elem> central_in_fiber;
    for (Elem g : zg.members)
      if (e.fiber_of(g) >= 0) central_in_fiber.insert(e.fiber_of(g));
    std::set<Elem> inv_in_fiber;
    for (Elem z : inv) inv_in_fiber.insert(zm.to_fiber[static_cast<std::size_t>(z)]);
    REQUIRE(inv_in_fiber == central_in_fiber);
    REQUIRE(inv.size() == 2);
  }
  SECTION("nonabelian fiber: center is a proper subgroup") {
    Group g = direct_product(quaternion(8), cyclic(2));
    std::vector<Elem> fiber_members;
    for (int i = 0; i < 8; ++i) fiber_members.push_back(2 * i);
    Extension e = make_extension(g, fiber_members, "q8 x z2 over q8");
    FactorSystem fs = factor_system(e);
    CenterModule zm = center_module(fs);
    REQUIRE(zm.mod.coeff.order() == 2);
    REQUIRE(zm.to_fiber.size() == 2);
    for (std::size_t i = 0; i < zm.to_fiber.size(); ++i)
      REQUIRE(zm.from_fiber[static_cast<std::size_t>(zm.to_fiber[i])] == static_cast<int>(i));
  }
}

TEST_CASE("central extensions of the four-group by Z2", "[cohomology][torsor]") {
  Group q8 = quaternion(8);
  Extension e = make_extension(q8, center(q8).members, "q8 over center");
  FactorSystem fs = factor_system(e);
  ExtensionClasses ec = extension_classes(fs);

  SECTION("eight classes, pairwise strictly inequivalent") {
    REQUIRE(ec.systems.size() == 8);
    for (int i = 0; i < 8; ++i) {
      ec.systems[static_cast<std::size_t>(i)].validate();
      REQUIRE(ec.class_of(ec.systems[static_cast<std::size_t>(i)]) == i);
    }
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j)
        REQUIRE(!are_equivalent(ec.systems[static_cast<std::size_t>(i)],
                                ec.systems[static_cast<std::size_t>(j)]));
  }
  SECTION("realized totals cover the order-8 types with known multiplicities") {
    Group z2cube = elem_abelian(2, 3);
    Group z4xz2 = direct_product(cyclic(4), cyclic(2));
    Group d4 = dihedral(8), q8ref = quaternion(8);
    int n_e = 0, n_a = 0, n_d = 0, n_q = 0;
    for (const FactorSystem& s : ec.systems) {
      Group total = realize(s).total();
      if (is_isomorphic(total, z2cube)) ++n_e;
      else if (is_isomorphic(total, z4xz2)) ++n_a;
      else if (is_isomorphic(total, d4)) ++n_d;
      else if (is_isomorphic(total, q8ref)) ++n_q;
    }
    CHECK(n_e == 1);
    CHECK(n_a == 3);
    CHECK(n_d == 3);
    CHECK(n_q == 1);
  }
  SECTION("torsor action and difference invert each other") {
    for (const FactorSystem& s : ec.systems) {
      Cochain2 z = torsor_diff(fs, s, ec.zm);
      REQUIRE(is_cocycle2(ec.zm.mod, z));
      REQUIRE(torsor_act(fs, ec.zm, z) == s);
    }
    // acting by zero changes nothing
    REQUIRE(torsor_act(fs, ec.zm, zero_cochain2(ec.zm.mod)) == fs);
  }
  SECTION("the action is additive in the twist") {
    const Cochain2& a = ec.coh.two.reps()[3];
    const Cochain2& b = ec.coh.two.reps()[5];
    FactorSystem one_step = torsor_act(fs, ec.zm, cochain_add(ec.zm.mod.coeff, a, b));
    FactorSystem two_step = torsor_act(torsor_act(fs, ec.zm, a), ec.zm, b);
    REQUIRE(one_step == two_step);
  }
  SECTION("coboundary twists are strictly equivalent to the base system") {
    // twist by the differential of every 1-cochain: same class, connecting
    // map with identity fiber and base maps exists
    const QModule& zmod = ec.zm.mod;
    Cochain1 s(static_cast<std::size_t>(zmod.base.order()), 0);
    for (Elem v = 0; v < zmod.coeff.order(); ++v)
      for (Elem w = 0; w < zmod.coeff.order(); ++w)
        for (Elem u = 0; u < zmod.coeff.order(); ++u) {
          s[1] = v;
          s[2] = w;
          s[3] = u;
          FactorSystem twisted = torsor_act(fs, ec.zm, d1(zmod, s));
          REQUIRE(ec.class_of(twisted) == 0);
          REQUIRE(are_equivalent(fs, twisted).has_value());
        }
  }
  SECTION("a different extension of the same shape lands in the right class") {
    Group d4 = dihedral(8);
    Extension ed = make_extension(d4, center(d4).members, "d4 over center");
    FactorSystem fsd = factor_system(ed);
    int cls = ec.class_of(fsd);
    REQUIRE(cls != 0);
    Group realized = realize(ec.systems[static_cast<std::size_t>(cls)]).total();
    REQUIRE(is_isomorphic(realized, d4));
  }
}

TEST_CASE("aligning actions across sections", "[cohomology][torsor]") {
  SECTION("two sections of one extension differ by a coboundary") {
    Group g = direct_product(quaternion(8), cyclic(2));
    std::vector<Elem> fiber_members;
    for (int i = 0; i < 8; ++i) fiber_members.push_back(2 * i);
    Extension e = make_extension(g, fiber_members, "q8 x z2 over q8");
    FactorSystem fs = factor_system(e);
    // an alternate section through a different coset representative; its
    // fiber action differs from the canonical one by an inner automorphism
    FactorSystem alt = factor_system(e, {0, 3});
    REQUIRE(alt.phi != fs.phi);
    CenterModule zm = center_module(fs);
    FactorSystem aligned = align_action(fs, alt);
    aligned.validate();
    REQUIRE(aligned.phi == fs.phi);
    Cochain2 z = torsor_diff(fs, alt, zm);
    REQUIRE(is_cocycle2(zm.mod, z));
    Cohomology c = cohomology(zm.mod);
    REQUIRE(c.two.class_of(z) == 0);
    REQUIRE(are_equivalent(fs, alt).has_value());
  }
  SECTION("actions differing by an outer automorphism are not comparable") {
    Group z8 = cyclic(8);
    Extension abelian_ext = make_extension(z8, {0, 2, 4, 6}, "z8 over z4");
    Group d8 = dihedral(16);
    Extension dihedral_ext = make_extension(d8, {0, 1, 2, 3, 4, 5, 6, 7}, "d8 over rotations");
    FactorSystem a = factor_system(abelian_ext);
    FactorSystem b = factor_system(dihedral_ext);
    REQUIRE_THROWS_AS(align_action(a, b), NotSameFiber);
    REQUIRE_THROWS_AS(torsor_diff(a, b, center_module(a)), NotSameFiber);
  }
  SECTION("different fibers are rejected outright") {
    FactorSystem a = factor_system(make_extension(cyclic(4), {0, 2}, "z4 over z2"));
    FactorSystem b = factor_system(make_extension(cyclic(6), {0, 2, 4}, "z6 over z2"));
    REQUIRE_THROWS_AS(torsor_diff(a, b, center_module(a)), NotSameFiber);
    REQUIRE_THROWS_AS(align_action(a, b), NotSameFiber);
  }
  SECTION("same shape but inequivalent systems give a nonzero difference") {
    FactorSystem a = factor_system(make_extension(cyclic(4), {0, 2}, "z4 over z2"));
    FactorSystem b =
        factor_system(make_extension(elem_abelian(2, 2), {0, 1}, "v4 over z2"));
    CenterModule zm = center_module(a);
    Cochain2 z = torsor_diff(a, b, zm);
    REQUIRE(is_cocycle2(zm.mod, z));
    REQUIRE(cohomology(zm.mod).two.class_of(z) != 0);
    REQUIRE(!are_equivalent(a, b));
  }
}

TEST_CASE("extensions of Z2 by Z4 with the inversion action", "[cohomology][torsor]") {
  Group q8 = quaternion(8);
  // the cyclic subgroup generated by a unit quaternion has index 2
  Extension e = make_extension(q8, {0, 1, 2, 3}, "q8 over z4");
  FactorSystem fs = factor_system(e);
  ExtensionClasses ec = extension_classes(fs);
  REQUIRE(ec.systems.size() == 2);
  Group d4 = dihedral(8);
  int n_split = 0, n_d4 = 0, n_q8 = 0;
  for (const FactorSystem& s : ec.systems) {
    if (is_split(s)) ++n_split;
    Group total = realize(s).total();
    if (is_isomorphic(total, d4)) ++n_d4;
    if (is_isomorphic(total, q8)) ++n_q8;
  }
  CHECK(n_split == 1);
  CHECK(n_d4 == 1);
  CHECK(n_q8 == 1);
}

TEST_CASE("transporting central cochains along automorphism pairs", "[cohomology][torsor]") {
  Group q8 = quaternion(8);
  Extension e = make_extension(q8, center(q8).members, "q8 over center");
  FactorSystem fs = factor_system(e);
  ExtensionClasses ec = extension_classes(fs);
  const Perm id_fiber = identity_perm(2);
  AutGroup aut_base = aut_group(fs.base);  // six automorphisms of the four-group
  REQUIRE(aut_base.size() == 6);

  SECTION("transport permutes classes and respects addition") {
    for (int bi = 0; bi < aut_base.size(); ++bi) {
      const Perm& beta = aut_base.perm(bi);
      std::vector<int> image(8);
      for (int i = 0; i < 8; ++i) {
        Cochain2 moved = induced_cochain2(ec.zm, id_fiber, beta,
                                          ec.coh.two.reps()[static_cast<std::size_t>(i)]);
        REQUIRE(is_cocycle2(ec.zm.mod, moved));
        image[static_cast<std::size_t>(i)] = ec.coh.two.class_of(moved);
      }
      std::vector<int> sorted = image;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < 8; ++i) REQUIRE(sorted[static_cast<std::size_t>(i)] == i);
      REQUIRE(image[0] == 0);
      // additivity of the induced map on classes
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
          Cochain2 sum = cochain_add(ec.zm.mod.coeff, ec.coh.two.reps()[static_cast<std::size_t>(i)],
                                     ec.coh.two.reps()[static_cast<std::size_t>(j)]);
          Cochain2 moved = induced_cochain2(ec.zm, id_fiber, beta, sum);
          int lhs = ec.coh.two.class_of(moved);
          Group view = ec.coh.two.group_view();
          REQUIRE(lhs == view.op(image[static_cast<std::size_t>(i)],
                                 image[static_cast<std::size_t>(j)]));
        }
    }
  }
  SECTION("degree-1 transport is compatible with cocycles") {
    for (int bi = 0; bi < aut_base.size(); ++bi) {
      const Perm& beta = aut_base.perm(bi);
      for (const Cochain1& z : ec.coh.one.all_cocycles(1000)) {
        Cochain1 moved = induced_cochain1(ec.zm, id_fiber, beta, z);
        REQUIRE(is_cocycle1(ec.zm.mod, moved));
      }
    }
  }
}
