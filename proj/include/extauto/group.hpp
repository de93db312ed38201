#pragma once

#include <algorithm>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "extauto/caps.hpp"
#include "extauto/errors.hpp"

namespace extauto {

using Elem = int;  // element index inside a fixed group, identity is always 0

// A finite group given by its Cayley table.  Immutable after construction and
// cheap to copy (shared storage).  Construction validates the table fully:
// exactly one two-sided identity (relocated to index 0), Latin square,
// associativity.
class Group {
 public:
  Group() : d_(trivial_data()) {}

  // Validates `table` as a group; relabels so the identity sits at index 0.
  static Group from_table(const std::vector<std::vector<Elem>>& table,
                          std::string label = "",
                          const Caps& caps = default_caps()) {
    const int n = static_cast<int>(table.size());
    if (n == 0) throw NotAGroup("empty table");
    if (n > caps.order_cap)
      throw OrderCapExceeded("group of order " + std::to_string(n) + " > cap " +
                             std::to_string(caps.order_cap));
    std::vector<Elem> flat(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(table[i].size()) != n)
        throw NotAGroup("row " + std::to_string(i) + " has length " +
                        std::to_string(table[i].size()) + ", expected " + std::to_string(n));
      for (int j = 0; j < n; ++j) {
        Elem v = table[i][j];
        if (v < 0 || v >= n)
          throw NotAGroup("entry (" + std::to_string(i) + "," + std::to_string(j) +
                          ") = " + std::to_string(v) + " out of range");
        flat[static_cast<std::size_t>(i) * n + j] = v;
      }
    }
    return from_flat(n, std::move(flat), std::move(label));
  }

  static Group from_flat(int n, std::vector<Elem> flat, std::string label = "") {
    // locate the two-sided identity
    int e = -1;
    for (int i = 0; i < n; ++i) {
      bool ok = true;
      for (int j = 0; j < n && ok; ++j)
        ok = flat[static_cast<std::size_t>(i) * n + j] == j &&
             flat[static_cast<std::size_t>(j) * n + i] == j;
      if (ok) {
        e = i;
        break;
      }
    }
    if (e < 0) throw NotAGroup("no two-sided identity element");
    if (e != 0) {
      // swap labels 0 <-> e
      std::vector<Elem> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      perm[0] = e;
      perm[static_cast<std::size_t>(e)] = 0;
      std::vector<Elem> moved(flat.size());
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          moved[static_cast<std::size_t>(perm[static_cast<std::size_t>(a)]) * n +
                perm[static_cast<std::size_t>(b)]] =
              perm[static_cast<std::size_t>(flat[static_cast<std::size_t>(a) * n + b])];
      flat.swap(moved);
    }
    // Latin square: every row and column is a permutation
    std::vector<char> seen(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      std::fill(seen.begin(), seen.end(), 0);
      for (int j = 0; j < n; ++j) {
        Elem v = flat[static_cast<std::size_t>(i) * n + j];
        if (seen[static_cast<std::size_t>(v)])
          throw NotAGroup("row " + std::to_string(i) + " repeats element " + std::to_string(v));
        seen[static_cast<std::size_t>(v)] = 1;
      }
      std::fill(seen.begin(), seen.end(), 0);
      for (int j = 0; j < n; ++j) {
        Elem v = flat[static_cast<std::size_t>(j) * n + i];
        if (seen[static_cast<std::size_t>(v)])
          throw NotAGroup("column " + std::to_string(i) + " repeats element " + std::to_string(v));
        seen[static_cast<std::size_t>(v)] = 1;
      }
    }
    // associativity
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Elem ab = flat[static_cast<std::size_t>(a) * n + b];
        for (int c = 0; c < n; ++c) {
          Elem bc = flat[static_cast<std::size_t>(b) * n + c];
          if (flat[static_cast<std::size_t>(ab) * n + c] !=
              flat[static_cast<std::size_t>(a) * n + bc])
            throw NotAGroup("associativity fails at (" + std::to_string(a) + "," +
                            std::to_string(b) + "," + std::to_string(c) + ")");
        }
      }
    auto d = std::make_shared<Data>();
    d->n = n;
    d->table = std::move(flat);
    d->label = std::move(label);
    d->inv.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (d->table[static_cast<std::size_t>(a) * n + b] == 0) d->inv[static_cast<std::size_t>(a)] = b;
    d->eord.resize(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      int k = 1;
      Elem x = a;
      while (x != 0) {
        x = d->table[static_cast<std::size_t>(x) * n + a];
        ++k;
      }
      d->eord[static_cast<std::size_t>(a)] = k;
    }
    d->abelian = true;
    for (int a = 0; a < n && d->abelian; ++a)
      for (int b = a + 1; b < n; ++b)
        if (d->table[static_cast<std::size_t>(a) * n + b] !=
            d->table[static_cast<std::size_t>(b) * n + a]) {
          d->abelian = false;
          break;
        }
    Group g;
    g.d_ = std::move(d);
    return g;
  }

  int order() const { return d_->n; }
  Elem op(Elem a, Elem b) const { return d_->table[static_cast<std::size_t>(a) * d_->n + b]; }
  Elem inv(Elem a) const { return d_->inv[static_cast<std::size_t>(a)]; }
  // conjugation g x g^-1
  Elem conj(Elem g, Elem x) const { return op(op(g, x), inv(g)); }
  Elem commutator(Elem a, Elem b) const { return op(op(a, b), op(inv(a), inv(b))); }
  Elem power(Elem a, long long k) const {
    long long m = elem_order(a);
    k %= m;
    if (k < 0) k += m;
    Elem r = 0;
    for (long long i = 0; i < k; ++i) r = op(r, a);
    return r;
  }
  int elem_order(Elem a) const { return d_->eord[static_cast<std::size_t>(a)]; }
  bool is_abelian() const { return d_->abelian; }
  const std::string& label() const { return d_->label; }
  Group with_label(std::string label) const {
    Group g = *this;
    auto d = std::make_shared<Data>(*d_);
    d->label = std::move(label);
    g.d_ = std::move(d);
    return g;
  }
  const std::vector<Elem>& flat_table() const { return d_->table; }

  // structural equality: same order, same table (labels ignored)
  friend bool operator==(const Group& a, const Group& b) {
    return a.d_ == b.d_ || (a.d_->n == b.d_->n && a.d_->table == b.d_->table);
  }
  friend bool operator!=(const Group& a, const Group& b) { return !(a == b); }

  // multiset of element orders, ascending; an isomorphism invariant
  std::vector<int> order_profile() const {
    std::vector<int> p = d_->eord;
    std::sort(p.begin(), p.end());
    return p;
  }

 private:
  struct Data {
    int n = 1;
    std::vector<Elem> table{0};
    std::vector<Elem> inv{0};
    std::vector<int> eord{1};
    std::string label;
    bool abelian = true;
  };
  static std::shared_ptr<const Data> trivial_data() {
    static std::shared_ptr<const Data> d = std::make_shared<Data>();
    return d;
  }
  std::shared_ptr<const Data> d_;
};

// A subgroup stored as a sorted member list plus an O(1) membership mask.
struct Subgroup {
  Group parent;
  std::vector<Elem> members;  // sorted ascending, always contains 0
  std::vector<char> mask;     // size |parent|

  static Subgroup of(const Group& g, std::vector<Elem> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    Subgroup s;
    s.parent = g;
    s.mask.assign(static_cast<std::size_t>(g.order()), 0);
    for (Elem m : members) {
      if (m < 0 || m >= g.order()) throw NotAGroup("subgroup member out of range");
      s.mask[static_cast<std::size_t>(m)] = 1;
    }
    if (members.empty() || members[0] != 0) throw NotAGroup("subgroup must contain the identity");
    for (Elem a : members)
      for (Elem b : members)
        if (!s.mask[static_cast<std::size_t>(g.op(a, b))])
          throw NotAGroup("subgroup not closed under the operation");
    s.members = std::move(members);
    return s;
  }

  int order() const { return static_cast<int>(members.size()); }
  bool contains(Elem x) const { return mask[static_cast<std::size_t>(x)] != 0; }
};

// A homomorphism between two groups, stored as the full image array.
struct Hom {
  Group domain;
  Group codomain;
  std::vector<Elem> images;

  static Hom checked(const Group& dom, const Group& cod, std::vector<Elem> images) {
    if (static_cast<int>(images.size()) != dom.order())
      throw NotAGroup("homomorphism image array has wrong length");
    for (Elem v : images)
      if (v < 0 || v >= cod.order()) throw NotAGroup("homomorphism image out of range");
    for (int a = 0; a < dom.order(); ++a)
      for (int b = 0; b < dom.order(); ++b)
        if (images[static_cast<std::size_t>(dom.op(a, b))] !=
            cod.op(images[static_cast<std::size_t>(a)], images[static_cast<std::size_t>(b)]))
          throw NotAGroup("map is not a homomorphism at (" + std::to_string(a) + "," +
                          std::to_string(b) + ")");
    return Hom{dom, cod, std::move(images)};
  }

  Elem apply(Elem x) const { return images[static_cast<std::size_t>(x)]; }

  bool is_injective() const {
    std::vector<char> seen(static_cast<std::size_t>(codomain.order()), 0);
    for (Elem v : images) {
      if (seen[static_cast<std::size_t>(v)]) return false;
      seen[static_cast<std::size_t>(v)] = 1;
    }
    return true;
  }
  bool is_surjective() const {
    std::vector<char> seen(static_cast<std::size_t>(codomain.order()), 0);
    int c = 0;
    for (Elem v : images)
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++c;
      }
    return c == codomain.order();
  }
  bool is_bijective() const { return domain.order() == codomain.order() && is_injective(); }
  bool is_identity() const {
    if (domain != codomain) return false;
    for (int i = 0; i < domain.order(); ++i)
      if (images[static_cast<std::size_t>(i)] != i) return false;
    return true;
  }
};

// An automorphism is a bijective self-homomorphism; alias for readability.
using Automorphism = Hom;

inline Automorphism make_automorphism(const Group& g, std::vector<Elem> images) {
  Hom h = Hom::checked(g, g, std::move(images));
  if (!h.is_bijective()) throw NotAGroup("map is not bijective");
  return h;
}

inline Automorphism identity_automorphism(const Group& g) {
  std::vector<Elem> im(static_cast<std::size_t>(g.order()));
  std::iota(im.begin(), im.end(), 0);
  return Automorphism{g, g, std::move(im)};
}

// h1 then h2 (function composition h2(h1(x)) when composing as maps left-to-right
// is NOT what we want: compose(a, b) applies b first, then a, matching a*b).
inline Hom compose(const Hom& a, const Hom& b) {
  if (b.codomain != a.domain) throw NotAGroup("composition domain mismatch");
  std::vector<Elem> im(b.images.size());
  for (std::size_t i = 0; i < im.size(); ++i)
    im[i] = a.images[static_cast<std::size_t>(b.images[i])];
  return Hom{b.domain, a.codomain, std::move(im)};
}

inline Automorphism inverse(const Automorphism& a) {
  std::vector<Elem> im(a.images.size());
  for (std::size_t i = 0; i < im.size(); ++i)
    im[static_cast<std::size_t>(a.images[i])] = static_cast<Elem>(i);
  return Automorphism{a.codomain, a.domain, std::move(im)};
}

// conjugation automorphism c_g : x -> g x g^-1
inline Automorphism inner_automorphism(const Group& g, Elem t) {
  std::vector<Elem> im(static_cast<std::size_t>(g.order()));
  for (int x = 0; x < g.order(); ++x) im[static_cast<std::size_t>(x)] = g.conj(t, x);
  return Automorphism{g, g, std::move(im)};
}

inline Subgroup center(const Group& g) {
  std::vector<Elem> m;
  for (int a = 0; a < g.order(); ++a) {
    bool central = true;
    for (int b = 0; b < g.order() && central; ++b) central = g.op(a, b) == g.op(b, a);
    if (central) m.push_back(a);
  }
  return Subgroup::of(g, std::move(m));
}

// centralizer of a subset (given by member list) in g
inline Subgroup centralizer(const Group& g, const std::vector<Elem>& subset) {
  std::vector<Elem> m;
  for (int a = 0; a < g.order(); ++a) {
    bool ok = true;
    for (Elem s : subset)
      if (g.op(a, s) != g.op(s, a)) {
        ok = false;
        break;
      }
    if (ok) m.push_back(a);
  }
  return Subgroup::of(g, std::move(m));
}

inline Subgroup subgroup_generated(const Group& g, const std::vector<Elem>& gens) {
  std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
  std::vector<Elem> list{0};
  in[0] = 1;
  for (std::size_t i = 0; i < list.size(); ++i) {
    for (Elem s : gens) {
      Elem y = g.op(list[i], s);
      if (!in[static_cast<std::size_t>(y)]) {
        in[static_cast<std::size_t>(y)] = 1;
        list.push_back(y);
      }
    }
  }
  return Subgroup::of(g, std::move(list));
}

inline bool is_normal(const Group& g, const Subgroup& h) {
  for (int a = 0; a < g.order(); ++a)
    for (Elem x : h.members)
      if (!h.contains(g.conj(a, x))) return false;
  return true;
}

inline Subgroup normal_closure(const Group& g, const std::vector<Elem>& seed) {
  std::vector<Elem> gens = seed;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (int a = 0; a < g.order(); ++a) {
      Elem y = g.conj(a, gens[i]);
      if (std::find(gens.begin(), gens.end(), y) == gens.end()) gens.push_back(y);
    }
  return subgroup_generated(g, gens);
}

// The derived subgroup [G,G]: generated by all commutators.
inline Subgroup derived_subgroup(const Group& g) {
  std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
  std::vector<Elem> gens;
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b) {
      Elem c = g.commutator(a, b);
      if (!in[static_cast<std::size_t>(c)]) {
        in[static_cast<std::size_t>(c)] = 1;
        gens.push_back(c);
      }
    }
  return subgroup_generated(g, gens);
}

// Derived subgroup computed inside a subgroup (members of `s` only).
inline Subgroup derived_subgroup_of(const Group& g, const Subgroup& s) {
  std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
  std::vector<Elem> gens;
  for (Elem a : s.members)
    for (Elem b : s.members) {
      Elem c = g.commutator(a, b);
      if (!in[static_cast<std::size_t>(c)]) {
        in[static_cast<std::size_t>(c)] = 1;
        gens.push_back(c);
      }
    }
  return subgroup_generated(g, gens);
}

// G >= G' >= G'' >= ... down to the point where it stabilizes.
inline std::vector<Subgroup> derived_series(const Group& g) {
  std::vector<Subgroup> series;
  std::vector<Elem> all(static_cast<std::size_t>(g.order()));
  std::iota(all.begin(), all.end(), 0);
  series.push_back(Subgroup::of(g, std::move(all)));
  for (;;) {
    Subgroup next = derived_subgroup_of(g, series.back());
    if (next.order() == series.back().order()) break;
    series.push_back(std::move(next));
    if (series.back().order() == 1) break;
  }
  return series;
}

inline bool is_solvable(const Group& g) { return derived_series(g).back().order() == 1; }

// A subgroup rebuilt as a standalone Group, with index translation both ways.
struct SubgroupView {
  Group group;
  std::vector<Elem> to_parent;    // view index -> parent element
  std::vector<int> from_parent;   // parent element -> view index, -1 outside
};

inline SubgroupView subgroup_to_group(const Subgroup& s, std::string label = "") {
  const Group& g = s.parent;
  SubgroupView v;
  v.to_parent = s.members;  // sorted, members[0] == 0
  v.from_parent.assign(static_cast<std::size_t>(g.order()), -1);
  for (int i = 0; i < s.order(); ++i)
    v.from_parent[static_cast<std::size_t>(s.members[static_cast<std::size_t>(i)])] = i;
  const int n = s.order();
  std::vector<Elem> flat(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Elem prod = g.op(s.members[static_cast<std::size_t>(i)], s.members[static_cast<std::size_t>(j)]);
      flat[static_cast<std::size_t>(i) * n + j] = v.from_parent[static_cast<std::size_t>(prod)];
    }
  v.group = Group::from_flat(n, std::move(flat), std::move(label));
  return v;
}

// Quotient by a normal subgroup.  Coset representatives are canonical: the
// minimal element index in each coset, listed ascending (identity coset first).
struct QuotientResult {
  Group group;
  Hom proj;                 // parent -> quotient
  std::vector<Elem> reps;   // quotient index -> representative in parent
};

inline QuotientResult quotient(const Group& g, const Subgroup& n) {
  if (!is_normal(g, n)) throw NotNormal("quotient requires a normal subgroup");
  std::vector<int> coset_of(static_cast<std::size_t>(g.order()), -1);
  std::vector<Elem> reps;
  for (int a = 0; a < g.order(); ++a) {
    if (coset_of[static_cast<std::size_t>(a)] >= 0) continue;
    int id = static_cast<int>(reps.size());
    reps.push_back(a);  // ascending scan makes the first-seen member minimal
    for (Elem x : n.members) coset_of[static_cast<std::size_t>(g.op(a, x))] = id;
  }
  const int q = static_cast<int>(reps.size());
  std::vector<Elem> flat(static_cast<std::size_t>(q) * q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      flat[static_cast<std::size_t>(i) * q + j] = static_cast<Elem>(
          coset_of[static_cast<std::size_t>(g.op(reps[static_cast<std::size_t>(i)],
                                                  reps[static_cast<std::size_t>(j)]))]);
  QuotientResult r;
  r.group = Group::from_flat(q, std::move(flat),
                             g.label().empty() ? "" : g.label() + "/N");
  std::vector<Elem> proj_images(static_cast<std::size_t>(g.order()));
  for (int a = 0; a < g.order(); ++a)
    proj_images[static_cast<std::size_t>(a)] = coset_of[static_cast<std::size_t>(a)];
  r.proj = Hom::checked(g, r.group, std::move(proj_images));
  r.reps = std::move(reps);
  return r;
}

}  // namespace extauto
