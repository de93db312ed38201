#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "extauto/group.hpp"
#include "extauto/iso.hpp"
#include "extauto/util.hpp"

namespace extauto {

using Perm = std::vector<Elem>;  // automorphism as an image array

namespace detail {

inline Perm perm_compose(const Perm& a, const Perm& b) {  // apply b, then a
  Perm r(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = a[static_cast<std::size_t>(b[i])];
  return r;
}

inline Perm perm_inverse(const Perm& a) {
  Perm r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[static_cast<std::size_t>(a[i])] = static_cast<Elem>(i);
  return r;
}

inline Perm perm_identity(int n) {
  Perm r(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = i;
  return r;
}

}  // namespace detail

// The full automorphism group of a base group.  Elements are sorted image
// arrays (identity first).  The Cayley table `view` is materialized only when
// the automorphism count fits the construction order cap; all index-level
// operations work either way.
class AutGroup {
 public:
  AutGroup() = default;

  static AutGroup of(const Group& base, const Caps& caps = default_caps()) {
    if (base.order() > caps.search_cap)
      throw SearchCapExceeded("automorphism search on order " + std::to_string(base.order()) +
                              " > cap " + std::to_string(caps.search_cap));
    auto chain = detail::GenChain::build(base);
    std::vector<Perm> elems;
    detail::search_isomorphisms(base, base, chain, [&](const Perm& im) {
      elems.push_back(im);
      return true;
    });
    std::sort(elems.begin(), elems.end());
    return AutGroup(base, std::move(elems), caps);
  }

  const Group& base() const { return d_->base; }
  int size() const { return static_cast<int>(d_->elements.size()); }
  const Perm& perm(int i) const { return d_->elements[static_cast<std::size_t>(i)]; }
  Elem apply(int i, Elem x) const { return perm(i)[static_cast<std::size_t>(x)]; }
  Automorphism at(int i) const { return Automorphism{d_->base, d_->base, perm(i)}; }

  // index of an image array, -1 if it is not an automorphism of base
  int index_of(const Perm& p) const {
    auto it = d_->index.find(p);
    return it == d_->index.end() ? -1 : it->second;
  }
  int compose_idx(int i, int j) const {  // element i * j (apply j first)
    return d_->index.at(detail::perm_compose(perm(i), perm(j)));
  }
  int inv_idx(int i) const { return d_->index.at(detail::perm_inverse(perm(i))); }
  int identity_idx() const { return 0; }

  // indices of inner automorphisms, sorted
  const std::vector<int>& inner() const { return d_->inner; }
  int inner_index_of(Elem g) const { return d_->inner_of_elem[static_cast<std::size_t>(g)]; }

  bool has_view() const { return d_->view.has_value(); }
  // Cayley table of composition (index semantics match compose_idx)
  const Group& group_view() const {
    if (!d_->view) throw OrderCapExceeded("automorphism group too large for a Cayley table");
    return *d_->view;
  }

 private:
  AutGroup(const Group& base, std::vector<Perm> elems, const Caps& caps) {
    auto d = std::make_shared<Data>();
    d->base = base;
    d->elements = std::move(elems);
    for (int i = 0; i < static_cast<int>(d->elements.size()); ++i)
      d->index.emplace(d->elements[static_cast<std::size_t>(i)], i);
    d->inner_of_elem.resize(static_cast<std::size_t>(base.order()));
    std::vector<char> is_inner(d->elements.size(), 0);
    for (int g = 0; g < base.order(); ++g) {
      Perm cg(static_cast<std::size_t>(base.order()));
      for (int x = 0; x < base.order(); ++x) cg[static_cast<std::size_t>(x)] = base.conj(g, x);
      int idx = d->index.at(cg);
      d->inner_of_elem[static_cast<std::size_t>(g)] = idx;
      is_inner[static_cast<std::size_t>(idx)] = 1;
    }
    for (int i = 0; i < static_cast<int>(d->elements.size()); ++i)
      if (is_inner[static_cast<std::size_t>(i)]) d->inner.push_back(i);
    const int n = static_cast<int>(d->elements.size());
    if (n <= caps.order_cap) {
      std::vector<Elem> flat(static_cast<std::size_t>(n) * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          flat[static_cast<std::size_t>(i) * n + j] = d->index.at(detail::perm_compose(
              d->elements[static_cast<std::size_t>(i)], d->elements[static_cast<std::size_t>(j)]));
      d->view = Group::from_flat(n, std::move(flat),
                                 "Aut(" + (base.label().empty() ? "G" : base.label()) + ")");
    }
    d_ = std::move(d);
  }

  struct Data {
    Group base;
    std::vector<Perm> elements;
    std::unordered_map<Perm, int, VecHash> index;
    std::vector<int> inner;
    std::vector<int> inner_of_elem;  // base element -> index of its conjugation
    std::optional<Group> view;
  };
  std::shared_ptr<const Data> d_;
};

inline AutGroup aut_group(const Group& g, const Caps& caps = default_caps()) {
  return AutGroup::of(g, caps);
}

// The outer automorphism group: cosets of Inn inside Aut, each named by its
// minimal member index; `view` is the quotient's Cayley table.
class OutGroup {
 public:
  OutGroup() = default;

  static OutGroup of(const AutGroup& aut, const Caps& caps = default_caps()) {
    OutGroup o;
    o.aut_ = aut;
    o.class_of_.assign(static_cast<std::size_t>(aut.size()), -1);
    for (int i = 0; i < aut.size(); ++i) {
      if (o.class_of_[static_cast<std::size_t>(i)] >= 0) continue;
      int id = static_cast<int>(o.reps_.size());
      o.reps_.push_back(i);  // ascending scan, so the first member is minimal
      for (int inn : aut.inner()) o.class_of_[static_cast<std::size_t>(aut.compose_idx(i, inn))] = id;
    }
    const int n = static_cast<int>(o.reps_.size());
    if (n > caps.order_cap) throw OrderCapExceeded("outer automorphism group of order " + std::to_string(n));
    std::vector<Elem> flat(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        flat[static_cast<std::size_t>(i) * n + j] = o.class_of_[static_cast<std::size_t>(
            aut.compose_idx(o.reps_[static_cast<std::size_t>(i)], o.reps_[static_cast<std::size_t>(j)]))];
    o.view_ = Group::from_flat(
        n, std::move(flat), "Out(" + (aut.base().label().empty() ? "G" : aut.base().label()) + ")");
    return o;
  }

  const AutGroup& aut() const { return aut_; }
  int size() const { return static_cast<int>(reps_.size()); }
  int class_of(int aut_idx) const { return class_of_[static_cast<std::size_t>(aut_idx)]; }
  int rep(int cls) const { return reps_[static_cast<std::size_t>(cls)]; }
  const Group& group_view() const { return view_; }

  // class of (alpha o rep(cls) o alpha^-1): how an automorphism conjugates outer classes
  int conj_class(int alpha_idx, int cls) const {
    int r = aut_.compose_idx(alpha_idx, rep(cls));
    return class_of(aut_.compose_idx(r, aut_.inv_idx(alpha_idx)));
  }

 private:
  AutGroup aut_;
  std::vector<int> reps_;
  std::vector<int> class_of_;
  Group view_;
};

inline OutGroup out_group(const AutGroup& aut, const Caps& caps = default_caps()) {
  return OutGroup::of(aut, caps);
}

// Automorphisms of G preserving H setwise, as indices into aut_group(G).
struct AutSubset {
  AutGroup aut;
  std::vector<int> members;  // sorted ascending

  int size() const { return static_cast<int>(members.size()); }
  std::vector<Hom> homs() const {
    std::vector<Hom> out;
    out.reserve(members.size());
    for (int i : members) out.push_back(aut.at(i));
    return out;
  }
};

inline AutSubset relative_aut(const Group& g, const Subgroup& h,
                              const Caps& caps = default_caps()) {
  AutGroup aut = aut_group(g, caps);
  std::vector<int> members;
  for (int i = 0; i < aut.size(); ++i) {
    bool keeps = true;
    for (Elem x : h.members)
      if (!h.contains(aut.apply(i, x))) {
        keeps = false;
        break;
      }
    if (keeps) members.push_back(i);
  }
  return AutSubset{std::move(aut), std::move(members)};
}

// --- permutation-set computations ------------------------------------------
// Subgroup-level operations on sets of automorphisms that may be too large for
// a Cayley table: closure, greedy generators, derived series, solvability.

namespace permset {

using Set = std::unordered_set<Perm, VecHash>;

inline std::vector<Perm> closure(const std::vector<Perm>& gens, int n) {
  Set in;
  std::vector<Perm> list{detail::perm_identity(n)};
  in.insert(list[0]);
  for (std::size_t scan = 0; scan < list.size(); ++scan)
    for (const Perm& g : gens) {
      Perm y = detail::perm_compose(list[scan], g);
      if (in.insert(y).second) list.push_back(std::move(y));
    }
  return list;
}

// Greedy small generating set of a subgroup given as a member list.
inline std::vector<Perm> greedy_generators(const std::vector<Perm>& members, int n) {
  std::vector<Perm> gens;
  Set have;
  have.insert(detail::perm_identity(n));
  for (const Perm& m : members) {
    if (have.count(m)) continue;
    gens.push_back(m);
    for (const Perm& x : closure(gens, n)) have.insert(x);
  }
  return gens;
}

// Derived subgroup of <gens>: normal closure of the generator commutators.
inline std::vector<Perm> derived_generators(const std::vector<Perm>& gens, int n) {
  std::vector<Perm> seed;
  Set seen;
  for (const Perm& a : gens)
    for (const Perm& b : gens) {
      Perm c = detail::perm_compose(detail::perm_compose(a, b),
                                    detail::perm_compose(detail::perm_inverse(a),
                                                         detail::perm_inverse(b)));
      if (seen.insert(c).second) seed.push_back(std::move(c));
    }
  // normal closure under conjugation by the ambient generators
  for (;;) {
    std::vector<Perm> sub = closure(seed, n);
    Set in(sub.begin(), sub.end());
    bool grew = false;
    for (const Perm& x : sub) {
      for (const Perm& g : gens) {
        Perm y = detail::perm_compose(detail::perm_compose(g, x), detail::perm_inverse(g));
        if (!in.count(y)) {
          seed.push_back(std::move(y));
          grew = true;
        }
      }
      if (grew) break;
    }
    if (!grew) return sub;
  }
}

// Sizes along the derived series of <gens>, ending when it stabilizes.
inline std::vector<long long> derived_series_sizes(std::vector<Perm> gens, int n) {
  std::vector<long long> sizes;
  std::vector<Perm> current = closure(gens, n);
  sizes.push_back(static_cast<long long>(current.size()));
  while (sizes.back() > 1) {
    std::vector<Perm> cg = greedy_generators(current, n);
    std::vector<Perm> next = derived_generators(cg, n);
    if (static_cast<long long>(next.size()) == sizes.back()) break;  // perfect group
    sizes.push_back(static_cast<long long>(next.size()));
    current = std::move(next);
  }
  return sizes;
}

inline bool solvable(const std::vector<Perm>& members, int n) {
  std::vector<Perm> gens = greedy_generators(members, n);
  return derived_series_sizes(std::move(gens), n).back() == 1;
}

}  // namespace permset

}  // namespace extauto
