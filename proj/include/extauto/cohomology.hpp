#pragma once

// Low-degree group cohomology for a finite group acting on a finite abelian
// coefficient group, plus the torsor structure this induces on factor
// systems: extensions with a fixed fiber action are twisted into one another
// by central 2-cocycles, and two such extensions are equivalent exactly when
// their twist difference is a coboundary.
//
// All cochains are normalized (they vanish whenever an argument is the
// identity).  Degree-1 and degree-2 cohomology are computed by linear algebra
// over Z/m, where m is the exponent of the coefficient group: each coefficient
// element is written in coordinates over a cyclic decomposition, coordinates
// are rescaled to share the single modulus m, cocycles become the kernel of a
// constraint matrix, and coboundaries the span of differentials of basis
// cochains.  Canonical class representatives are obtained by reducing a
// cocycle at every pivot of the coboundary span's canonical echelon form,
// which is deterministic and independent of discovery order.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "extauto/aut.hpp"
#include "extauto/caps.hpp"
#include "extauto/errors.hpp"
#include "extauto/extension.hpp"
#include "extauto/group.hpp"
#include "extauto/modlin.hpp"

namespace extauto {

// ---------------------------------------------------------------------------
// Modules
// ---------------------------------------------------------------------------

// A finite abelian coefficient group together with an action of `base` by
// automorphisms.  The action must be a genuine homomorphism into Aut(coeff).
struct QModule {
  Group base;
  Group coeff;
  std::vector<Perm> action;  // indexed by base element

  Elem act(Elem q, Elem x) const {
    return action[static_cast<std::size_t>(q)][static_cast<std::size_t>(x)];
  }

  void validate() const {
    if (!coeff.is_abelian())
      throw ActionIncompatible("module coefficients must form an abelian group");
    if (static_cast<int>(action.size()) != base.order())
      throw ActionIncompatible("module action must be indexed by the acting group");
    const int nm = coeff.order();
    for (int q = 0; q < base.order(); ++q) {
      const Perm& p = action[static_cast<std::size_t>(q)];
      if (static_cast<int>(p.size()) != nm)
        throw ActionIncompatible("module action entries must permute the coefficients");
      std::vector<char> seen(static_cast<std::size_t>(nm), 0);
      for (Elem x = 0; x < nm; ++x) {
        Elem y = p[static_cast<std::size_t>(x)];
        if (y < 0 || y >= nm || seen[static_cast<std::size_t>(y)])
          throw ActionIncompatible("module action entry is not a permutation");
        seen[static_cast<std::size_t>(y)] = 1;
      }
      for (Elem x = 0; x < nm; ++x)
        for (Elem y = 0; y < nm; ++y)
          if (p[static_cast<std::size_t>(coeff.op(x, y))] !=
              coeff.op(p[static_cast<std::size_t>(x)], p[static_cast<std::size_t>(y)]))
            throw ActionIncompatible("module action entry is not an automorphism");
    }
    for (Elem x = 0; x < nm; ++x)
      if (action[0][static_cast<std::size_t>(x)] != x)
        throw ActionIncompatible("module action at the identity must be trivial");
    for (int q = 0; q < base.order(); ++q)
      for (int r = 0; r < base.order(); ++r) {
        const Perm& pq = action[static_cast<std::size_t>(q)];
        const Perm& pr = action[static_cast<std::size_t>(r)];
        const Perm& pqr = action[static_cast<std::size_t>(base.op(q, r))];
        for (Elem x = 0; x < nm; ++x)
          if (pq[static_cast<std::size_t>(pr[static_cast<std::size_t>(x)])] !=
              pqr[static_cast<std::size_t>(x)])
            throw ActionIncompatible("module action is not a homomorphism at base pair (" +
                                     std::to_string(q) + ", " + std::to_string(r) + ")");
      }
  }
};

inline QModule make_module(Group base, Group coeff, std::vector<Perm> action) {
  QModule qm{std::move(base), std::move(coeff), std::move(action)};
  qm.validate();
  return qm;
}

inline QModule trivial_module(const Group& base, const Group& coeff) {
  return make_module(base, coeff,
                     std::vector<Perm>(static_cast<std::size_t>(base.order()),
                                       detail::perm_identity(coeff.order())));
}

// Cyclic decomposition of a finite abelian group: independent generators with
// descending orders (each dividing the previous) whose coordinate box covers
// the group exactly once.
struct ModuleBasis {
  Group grp;
  std::vector<Elem> gens;
  std::vector<int> orders;
  std::vector<std::vector<int>> coords;  // per element, one entry per generator

  int rank() const { return static_cast<int>(gens.size()); }

  Elem elem_of(const std::vector<int>& c) const {
    Elem e = 0;
    for (std::size_t i = 0; i < gens.size(); ++i)
      e = grp.op(e, grp.power(gens[i], c[i]));
    return e;
  }
};

namespace detail {

inline bool basis_dfs(const Group& m, const std::vector<Elem>& cand, std::vector<char>& reached,
                      int& reached_count, std::vector<Elem>& gens, std::vector<int>& orders) {
  const int n = m.order();
  if (reached_count == n) return true;
  const int prev = orders.empty() ? n : orders.back();
  for (Elem e : cand) {
    const int d = m.elem_order(e);
    if (d > prev || reached[static_cast<std::size_t>(e)]) continue;
    // extend the coordinate box by <e> and verify independence
    std::vector<Elem> added;
    bool ok = true;
    Elem pw = 0;
    for (int c = 1; c < d && ok; ++c) {
      pw = m.op(pw, e);
      for (Elem x = 0; x < n && ok; ++x) {
        if (!reached[static_cast<std::size_t>(x)]) continue;
        if (orders.empty() && x != 0) continue;  // before any generator only 0 is reached
        Elem y = m.op(x, pw);
        if (reached[static_cast<std::size_t>(y)]) {
          ok = false;
        } else {
          added.push_back(y);
        }
      }
      // elements added for smaller c are not yet marked; check batch-internal clashes
      if (ok) {
        std::sort(added.begin(), added.end());
        for (std::size_t i = 0; i + 1 < added.size(); ++i)
          if (added[i] == added[i + 1]) {
            ok = false;
            break;
          }
      }
    }
    if (!ok) continue;
    for (Elem y : added) reached[static_cast<std::size_t>(y)] = 1;
    reached_count += static_cast<int>(added.size());
    gens.push_back(e);
    orders.push_back(d);
    if (basis_dfs(m, cand, reached, reached_count, gens, orders)) return true;
    gens.pop_back();
    orders.pop_back();
    for (Elem y : added) reached[static_cast<std::size_t>(y)] = 0;
    reached_count -= static_cast<int>(added.size());
  }
  return false;
}

}  // namespace detail

inline ModuleBasis module_basis(const Group& m) {
  if (!m.is_abelian())
    throw ActionIncompatible("cannot decompose a non-abelian group into cyclic factors");
  ModuleBasis b{m, {}, {}, {}};
  const int n = m.order();
  b.coords.assign(static_cast<std::size_t>(n), {});
  if (n == 1) return b;
  std::vector<Elem> cand;
  for (Elem e = 1; e < n; ++e) cand.push_back(e);
  std::sort(cand.begin(), cand.end(), [&](Elem a, Elem c) {
    if (m.elem_order(a) != m.elem_order(c)) return m.elem_order(a) > m.elem_order(c);
    return a < c;
  });
  std::vector<char> reached(static_cast<std::size_t>(n), 0);
  reached[0] = 1;
  int count = 1;
  if (!detail::basis_dfs(m, cand, reached, count, b.gens, b.orders))
    throw Error("internal error: cyclic decomposition search failed");
  // fill the coordinate table by walking the whole box
  const int k = b.rank();
  std::vector<int> tup(static_cast<std::size_t>(k), 0);
  while (true) {
    b.coords[static_cast<std::size_t>(b.elem_of(tup))] = tup;
    int i = k - 1;
    while (i >= 0 && tup[static_cast<std::size_t>(i)] + 1 == b.orders[static_cast<std::size_t>(i)]) {
      tup[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++tup[static_cast<std::size_t>(i)];
  }
  return b;
}

// ---------------------------------------------------------------------------
// Cochains and differentials
// ---------------------------------------------------------------------------

// Degree-1 cochain: one coefficient element per base element, entry 0 fixed
// to 0.  Degree-2 cochain: a flattened |Q| x |Q| table (row-major), entries
// with either index 0 fixed to 0.
using Cochain1 = std::vector<Elem>;
using Cochain2 = std::vector<Elem>;

inline Elem c2_at(const Cochain2& f, int nq, Elem q, Elem r) {
  return f[static_cast<std::size_t>(q) * static_cast<std::size_t>(nq) +
           static_cast<std::size_t>(r)];
}

inline Elem& c2_at(Cochain2& f, int nq, Elem q, Elem r) {
  return f[static_cast<std::size_t>(q) * static_cast<std::size_t>(nq) +
           static_cast<std::size_t>(r)];
}

inline Cochain1 zero_cochain1(const QModule& qm) {
  return Cochain1(static_cast<std::size_t>(qm.base.order()), 0);
}

inline Cochain2 zero_cochain2(const QModule& qm) {
  const std::size_t nq = static_cast<std::size_t>(qm.base.order());
  return Cochain2(nq * nq, 0);
}

inline Cochain1 d0(const QModule& qm, Elem m0) {
  Cochain1 s(static_cast<std::size_t>(qm.base.order()));
  for (int q = 0; q < qm.base.order(); ++q)
    s[static_cast<std::size_t>(q)] = qm.coeff.op(qm.act(q, m0), qm.coeff.inv(m0));
  return s;
}

inline Cochain2 d1(const QModule& qm, const Cochain1& s) {
  const int nq = qm.base.order();
  Cochain2 f = zero_cochain2(qm);
  for (int q = 0; q < nq; ++q)
    for (int r = 0; r < nq; ++r)
      c2_at(f, nq, q, r) =
          qm.coeff.op(qm.coeff.op(qm.act(q, s[static_cast<std::size_t>(r)]),
                                  s[static_cast<std::size_t>(q)]),
                      qm.coeff.inv(s[static_cast<std::size_t>(qm.base.op(q, r))]));
  return f;
}

inline bool is_normalized1(const QModule& qm, const Cochain1& s) {
  if (static_cast<int>(s.size()) != qm.base.order()) return false;
  for (Elem v : s)
    if (v < 0 || v >= qm.coeff.order()) return false;
  return s[0] == 0;
}

inline bool is_normalized2(const QModule& qm, const Cochain2& f) {
  const int nq = qm.base.order();
  if (static_cast<int>(f.size()) != nq * nq) return false;
  for (Elem v : f)
    if (v < 0 || v >= qm.coeff.order()) return false;
  for (int q = 0; q < nq; ++q)
    if (c2_at(f, nq, q, 0) != 0 || c2_at(f, nq, 0, q) != 0) return false;
  return true;
}

inline bool is_cocycle1(const QModule& qm, const Cochain1& s) {
  if (!is_normalized1(qm, s)) return false;
  const int nq = qm.base.order();
  for (int q = 0; q < nq; ++q)
    for (int r = 0; r < nq; ++r)
      if (qm.coeff.op(qm.act(q, s[static_cast<std::size_t>(r)]), s[static_cast<std::size_t>(q)]) !=
          s[static_cast<std::size_t>(qm.base.op(q, r))])
        return false;
  return true;
}

inline bool is_cocycle2(const QModule& qm, const Cochain2& f) {
  if (!is_normalized2(qm, f)) return false;
  const int nq = qm.base.order();
  for (int q = 1; q < nq; ++q)
    for (int r = 1; r < nq; ++r)
      for (int s = 1; s < nq; ++s) {
        Elem lhs = qm.coeff.op(qm.act(q, c2_at(f, nq, r, s)), c2_at(f, nq, q, qm.base.op(r, s)));
        Elem rhs = qm.coeff.op(c2_at(f, nq, qm.base.op(q, r), s), c2_at(f, nq, q, r));
        if (lhs != rhs) return false;
      }
  return true;
}

// pointwise sum/inverse of cochains of either degree
inline std::vector<Elem> cochain_add(const Group& coeff, const std::vector<Elem>& a,
                                     const std::vector<Elem>& b) {
  std::vector<Elem> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = coeff.op(a[i], b[i]);
  return r;
}

inline std::vector<Elem> cochain_neg(const Group& coeff, const std::vector<Elem>& a) {
  std::vector<Elem> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = coeff.inv(a[i]);
  return r;
}

// Exhaustive cocycle enumeration; the trusted cross-check for the linear
// engine on small modules.  Throws SearchCapExceeded past the cochain cap.
inline std::vector<Cochain1> enumerate_cocycles1(const QModule& qm,
                                                 const Caps& caps = default_caps()) {
  const int nq = qm.base.order(), nm = qm.coeff.order();
  double space = 1;
  for (int i = 1; i < nq; ++i) space *= nm;
  if (space > static_cast<double>(caps.cochain_cap))
    throw SearchCapExceeded("degree-1 cochain space too large for exhaustive enumeration");
  std::vector<Cochain1> out;
  Cochain1 s(static_cast<std::size_t>(nq), 0);
  while (true) {
    if (is_cocycle1(qm, s)) out.push_back(s);
    int i = nq - 1;
    while (i >= 1 && s[static_cast<std::size_t>(i)] + 1 == nm) {
      s[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 1) break;
    ++s[static_cast<std::size_t>(i)];
  }
  return out;
}

inline std::vector<Cochain2> enumerate_cocycles2(const QModule& qm,
                                                 const Caps& caps = default_caps()) {
  const int nq = qm.base.order(), nm = qm.coeff.order();
  double space = 1;
  for (int i = 0; i < (nq - 1) * (nq - 1); ++i) {
    space *= nm;
    if (space > static_cast<double>(caps.cochain_cap))
      throw SearchCapExceeded("degree-2 cochain space too large for exhaustive enumeration");
  }
  std::vector<std::pair<Elem, Elem>> slots;
  for (Elem q = 1; q < nq; ++q)
    for (Elem r = 1; r < nq; ++r) slots.emplace_back(q, r);
  std::vector<Cochain2> out;
  Cochain2 f = zero_cochain2(qm);
  while (true) {
    if (is_cocycle2(qm, f)) out.push_back(f);
    std::size_t i = slots.size();
    while (i > 0) {
      Elem& v = c2_at(f, nq, slots[i - 1].first, slots[i - 1].second);
      if (v + 1 < nm) {
        ++v;
        break;
      }
      v = 0;
      --i;
    }
    if (i == 0) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The linear engine
// ---------------------------------------------------------------------------

namespace detail {

// Coefficient elements as vectors over Z/m, m = exponent of the module:
// coordinate i of element e is coords[e][i] * (m / orders[i]).
struct ModuleCoords {
  ModuleBasis basis;
  modlin::u32 m = 1;                  // exponent (lcm of cyclic orders)
  std::vector<modlin::u32> scale;     // m / orders[i]
  int k = 0;

  static ModuleCoords of(const Group& grp) {
    ModuleCoords mc;
    mc.basis = module_basis(grp);
    mc.k = mc.basis.rank();
    long long l = 1;
    for (int d : mc.basis.orders) l = std::lcm(l, static_cast<long long>(d));
    mc.m = static_cast<modlin::u32>(l);
    for (int d : mc.basis.orders)
      mc.scale.push_back(mc.m / static_cast<modlin::u32>(d));
    return mc;
  }

  bool plain() const {  // every coordinate already runs over the full Z/m
    for (modlin::u32 s : scale)
      if (s != 1) return false;
    return true;
  }

  void put(modlin::Row& row, std::size_t at, Elem e) const {
    const std::vector<int>& c = basis.coords[static_cast<std::size_t>(e)];
    for (int i = 0; i < k; ++i)
      row[at + static_cast<std::size_t>(i)] =
          static_cast<modlin::u32>(c[static_cast<std::size_t>(i)]) * scale[static_cast<std::size_t>(i)];
  }

  Elem get(const modlin::Row& row, std::size_t at) const {
    std::vector<int> c(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      modlin::u32 v = row[at + static_cast<std::size_t>(i)];
      if (v % scale[static_cast<std::size_t>(i)] != 0)
        throw Error("internal error: vector left the coefficient sublattice");
      c[static_cast<std::size_t>(i)] = static_cast<int>(v / scale[static_cast<std::size_t>(i)]);
    }
    return basis.elem_of(c);
  }

  // action of a base element as an integer matrix on scaled coordinates
  std::vector<std::vector<modlin::u32>> scaled_matrix(const QModule& qm, Elem q) const {
    std::vector<std::vector<modlin::u32>> a(
        static_cast<std::size_t>(k), std::vector<modlin::u32>(static_cast<std::size_t>(k), 0));
    for (int j = 0; j < k; ++j) {
      Elem img = qm.act(q, basis.gens[static_cast<std::size_t>(j)]);
      const std::vector<int>& c = basis.coords[static_cast<std::size_t>(img)];
      for (int i = 0; i < k; ++i) {
        // entry is coords * d_j / d_i, an integer for any well-defined map
        unsigned long long num = static_cast<unsigned long long>(c[static_cast<std::size_t>(i)]) *
                                 static_cast<unsigned long long>(basis.orders[static_cast<std::size_t>(j)]);
        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<modlin::u32>(
            (num / static_cast<unsigned long long>(basis.orders[static_cast<std::size_t>(i)])) % m);
      }
    }
    return a;
  }
};

}  // namespace detail

// One cohomology group H^degree = (cocycles)/(coboundaries) in normalized
// cochains, with enumerable classes and canonical representatives.
class CohomologyGroup {
 public:
  CohomologyGroup() = default;

  int degree() const { return d_->degree; }
  const QModule& module() const { return d_->qm; }
  unsigned long long cocycle_count() const { return d_->zcount; }
  unsigned long long coboundary_count() const { return d_->bcount; }
  unsigned long long order() const { return d_->zcount / d_->bcount; }
  int num_classes() const { return static_cast<int>(d_->rep_cochains.size()); }

  // canonical cocycle representatives; index 0 is the zero class
  const std::vector<std::vector<Elem>>& reps() const { return d_->rep_cochains; }

  bool is_cocycle(const std::vector<Elem>& c) const {
    return d_->degree == 1 ? is_cocycle1(d_->qm, c) : is_cocycle2(d_->qm, c);
  }

  std::vector<Elem> reduce(const std::vector<Elem>& cocycle, bool check = true) const {
    modlin::Row row = to_row(cocycle, check);
    d_->bspan.reduce_in_place(row);
    return from_row(row);
  }

  int class_of(const std::vector<Elem>& cocycle, bool check = true) const {
    modlin::Row row = to_row(cocycle, check);
    d_->bspan.reduce_in_place(row);
    auto it = d_->id_of.find(row);
    if (it == d_->id_of.end())
      throw Error("internal error: reduced cocycle missing from the class table");
    return it->second;
  }

  // every cocycle, zero first, in a fixed deterministic order
  std::vector<std::vector<Elem>> all_cocycles(unsigned long long cap) const {
    std::vector<std::vector<Elem>> out;
    for (const modlin::Row& r : d_->zspan.enumerate(cap)) out.push_back(from_row(r));
    return out;
  }

  // the class group as a concrete abelian group; element i is class i
  Group group_view() const {
    const int n = num_classes();
    std::vector<Elem> flat(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        modlin::Row s = d_->rep_rows[static_cast<std::size_t>(i)];
        const modlin::Row& t = d_->rep_rows[static_cast<std::size_t>(j)];
        for (std::size_t c = 0; c < s.size(); ++c)
          s[c] = static_cast<modlin::u32>((s[c] + t[c]) % d_->mc.m);
        d_->bspan.reduce_in_place(s);
        flat[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(j)] = d_->id_of.at(s);
      }
    return Group::from_flat(n, std::move(flat),
                            "H^" + std::to_string(d_->degree));
  }

  // cyclic factor orders of the class group, descending; empty when trivial
  std::vector<int> invariants() const {
    std::vector<int> inv = module_basis(group_view()).orders;
    return inv;
  }

 private:
  struct Impl {
    QModule qm;
    int degree = 1;
    detail::ModuleCoords mc;
    int ncols = 0;
    modlin::HowellForm zspan, bspan;
    std::vector<modlin::Row> rep_rows;               // reduced, sorted
    std::vector<std::vector<Elem>> rep_cochains;
    std::map<modlin::Row, int> id_of;
    unsigned long long zcount = 1, bcount = 1;
  };
  std::shared_ptr<const Impl> d_;

  std::size_t slot1(Elem q) const {
    return static_cast<std::size_t>(q - 1) * static_cast<std::size_t>(d_->mc.k);
  }
  std::size_t slot2(Elem q, Elem r) const {
    const int nq = d_->qm.base.order();
    return (static_cast<std::size_t>(q - 1) * static_cast<std::size_t>(nq - 1) +
            static_cast<std::size_t>(r - 1)) *
           static_cast<std::size_t>(d_->mc.k);
  }

  modlin::Row to_row(const std::vector<Elem>& c, bool check) const {
    const QModule& qm = d_->qm;
    if (check) {
      bool ok = d_->degree == 1 ? is_cocycle1(qm, c) : is_cocycle2(qm, c);
      if (!ok)
        throw NotACocycle("degree-" + std::to_string(d_->degree) +
                          " cochain fails the cocycle or normalization conditions");
    }
    const int nq = qm.base.order();
    modlin::Row row(static_cast<std::size_t>(d_->ncols), 0);
    if (d_->degree == 1) {
      for (Elem q = 1; q < nq; ++q) d_->mc.put(row, slot1(q), c[static_cast<std::size_t>(q)]);
    } else {
      for (Elem q = 1; q < nq; ++q)
        for (Elem r = 1; r < nq; ++r) d_->mc.put(row, slot2(q, r), c2_at(c, nq, q, r));
    }
    return row;
  }

  std::vector<Elem> from_row(const modlin::Row& row) const {
    const QModule& qm = d_->qm;
    const int nq = qm.base.order();
    if (d_->degree == 1) {
      Cochain1 s(static_cast<std::size_t>(nq), 0);
      for (Elem q = 1; q < nq; ++q) s[static_cast<std::size_t>(q)] = d_->mc.get(row, slot1(q));
      return s;
    }
    Cochain2 f(static_cast<std::size_t>(nq) * static_cast<std::size_t>(nq), 0);
    for (Elem q = 1; q < nq; ++q)
      for (Elem r = 1; r < nq; ++r) c2_at(f, nq, q, r) = d_->mc.get(row, slot2(q, r));
    return f;
  }

  friend CohomologyGroup cohomology_group(const QModule& qm, int degree, const Caps& caps);
};

// Every degree-1 cocycle of the group's module.  Small cochain spaces are
// scanned exhaustively (an independent cross-check of the linear engine);
// larger ones are spanned from the engine's basis, validating each element.
// Throws SearchCapExceeded only when the cocycle group itself is too large.
inline std::vector<Cochain1> degree1_cocycles(const CohomologyGroup& one,
                                              const Caps& caps = default_caps()) {
  if (one.degree() != 1)
    throw UnsupportedSpec("degree1_cocycles needs a degree-1 cohomology group");
  const QModule& qm = one.module();
  double space = 1;
  bool small = true;
  for (int i = 1; i < qm.base.order(); ++i) {
    space *= qm.coeff.order();
    if (space > static_cast<double>(caps.cochain_cap)) {
      small = false;
      break;
    }
  }
  if (small) return enumerate_cocycles1(qm, caps);
  std::vector<Cochain1> out =
      one.all_cocycles(static_cast<unsigned long long>(caps.cochain_cap));
  for (const Cochain1& s : out)
    if (!is_cocycle1(qm, s))
      throw Error("internal error: spanned degree-1 cochain is not a cocycle");
  return out;
}

inline CohomologyGroup cohomology_group(const QModule& qm, int degree,
                                        const Caps& caps = default_caps()) {
  if (degree != 1 && degree != 2)
    throw UnsupportedSpec("cohomology is implemented in degrees 1 and 2 only");
  auto impl = std::make_shared<CohomologyGroup::Impl>();
  impl->qm = qm;
  impl->degree = degree;
  impl->mc = detail::ModuleCoords::of(qm.coeff);
  const detail::ModuleCoords& mc = impl->mc;
  const int nq = qm.base.order();
  const int k = mc.k;
  const modlin::u32 m = mc.m;
  const std::size_t tuples = degree == 1 ? static_cast<std::size_t>(nq - 1)
                                         : static_cast<std::size_t>(nq - 1) *
                                               static_cast<std::size_t>(nq - 1);
  impl->ncols = static_cast<int>(tuples * static_cast<std::size_t>(k));
  const int N = impl->ncols;

  CohomologyGroup out;
  if (N == 0 || m == 1) {  // trivial module or trivial base: everything is zero
    impl->zspan = modlin::howell({}, N, m);
    impl->bspan = impl->zspan;
    impl->rep_rows = {modlin::Row(static_cast<std::size_t>(N), 0)};
    impl->id_of[impl->rep_rows[0]] = 0;
    impl->rep_cochains = {degree == 1 ? zero_cochain1(qm) : zero_cochain2(qm)};
    out.d_ = std::move(impl);
    return out;
  }

  auto slot1 = [&](Elem q) { return static_cast<std::size_t>(q - 1) * static_cast<std::size_t>(k); };
  auto slot2 = [&](Elem q, Elem r) {
    return (static_cast<std::size_t>(q - 1) * static_cast<std::size_t>(nq - 1) +
            static_cast<std::size_t>(r - 1)) *
           static_cast<std::size_t>(k);
  };

  // cocycle constraints
  const std::size_t crows = (degree == 1 ? static_cast<std::size_t>(nq - 1) * static_cast<std::size_t>(nq - 1)
                                         : static_cast<std::size_t>(nq - 1) *
                                               static_cast<std::size_t>(nq - 1) *
                                               static_cast<std::size_t>(nq - 1)) *
                            static_cast<std::size_t>(k);
  if (crows * static_cast<std::size_t>(N) > 256u * 1024u * 1024u)
    throw SearchCapExceeded("cocycle constraint system exceeds the supported size");
  std::vector<modlin::Row> constraints;
  constraints.reserve(crows + (mc.plain() ? 0 : static_cast<std::size_t>(N)));

  std::vector<std::vector<std::vector<modlin::u32>>> amat(static_cast<std::size_t>(nq));
  for (Elem q = 1; q < nq; ++q) amat[static_cast<std::size_t>(q)] = mc.scaled_matrix(qm, q);

  if (degree == 1) {
    // (d s)(q, r) = q.s(r) - s(qr) + s(q)
    for (Elem q = 1; q < nq; ++q)
      for (Elem r = 1; r < nq; ++r) {
        const Elem qr = qm.base.op(q, r);
        for (int i = 0; i < k; ++i) {
          modlin::Row row(static_cast<std::size_t>(N), 0);
          const auto& a = amat[static_cast<std::size_t>(q)];
          for (int j = 0; j < k; ++j)
            row[slot1(r) + static_cast<std::size_t>(j)] = static_cast<modlin::u32>(
                (row[slot1(r) + static_cast<std::size_t>(j)] +
                 a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) %
                m);
          if (qr != 0)
            row[slot1(qr) + static_cast<std::size_t>(i)] = static_cast<modlin::u32>(
                (row[slot1(qr) + static_cast<std::size_t>(i)] + (m - 1)) % m);
          row[slot1(q) + static_cast<std::size_t>(i)] = static_cast<modlin::u32>(
              (row[slot1(q) + static_cast<std::size_t>(i)] + 1) % m);
          constraints.push_back(std::move(row));
        }
      }
  } else {
    // (d f)(q, r, s) = q.f(r, s) - f(qr, s) + f(q, rs) - f(q, r)
    for (Elem q = 1; q < nq; ++q)
      for (Elem r = 1; r < nq; ++r)
        for (Elem s = 1; s < nq; ++s) {
          const Elem qr = qm.base.op(q, r), rs = qm.base.op(r, s);
          for (int i = 0; i < k; ++i) {
            modlin::Row row(static_cast<std::size_t>(N), 0);
            const auto& a = amat[static_cast<std::size_t>(q)];
            for (int j = 0; j < k; ++j)
              row[slot2(r, s) + static_cast<std::size_t>(j)] = static_cast<modlin::u32>(
                  (row[slot2(r, s) + static_cast<std::size_t>(j)] +
                   a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) %
                  m);
            if (qr != 0)
              row[slot2(qr, s) + static_cast<std::size_t>(i)] = static_cast<modlin::u32>(
                  (row[slot2(qr, s) + static_cast<std::size_t>(i)] + (m - 1)) % m);
            if (rs != 0)
              row[slot2(q, rs) + static_cast<std::size_t>(i)] = static_cast<modlin::u32>(
                  (row[slot2(q, rs) + static_cast<std::size_t>(i)] + 1) % m);
            row[slot2(q, r) + static_cast<std::size_t>(i)] = static_cast<modlin::u32>(
                (row[slot2(q, r) + static_cast<std::size_t>(i)] + (m - 1)) % m);
            constraints.push_back(std::move(row));
          }
        }
  }
  // keep solutions inside the coefficient sublattice when coordinates have
  // different orders: coordinate j must be a multiple of its scale
  if (!mc.plain())
    for (int j = 0; j < N; ++j) {
      modlin::u32 s = mc.scale[static_cast<std::size_t>(j % k)];
      if (s == 1) continue;
      modlin::Row row(static_cast<std::size_t>(N), 0);
      row[static_cast<std::size_t>(j)] = m / s;
      constraints.push_back(std::move(row));
    }

  std::vector<modlin::Row> zgens = modlin::kernel(constraints, N, m, caps);
  constraints.clear();
  constraints.shrink_to_fit();

  // coboundary generators: differentials of the basis cochains
  std::vector<modlin::Row> bgens;
  if (degree == 1) {
    for (int i = 0; i < k; ++i) {
      Cochain1 s = d0(qm, mc.basis.gens[static_cast<std::size_t>(i)]);
      modlin::Row row(static_cast<std::size_t>(N), 0);
      for (Elem q = 1; q < nq; ++q) mc.put(row, slot1(q), s[static_cast<std::size_t>(q)]);
      bgens.push_back(std::move(row));
    }
  } else {
    for (Elem t = 1; t < nq; ++t)
      for (int i = 0; i < k; ++i) {
        Cochain1 s(static_cast<std::size_t>(nq), 0);
        s[static_cast<std::size_t>(t)] = mc.basis.gens[static_cast<std::size_t>(i)];
        Cochain2 f = d1(qm, s);
        modlin::Row row(static_cast<std::size_t>(N), 0);
        for (Elem q = 1; q < nq; ++q)
          for (Elem r = 1; r < nq; ++r) mc.put(row, slot2(q, r), c2_at(f, nq, q, r));
        bgens.push_back(std::move(row));
      }
  }

  impl->zspan = modlin::howell(std::move(zgens), N, m);
  impl->bspan = modlin::howell(std::move(bgens), N, m);
  impl->zcount = impl->zspan.span_size();
  impl->bcount = impl->bspan.span_size();
  if (impl->zcount % impl->bcount != 0)
    throw Error("internal error: coboundary count does not divide cocycle count");
  const unsigned long long h = impl->zcount / impl->bcount;
  if (h > static_cast<unsigned long long>(caps.cochain_cap))
    throw SearchCapExceeded("cohomology class count " + std::to_string(h) +
                            " exceeds the cochain cap");

  // classes: close the reduced cocycle generators under reduced addition
  std::map<modlin::Row, int> seen;
  std::vector<modlin::Row> reps;
  modlin::Row zero(static_cast<std::size_t>(N), 0);
  seen[zero] = 0;
  reps.push_back(zero);
  for (std::size_t head = 0; head < reps.size(); ++head)
    for (const modlin::Row& g : impl->zspan.rows) {
      modlin::Row w = reps[head];
      for (std::size_t c = 0; c < w.size(); ++c)
        w[c] = static_cast<modlin::u32>((w[c] + g[c]) % m);
      impl->bspan.reduce_in_place(w);
      if (seen.emplace(w, 0).second) reps.push_back(std::move(w));
    }
  if (reps.size() != h)
    throw Error("internal error: class closure found " + std::to_string(reps.size()) +
                " classes, expected " + std::to_string(h));
  std::sort(reps.begin(), reps.end());
  impl->rep_rows = std::move(reps);
  impl->id_of.clear();
  for (std::size_t i = 0; i < impl->rep_rows.size(); ++i)
    impl->id_of[impl->rep_rows[i]] = static_cast<int>(i);

  out.d_ = impl;
  for (const modlin::Row& r : impl->rep_rows) impl->rep_cochains.push_back(out.from_row(r));
  return out;
}

// Invariant coefficient elements (degree-0 cohomology).
inline std::vector<Elem> invariant_elements(const QModule& qm) {
  std::vector<Elem> inv;
  for (Elem x = 0; x < qm.coeff.order(); ++x) {
    bool fixed = true;
    for (int q = 0; q < qm.base.order() && fixed; ++q) fixed = qm.act(q, x) == x;
    if (fixed) inv.push_back(x);
  }
  return inv;
}

struct Cohomology {
  QModule mod;
  std::vector<Elem> h0_elements;
  CohomologyGroup one;
  CohomologyGroup two;

  unsigned long long h0_order() const { return h0_elements.size(); }
};

inline Cohomology cohomology(const QModule& qm, const Caps& caps = default_caps()) {
  Cohomology c{qm, invariant_elements(qm), cohomology_group(qm, 1, caps),
               cohomology_group(qm, 2, caps)};
  return c;
}

// ---------------------------------------------------------------------------
// The torsor of factor systems over a fixed outer action
// ---------------------------------------------------------------------------

// The center of a factor system's fiber as a module over the base: inner
// automorphisms act trivially on the center, so the fiber action descends to
// a genuine action there no matter which section produced the factor system.
struct CenterModule {
  QModule mod;
  std::vector<Elem> to_fiber;   // center element -> fiber element
  std::vector<int> from_fiber;  // fiber element -> center element, or -1
};

inline CenterModule center_module(const FactorSystem& fs) {
  SubgroupView z = subgroup_to_group(center(fs.fiber), "Z(" + fs.fiber.label() + ")");
  CenterModule zm;
  zm.to_fiber = z.to_parent;
  zm.from_fiber = z.from_parent;
  const int nz = z.group.order();
  std::vector<Perm> action;
  for (int q = 0; q < fs.base.order(); ++q) {
    Perm p(static_cast<std::size_t>(nz));
    for (int a = 0; a < nz; ++a) {
      Elem img = fs.phi[static_cast<std::size_t>(q)]
                       [static_cast<std::size_t>(zm.to_fiber[static_cast<std::size_t>(a)])];
      int idx = zm.from_fiber[static_cast<std::size_t>(img)];
      if (idx < 0) throw Error("internal error: fiber action does not preserve the center");
      p[static_cast<std::size_t>(a)] = idx;
    }
    action.push_back(std::move(p));
  }
  zm.mod = make_module(fs.base, z.group, std::move(action));
  return zm;
}

// Twist the factor set by a central 2-cochain; the action is unchanged.
inline FactorSystem torsor_act(const FactorSystem& fs, const CenterModule& zm,
                               const Cochain2& zeta) {
  const int nq = fs.base.order();
  if (!is_normalized2(zm.mod, zeta))
    throw NotACocycle("central twist must be a normalized degree-2 cochain");
  FactorSystem r = fs;
  for (int q = 0; q < nq; ++q)
    for (int p = 0; p < nq; ++p)
      r.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] =
          fs.fiber.op(fs.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)],
                      zm.to_fiber[static_cast<std::size_t>(c2_at(zeta, nq, q, p))]);
  return r;
}

// Rewrite `other` by a change of section so that its fiber action agrees with
// `reference` pointwise.  Possible exactly when the two actions agree in the
// outer automorphism group of the fiber elementwise.
inline FactorSystem align_action(const FactorSystem& reference, const FactorSystem& other) {
  if (!(reference.fiber == other.fiber) || !(reference.base == other.base))
    throw NotSameFiber("factor systems live over different fiber or base groups");
  const int nq = reference.base.order();
  const int nh = reference.fiber.order();
  std::vector<Elem> t(static_cast<std::size_t>(nq), -1);
  for (int q = 0; q < nq; ++q) {
    Perm target = detail::perm_compose(
        reference.phi[static_cast<std::size_t>(q)],
        detail::perm_inverse(other.phi[static_cast<std::size_t>(q)]));
    for (Elem h = 0; h < nh; ++h) {
      bool match = true;
      for (Elem x = 0; x < nh && match; ++x)
        match = reference.fiber.conj(h, x) == target[static_cast<std::size_t>(x)];
      if (match) {
        t[static_cast<std::size_t>(q)] = h;
        break;
      }
    }
    if (t[static_cast<std::size_t>(q)] < 0)
      throw NotSameFiber("fiber actions differ by a non-inner automorphism at base element " +
                         std::to_string(q));
  }
  FactorSystem r = other;
  r.phi = reference.phi;
  for (int q = 0; q < nq; ++q)
    for (int p = 0; p < nq; ++p) {
      Elem v = reference.fiber.op(
          t[static_cast<std::size_t>(q)],
          reference.fiber.op(
              other.phi[static_cast<std::size_t>(q)][static_cast<std::size_t>(t[static_cast<std::size_t>(p)])],
              reference.fiber.op(
                  other.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)],
                  reference.fiber.inv(t[static_cast<std::size_t>(reference.base.op(q, p))]))));
      r.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] = v;
    }
  return r;
}

// The central 2-cocycle by which `other` differs from `reference` after
// aligning their actions: torsor_act(reference, zm, result) is equivalent to
// `other` via a connecting map that fixes fiber and base pointwise.
inline Cochain2 torsor_diff(const FactorSystem& reference, const FactorSystem& other,
                            const CenterModule& zm) {
  FactorSystem aligned = align_action(reference, other);
  const int nq = reference.base.order();
  Cochain2 zeta = zero_cochain2(zm.mod);
  for (int q = 0; q < nq; ++q)
    for (int p = 0; p < nq; ++p) {
      Elem d = reference.fiber.op(
          aligned.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)],
          reference.fiber.inv(
              reference.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)]));
      int idx = zm.from_fiber[static_cast<std::size_t>(d)];
      if (idx < 0)
        throw NotSameFiber("factor sets differ by a non-central fiber element at base pair (" +
                           std::to_string(q) + ", " + std::to_string(p) + ")");
      c2_at(zeta, nq, q, p) = idx;
    }
  return zeta;
}

// Transport of a central cochain along a pair of automorphisms:
// (alpha, beta) . zeta at (q, r) is alpha^{-1}(zeta(beta q, beta r)).
inline Cochain2 induced_cochain2(const CenterModule& zm, const Perm& alpha_on_fiber,
                                 const Perm& beta_on_base, const Cochain2& zeta) {
  const int nq = zm.mod.base.order();
  Perm ainv = detail::perm_inverse(alpha_on_fiber);
  Cochain2 out = zero_cochain2(zm.mod);
  for (Elem q = 0; q < nq; ++q)
    for (Elem r = 0; r < nq; ++r) {
      Elem src = c2_at(zeta, nq, beta_on_base[static_cast<std::size_t>(q)],
                       beta_on_base[static_cast<std::size_t>(r)]);
      Elem fib = ainv[static_cast<std::size_t>(zm.to_fiber[static_cast<std::size_t>(src)])];
      int idx = zm.from_fiber[static_cast<std::size_t>(fib)];
      if (idx < 0)
        throw NotRelative("fiber map does not preserve the center");
      c2_at(out, nq, q, r) = idx;
    }
  return out;
}

inline Cochain1 induced_cochain1(const CenterModule& zm, const Perm& alpha_on_fiber,
                                 const Perm& beta_on_base, const Cochain1& sigma) {
  const int nq = zm.mod.base.order();
  Perm ainv = detail::perm_inverse(alpha_on_fiber);
  Cochain1 out = zero_cochain1(zm.mod);
  for (Elem q = 0; q < nq; ++q) {
    Elem src = sigma[static_cast<std::size_t>(beta_on_base[static_cast<std::size_t>(q)])];
    Elem fib = ainv[static_cast<std::size_t>(zm.to_fiber[static_cast<std::size_t>(src)])];
    int idx = zm.from_fiber[static_cast<std::size_t>(fib)];
    if (idx < 0) throw NotRelative("fiber map does not preserve the center");
    out[static_cast<std::size_t>(q)] = idx;
  }
  return out;
}

// All extension classes sharing one outer action, as a torsor over the
// degree-2 cohomology of the center module.
struct ExtensionClasses {
  FactorSystem base_system;
  CenterModule zm;
  Cohomology coh;
  std::vector<FactorSystem> systems;  // index = cohomology class id

  int class_of(const FactorSystem& other) const {
    return coh.two.class_of(torsor_diff(base_system, other, zm), false);
  }
};

inline ExtensionClasses extension_classes(const FactorSystem& fs,
                                          const Caps& caps = default_caps()) {
  ExtensionClasses ec{fs, center_module(fs), {}, {}};
  ec.coh = cohomology(ec.zm.mod, caps);
  for (const std::vector<Elem>& rep : ec.coh.two.reps())
    ec.systems.push_back(torsor_act(fs, ec.zm, rep));
  return ec;
}

}  // namespace extauto
