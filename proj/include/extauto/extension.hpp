#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "extauto/aut.hpp"
#include "extauto/caps.hpp"
#include "extauto/errors.hpp"
#include "extauto/group.hpp"
#include "extauto/iso.hpp"

namespace extauto {

// ---------------------------------------------------------------------------
// Factor systems
// ---------------------------------------------------------------------------
//
// A group extension of `base` by `fiber`, together with a normalized section,
// is encoded by a pair (phi, f):
//   phi[q] : the automorphism of the fiber given by conjugation with the
//            section representative of q,
//   f[q][q']: the fiber element  u(q) u(q') u(qq')^{-1}.
// They satisfy
//   (A) phi[q] . phi[q'] = (conjugation by f[q][q']) . phi[qq']
//   (B) phi[q](f[q'][q'']) * f[q][q'q''] = f[q][q'] * f[qq'][q'']
// and the normalization phi[1] = id, f[1][q] = f[q][1] = 1.
struct FactorSystem {
  Group fiber;
  Group base;
  std::vector<Perm> phi;               // indexed by base element
  std::vector<std::vector<Elem>> f;    // indexed by pairs of base elements

  // Conjugation of the fiber by f[q][q'], as a permutation.
  Perm conj_by(Elem n) const {
    Perm p(static_cast<std::size_t>(fiber.order()));
    for (Elem x = 0; x < fiber.order(); ++x)
      p[static_cast<std::size_t>(x)] = fiber.conj(n, x);
    return p;
  }

  void validate() const {
    const int nh = fiber.order(), nq = base.order();
    if (static_cast<int>(phi.size()) != nq || static_cast<int>(f.size()) != nq)
      throw InvalidFactorSystem("factor system: phi/f must be indexed by the base group");
    for (int q = 0; q < nq; ++q) {
      if (static_cast<int>(f[static_cast<std::size_t>(q)].size()) != nq)
        throw InvalidFactorSystem("factor system: f must be a square table over the base");
      const Perm& p = phi[static_cast<std::size_t>(q)];
      if (static_cast<int>(p.size()) != nh)
        throw InvalidFactorSystem("factor system: phi entries must permute the fiber");
      std::vector<char> seen(static_cast<std::size_t>(nh), 0);
      for (Elem x = 0; x < nh; ++x) {
        Elem y = p[static_cast<std::size_t>(x)];
        if (y < 0 || y >= nh || seen[static_cast<std::size_t>(y)])
          throw InvalidFactorSystem("factor system: phi[" + std::to_string(q) +
                                    "] is not a permutation of the fiber");
        seen[static_cast<std::size_t>(y)] = 1;
      }
      for (Elem x = 0; x < nh; ++x)
        for (Elem y = 0; y < nh; ++y)
          if (p[static_cast<std::size_t>(fiber.op(x, y))] !=
              fiber.op(p[static_cast<std::size_t>(x)], p[static_cast<std::size_t>(y)]))
            throw InvalidFactorSystem("factor system: phi[" + std::to_string(q) +
                                      "] is not an automorphism of the fiber");
    }
    for (Elem x = 0; x < nh; ++x)
      if (phi[0][static_cast<std::size_t>(x)] != x)
        throw InvalidFactorSystem("factor system: phi at the identity must be trivial");
    for (int q = 0; q < nq; ++q)
      if (f[0][static_cast<std::size_t>(q)] != 0 || f[static_cast<std::size_t>(q)][0] != 0)
        throw InvalidFactorSystem("factor system: f must be normalized");
    for (int q = 0; q < nq; ++q)
      for (int r = 0; r < nq; ++r) {
        // (A): phi[q] . phi[r] = conj(f[q][r]) . phi[qr]
        const Perm& pq = phi[static_cast<std::size_t>(q)];
        const Perm& pr = phi[static_cast<std::size_t>(r)];
        const Perm& pqr = phi[static_cast<std::size_t>(base.op(q, r))];
        Elem c = f[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)];
        for (Elem x = 0; x < nh; ++x) {
          Elem lhs = pq[static_cast<std::size_t>(pr[static_cast<std::size_t>(x)])];
          Elem rhs = fiber.conj(c, pqr[static_cast<std::size_t>(x)]);
          if (lhs != rhs)
            throw InvalidFactorSystem(
                "factor system: composition condition fails at base pair (" +
                std::to_string(q) + ", " + std::to_string(r) + ")");
        }
      }
    for (int q = 0; q < nq; ++q)
      for (int r = 0; r < nq; ++r)
        for (int s = 0; s < nq; ++s) {
          // (B): phi[q](f[r][s]) * f[q][rs] = f[q][r] * f[qr][s]
          Elem lhs = fiber.op(
              phi[static_cast<std::size_t>(q)]
                 [static_cast<std::size_t>(f[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)])],
              f[static_cast<std::size_t>(q)][static_cast<std::size_t>(base.op(r, s))]);
          Elem rhs = fiber.op(f[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)],
                              f[static_cast<std::size_t>(base.op(q, r))][static_cast<std::size_t>(s)]);
          if (lhs != rhs)
            throw InvalidFactorSystem(
                "factor system: twisted cocycle condition fails at base triple (" +
                std::to_string(q) + ", " + std::to_string(r) + ", " + std::to_string(s) + ")");
        }
  }

  bool operator==(const FactorSystem& o) const {
    return fiber == o.fiber && base == o.base && phi == o.phi && f == o.f;
  }
};

// Factor system of a semidirect product: a genuine action, trivial f.
inline FactorSystem split_factor_system(const Group& fiber, const Group& base,
                                        std::vector<Perm> action) {
  FactorSystem fs{fiber, base, std::move(action),
                  std::vector<std::vector<Elem>>(
                      static_cast<std::size_t>(base.order()),
                      std::vector<Elem>(static_cast<std::size_t>(base.order()), 0))};
  fs.validate();
  return fs;
}

// ---------------------------------------------------------------------------
// Extensions of concrete groups
// ---------------------------------------------------------------------------

// A finite group together with a designated normal subgroup, its quotient,
// the canonical section (minimal coset representatives) and coordinates
// total element = (fiber part) * (section representative).
class Extension {
 public:
  Extension(Group total, Subgroup sub, std::string label)
      : total_(std::move(total)),
        sub_(std::move(sub)),
        view_(subgroup_to_group(sub_)),
        quot_(quotient(total_, sub_)),
        label_(std::move(label)) {}

  const Group& total() const { return total_; }
  const Subgroup& sub() const { return sub_; }
  const Group& fiber() const { return view_.group; }
  const Group& base() const { return quot_.group; }
  const Hom& proj() const { return quot_.proj; }
  const std::string& label() const { return label_; }

  // canonical section: minimal representative of each coset (identity at 1)
  Elem section_rep(Elem q) const { return quot_.reps[static_cast<std::size_t>(q)]; }
  const std::vector<Elem>& section() const { return quot_.reps; }

  Elem embed(Elem fiber_elem) const { return view_.to_parent[static_cast<std::size_t>(fiber_elem)]; }
  // abstract fiber index of a total element, or -1 if outside the subgroup
  Elem fiber_of(Elem total_elem) const { return view_.from_parent[static_cast<std::size_t>(total_elem)]; }

  // total element x = h * u(q)  ->  (h, q) with h in fiber coordinates
  std::pair<Elem, Elem> coordinates(Elem x) const {
    Elem q = quot_.proj.apply(x);
    Elem h_in_total = total_.op(x, total_.inv(section_rep(q)));
    return {fiber_of(h_in_total), q};
  }
  Elem from_coordinates(Elem h, Elem q) const {
    return total_.op(embed(h), section_rep(q));
  }

 private:
  Group total_;
  Subgroup sub_;
  SubgroupView view_;
  QuotientResult quot_;
  std::string label_;
};

inline Extension make_extension(const Group& total, const std::vector<Elem>& sub_members,
                                std::string label = "") {
  Subgroup s = Subgroup::of(total, sub_members);
  if (!is_normal(total, s)) throw NotNormal("designated subgroup is not normal");
  if (label.empty()) label = total.label();
  return Extension(total, std::move(s), std::move(label));
}

// Factor system of an extension with respect to a normalized section
// (section[q] must project to q, section[1] = 1).
inline FactorSystem factor_system(const Extension& e, const std::vector<Elem>& section) {
  const Group& g = e.total();
  const Group& h = e.fiber();
  const Group& q = e.base();
  if (static_cast<int>(section.size()) != q.order())
    throw Error("section must assign one total element to every base element");
  if (section[0] != 0) throw Error("section must be normalized: identity over the identity");
  for (Elem r = 0; r < q.order(); ++r)
    if (e.proj().apply(section[static_cast<std::size_t>(r)]) != r)
      throw Error("section entry " + std::to_string(r) + " lies over the wrong coset");

  FactorSystem fs;
  fs.fiber = h;
  fs.base = q;
  fs.phi.resize(static_cast<std::size_t>(q.order()));
  fs.f.assign(static_cast<std::size_t>(q.order()),
              std::vector<Elem>(static_cast<std::size_t>(q.order()), 0));
  for (Elem r = 0; r < q.order(); ++r) {
    Perm p(static_cast<std::size_t>(h.order()));
    Elem u = section[static_cast<std::size_t>(r)];
    for (Elem x = 0; x < h.order(); ++x)
      p[static_cast<std::size_t>(x)] = e.fiber_of(g.conj(u, e.embed(x)));
    fs.phi[static_cast<std::size_t>(r)] = std::move(p);
  }
  for (Elem r = 0; r < q.order(); ++r)
    for (Elem s = 0; s < q.order(); ++s) {
      Elem u = g.op(section[static_cast<std::size_t>(r)], section[static_cast<std::size_t>(s)]);
      Elem w = g.op(u, g.inv(section[static_cast<std::size_t>(q.op(r, s))]));
      fs.f[static_cast<std::size_t>(r)][static_cast<std::size_t>(s)] = e.fiber_of(w);
    }
  return fs;
}

inline FactorSystem factor_system(const Extension& e) { return factor_system(e, e.section()); }

// Build the extension on fiber x base with the multiplication
//   (n, q) (n', q') = (n * phi[q](n') * f[q][q'],  q q'),
// elements indexed as n * |base| + q.  Recovering the factor system of the
// result with its canonical section returns the input exactly.
inline Extension realize(const FactorSystem& fs, std::string label = "",
                         const Caps& caps = default_caps()) {
  fs.validate();
  const int nh = fs.fiber.order(), nq = fs.base.order(), n = nh * nq;
  if (n > caps.order_cap)
    throw OrderCapExceeded("realized extension of order " + std::to_string(n) +
                           " exceeds the cap " + std::to_string(caps.order_cap));
  auto idx = [nq](Elem a, Elem b) { return a * nq + b; };
  std::vector<Elem> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (Elem a = 0; a < nh; ++a)
    for (Elem q = 0; q < nq; ++q)
      for (Elem b = 0; b < nh; ++b)
        for (Elem r = 0; r < nq; ++r) {
          Elem m = fs.fiber.op(fs.fiber.op(a, fs.phi[static_cast<std::size_t>(q)][static_cast<std::size_t>(b)]),
                               fs.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)]);
          table[static_cast<std::size_t>(idx(a, q)) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(idx(b, r))] = idx(m, fs.base.op(q, r));
        }
  if (label.empty())
    label = "ext(" + fs.fiber.label() + ", " + fs.base.label() + ")";
  Group total = Group::from_flat(n, std::move(table), label);
  std::vector<Elem> members;
  members.reserve(static_cast<std::size_t>(nh));
  for (Elem a = 0; a < nh; ++a) members.push_back(idx(a, 0));
  return make_extension(total, members, std::move(label));
}

// ---------------------------------------------------------------------------
// Outer action of the base on the fiber
// ---------------------------------------------------------------------------

// The conjugation classes [phi[q]] in Out(fiber); independent of the section,
// and a homomorphism base -> Out(fiber).
struct OuterAction {
  AutGroup aut_fiber;
  OutGroup out_fiber;
  std::vector<int> cls;  // base element -> class id in out_fiber
};

inline OuterAction outer_action(const FactorSystem& fs, const Caps& caps = default_caps()) {
  AutGroup a = aut_group(fs.fiber, caps);
  OutGroup o = out_group(a);
  std::vector<int> cls(static_cast<std::size_t>(fs.base.order()));
  for (Elem q = 0; q < fs.base.order(); ++q)
    cls[static_cast<std::size_t>(q)] = o.class_of(a.index_of(fs.phi[static_cast<std::size_t>(q)]));
  // sanity: a homomorphism into the outer class group
  const Group& ov = o.group_view();
  for (Elem q = 0; q < fs.base.order(); ++q)
    for (Elem r = 0; r < fs.base.order(); ++r)
      if (ov.op(cls[static_cast<std::size_t>(q)], cls[static_cast<std::size_t>(r)]) !=
          cls[static_cast<std::size_t>(fs.base.op(q, r))])
        throw InvalidFactorSystem("outer classes of phi do not form a homomorphism");
  return OuterAction{std::move(a), std::move(o), std::move(cls)};
}

inline OuterAction outer_action(const Extension& e, const Caps& caps = default_caps()) {
  return outer_action(factor_system(e), caps);
}

// ---------------------------------------------------------------------------
// Pullback and pushout
// ---------------------------------------------------------------------------

// Pullback along a homomorphism into the base:  (f, phi) -> (f(b x b), phi b).
inline FactorSystem pullback(const FactorSystem& fs, const Hom& beta) {
  if (!(beta.codomain == fs.base))
    throw Error("pullback: homomorphism must land in the base of the factor system");
  const int nq = beta.domain.order();
  FactorSystem out;
  out.fiber = fs.fiber;
  out.base = beta.domain;
  out.phi.resize(static_cast<std::size_t>(nq));
  out.f.assign(static_cast<std::size_t>(nq), std::vector<Elem>(static_cast<std::size_t>(nq), 0));
  for (Elem q = 0; q < nq; ++q) {
    out.phi[static_cast<std::size_t>(q)] = fs.phi[static_cast<std::size_t>(beta.apply(q))];
    for (Elem r = 0; r < nq; ++r)
      out.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)] =
          fs.f[static_cast<std::size_t>(beta.apply(q))][static_cast<std::size_t>(beta.apply(r))];
  }
  return out;
}

// Pushout along an isomorphism of fibers:  (f, phi) -> (a f, a phi a^{-1}).
inline FactorSystem pushout(const FactorSystem& fs, const Hom& alpha) {
  if (!(alpha.domain == fs.fiber))
    throw Error("pushout: isomorphism must start at the fiber of the factor system");
  if (!alpha.is_bijective()) throw Error("pushout: fiber map must be an isomorphism");
  const int nh = fs.fiber.order(), nq = fs.base.order();
  std::vector<Elem> ainv(static_cast<std::size_t>(nh));
  for (Elem x = 0; x < nh; ++x) ainv[static_cast<std::size_t>(alpha.apply(x))] = x;
  FactorSystem out;
  out.fiber = alpha.codomain;
  out.base = fs.base;
  out.phi.resize(static_cast<std::size_t>(nq));
  out.f.assign(static_cast<std::size_t>(nq), std::vector<Elem>(static_cast<std::size_t>(nq), 0));
  for (Elem q = 0; q < nq; ++q) {
    Perm p(static_cast<std::size_t>(nh));
    for (Elem x = 0; x < nh; ++x)
      p[static_cast<std::size_t>(x)] = alpha.apply(
          fs.phi[static_cast<std::size_t>(q)][static_cast<std::size_t>(ainv[static_cast<std::size_t>(x)])]);
    out.phi[static_cast<std::size_t>(q)] = std::move(p);
    for (Elem r = 0; r < nq; ++r)
      out.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)] =
          alpha.apply(fs.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Connecting maps between extensions
// ---------------------------------------------------------------------------

namespace detail {

// Value propagation along a generator chain of the base group: the value at
// a product (earlier element) * (generator) is computed from the two factor
// values by `step(parent_value, gen_value, parent_elem, gen_elem)`.
template <typename Step>
std::vector<Elem> propagate_over_chain(const GenChain& chain, int base_order,
                                       const std::vector<Elem>& gen_values, Step step) {
  std::vector<Elem> val(static_cast<std::size_t>(base_order), -1);
  val[0] = 0;
  for (std::size_t k = 1; k < chain.elems.size(); ++k) {
    Elem parent_elem = chain.elems[static_cast<std::size_t>(chain.parent[k])];
    int gi = chain.genidx[k];
    val[static_cast<std::size_t>(chain.elems[k])] =
        step(val[static_cast<std::size_t>(parent_elem)], gen_values[static_cast<std::size_t>(gi)],
             parent_elem, chain.gens[static_cast<std::size_t>(gi)]);
  }
  return val;
}

// Odometer over one candidate list per generator; yields tuples in
// lexicographic order (each list ascending).  visit returns true to stop.
template <typename Visit>
bool for_each_choice(const std::vector<std::vector<Elem>>& lists, Visit visit) {
  std::vector<std::size_t> pos(lists.size(), 0);
  std::vector<Elem> tuple(lists.size());
  for (;;) {
    for (std::size_t i = 0; i < lists.size(); ++i) tuple[i] = lists[i][pos[i]];
    if (visit(tuple)) return true;
    std::size_t i = lists.size();
    while (i > 0) {
      --i;
      if (++pos[i] < lists[i].size()) break;
      pos[i] = 0;
      if (i == 0) return false;
    }
    if (lists.empty()) return false;
  }
}

inline void check_fiber_iso(const Group& a, const Group& b, const Perm& m, const char* what) {
  if (static_cast<int>(m.size()) != a.order() || a.order() != b.order())
    throw Error(std::string(what) + ": size mismatch");
  std::vector<char> seen(m.size(), 0);
  for (Elem x = 0; x < a.order(); ++x) {
    Elem y = m[static_cast<std::size_t>(x)];
    if (y < 0 || y >= b.order() || seen[static_cast<std::size_t>(y)])
      throw Error(std::string(what) + ": not a bijection");
    seen[static_cast<std::size_t>(y)] = 1;
  }
  for (Elem x = 0; x < a.order(); ++x)
    for (Elem y = 0; y < a.order(); ++y)
      if (m[static_cast<std::size_t>(a.op(x, y))] !=
          b.op(m[static_cast<std::size_t>(x)], m[static_cast<std::size_t>(y)]))
        throw Error(std::string(what) + ": not a homomorphism");
}

}  // namespace detail

// Searches for a map s : base -> fiber(dst) making
//   (h, q) -> (alpha(h) * s(q), beta(q))
// an isomorphism of the realized extensions, where alpha is an isomorphism of
// the fibers and beta one of the bases.  The defining identity splits into
//   (C1)  s(qq') = alpha(f(q,q'))^{-1} * s(q) * phi'(beta q)(s(q')) * f'(beta q, beta q')
//   (C2)  conjugation by s(q)  =  alpha . phi(q) . alpha^{-1} . phi'(beta q)^{-1},
// so s is determined by its values on a generating set, each constrained by
// (C2) to one center coset; the search space is (center of dst fiber)^(number
// of generators), and every candidate is verified against (C1) and (C2) in
// full before being returned.
inline std::optional<std::vector<Elem>> find_connecting(const FactorSystem& src,
                                                        const FactorSystem& dst,
                                                        const Perm& alpha, const Perm& beta,
                                                        const Caps& caps = default_caps()) {
  detail::check_fiber_iso(src.fiber, dst.fiber, alpha, "connecting map: fiber map");
  detail::check_fiber_iso(src.base, dst.base, beta, "connecting map: base map");
  const Group& h2 = dst.fiber;
  const int nh = h2.order(), nq = src.base.order();

  std::vector<Elem> alpha_inv(static_cast<std::size_t>(nh));
  for (Elem x = 0; x < nh; ++x) alpha_inv[static_cast<std::size_t>(alpha[static_cast<std::size_t>(x)])] = x;

  // target conjugation (C2) for every base element, and its candidate fiber
  // elements; empty candidates anywhere means no connecting map exists
  std::vector<std::vector<Elem>> cands(static_cast<std::size_t>(nq));
  std::vector<std::vector<char>> is_cand(static_cast<std::size_t>(nq),
                                         std::vector<char>(static_cast<std::size_t>(nh), 0));
  {
    std::vector<Elem> phi2_inv(static_cast<std::size_t>(nh));
    Perm target(static_cast<std::size_t>(nh));
    for (Elem q = 0; q < nq; ++q) {
      const Perm& p1 = src.phi[static_cast<std::size_t>(q)];
      const Perm& p2 = dst.phi[static_cast<std::size_t>(beta[static_cast<std::size_t>(q)])];
      for (Elem x = 0; x < nh; ++x) phi2_inv[static_cast<std::size_t>(p2[static_cast<std::size_t>(x)])] = x;
      for (Elem x = 0; x < nh; ++x)
        target[static_cast<std::size_t>(x)] =
            alpha[static_cast<std::size_t>(p1[static_cast<std::size_t>(
                alpha_inv[static_cast<std::size_t>(phi2_inv[static_cast<std::size_t>(x)])])])];
      for (Elem z = 0; z < nh; ++z) {
        bool ok = true;
        for (Elem x = 0; x < nh && ok; ++x) ok = h2.conj(z, x) == target[static_cast<std::size_t>(x)];
        if (ok) {
          cands[static_cast<std::size_t>(q)].push_back(z);
          is_cand[static_cast<std::size_t>(q)][static_cast<std::size_t>(z)] = 1;
        }
      }
      if (cands[static_cast<std::size_t>(q)].empty()) return std::nullopt;
    }
  }

  detail::GenChain chain = detail::GenChain::build(src.base);
  std::int64_t space = 1;
  std::vector<std::vector<Elem>> gen_lists;
  for (Elem g : chain.gens) {
    gen_lists.push_back(cands[static_cast<std::size_t>(g)]);
    space *= static_cast<std::int64_t>(gen_lists.back().size());
    if (space > caps.sigma_cap)
      throw SearchCapExceeded("connecting-map search space exceeds the cap " +
                              std::to_string(caps.sigma_cap));
  }

  auto step = [&](Elem sv_parent, Elem sv_gen, Elem q, Elem r) {
    // (C1) with q' = r
    Elem bq = beta[static_cast<std::size_t>(q)], br = beta[static_cast<std::size_t>(r)];
    Elem t = h2.op(sv_parent, dst.phi[static_cast<std::size_t>(bq)][static_cast<std::size_t>(sv_gen)]);
    t = h2.op(t, dst.f[static_cast<std::size_t>(bq)][static_cast<std::size_t>(br)]);
    Elem af = alpha[static_cast<std::size_t>(
        src.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)])];
    return h2.op(h2.inv(af), t);
  };

  std::optional<std::vector<Elem>> found;
  detail::for_each_choice(gen_lists, [&](const std::vector<Elem>& tuple) {
    std::vector<Elem> s = detail::propagate_over_chain(chain, nq, tuple, step);
    for (Elem q = 0; q < nq; ++q)
      if (!is_cand[static_cast<std::size_t>(q)][static_cast<std::size_t>(s[static_cast<std::size_t>(q)])])
        return false;  // (C2) fails somewhere
    for (Elem q = 0; q < nq; ++q)
      for (Elem r = 0; r < nq; ++r)
        if (s[static_cast<std::size_t>(src.base.op(q, r))] !=
            step(s[static_cast<std::size_t>(q)], s[static_cast<std::size_t>(r)], q, r))
          return false;  // (C1) fails somewhere
    found = s;
    return true;
  });
  return found;
}

// Equivalence over the identity of fiber and base.
inline std::optional<std::vector<Elem>> are_equivalent(const FactorSystem& a,
                                                       const FactorSystem& b,
                                                       const Caps& caps = default_caps()) {
  if (!(a.fiber == b.fiber) || !(a.base == b.base))
    throw NotSameFiber("equivalence is defined over a common fiber and base");
  Perm id_h(static_cast<std::size_t>(a.fiber.order()));
  Perm id_q(static_cast<std::size_t>(a.base.order()));
  for (Elem x = 0; x < a.fiber.order(); ++x) id_h[static_cast<std::size_t>(x)] = x;
  for (Elem x = 0; x < a.base.order(); ++x) id_q[static_cast<std::size_t>(x)] = x;
  return find_connecting(a, b, id_h, id_q, caps);
}

// Builds the total-group isomorphism (h, q) -> (alpha(h) s(q), beta(q)) from
// connecting data, in the concrete coordinates of the two extensions.
inline Hom connecting_hom(const Extension& e1, const Extension& e2, const Perm& alpha,
                          const Perm& beta, const std::vector<Elem>& s) {
  std::vector<Elem> images(static_cast<std::size_t>(e1.total().order()));
  for (Elem x = 0; x < e1.total().order(); ++x) {
    auto [h, q] = e1.coordinates(x);
    Elem m = e2.fiber().op(alpha[static_cast<std::size_t>(h)], s[static_cast<std::size_t>(q)]);
    images[static_cast<std::size_t>(x)] = e2.from_coordinates(m, beta[static_cast<std::size_t>(q)]);
  }
  return Hom::checked(e1.total(), e2.total(), std::move(images));
}

inline std::optional<Hom> are_equivalent(const Extension& e1, const Extension& e2,
                                         const Caps& caps = default_caps()) {
  FactorSystem a = factor_system(e1), b = factor_system(e2);
  if (!(a.fiber == b.fiber) || !(a.base == b.base))
    throw NotSameFiber("equivalence is defined over a common fiber and base");
  auto s = are_equivalent(a, b, caps);
  if (!s) return std::nullopt;
  Perm id_h(static_cast<std::size_t>(a.fiber.order()));
  Perm id_q(static_cast<std::size_t>(a.base.order()));
  for (Elem x = 0; x < a.fiber.order(); ++x) id_h[static_cast<std::size_t>(x)] = x;
  for (Elem x = 0; x < a.base.order(); ++x) id_q[static_cast<std::size_t>(x)] = x;
  return connecting_hom(e1, e2, id_h, id_q, *s);
}

// Does the pair (alpha on the fiber, beta on the base) lift to an
// automorphism of the total group preserving the subgroup?  Returns the lift.
inline std::optional<Hom> extend_pair(const Extension& e, const Perm& alpha, const Perm& beta,
                                      const Caps& caps = default_caps()) {
  FactorSystem fs = factor_system(e);
  auto s = find_connecting(fs, fs, alpha, beta, caps);
  if (!s) return std::nullopt;
  return connecting_hom(e, e, alpha, beta, *s);
}

// ---------------------------------------------------------------------------
// Splittings
// ---------------------------------------------------------------------------

// A splitting is a homomorphic section; in coordinates it is q -> (t(q), q)
// with   t(qq') = t(q) * phi(q)(t(q')) * f(q,q').   t is free on a generating
// set of the base and verified in full.
inline std::optional<std::vector<Elem>> find_splitting(const FactorSystem& fs,
                                                       const Caps& caps = default_caps()) {
  const Group& h = fs.fiber;
  const int nq = fs.base.order();
  detail::GenChain chain = detail::GenChain::build(fs.base);
  std::int64_t space = 1;
  std::vector<Elem> all(static_cast<std::size_t>(h.order()));
  for (Elem x = 0; x < h.order(); ++x) all[static_cast<std::size_t>(x)] = x;
  std::vector<std::vector<Elem>> gen_lists(chain.gens.size(), all);
  for (std::size_t i = 0; i < gen_lists.size(); ++i) {
    space *= static_cast<std::int64_t>(h.order());
    if (space > caps.sigma_cap)
      throw SearchCapExceeded("splitting search space exceeds the cap " +
                              std::to_string(caps.sigma_cap));
  }

  auto step = [&](Elem t_parent, Elem t_gen, Elem q, Elem r) {
    Elem v = h.op(t_parent, fs.phi[static_cast<std::size_t>(q)][static_cast<std::size_t>(t_gen)]);
    return h.op(v, fs.f[static_cast<std::size_t>(q)][static_cast<std::size_t>(r)]);
  };

  std::optional<std::vector<Elem>> found;
  detail::for_each_choice(gen_lists, [&](const std::vector<Elem>& tuple) {
    std::vector<Elem> t = detail::propagate_over_chain(chain, nq, tuple, step);
    for (Elem q = 0; q < nq; ++q)
      for (Elem r = 0; r < nq; ++r)
        if (t[static_cast<std::size_t>(fs.base.op(q, r))] !=
            step(t[static_cast<std::size_t>(q)], t[static_cast<std::size_t>(r)], q, r))
          return false;
    found = t;
    return true;
  });
  return found;
}

inline bool is_split(const FactorSystem& fs, const Caps& caps = default_caps()) {
  return find_splitting(fs, caps).has_value();
}

// Splitting of a concrete extension, as a homomorphic section base -> total.
inline std::optional<Hom> find_splitting(const Extension& e, const Caps& caps = default_caps()) {
  FactorSystem fs = factor_system(e);
  auto t = find_splitting(fs, caps);
  if (!t) return std::nullopt;
  std::vector<Elem> images(static_cast<std::size_t>(fs.base.order()));
  for (Elem q = 0; q < fs.base.order(); ++q)
    images[static_cast<std::size_t>(q)] = e.from_coordinates((*t)[static_cast<std::size_t>(q)], q);
  return Hom::checked(e.base(), e.total(), std::move(images));
}

inline bool is_split(const Extension& e, const Caps& caps = default_caps()) {
  return find_splitting(e, caps).has_value();
}

// ---------------------------------------------------------------------------
// Induced fiber/base pair of a subgroup-preserving automorphism
// ---------------------------------------------------------------------------

inline std::pair<Perm, Perm> induced_pair(const Extension& e, const Perm& gamma) {
  Perm on_fiber(static_cast<std::size_t>(e.fiber().order()));
  for (Elem x = 0; x < e.fiber().order(); ++x) {
    Elem img = gamma[static_cast<std::size_t>(e.embed(x))];
    Elem ab = e.fiber_of(img);
    if (ab < 0)
      throw NotRelative("automorphism does not preserve the designated subgroup");
    on_fiber[static_cast<std::size_t>(x)] = ab;
  }
  Perm on_base(static_cast<std::size_t>(e.base().order()));
  for (Elem q = 0; q < e.base().order(); ++q)
    on_base[static_cast<std::size_t>(q)] =
        e.proj().apply(gamma[static_cast<std::size_t>(e.section_rep(q))]);
  return {std::move(on_fiber), std::move(on_base)};
}

}  // namespace extauto
