#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "extauto/group.hpp"

namespace extauto {

namespace detail {

// Greedy minimal generating sequence of a group together with a closure chain:
// elems lists <g_0..g_d> in discovery order, and every non-identity entry
// records how it is reached as (earlier element) * (generator), so a candidate
// image assignment for the generators extends to the whole level determinately.
struct GenChain {
  std::vector<Elem> gens;
  std::vector<Elem> elems;      // discovery order, elems[0] = 0
  std::vector<int> parent;      // position of the left factor
  std::vector<int> genidx;      // generator used as the right factor
  std::vector<int> level_size;  // |<g_0..g_d>| after each generator

  static GenChain build(const Group& g) {
    GenChain c;
    c.elems.push_back(0);
    c.parent.push_back(-1);
    c.genidx.push_back(-1);
    std::vector<char> in(static_cast<std::size_t>(g.order()), 0);
    in[0] = 1;
    for (int cand = 1; cand < g.order(); ++cand) {
      if (in[static_cast<std::size_t>(cand)]) continue;
      int gi = static_cast<int>(c.gens.size());
      c.gens.push_back(cand);
      // close under right-multiplication by all generators so far
      std::size_t scan = 0;
      // seed: cand = elems[0] * cand
      c.elems.push_back(cand);
      c.parent.push_back(0);
      c.genidx.push_back(gi);
      in[static_cast<std::size_t>(cand)] = 1;
      while (scan < c.elems.size()) {
        Elem x = c.elems[scan];
        for (int j = 0; j <= gi; ++j) {
          Elem y = g.op(x, c.gens[static_cast<std::size_t>(j)]);
          if (!in[static_cast<std::size_t>(y)]) {
            in[static_cast<std::size_t>(y)] = 1;
            c.elems.push_back(y);
            c.parent.push_back(static_cast<int>(scan));
            c.genidx.push_back(j);
          }
        }
        ++scan;
      }
      c.level_size.push_back(static_cast<int>(c.elems.size()));
      if (static_cast<int>(c.elems.size()) == g.order()) break;
    }
    if (c.level_size.empty()) c.level_size.push_back(1);  // trivial group
    return c;
  }
};

// (element order, centralizer size): preserved by isomorphisms, used to filter
// candidate generator images.
inline std::vector<std::pair<int, int>> elem_invariants(const Group& g) {
  std::vector<std::pair<int, int>> inv(static_cast<std::size_t>(g.order()));
  for (int a = 0; a < g.order(); ++a) {
    int cz = 0;
    for (int b = 0; b < g.order(); ++b)
      if (g.op(a, b) == g.op(b, a)) ++cz;
    inv[static_cast<std::size_t>(a)] = {g.elem_order(a), cz};
  }
  return inv;
}

// Backtracking over generator images of `src` inside `dst`.  Visits every
// bijective homomorphism; calls sink(images_by_element) for each; stops early
// if sink returns false.  Candidates are tried in ascending element order, so
// the first solution is the lexicographically least generator-image tuple.
template <typename Sink>
void search_isomorphisms(const Group& src, const Group& dst, const GenChain& chain,
                         const Sink& sink) {
  if (src.order() != dst.order()) return;
  const int n = src.order();
  if (n == 1) {
    std::vector<Elem> im{0};
    sink(im);
    return;
  }
  auto inv_src = elem_invariants(src);
  auto inv_dst = elem_invariants(dst);
  const int depth_total = static_cast<int>(chain.gens.size());
  std::vector<std::vector<Elem>> cand(static_cast<std::size_t>(depth_total));
  for (int d = 0; d < depth_total; ++d)
    for (int x = 1; x < n; ++x)
      if (inv_dst[static_cast<std::size_t>(x)] ==
          inv_src[static_cast<std::size_t>(chain.gens[static_cast<std::size_t>(d)])])
        cand[static_cast<std::size_t>(d)].push_back(x);

  std::vector<Elem> img(chain.elems.size());  // image by chain position
  img[0] = 0;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  used[0] = 1;
  std::vector<Elem> img_by_elem(static_cast<std::size_t>(n));
  bool stop = false;

  // positions of chain elements, for product checks
  std::vector<int> pos(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < chain.elems.size(); ++i)
    pos[static_cast<std::size_t>(chain.elems[i])] = static_cast<int>(i);

  auto rec = [&](auto&& self, int d) -> void {
    if (stop) return;
    if (d == depth_total) {
      for (std::size_t i = 0; i < chain.elems.size(); ++i)
        img_by_elem[static_cast<std::size_t>(chain.elems[i])] = img[i];
      if (!sink(img_by_elem)) stop = true;
      return;
    }
    int lo = d == 0 ? 1 : chain.level_size[static_cast<std::size_t>(d - 1)];
    int hi = chain.level_size[static_cast<std::size_t>(d)];
    for (Elem c : cand[static_cast<std::size_t>(d)]) {
      if (used[static_cast<std::size_t>(c)]) continue;
      // extend images over the new slice; genidx in the slice is always <= d,
      // and only position `lo` introduces the new generator directly
      bool ok = true;
      int filled = lo;
      for (int i = lo; i < hi; ++i) {
        Elem left = img[static_cast<std::size_t>(chain.parent[static_cast<std::size_t>(i)])];
        Elem gen_img = chain.genidx[static_cast<std::size_t>(i)] == d
                           ? (chain.parent[static_cast<std::size_t>(i)] == 0 && i == lo
                                  ? c
                                  : img[static_cast<std::size_t>(lo)])
                           : img[static_cast<std::size_t>(
                                 pos[static_cast<std::size_t>(chain.gens[static_cast<std::size_t>(
                                     chain.genidx[static_cast<std::size_t>(i)])])])];
        Elem y = dst.op(left, gen_img);
        if (used[static_cast<std::size_t>(y)]) {
          ok = false;
          break;
        }
        used[static_cast<std::size_t>(y)] = 1;
        img[static_cast<std::size_t>(i)] = y;
        filled = i + 1;
      }
      if (ok) {
        // homomorphism check on pairs touching the new slice
        for (int i = 0; i < hi && ok; ++i) {
          int jstart = i < lo ? lo : 0;
          for (int j = jstart; j < hi; ++j) {
            Elem prod = src.op(chain.elems[static_cast<std::size_t>(i)],
                               chain.elems[static_cast<std::size_t>(j)]);
            if (dst.op(img[static_cast<std::size_t>(i)], img[static_cast<std::size_t>(j)]) !=
                img[static_cast<std::size_t>(pos[static_cast<std::size_t>(prod)])]) {
              ok = false;
              break;
            }
          }
        }
        if (ok) self(self, d + 1);
      }
      for (int i = lo; i < filled; ++i) used[static_cast<std::size_t>(img[static_cast<std::size_t>(i)])] = 0;
      if (stop) return;
    }
  };
  rec(rec, 0);
}

}  // namespace detail

// Deterministic isomorphism test: quick invariant rejects, then backtracking
// over generator images (ascending, so the returned witness is canonical).
inline std::optional<Hom> is_isomorphic(const Group& a, const Group& b,
                                        const Caps& caps = default_caps()) {
  if (a.order() != b.order()) return std::nullopt;
  if (a.order() > caps.search_cap)
    throw SearchCapExceeded("isomorphism search on order " + std::to_string(a.order()) +
                            " > cap " + std::to_string(caps.search_cap));
  if (a.is_abelian() != b.is_abelian()) return std::nullopt;
  if (a.order_profile() != b.order_profile()) return std::nullopt;
  if (center(a).order() != center(b).order()) return std::nullopt;
  {
    auto sa = derived_series(a), sb = derived_series(b);
    if (sa.size() != sb.size()) return std::nullopt;
    for (std::size_t i = 0; i < sa.size(); ++i)
      if (sa[i].order() != sb[i].order()) return std::nullopt;
  }
  auto chain = detail::GenChain::build(a);
  std::optional<Hom> found;
  detail::search_isomorphisms(a, b, chain, [&](const std::vector<Elem>& im) {
    found = Hom{a, b, im};
    return false;  // first (lexicographically least) witness only
  });
  return found;
}

}  // namespace extauto
