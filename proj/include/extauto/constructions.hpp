#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "extauto/group.hpp"

namespace extauto {

// --- standard groups -------------------------------------------------------
// Element indexing conventions (stable, relied on by tests and the corpus):
//   cyclic(n):        i is the i-th power of the generator; i+j mod n.
//   dihedral(2n):     0..n-1 are rotations r^i, n..2n-1 are reflections r^i s.
//   quaternion(2^m):  0..2^(m-1)-1 are powers a^i, the rest are a^i b
//                     (a of order 2^(m-1), b^2 = a^(2^(m-2)), b a b^-1 = a^-1).
//   elem_abelian(p,k): vectors of F_p^k, index = big-endian base-p digits.
//   symmetric(n):     permutations of {0..n-1} in lexicographic order.
//   alternating(n):   even permutations in lexicographic order.
//   direct_product:   pair (x, y), index = x * |B| + y.
//   semidirect:       pair (n, k), index = n * |K| + k, (n,k)(n',k') =
//                     (n * act_k(n'), k k').
//   metacyclic(7,3):  a^i b^j with a^7 = b^3 = 1, b a b^-1 = a^2; index = 3i + j.

inline Group cyclic(int n, const Caps& caps = default_caps()) {
  if (n < 1) throw UnsupportedSpec("cyclic order must be >= 1");
  if (n > caps.order_cap) throw OrderCapExceeded("cyclic(" + std::to_string(n) + ")");
  std::vector<Elem> flat(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) flat[static_cast<std::size_t>(i) * n + j] = (i + j) % n;
  return Group::from_flat(n, std::move(flat), "cyclic(" + std::to_string(n) + ")");
}

inline Group dihedral(int order, const Caps& caps = default_caps()) {
  if (order < 2 || order % 2 != 0) throw UnsupportedSpec("dihedral order must be even and >= 2");
  if (order > caps.order_cap) throw OrderCapExceeded("dihedral(" + std::to_string(order) + ")");
  const int n = order / 2;
  auto idx = [&](int rot, int ref) { return ref ? n + rot : rot; };
  std::vector<Elem> flat(static_cast<std::size_t>(order) * order);
  auto set = [&](int a, int b, int v) { flat[static_cast<std::size_t>(a) * order + b] = v; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      set(idx(i, 0), idx(j, 0), idx((i + j) % n, 0));          // r^i r^j
      set(idx(i, 0), idx(j, 1), idx((i + j) % n, 1));          // r^i (r^j s)
      set(idx(i, 1), idx(j, 0), idx(((i - j) % n + n) % n, 1));  // (r^i s) r^j
      set(idx(i, 1), idx(j, 1), idx(((i - j) % n + n) % n, 0));  // (r^i s)(r^j s)
    }
  return Group::from_flat(order, std::move(flat), "dihedral(" + std::to_string(order) + ")");
}

inline Group quaternion(int order, const Caps& caps = default_caps()) {
  if (order != 8 && order != 16) throw UnsupportedSpec("quaternion supports orders 8 and 16");
  if (order > caps.order_cap) throw OrderCapExceeded("quaternion(" + std::to_string(order) + ")");
  const int n = order / 2;      // order of a
  const int q = n / 2;          // b^2 = a^q
  auto idx = [&](int i, int j) { return j ? n + i : i; };
  std::vector<Elem> flat(static_cast<std::size_t>(order) * order);
  auto set = [&](int a, int b, int v) { flat[static_cast<std::size_t>(a) * order + b] = v; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      set(idx(i, 0), idx(j, 0), idx((i + j) % n, 0));                  // a^i a^j
      set(idx(i, 0), idx(j, 1), idx((i + j) % n, 1));                  // a^i (a^j b)
      set(idx(i, 1), idx(j, 0), idx(((i - j) % n + n) % n, 1));        // (a^i b) a^j
      set(idx(i, 1), idx(j, 1), idx(((i - j + q) % n + n) % n, 0));    // (a^i b)(a^j b)
    }
  return Group::from_flat(order, std::move(flat), "quaternion(" + std::to_string(order) + ")");
}

inline Group elem_abelian(int p, int k, const Caps& caps = default_caps()) {
  if (p < 2 || k < 1) throw UnsupportedSpec("elem_abelian needs p >= 2, k >= 1");
  long long n = 1;
  for (int i = 0; i < k; ++i) {
    n *= p;
    if (n > caps.order_cap)
      throw OrderCapExceeded("elem_abelian(" + std::to_string(p) + "," + std::to_string(k) + ")");
  }
  const int N = static_cast<int>(n);
  std::vector<Elem> flat(static_cast<std::size_t>(N) * N);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      int x = a, y = b, s = 0, pw = 1;
      for (int d = 0; d < k; ++d) {
        s += ((x % p) + (y % p)) % p * pw;
        x /= p;
        y /= p;
        pw *= p;
      }
      flat[static_cast<std::size_t>(a) * N + b] = s;
    }
  return Group::from_flat(N, std::move(flat),
                          "elem_abelian(" + std::to_string(p) + "," + std::to_string(k) + ")");
}

namespace detail {

inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;  // lexicographic order; identity first
}

inline bool is_even_permutation(const std::vector<int>& p) {
  int inv = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0;
}

inline Group permutation_group(const std::vector<std::vector<int>>& perms, std::string label) {
  const int n = static_cast<int>(perms.size());
  std::vector<std::vector<int>> sorted = perms;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Elem> flat(static_cast<std::size_t>(n) * n);
  auto index_of = [&](const std::vector<int>& p) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), p);
    return static_cast<int>(it - sorted.begin());
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      // product = apply b first, then a
      std::vector<int> prod(sorted[static_cast<std::size_t>(a)].size());
      for (std::size_t x = 0; x < prod.size(); ++x)
        prod[x] = sorted[static_cast<std::size_t>(a)]
                        [static_cast<std::size_t>(sorted[static_cast<std::size_t>(b)][x])];
      flat[static_cast<std::size_t>(a) * n + b] = index_of(prod);
    }
  return Group::from_flat(n, std::move(flat), std::move(label));
}

}  // namespace detail

inline Group symmetric(int n, const Caps& caps = default_caps()) {
  if (n < 1 || n > 5) throw UnsupportedSpec("symmetric supports n in 1..5");
  auto perms = detail::all_permutations(n);
  if (static_cast<int>(perms.size()) > caps.order_cap)
    throw OrderCapExceeded("symmetric(" + std::to_string(n) + ")");
  return detail::permutation_group(perms, "symmetric(" + std::to_string(n) + ")");
}

inline Group alternating(int n, const Caps& caps = default_caps()) {
  if (n < 1 || n > 5) throw UnsupportedSpec("alternating supports n in 1..5");
  auto perms = detail::all_permutations(n);
  std::vector<std::vector<int>> even;
  for (auto& p : perms)
    if (detail::is_even_permutation(p)) even.push_back(p);
  if (static_cast<int>(even.size()) > caps.order_cap)
    throw OrderCapExceeded("alternating(" + std::to_string(n) + ")");
  return detail::permutation_group(even, "alternating(" + std::to_string(n) + ")");
}

inline Group direct_product(const Group& a, const Group& b, const Caps& caps = default_caps()) {
  long long n = static_cast<long long>(a.order()) * b.order();
  if (n > caps.order_cap)
    throw OrderCapExceeded("direct_product of orders " + std::to_string(a.order()) + "," +
                           std::to_string(b.order()));
  const int N = static_cast<int>(n), nb = b.order();
  std::vector<Elem> flat(static_cast<std::size_t>(N) * N);
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) {
      int xa = x / nb, xb = x % nb, ya = y / nb, yb = y % nb;
      flat[static_cast<std::size_t>(x) * N + y] = a.op(xa, ya) * nb + b.op(xb, yb);
    }
  std::string label = "direct_product(" + a.label() + "," + b.label() + ")";
  return Group::from_flat(N, std::move(flat), std::move(label));
}

// N x| K with K acting through `action` (per K-element, an automorphism of N
// as an image array).  (n,k)(n',k') = (n * action[k](n'), k k').
inline Group semidirect(const Group& n_grp, const Group& k_grp,
                        const std::vector<std::vector<Elem>>& action,
                        const Caps& caps = default_caps()) {
  if (static_cast<int>(action.size()) != k_grp.order())
    throw UnsupportedSpec("semidirect action must assign one automorphism per K element");
  for (const auto& a : action) make_automorphism(n_grp, a);  // validates
  // action must be a homomorphism K -> Aut(N)
  for (int k1 = 0; k1 < k_grp.order(); ++k1)
    for (int k2 = 0; k2 < k_grp.order(); ++k2) {
      const auto& a1 = action[static_cast<std::size_t>(k1)];
      const auto& a2 = action[static_cast<std::size_t>(k2)];
      const auto& a12 = action[static_cast<std::size_t>(k_grp.op(k1, k2))];
      for (int x = 0; x < n_grp.order(); ++x)
        if (a1[static_cast<std::size_t>(a2[static_cast<std::size_t>(x)])] !=
            a12[static_cast<std::size_t>(x)])
          throw UnsupportedSpec("semidirect action is not a homomorphism into Aut(N)");
    }
  long long n = static_cast<long long>(n_grp.order()) * k_grp.order();
  if (n > caps.order_cap) throw OrderCapExceeded("semidirect product too large");
  const int N = static_cast<int>(n), nk = k_grp.order();
  std::vector<Elem> flat(static_cast<std::size_t>(N) * N);
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) {
      int xn = x / nk, xk = x % nk, yn = y / nk, yk = y % nk;
      int acted = action[static_cast<std::size_t>(xk)][static_cast<std::size_t>(yn)];
      flat[static_cast<std::size_t>(x) * N + y] = n_grp.op(xn, acted) * nk + k_grp.op(xk, yk);
    }
  std::string label = "semidirect(" + n_grp.label() + "," + k_grp.label() + ")";
  return Group::from_flat(N, std::move(flat), std::move(label));
}

// Order-21 metacyclic group: a^7 = b^3 = 1, b a b^-1 = a^2; index of a^i b^j is 3i + j.
inline Group metacyclic(int m, int k, const Caps& caps = default_caps()) {
  if (m != 7 || k != 3) throw UnsupportedSpec("metacyclic supports (7,3)");
  (void)caps;
  const int N = 21;
  auto idx = [](int i, int j) { return 3 * ((i % 7 + 7) % 7) + ((j % 3 + 3) % 3); };
  // b^j a b^-j = a^(2^j)
  int twopow[3] = {1, 2, 4};
  std::vector<Elem> flat(static_cast<std::size_t>(N) * N);
  for (int i1 = 0; i1 < 7; ++i1)
    for (int j1 = 0; j1 < 3; ++j1)
      for (int i2 = 0; i2 < 7; ++i2)
        for (int j2 = 0; j2 < 3; ++j2)
          // a^i1 b^j1 a^i2 b^j2 = a^(i1 + i2*2^j1) b^(j1+j2)
          flat[static_cast<std::size_t>(idx(i1, j1)) * N + idx(i2, j2)] =
              idx(i1 + i2 * twopow[j1], j1 + j2);
  return Group::from_flat(N, std::move(flat), "metacyclic(7,3)");
}

// --- descriptor strings ----------------------------------------------------
// standard_group parses "cyclic(6)", "direct_product(dihedral(8),cyclic(2))", etc.

namespace detail {

struct SpecParser {
  const std::string& s;
  std::size_t pos = 0;
  const Caps& caps;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    return s.substr(start, pos - start);
  }
  int number() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw UnsupportedSpec("expected a number at position " + std::to_string(pos) + " in '" + s + "'");
    return std::stoi(s.substr(start, pos - start));
  }

  Group parse() {
    std::string name = ident();
    if (name.empty()) throw UnsupportedSpec("empty descriptor in '" + s + "'");
    if (!eat('(')) throw UnsupportedSpec("expected '(' after '" + name + "'");
    Group g;
    if (name == "cyclic") {
      g = cyclic(number(), caps);
    } else if (name == "dihedral") {
      g = dihedral(number(), caps);
    } else if (name == "quaternion") {
      g = quaternion(number(), caps);
    } else if (name == "elem_abelian") {
      int p = number();
      if (!eat(',')) throw UnsupportedSpec("elem_abelian expects two arguments");
      g = elem_abelian(p, number(), caps);
    } else if (name == "symmetric") {
      g = symmetric(number(), caps);
    } else if (name == "alternating") {
      g = alternating(number(), caps);
    } else if (name == "metacyclic") {
      int m = number();
      if (!eat(',')) throw UnsupportedSpec("metacyclic expects two arguments");
      g = metacyclic(m, number(), caps);
    } else if (name == "direct_product") {
      Group a = parse();
      if (!eat(',')) throw UnsupportedSpec("direct_product expects two arguments");
      Group b = parse();
      g = direct_product(a, b, caps);
    } else {
      throw UnsupportedSpec("unknown constructor '" + name + "'" +
                            (name == "semidirect" ? " (semidirect is API-only)" : ""));
    }
    if (!eat(')')) throw UnsupportedSpec("expected ')' in '" + s + "'");
    return g;
  }
};

}  // namespace detail

inline Group standard_group(const std::string& descriptor, const Caps& caps = default_caps()) {
  detail::SpecParser p{descriptor, 0, caps};
  Group g = p.parse();
  p.skip_ws();
  if (p.pos != descriptor.size())
    throw UnsupportedSpec("trailing characters in '" + descriptor + "'");
  return g;
}

}  // namespace extauto
