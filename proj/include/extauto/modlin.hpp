#pragma once

// Linear algebra over Z/m for small m: canonical (Howell) echelon forms of
// row spans, kernels of constraint systems, and span enumeration.  The Howell
// form extends Gaussian elimination to composite moduli: leading entries are
// divisors of m, annihilator multiples of every pivot row are folded back in,
// and the resulting form supports canonical coset representatives (reduce a
// vector at each pivot column into [0, lead)), which is what class
// representatives of quotient groups are built from.

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "extauto/caps.hpp"
#include "extauto/errors.hpp"

namespace extauto {
namespace modlin {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using Row = std::vector<u32>;

inline u32 gcd_u32(u32 a, u32 b) {
  while (b) {
    u32 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// modular inverse for gcd(a, m) = 1
inline u32 modinv(u32 a, u32 m) {
  long long t = 0, nt = 1, r = m, nr = a % m;
  while (nr != 0) {
    long long q = r / nr;
    long long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += m;
  return static_cast<u32>(t);
}

// a unit u mod m with u * a ≡ gcd(a, m)  (mod m)
inline u32 unit_for(u32 a, u32 m) {
  u32 d = gcd_u32(a % m == 0 ? m : a % m, m);
  u32 a1 = (a / d) % (m / d == 0 ? 1 : m / d);
  u32 m1 = m / d;
  u32 u = (m1 <= 1) ? 1 : modinv(a1 % m1, m1);
  while (gcd_u32(u % m == 0 ? m : u % m, m) != 1) u += m1;
  return u % m;
}

struct HowellForm {
  int ncols = 0;
  u32 modulus = 1;
  std::vector<Row> rows;       // sorted by pivot column, canonical
  std::vector<int> pivot_col;  // per row
  std::vector<u32> pivot_lead; // leading entry of each row; divides modulus

  // number of elements of the spanned subgroup of (Z/m)^ncols
  unsigned long long span_size() const {
    unsigned long long s = 1;
    for (u32 d : pivot_lead) {
      unsigned long long factor = modulus / d;
      if (s > ~0ULL / factor) throw Error("span size overflows a 64-bit counter");
      s *= factor;
    }
    return s;
  }

  // canonical representative of v + span; entries of the result lie in
  // [0, lead) at every pivot column
  void reduce_in_place(Row& v) const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      int c = pivot_col[r];
      u32 q = v[static_cast<std::size_t>(c)] / pivot_lead[r];
      if (!q) continue;
      u32 coef = modulus - (q % modulus);
      const Row& p = rows[r];
      for (int j = c; j < ncols; ++j)
        v[static_cast<std::size_t>(j)] =
            static_cast<u32>((v[static_cast<std::size_t>(j)] +
                              static_cast<u64>(coef) * p[static_cast<std::size_t>(j)]) %
                             modulus);
    }
  }

  bool contains(Row v) const {
    reduce_in_place(v);
    for (u32 x : v)
      if (x) return false;
    return true;
  }

  // all span elements, beginning with zero, in a fixed deterministic order
  std::vector<Row> enumerate(unsigned long long cap) const {
    if (span_size() > cap)
      throw SearchCapExceeded("span of size " + std::to_string(span_size()) +
                              " exceeds the enumeration cap " + std::to_string(cap));
    std::vector<Row> out;
    Row acc(static_cast<std::size_t>(ncols), 0);
    enumerate_rec(0, acc, out);
    return out;
  }

 private:
  void enumerate_rec(std::size_t r, Row& acc, std::vector<Row>& out) const {
    if (r == rows.size()) {
      out.push_back(acc);
      return;
    }
    u32 reps = modulus / pivot_lead[r];
    Row saved = acc;
    for (u32 t = 0; t < reps; ++t) {
      enumerate_rec(r + 1, acc, out);
      if (t + 1 < reps)
        for (int j = 0; j < ncols; ++j)
          acc[static_cast<std::size_t>(j)] =
              static_cast<u32>((acc[static_cast<std::size_t>(j)] +
                                rows[r][static_cast<std::size_t>(j)]) %
                               modulus);
    }
    acc = saved;
  }
};

namespace detail {

inline void axpy_mod(Row& r, u32 coef, const Row& p, int from, u32 m) {
  for (int j = from; j < static_cast<int>(r.size()); ++j)
    r[static_cast<std::size_t>(j)] =
        static_cast<u32>((r[static_cast<std::size_t>(j)] +
                          static_cast<u64>(coef) * p[static_cast<std::size_t>(j)]) %
                         m);
}

inline void scale_mod(Row& r, u32 coef, u32 m) {
  for (auto& x : r) x = static_cast<u32>((static_cast<u64>(x) * coef) % m);
}

}  // namespace detail

// Canonical Howell form of the row span of `gens` over Z/m.
inline HowellForm howell(std::vector<Row> gens, int ncols, u32 m) {
  HowellForm h;
  h.ncols = ncols;
  h.modulus = m;
  if (m == 1 || ncols == 0) return h;  // only the zero vector exists

  std::vector<Row> piv(static_cast<std::size_t>(ncols));
  std::vector<u32> lead(static_cast<std::size_t>(ncols), 0);
  std::vector<char> has(static_cast<std::size_t>(ncols), 0);

  std::vector<Row> queue = std::move(gens);
  while (!queue.empty()) {
    Row row = std::move(queue.back());
    queue.pop_back();
    for (auto& x : row) x %= m;
    int c = 0;
    while (c < ncols) {
      if (row[static_cast<std::size_t>(c)] == 0) {
        ++c;
        continue;
      }
      u32 a = row[static_cast<std::size_t>(c)];
      if (!has[static_cast<std::size_t>(c)]) {
        detail::scale_mod(row, unit_for(a, m), m);  // leading entry becomes gcd(a, m)
        u32 d = row[static_cast<std::size_t>(c)];
        piv[static_cast<std::size_t>(c)] = row;
        lead[static_cast<std::size_t>(c)] = d;
        has[static_cast<std::size_t>(c)] = 1;
        if (d > 1) {  // annihilator multiple keeps the form span-closed
          Row ann = piv[static_cast<std::size_t>(c)];
          detail::scale_mod(ann, m / d, m);
          queue.push_back(std::move(ann));
        }
        break;
      }
      u32 d = lead[static_cast<std::size_t>(c)];
      if (a % d == 0) {
        // a/d lies in [1, m-1] because 0 < d <= a < m
        detail::axpy_mod(row, m - a / d, piv[static_cast<std::size_t>(c)], c, m);
        continue;
      }
      // gcd transform: replace the pivot by x*piv + y*row with leading gcd
      long long x, y;
      long long dp = d, av = a;
      {  // extended gcd
        long long r0 = dp, r1 = av, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
        while (r1) {
          long long q = r0 / r1, t;
          t = r0 - q * r1; r0 = r1; r1 = t;
          t = x0 - q * x1; x0 = x1; x1 = t;
          t = y0 - q * y1; y0 = y1; y1 = t;
        }
        x = x0; y = y0;
      }
      u32 g = gcd_u32(d, a);
      u32 xm = static_cast<u32>(((x % m) + m) % m), ym = static_cast<u32>(((y % m) + m) % m);
      Row newpiv(static_cast<std::size_t>(ncols), 0);
      for (int j = c; j < ncols; ++j)
        newpiv[static_cast<std::size_t>(j)] = static_cast<u32>(
            (static_cast<u64>(xm) * piv[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] +
             static_cast<u64>(ym) * row[static_cast<std::size_t>(j)]) %
            m);
      Row newrow(static_cast<std::size_t>(ncols), 0);
      u32 c1 = (d / g) % m, c2 = (m - (a / g) % m) % m;
      for (int j = c; j < ncols; ++j)
        newrow[static_cast<std::size_t>(j)] = static_cast<u32>(
            (static_cast<u64>(c1) * row[static_cast<std::size_t>(j)] +
             static_cast<u64>(c2) * piv[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)]) %
            m);
      piv[static_cast<std::size_t>(c)] = std::move(newpiv);
      lead[static_cast<std::size_t>(c)] = g;
      if (g > 1) {
        Row ann = piv[static_cast<std::size_t>(c)];
        detail::scale_mod(ann, m / g, m);
        queue.push_back(std::move(ann));
      }
      row = std::move(newrow);
    }
  }

  // canonical cleanup: reduce entries of earlier rows at every pivot column
  for (int c = 0; c < ncols; ++c) {
    if (!has[static_cast<std::size_t>(c)]) continue;
    for (int c2 = 0; c2 < c; ++c2) {
      if (!has[static_cast<std::size_t>(c2)]) continue;
      Row& upper = piv[static_cast<std::size_t>(c2)];
      u32 q = upper[static_cast<std::size_t>(c)] / lead[static_cast<std::size_t>(c)];
      if (q) detail::axpy_mod(upper, m - q % m, piv[static_cast<std::size_t>(c)], c, m);
    }
  }
  for (int c = 0; c < ncols; ++c)
    if (has[static_cast<std::size_t>(c)]) {
      h.rows.push_back(std::move(piv[static_cast<std::size_t>(c)]));
      h.pivot_col.push_back(c);
      h.pivot_lead.push_back(lead[static_cast<std::size_t>(c)]);
    }
  return h;
}

namespace detail {

inline bool is_prime(u32 m) {
  if (m < 2) return false;
  for (u32 d = 2; d * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

// kernel over a prime field: incremental reduced echelon of the constraint
// rows with deferred modular reduction, then free-column back-substitution
inline std::vector<Row> kernel_prime(const std::vector<Row>& constraints, int ncols, u32 p) {
  std::vector<Row> piv(static_cast<std::size_t>(ncols));
  std::vector<char> has(static_cast<std::size_t>(ncols), 0);
  const bool lazy = static_cast<u64>(p - 1) * (p - 1) * static_cast<u64>(ncols) < (1ULL << 31);
  for (const Row& cons : constraints) {
    Row buf = cons;
    int lead = -1;
    for (int c = 0; c < ncols; ++c) {
      u32 v = buf[static_cast<std::size_t>(c)] % p;
      buf[static_cast<std::size_t>(c)] = v;
      if (!v) continue;
      if (has[static_cast<std::size_t>(c)]) {
        const Row& pr = piv[static_cast<std::size_t>(c)];
        u32 coef = p - v;
        if (lazy) {
          for (int j = c; j < ncols; ++j)
            buf[static_cast<std::size_t>(j)] += coef * pr[static_cast<std::size_t>(j)];
          buf[static_cast<std::size_t>(c)] %= p;  // now zero
        } else {
          axpy_mod(buf, coef, pr, c, p);
        }
        continue;
      }
      lead = c;
      break;
    }
    if (lead < 0) continue;
    for (int j = lead; j < ncols; ++j) buf[static_cast<std::size_t>(j)] %= p;
    scale_mod(buf, modinv(buf[static_cast<std::size_t>(lead)], p), p);
    piv[static_cast<std::size_t>(lead)] = std::move(buf);
    has[static_cast<std::size_t>(lead)] = 1;
  }
  // clear above-pivot entries so that pivot columns are unit columns
  for (int c = ncols - 1; c >= 0; --c) {
    if (!has[static_cast<std::size_t>(c)]) continue;
    for (int c2 = 0; c2 < c; ++c2) {
      if (!has[static_cast<std::size_t>(c2)]) continue;
      Row& upper = piv[static_cast<std::size_t>(c2)];
      u32 v = upper[static_cast<std::size_t>(c)] % p;
      if (v) axpy_mod(upper, p - v, piv[static_cast<std::size_t>(c)], c, p);
    }
  }
  std::vector<Row> basis;
  for (int f = 0; f < ncols; ++f) {
    if (has[static_cast<std::size_t>(f)]) continue;
    Row x(static_cast<std::size_t>(ncols), 0);
    x[static_cast<std::size_t>(f)] = 1;
    for (int c = 0; c < ncols; ++c)
      if (has[static_cast<std::size_t>(c)])
        x[static_cast<std::size_t>(c)] =
            (p - piv[static_cast<std::size_t>(c)][static_cast<std::size_t>(f)] % p) % p;
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace detail

// Generators of { x in (Z/m)^ncols :  C x = 0 mod m  for every constraint
// row C }.  Prime moduli use fast reduced echelon; composite moduli use the
// Howell form of the transposed system with coefficient tracking.
inline std::vector<Row> kernel(const std::vector<Row>& constraints, int ncols, u32 m,
                               const Caps& caps = default_caps()) {
  if (m == 1 || ncols == 0) return {};
  if (detail::is_prime(m)) return detail::kernel_prime(constraints, ncols, m);

  const std::size_t nrows = constraints.size();
  if ((nrows + static_cast<std::size_t>(ncols)) * static_cast<std::size_t>(ncols) >
      16u * static_cast<std::size_t>(caps.cochain_cap))
    throw SearchCapExceeded(
        "composite-modulus kernel system too large; rerun with a higher cochain cap");
  // row i of the tracked system: (column i of the constraint matrix | e_i)
  std::vector<Row> tracked(static_cast<std::size_t>(ncols),
                           Row(nrows + static_cast<std::size_t>(ncols), 0));
  for (std::size_t r = 0; r < nrows; ++r)
    for (int i = 0; i < ncols; ++i)
      tracked[static_cast<std::size_t>(i)][r] = constraints[r][static_cast<std::size_t>(i)] % m;
  for (int i = 0; i < ncols; ++i)
    tracked[static_cast<std::size_t>(i)][nrows + static_cast<std::size_t>(i)] = 1;
  HowellForm h = howell(std::move(tracked), static_cast<int>(nrows) + ncols, m);
  std::vector<Row> gens;
  for (std::size_t r = 0; r < h.rows.size(); ++r) {
    if (h.pivot_col[r] < static_cast<int>(nrows)) continue;  // touches the constraint block
    Row x(static_cast<std::size_t>(ncols));
    for (int i = 0; i < ncols; ++i)
      x[static_cast<std::size_t>(i)] = h.rows[r][nrows + static_cast<std::size_t>(i)];
    gens.push_back(std::move(x));
  }
  return gens;
}

}  // namespace modlin
}  // namespace extauto
