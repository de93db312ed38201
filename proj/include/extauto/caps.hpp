#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

namespace extauto {

// Resource limits for constructions and searches.  All library searches are
// deterministic; caps only bound how much work they are allowed to do.
struct Caps {
  int order_cap = 512;              // max group order for construction
  int search_cap = 256;             // max group order for iso/aut backtracking
  std::int64_t sigma_cap = 10'000'000;   // max enumerated connecting-map space
  std::int64_t cochain_cap = 1'000'000;  // max cochain space for exhaustive path
  int threads = 1;                  // worker count for parallel scans
  bool heavy = false;               // opt into expensive reconstruction checks

  // Heavy mode relaxes the order/search caps so the order-420 corpus entry's
  // automorphism computations can run.
  static Caps heavy_caps() {
    Caps c;
    c.order_cap = 1024;
    c.search_cap = 512;
    c.heavy = true;
    return c;
  }
};

inline int threads_from_env() {
  const char* v = std::getenv("EXTAUTO_THREADS");
  if (!v) return 1;
  int n = std::atoi(v);
  return n >= 1 ? n : 1;
}

inline const Caps& default_caps() {
  static Caps caps = [] {
    Caps c;
    c.threads = threads_from_env();
    return c;
  }();
  return caps;
}

}  // namespace extauto
