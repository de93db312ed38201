#pragma once

// Command-line front end.  Resolves a target (a named catalog example, a
// group file, or a group descriptor), runs the requested analysis or
// verification, and prints a text or JSON report.
//
// Exit codes:
//   0  success / everything verified
//   1  usage or input error (bad flags, unknown example, malformed file)
//   2  verification failure (a structure check did not hold)
//   3  resource cap exceeded on an explicitly requested computation
//
// Aggregate runs (a verify subcommand with no target, or `corpus run` over
// the whole catalog) report cap-limited items as skipped and still exit 0
// when nothing actually failed.

#include <algorithm>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "extauto/corpus.hpp"
#include "extauto/io.hpp"
#include "extauto/iso.hpp"

namespace extauto {
namespace cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitCapExceeded = 3;

enum class Format { text, json };

// Raised for command-line level mistakes (missing/conflicting flags, bad
// member lists); mapped to exit code 1.
struct UsageError : Error {
  using Error::Error;
};

// One way of naming a group or extension on the command line.
struct InputSlot {
  std::string example;  // catalog name
  std::string file;     // group file path
  std::string spec;     // descriptor such as cyclic(6)

  int count() const {
    return (example.empty() ? 0 : 1) + (file.empty() ? 0 : 1) + (spec.empty() ? 0 : 1);
  }
  bool present() const { return count() > 0; }
};

struct Options {
  InputSlot first, second;
  std::string subgroup;  // comma-separated member list
  long long cap_order = 0;
  long long cap_sigma = 0;
  bool heavy = false;
  std::string format = "text";
};

inline Format parse_format(const Options& o) {
  return o.format == "json" ? Format::json : Format::text;
}

inline Caps make_caps(const Options& o) {
  Caps caps = o.heavy ? Caps::heavy_caps() : default_caps();
  caps.threads = threads_from_env();
  if (o.cap_order > 0) {
    caps.order_cap = static_cast<int>(o.cap_order);
    caps.search_cap = static_cast<int>(o.cap_order);
  }
  if (o.cap_sigma > 0) caps.sigma_cap = o.cap_sigma;
  return caps;
}

// ---------------------------------------------------------------------------
// Target resolution
// ---------------------------------------------------------------------------

inline std::vector<Elem> parse_member_list(const std::string& text) {
  std::vector<Elem> out;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (cur.empty()) continue;
      try {
        std::size_t pos = 0;
        int v = std::stoi(cur, &pos);
        if (pos != cur.size()) throw std::invalid_argument(cur);
        out.push_back(v);
      } catch (const std::exception&) {
        throw UsageError("--subgroup expects comma-separated element indices, got '" + cur +
                         "'");
      }
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (out.empty()) throw UsageError("--subgroup member list is empty");
  return out;
}

inline Group load_group_checked(const std::string& path) {
  try {
    return load_group(path);
  } catch (const ParseError&) {
    throw;
  } catch (const NotAGroup&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());  // unreadable file and similar
  }
}

inline Group group_from_slot(const InputSlot& in, const Caps& caps, const std::string& flags) {
  if (in.count() != 1)
    throw UsageError("give exactly one group source (" + flags + ")");
  if (!in.example.empty()) return example(in.example).total();
  if (!in.file.empty()) return load_group_checked(in.file);
  return standard_group(in.spec, caps);
}

inline Extension extension_from_slot(const InputSlot& in, const std::string& subgroup,
                                     const Caps& caps) {
  if (in.count() != 1)
    throw UsageError(
        "give exactly one extension source (--example NAME, or --group FILE / --spec DESC "
        "together with --subgroup)");
  if (!in.example.empty()) {
    if (!subgroup.empty())
      throw UsageError("--subgroup cannot be combined with --example (the catalog entry "
                       "already fixes the subgroup)");
    return example(in.example);
  }
  if (subgroup.empty())
    throw UsageError("--group/--spec needs --subgroup \"i,j,...\" naming a normal subgroup");
  Group g = !in.file.empty() ? load_group_checked(in.file) : standard_group(in.spec, caps);
  std::vector<Elem> members = parse_member_list(subgroup);
  for (Elem x : members)
    if (x < 0 || x >= g.order())
      throw UsageError("--subgroup element " + std::to_string(x) +
                       " is out of range for a group of order " + std::to_string(g.order()));
  std::string label = !in.file.empty() ? in.file : in.spec;
  try {
    return make_extension(g, members, label);
  } catch (const NotAGroup& e) {
    throw UsageError(std::string("--subgroup is not a subgroup: ") + e.what());
  } catch (const NotNormal& e) {
    throw UsageError(std::string("--subgroup is not normal: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Check lines shared by the verifying commands
// ---------------------------------------------------------------------------

struct CheckLine {
  std::string name;
  std::string status;  // "pass" | "fail" | "skip"
  std::string detail;
};

struct CheckList {
  std::vector<CheckLine> lines;
  int passed = 0, failed = 0, skipped = 0;

  void add(const std::string& name, bool ok, std::string detail = "") {
    lines.push_back({name, ok ? "pass" : "fail", std::move(detail)});
    ++(ok ? passed : failed);
  }
  void skip(const std::string& name, std::string why) {
    lines.push_back({name, "skip", std::move(why)});
    ++skipped;
  }

  Json to_json() const {
    Json arr = Json::array();
    for (const CheckLine& c : lines) {
      Json e{{"name", c.name}, {"status", c.status}};
      if (!c.detail.empty()) e["detail"] = c.detail;
      arr.push_back(std::move(e));
    }
    return arr;
  }
};

inline void print_checks(std::ostream& out, const std::vector<CheckLine>& lines,
                         const std::string& indent = "  ") {
  for (const CheckLine& c : lines) {
    const char* tag = c.status == "pass" ? "PASS" : c.status == "fail" ? "FAIL" : "SKIP";
    out << indent << "[" << tag << "] " << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << "\n";
  }
}

// Runs one named check.  Cap errors mark it skipped; other engine errors mark
// it failed.  The callable is expected to record its own pass/fail line.
template <typename Fn>
inline void run_check(CheckList& checks, const std::string& name, Fn&& fn) {
  try {
    fn();
  } catch (const SearchCapExceeded& e) {
    checks.skip(name, std::string("cap: ") + e.what());
  } catch (const OrderCapExceeded& e) {
    checks.skip(name, std::string("cap: ") + e.what());
  } catch (const Error& e) {
    checks.add(name, false, e.what());
  }
}

// ---------------------------------------------------------------------------
// Small formatting helpers
// ---------------------------------------------------------------------------

inline const char* yn(bool b) { return b ? "yes" : "no"; }

inline std::string opt_yn(const std::optional<bool>& b) {
  return b ? std::string(yn(*b)) : std::string("not computed");
}

inline std::string display_label(const Group& g) {
  return g.label().empty() ? "group of order " + std::to_string(g.order()) : g.label();
}

template <typename T>
inline std::string join(const std::vector<T>& xs, const std::string& sep = ",") {
  std::ostringstream s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s << sep;
    s << xs[i];
  }
  return s.str();
}

inline std::vector<int> orbit_sizes(const std::vector<std::vector<int>>& orbits) {
  std::vector<int> sizes;
  sizes.reserve(orbits.size());
  for (const std::vector<int>& o : orbits) sizes.push_back(static_cast<int>(o.size()));
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

inline std::string sequence_text(const SequenceReport& r) {
  std::ostringstream s;
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    if (i) s << " -> ";
    s << r.terms[i].name << "(" << r.terms[i].order << ")";
  }
  s << (r.all_exact() ? ": exact" : ": NOT exact");
  return s.str();
}

inline void emit_json(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------
// group subcommands
// ---------------------------------------------------------------------------

inline int cmd_group_info(const Group& g, Format fmt, std::ostream& out) {
  Subgroup z = center(g);
  std::vector<Subgroup> series = derived_series(g);
  std::vector<int> series_orders;
  series_orders.reserve(series.size());
  for (const Subgroup& s : series) series_orders.push_back(s.order());
  bool solvable = series_orders.back() == 1;

  Json j{{"command", "group info"},
         {"label", g.label()},
         {"order", g.order()},
         {"abelian", g.is_abelian()},
         {"center_order", z.order()},
         {"derived_series_orders", series_orders},
         {"solvable", solvable},
         {"exit_code", kExitOk}};
  if (fmt == Format::json) {
    emit_json(out, j);
  } else {
    out << "group: " << display_label(g) << "\n"
        << "order: " << g.order() << "\n"
        << "abelian: " << yn(g.is_abelian()) << "\n"
        << "center order: " << z.order() << "\n"
        << "derived series orders: " << join(series_orders) << "\n"
        << "solvable: " << yn(solvable) << "\n";
  }
  return kExitOk;
}

inline int cmd_group_aut(const Group& g, const Caps& caps, Format fmt, std::ostream& out) {
  AutGroup ag = aut_group(g, caps);
  std::vector<Perm> perms;
  perms.reserve(static_cast<std::size_t>(ag.size()));
  for (int i = 0; i < ag.size(); ++i) perms.push_back(ag.perm(i));
  bool solvable = permset::solvable(perms, g.order());
  unsigned long long inn = ag.inner().size();
  unsigned long long outn = inn ? static_cast<unsigned long long>(ag.size()) / inn : 0;

  Json j{{"command", "group aut"},
         {"label", g.label()},
         {"group_order", g.order()},
         {"aut_order", ag.size()},
         {"inn_order", inn},
         {"out_order", outn},
         {"aut_solvable", solvable},
         {"exit_code", kExitOk}};
  if (fmt == Format::json) {
    emit_json(out, j);
  } else {
    out << "automorphisms of " << display_label(g) << "\n"
        << "|Aut G|: " << ag.size() << "\n"
        << "|Inn G|: " << inn << "\n"
        << "|Out G|: " << outn << "\n"
        << "Aut G solvable: " << yn(solvable) << "\n";
  }
  return kExitOk;
}

inline int cmd_group_iso(const Group& a, const Group& b, const Caps& caps, Format fmt,
                         std::ostream& out) {
  std::optional<Hom> h = is_isomorphic(a, b, caps);
  Json j{{"command", "group iso"},
         {"first", {{"label", a.label()}, {"order", a.order()}}},
         {"second", {{"label", b.label()}, {"order", b.order()}}},
         {"isomorphic", h.has_value()},
         {"exit_code", kExitOk}};
  if (fmt == Format::json) {
    emit_json(out, j);
  } else {
    out << "first:  " << display_label(a) << " (order " << a.order() << ")\n"
        << "second: " << display_label(b) << " (order " << b.order() << ")\n"
        << "isomorphic: " << yn(h.has_value()) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ext subcommands
// ---------------------------------------------------------------------------

inline int cmd_ext_analyze(const Extension& e, const Caps& caps, Format fmt,
                           std::ostream& out) {
  ExtensionAnalysis a = analyze_extension(e, caps);
  OrbitReport orb = orbit_and_stabilizer(a);
  std::vector<std::vector<int>> orbits = class_orbits(a);
  bool centric = is_centric(e);

  Json j{{"command", "ext analyze"},
         {"summary", analysis_summary_to_json(a)},
         {"orbit", orbit_report_to_json(orb)},
         {"class_orbits", orbits},
         {"orbit_sizes", orbit_sizes(orbits)},
         {"centric", centric},
         {"exit_code", kExitOk}};
  if (fmt == Format::json) {
    emit_json(out, j);
    return kExitOk;
  }

  const Cohomology& coh = a.coh();
  out << "extension: " << e.label() << "  (|G|=" << e.total().order()
      << ", |H|=" << e.fiber().order() << ", |Q|=" << e.base().order() << ")\n";
  out << "compatible pairs: |S|=" << a.s.size() << ", induced conjugations |B|="
      << a.s.b_members().size() << ", fiber conjugations |InnH|=" << a.inn_fiber_order()
      << "\n";
  out << "quotients: |S/B|=" << a.sbar_order() << ", |S/InnH|=" << a.shat_order() << "\n";
  out << "center-module cohomology: |H0|=" << coh.h0_order() << ", |Z1|="
      << coh.one.cocycle_count() << ", |B1|=" << coh.one.coboundary_count() << ", |H1|="
      << coh.one.order() << ", |Z2|=" << coh.two.cocycle_count() << ", |B2|="
      << coh.two.coboundary_count() << ", |H2|=" << coh.two.order() << "\n";
  out << "extension classes: " << a.classes.coh.two.num_classes() << "; orbit of this class: "
      << orb.shat_orbit_size << "; stabilizer pairs: " << a.stabilizer.size() << "\n";
  out << "orbit sizes: " << join(orbit_sizes(orbits)) << "\n";
  if (a.relaut_computed)
    out << "subgroup-preserving automorphisms |Aut(G,H)|: " << a.relaut.size() << "\n";
  else
    out << "subgroup-preserving automorphisms |Aut(G,H)|: not computed (order above search "
           "cap)\n";
  out << "centric: " << yn(centric) << "\n";
  return kExitOk;
}

inline int cmd_ext_classes(const Extension& e, const Caps& caps, Format fmt,
                           std::ostream& out) {
  FactorSystem fs = factor_system(e);
  ExtensionClasses cls = extension_classes(fs, caps);
  int own = cls.class_of(fs);
  const int n = cls.coh.two.num_classes();

  Json arr = Json::array();
  bool all_split = true;
  std::vector<bool> split_flags;
  for (int i = 0; i < n; ++i) {
    bool sp = is_split(cls.systems[static_cast<std::size_t>(i)], caps);
    split_flags.push_back(sp);
    all_split = all_split && sp;
    arr.push_back(Json{{"index", i}, {"split", sp}});
  }

  Json j{{"command", "ext classes"},
         {"label", e.label()},
         {"num_classes", n},
         {"class_of_input", own},
         {"classes", arr},
         {"all_split", all_split},
         {"exit_code", kExitOk}};
  if (fmt == Format::json) {
    emit_json(out, j);
    return kExitOk;
  }

  out << "extension classes with the outer action of " << e.label() << ": " << n << "\n";
  for (int i = 0; i < n; ++i) {
    out << "  class " << i << ": " << (split_flags[static_cast<std::size_t>(i)] ? "split" : "not split");
    if (i == own) out << "  (class of the input extension)";
    out << "\n";
  }
  out << "all split: " << yn(all_split) << "\n";
  return kExitOk;
}

inline int cmd_ext_orbits(const Extension& e, const Caps& caps, Format fmt,
                          std::ostream& out) {
  ExtensionAnalysis a = analyze_extension(e, caps);
  std::vector<std::vector<int>> orbits = class_orbits(a);
  int own = a.classes.class_of(a.fs);

  Json j{{"command", "ext orbits"},
         {"label", e.label()},
         {"num_classes", a.classes.coh.two.num_classes()},
         {"num_orbits", orbits.size()},
         {"orbits", orbits},
         {"orbit_sizes", orbit_sizes(orbits)},
         {"class_of_input", own},
         {"exit_code", kExitOk}};
  if (fmt == Format::json) {
    emit_json(out, j);
    return kExitOk;
  }

  out << "extension classes: " << a.classes.coh.two.num_classes() << "\n"
      << "orbits under compatible pairs: " << orbits.size() << "\n";
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    out << "  orbit " << i << ": classes " << join(orbits[i]) << " (size " << orbits[i].size()
        << ")";
    if (std::find(orbits[i].begin(), orbits[i].end(), own) != orbits[i].end())
      out << "  (contains the input extension)";
    out << "\n";
  }
  out << "orbit sizes: " << join(orbit_sizes(orbits)) << "\n";
  return kExitOk;
}

inline int cmd_ext_split_orbits(const Extension& e, const Caps& caps, Format fmt,
                                std::ostream& out) {
  ExtensionAnalysis a = analyze_extension(e, caps);
  std::vector<std::vector<int>> orbits = class_orbits(a);

  CheckList checks;
  Json jorbits = Json::array();
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    std::vector<bool> flags;
    bool constant = true;
    for (int c : orbits[i]) {
      bool sp = is_split(a.classes.systems[static_cast<std::size_t>(c)], caps);
      if (!flags.empty() && sp != flags.front()) constant = false;
      flags.push_back(sp);
    }
    jorbits.push_back(Json{{"classes", orbits[i]}, {"split_flags", flags}, {"constant", constant}});
    std::string name = "orbit " + std::to_string(i) + " split status constant";
    std::string detail = "classes " + join(orbits[i]) + ": " +
                         (constant ? (flags.front() ? "split" : "not split") : "MIXED");
    checks.add(name, constant, detail);
  }

  int code = checks.failed ? kExitVerifyFailed : kExitOk;
  Json j{{"command", "ext split-orbits"},
         {"label", e.label()},
         {"orbits", jorbits},
         {"checks", checks.to_json()},
         {"summary",
          {{"passed", checks.passed}, {"failed", checks.failed}, {"skipped", checks.skipped}}},
         {"exit_code", code}};
  if (fmt == Format::json) {
    emit_json(out, j);
    return code;
  }

  out << "extension classes: " << a.classes.coh.two.num_classes() << ", orbits: "
      << orbits.size() << "\n";
  print_checks(out, checks.lines);
  out << "result: " << checks.passed << " passed, " << checks.failed << " failed, "
      << checks.skipped << " skipped\n";
  return code;
}

// ---------------------------------------------------------------------------
// verify subcommands
// ---------------------------------------------------------------------------

// Runs the checks named by `what` ("cycle", "basic", "counting", "series",
// "solvability", or "all") on one extension, appending one line per check.
inline void run_one_verify(const std::string& what, const Extension& e,
                           const std::string& example_name, const Caps& caps,
                           CheckList& checks, Json& detail) {
  ExtensionAnalysis a = analyze_extension(e, caps);
  const bool all = what == "all";

  if (all) {
    run_check(checks, "pair group structure", [&] {
      a.s.verify_structure();
      checks.add("pair group structure", true,
                 "|S|=" + std::to_string(a.s.size()) + ", |B|=" +
                     std::to_string(a.s.b_members().size()) + ", |InnH|=" +
                     std::to_string(a.inn_fiber_order()));
    });
    run_check(checks, "orbit and stabilizer", [&] {
      OrbitReport r = orbit_and_stabilizer(a);
      detail["orbit"] = orbit_report_to_json(r);
      std::ostringstream s;
      s << "orbit " << r.shat_orbit_size << " x stabilizer " << r.iso_shat_order
        << " = |S/InnH| " << a.shat_order();
      checks.add("orbit and stabilizer", r.consistent, s.str());
    });
    run_check(checks, "class orbit partition", [&] {
      std::vector<std::vector<int>> orbits = class_orbits(a);
      detail["class_orbits"] = orbits;
      std::size_t covered = 0;
      for (const std::vector<int>& o : orbits) covered += o.size();
      bool ok = covered == static_cast<std::size_t>(a.classes.coh.two.num_classes());
      checks.add("class orbit partition", ok, "orbit sizes: " + join(orbit_sizes(orbits)));
    });
  }

  if (all || what == "cycle") {
    run_check(checks, "cycle sequence", [&] {
      SequenceReport r = verify_cycle_sequence(a, caps);
      detail["cycle_sequence"] = sequence_report_to_json(r);
      checks.add("cycle sequence", r.all_exact(), sequence_text(r));
    });
  }
  if (all || what == "basic") {
    run_check(checks, "basic sequence", [&] {
      SequenceReport r = verify_basic_sequence(a, caps);
      detail["basic_sequence"] = sequence_report_to_json(r);
      checks.add("basic sequence", r.all_exact(), sequence_text(r));
    });
  }
  if (all || what == "counting") {
    run_check(checks, "counting identity", [&] {
      CountingReport r = counting_check(a);
      detail["counting"] = counting_report_to_json(r);
      bool ok = r.formula_holds && r.orbit_stabilizer_consistent &&
                r.h0_matches_center_intersection && r.orbit_bounded;
      std::ostringstream s;
      s << "|Aut(G,H)|*|H0|*|orbit| = " << r.aut_gh << "*" << r.h0 << "*" << r.orbit_size
        << " == |H1|*|H|*|S/InnH| = " << r.h1 << "*" << r.h_order << "*" << r.shat_order;
      checks.add("counting identity", ok, s.str());
    });
  }
  if (all || what == "series") {
    run_check(checks, "normal series", [&] {
      NormalSeriesReport r = normal_series(a, caps);
      detail["normal_series"] = normal_series_report_to_json(r);
      bool ok = r.chain_normal && r.a2_iso_ok && r.a1_mod_a2_iso_ok && r.a0_mod_a1_iso_ok;
      std::ostringstream s;
      s << "orders " << r.a0 << " > " << r.a1 << " > " << r.a2 << " > " << r.a3
        << ", quotients " << r.q0 << "," << r.q1 << "," << r.q2;
      checks.add("normal series", ok, s.str());
    });
  }
  if (all || what == "solvability") {
    run_check(checks, "solvability criteria", [&] {
      SolvabilityReport r = solvability_report(e, caps);
      detail["solvability"] = solvability_report_to_json(r);
      bool ok = r.theorem_consistent && r.forward_implication_ok && r.converse_implication_ok &&
                r.k_maps_verified && r.k_kernel_matches && r.five_term.all_exact();
      std::ostringstream s;
      s << "conditions 1-4: " << yn(r.fiber_solvable) << "/" << opt_yn(r.fiber_characteristic)
        << "/" << yn(r.normalizer_solvable) << "/" << yn(r.aut_ker_solvable)
        << "; Aut(G,H) solvable: " << opt_yn(r.relative_solvable_direct);
      checks.add("solvability criteria", ok, s.str());
    });
  }

  if (all) {
    run_check(checks, "quotient decomposition", [&] {
      SbarReport r = decompose_sbar(a, caps);
      detail["sbar"] = sbar_report_to_json(r);
      bool ok = r.p_well_defined && r.p_is_homomorphism && r.p_of_b_is_phi_q &&
                r.ker_p_matches && r.lifting_well_defined && r.image_p_matches_liftable &&
                r.centric_checks_ok;
      std::ostringstream s;
      s << "|S/B|=" << a.sbar_order() << " -> N/PhiQ of order " << r.n_mod_phi.order()
        << ", kernel " << r.ker_p_order << ", centric " << yn(r.centric);
      checks.add("quotient decomposition", ok, s.str());
    });
    if (!example_name.empty()) {
      run_check(checks, "catalog claims", [&] {
        CorpusRunResult r = run_corpus_entry(corpus_entry(example_name), caps);
        detail["claims"] = corpus_result_to_json(r);
        bool ok = r.all_pass();
        std::ostringstream s;
        if (ok) {
          s << r.checks.size() << " claims verified, " << r.skipped.size() << " skipped";
        } else {
          s << "failed:";
          for (const ClaimCheck& c : r.checks)
            if (!c.pass)
              s << " " << c.key << " (expected " << c.expected << ", got " << c.actual << ")";
        }
        checks.add("catalog claims", ok, s.str());
      });
    }
  }
}

inline int cmd_verify(const std::string& what, const std::optional<Extension>& single,
                      const std::string& example_name, const Caps& caps, Format fmt,
                      std::ostream& out) {
  struct TargetRun {
    std::string name;
    CheckList checks;
    Json detail = Json::object();
    bool target_skipped = false;
    std::string skip_reason;
  };
  std::vector<TargetRun> runs;
  const bool aggregate = !single.has_value();

  if (single) {
    TargetRun tr;
    tr.name = single->label();
    run_one_verify(what, *single, example_name, caps, tr.checks, tr.detail);
    runs.push_back(std::move(tr));
  } else {
    for (const ExampleDescriptor& d : corpus_catalog()) {
      TargetRun tr;
      tr.name = d.name;
      try {
        Extension e = d.build();
        run_one_verify(what, e, d.name, caps, tr.checks, tr.detail);
      } catch (const SearchCapExceeded& ex) {
        tr.target_skipped = true;
        tr.skip_reason = ex.what();
      } catch (const OrderCapExceeded& ex) {
        tr.target_skipped = true;
        tr.skip_reason = ex.what();
      }
      runs.push_back(std::move(tr));
    }
  }

  int passed = 0, failed = 0, skipped = 0;
  for (const TargetRun& tr : runs) {
    passed += tr.checks.passed;
    failed += tr.checks.failed;
    skipped += tr.checks.skipped + (tr.target_skipped ? 1 : 0);
  }
  int code = kExitOk;
  if (failed > 0)
    code = kExitVerifyFailed;
  else if (!aggregate && passed == 0 && skipped > 0)
    code = kExitCapExceeded;

  Json targets = Json::array();
  for (const TargetRun& tr : runs) {
    Json t{{"target", tr.name}, {"checks", tr.checks.to_json()}, {"detail", tr.detail}};
    if (tr.target_skipped) t["skipped"] = tr.skip_reason;
    targets.push_back(std::move(t));
  }
  Json j{{"command", "verify " + what},
         {"targets", targets},
         {"summary", {{"passed", passed}, {"failed", failed}, {"skipped", skipped}}},
         {"exit_code", code}};
  if (fmt == Format::json) {
    emit_json(out, j);
    return code;
  }

  out << "verify " << what << ": " << runs.size() << (runs.size() == 1 ? " target" : " targets")
      << "\n";
  for (const TargetRun& tr : runs) {
    out << tr.name << "\n";
    if (tr.target_skipped) {
      out << "  [SKIP] target: cap: " << tr.skip_reason << "\n";
      continue;
    }
    print_checks(out, tr.checks.lines);
  }
  out << "result: " << passed << " passed, " << failed << " failed, " << skipped
      << " skipped\n";
  return code;
}

// ---------------------------------------------------------------------------
// corpus subcommands
// ---------------------------------------------------------------------------

inline int cmd_corpus_list(Format fmt, std::ostream& out) {
  const std::vector<ExampleDescriptor>& cat = corpus_catalog();
  if (fmt == Format::json) {
    Json arr = Json::array();
    for (const ExampleDescriptor& d : cat) arr.push_back(descriptor_to_json(d));
    emit_json(out, Json{{"command", "corpus list"}, {"examples", arr}, {"exit_code", kExitOk}});
    return kExitOk;
  }
  std::size_t width = 0;
  for (const ExampleDescriptor& d : cat) width = std::max(width, d.name.size());
  for (const ExampleDescriptor& d : cat) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << d.name
        << (d.heavy_aut ? "[heavy]  " : "         ") << d.summary << "\n";
  }
  return kExitOk;
}

inline int cmd_corpus_run(const std::string& only, const Caps& caps, Format fmt,
                          std::ostream& out) {
  std::vector<const ExampleDescriptor*> targets;
  if (!only.empty()) {
    targets.push_back(&corpus_entry(only));
  } else {
    for (const ExampleDescriptor& d : corpus_catalog()) targets.push_back(&d);
  }

  Json results = Json::array();
  int failed_entries = 0;
  long long total_claims = 0, total_skipped = 0;
  std::ostringstream text;
  for (const ExampleDescriptor* d : targets) {
    CorpusRunResult r = run_corpus_entry(*d, caps);
    results.push_back(corpus_result_to_json(r));
    total_claims += static_cast<long long>(r.checks.size());
    total_skipped += static_cast<long long>(r.skipped.size());
    if (!r.all_pass()) ++failed_entries;

    text << r.name << ": " << (r.all_pass() ? "PASS" : "FAIL") << " (" << r.checks.size()
         << " claims, " << r.skipped.size() << " skipped, " << std::fixed
         << std::setprecision(2) << r.build_seconds << "s build)\n";
    for (const ClaimCheck& c : r.checks)
      if (!c.pass)
        text << "  [FAIL] " << c.key << ": expected " << c.expected << ", got " << c.actual
             << "\n";
    for (const std::string& s : r.skipped) text << "  [SKIP] " << s << "\n";
  }

  int code = failed_entries ? kExitVerifyFailed : kExitOk;
  Json j{{"command", "corpus run"},
         {"results", results},
         {"summary",
          {{"entries", targets.size()},
           {"failed_entries", failed_entries},
           {"claims", total_claims},
           {"skipped", total_skipped}}},
         {"exit_code", code}};
  if (fmt == Format::json) {
    emit_json(out, j);
    return code;
  }
  out << text.str();
  out << "result: " << targets.size() << " entries, " << failed_entries << " failed, "
      << total_claims << " claims, " << total_skipped << " skipped\n";
  return code;
}

}  // namespace cli

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  using namespace cli;
  Options opt;

  CLI::App app{"finite group extensions: compatible pairs, cohomology, and automorphism "
               "transfer",
               "extauto"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* c) {
    c->add_option("--cap-order", opt.cap_order,
                  "override the group order / search cap (positive integer)")
        ->check(CLI::PositiveNumber);
    c->add_option("--cap-sigma", opt.cap_sigma,
                  "override the connecting-map enumeration cap (positive integer)")
        ->check(CLI::PositiveNumber);
    c->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    c->add_flag("--heavy", opt.heavy,
                "relax caps to run the expensive automorphism computations");
  };
  auto add_group_source = [&](CLI::App* c) {
    c->add_option("--example", opt.first.example,
                  "named example from the built-in catalog (its total group)");
    c->add_option("--group", opt.first.file,
                  "path to a group file (JSON object or text Cayley table)");
    c->add_option("--spec", opt.first.spec,
                  "group descriptor, e.g. cyclic(6), dihedral(8), symmetric(4)");
  };
  auto add_ext_source = [&](CLI::App* c) {
    add_group_source(c);
    c->add_option("--subgroup", opt.subgroup,
                  "comma-separated element indices of a normal subgroup (with --group/--spec)");
  };

  std::function<int()> action;

  // group ---------------------------------------------------------------
  CLI::App* grp = app.add_subcommand("group", "inspect a single finite group");
  grp->require_subcommand(1);

  CLI::App* g_info =
      grp->add_subcommand("info", "order, center, derived series, solvability");
  add_group_source(g_info);
  add_common(g_info);
  g_info->callback([&] {
    action = [&] {
      Caps caps = make_caps(opt);
      Group g = group_from_slot(opt.first, caps, "--example / --group / --spec");
      return cmd_group_info(g, parse_format(opt), out);
    };
  });

  CLI::App* g_aut = grp->add_subcommand(
      "aut", "automorphism group: order, inner/outer parts, solvability");
  add_group_source(g_aut);
  add_common(g_aut);
  g_aut->callback([&] {
    action = [&] {
      Caps caps = make_caps(opt);
      Group g = group_from_slot(opt.first, caps, "--example / --group / --spec");
      return cmd_group_aut(g, caps, parse_format(opt), out);
    };
  });

  CLI::App* g_iso = grp->add_subcommand("iso", "test two groups for isomorphism");
  add_group_source(g_iso);
  g_iso->add_option("--example2", opt.second.example, "second group: catalog example");
  g_iso->add_option("--group2", opt.second.file, "second group: file path");
  g_iso->add_option("--spec2", opt.second.spec, "second group: descriptor");
  add_common(g_iso);
  g_iso->callback([&] {
    action = [&] {
      Caps caps = make_caps(opt);
      Group a = group_from_slot(opt.first, caps, "--example / --group / --spec");
      Group b = group_from_slot(opt.second, caps, "--example2 / --group2 / --spec2");
      return cmd_group_iso(a, b, caps, parse_format(opt), out);
    };
  });

  // ext -----------------------------------------------------------------
  CLI::App* ext = app.add_subcommand(
      "ext", "analyze one extension (a total group with a chosen normal subgroup)");
  ext->require_subcommand(1);
  struct ExtCmd {
    const char* name;
    const char* help;
    int (*fn)(const Extension&, const Caps&, Format, std::ostream&);
  };
  const std::vector<ExtCmd> ext_cmds{
      {"analyze", "pair group, cohomology, orbit and stabilizer summary", &cmd_ext_analyze},
      {"classes", "all extension classes with this outer action, and which are split",
       &cmd_ext_classes},
      {"orbits", "orbits of the compatible pairs on the extension classes", &cmd_ext_orbits},
      {"split-orbits", "check that being split is constant on each orbit",
       &cmd_ext_split_orbits},
  };
  for (const ExtCmd& ec : ext_cmds) {
    CLI::App* leaf = ext->add_subcommand(ec.name, ec.help);
    add_ext_source(leaf);
    add_common(leaf);
    auto fn = ec.fn;
    leaf->callback([&, fn] {
      action = [&, fn] {
        Caps caps = make_caps(opt);
        Extension e = extension_from_slot(opt.first, opt.subgroup, caps);
        return fn(e, caps, parse_format(opt), out);
      };
    });
  }

  // verify ----------------------------------------------------------------
  CLI::App* ver = app.add_subcommand(
      "verify", "verify the structure theorems on one target or the whole catalog");
  ver->require_subcommand(1);
  const std::vector<std::pair<const char*, const char*>> verify_cmds{
      {"cycle", "exactness of 0 -> Z1 -> Aut(G,H) -> S -> H2"},
      {"basic", "exactness of 0 -> H1/V -> Out(G,H) -> S/B -> H2"},
      {"counting", "the order identity |Aut(G,H)|*|H0|*|orbit| = |H1|*|H|*|S/InnH|"},
      {"series", "the normal series of Aut(G,H) and its quotient isomorphisms"},
      {"solvability", "the four solvability conditions and their consequences"},
      {"all", "every check above plus structure, orbits, and catalog claims"},
  };
  for (const auto& [name, help] : verify_cmds) {
    CLI::App* leaf = ver->add_subcommand(name, help);
    add_ext_source(leaf);
    add_common(leaf);
    std::string what = name;
    leaf->callback([&, what] {
      action = [&, what] {
        Caps caps = make_caps(opt);
        std::optional<Extension> target;
        if (opt.first.present() || !opt.subgroup.empty())
          target = extension_from_slot(opt.first, opt.subgroup, caps);
        return cmd_verify(what, target, opt.first.example, caps, parse_format(opt), out);
      };
    });
  }

  // corpus ----------------------------------------------------------------
  CLI::App* cor = app.add_subcommand("corpus", "the built-in example catalog");
  cor->require_subcommand(1);

  CLI::App* c_list = cor->add_subcommand("list", "list the catalog entries");
  add_common(c_list);
  c_list->callback([&] {
    action = [&] { return cmd_corpus_list(parse_format(opt), out); };
  });

  CLI::App* c_run =
      cor->add_subcommand("run", "rebuild entries and check their recorded invariants");
  c_run->add_option("--example", opt.first.example, "run a single entry instead of all");
  add_common(c_run);
  c_run->callback([&] {
    action = [&] {
      Caps caps = make_caps(opt);
      return cmd_corpus_run(opt.first.example, caps, parse_format(opt), out);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!action) {
      err << "usage error: no subcommand selected\n";
      return kExitUsage;
    }
    return action();
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownExample& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedSpec& e) {
    err << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotAGroup& e) {
    err << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotNormal& e) {
    err << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SearchCapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const OrderCapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  }
}

// Convenience overload for tests and embedding: args without the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("extauto");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace extauto
