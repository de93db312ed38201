#pragma once
// JSON and plain-text serialization for groups, extensions, factor systems,
// cochains and verification reports, plus small file helpers for the CLI.
// Parsing rejects malformed input with a ParseError naming the offending
// location; reconstruction failures (a table that is not a group, a member
// list that is not a normal subgroup, ...) are wrapped into ParseError with
// the underlying validator message preserved.

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "extauto/compat.hpp"
#include "extauto/corpus.hpp"
#include "extauto/errors.hpp"
#include "extauto/extension.hpp"
#include "extauto/group.hpp"

namespace extauto {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

inline Json group_to_json(const Group& g) {
  Json rows = Json::array();
  for (Elem x = 0; x < g.order(); ++x) {
    Json row = Json::array();
    for (Elem y = 0; y < g.order(); ++y) row.push_back(g.op(x, y));
    rows.push_back(std::move(row));
  }
  return Json{{"order", g.order()}, {"label", g.label()}, {"table", std::move(rows)}};
}

inline Group group_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("group: expected an object");
  if (!j.contains("order") || !j.at("order").is_number_integer())
    throw ParseError("group.order: expected an integer");
  long long n = j.at("order").get<long long>();
  if (n <= 0 || n > 1 << 20) throw ParseError("group.order: out of range");
  std::string label = j.value("label", std::string{});
  if (!j.contains("table") || !j.at("table").is_array() ||
      j.at("table").size() != static_cast<std::size_t>(n))
    throw ParseError("group.table: expected " + std::to_string(n) + " rows");
  std::vector<Elem> flat;
  flat.reserve(static_cast<std::size_t>(n * n));
  for (std::size_t r = 0; r < static_cast<std::size_t>(n); ++r) {
    const Json& row = j.at("table")[r];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(n))
      throw ParseError("group.table row " + std::to_string(r) + ": expected " +
                       std::to_string(n) + " entries");
    for (std::size_t c = 0; c < row.size(); ++c) {
      const Json& cell = row[c];
      if (!cell.is_number_integer())
        throw ParseError("group.table row " + std::to_string(r) + " entry " +
                         std::to_string(c) + ": expected an integer");
      long long v = cell.get<long long>();
      if (v < 0 || v >= n)
        throw ParseError("group.table row " + std::to_string(r) + " entry " +
                         std::to_string(c) + ": value " + std::to_string(v) +
                         " outside 0.." + std::to_string(n - 1));
      flat.push_back(static_cast<Elem>(v));
    }
  }
  try {
    return Group::from_flat(static_cast<int>(n), std::move(flat), std::move(label));
  } catch (const Error& ex) {
    throw ParseError(std::string("group.table: ") + ex.what());
  }
}

// Plain-text Cayley table: '#' starts a comment ("# label: NAME" sets the
// label), the first number is the order n, then n*n entries follow in row
// order, whitespace separated.
inline std::string group_to_text(const Group& g) {
  std::ostringstream out;
  if (!g.label().empty()) out << "# label: " << g.label() << "\n";
  out << g.order() << "\n";
  for (Elem x = 0; x < g.order(); ++x) {
    for (Elem y = 0; y < g.order(); ++y) out << (y ? " " : "") << g.op(x, y);
    out << "\n";
  }
  return out.str();
}

inline Group group_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line, label;
  std::vector<std::pair<long long, int>> numbers;  // value, source line
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string::size_type hash = line.find('#');
    if (hash != std::string::npos) {
      std::string comment = line.substr(hash + 1);
      std::string::size_type tag = comment.find("label:");
      if (tag != std::string::npos) {
        label = comment.substr(tag + 6);
        label.erase(0, label.find_first_not_of(" \t"));
        std::string::size_type end = label.find_last_not_of(" \t\r");
        label = end == std::string::npos ? std::string{} : label.substr(0, end + 1);
      }
      line = line.substr(0, hash);
    }
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      try {
        std::size_t used = 0;
        long long v = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        numbers.emplace_back(v, lineno);
      } catch (const std::exception&) {
        throw ParseError("cayley table line " + std::to_string(lineno) + ": \"" + tok +
                         "\" is not an integer");
      }
    }
  }
  if (numbers.empty()) throw ParseError("cayley table: no data");
  long long n = numbers[0].first;
  if (n <= 0 || n > 1 << 20)
    throw ParseError("cayley table line " + std::to_string(numbers[0].second) +
                     ": order out of range");
  if (static_cast<long long>(numbers.size()) != 1 + n * n)
    throw ParseError("cayley table: expected " + std::to_string(1 + n * n) +
                     " numbers for order " + std::to_string(n) + ", found " +
                     std::to_string(numbers.size()));
  std::vector<Elem> flat;
  flat.reserve(static_cast<std::size_t>(n * n));
  for (std::size_t i = 1; i < numbers.size(); ++i) {
    auto [v, src] = numbers[i];
    if (v < 0 || v >= n) {
      std::size_t pos = i - 1;
      throw ParseError("cayley table row " + std::to_string(pos / n) + " entry " +
                       std::to_string(pos % n) + " (line " + std::to_string(src) +
                       "): value " + std::to_string(v) + " outside 0.." +
                       std::to_string(n - 1));
    }
    flat.push_back(static_cast<Elem>(v));
  }
  try {
    return Group::from_flat(static_cast<int>(n), std::move(flat), std::move(label));
  } catch (const Error& ex) {
    throw ParseError(std::string("cayley table: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------
// Extensions and factor systems
// ---------------------------------------------------------------------------

inline Json extension_to_json(const Extension& e) {
  Json sub = Json::array();
  for (Elem m : e.sub().members) sub.push_back(m);
  return Json{{"group", group_to_json(e.total())},
              {"subgroup", std::move(sub)},
              {"label", e.label()}};
}

inline Extension extension_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("extension: expected an object");
  if (!j.contains("group")) throw ParseError("extension.group: missing");
  Group g = group_from_json(j.at("group"));
  if (!j.contains("subgroup") || !j.at("subgroup").is_array())
    throw ParseError("extension.subgroup: expected an array");
  std::vector<Elem> members;
  for (std::size_t i = 0; i < j.at("subgroup").size(); ++i) {
    const Json& cell = j.at("subgroup")[i];
    if (!cell.is_number_integer())
      throw ParseError("extension.subgroup entry " + std::to_string(i) +
                       ": expected an integer");
    long long v = cell.get<long long>();
    if (v < 0 || v >= g.order())
      throw ParseError("extension.subgroup entry " + std::to_string(i) + ": value " +
                       std::to_string(v) + " outside 0.." + std::to_string(g.order() - 1));
    members.push_back(static_cast<Elem>(v));
  }
  try {
    return make_extension(g, members, j.value("label", std::string{}));
  } catch (const Error& ex) {
    throw ParseError(std::string("extension: ") + ex.what());
  }
}

inline Json factor_system_to_json(const FactorSystem& fs) {
  Json phi = Json::array();
  for (const Perm& p : fs.phi) {
    Json row = Json::array();
    for (Elem v : p) row.push_back(v);
    phi.push_back(std::move(row));
  }
  Json f = Json::array();
  for (const auto& frow : fs.f) {
    Json row = Json::array();
    for (Elem v : frow) row.push_back(v);
    f.push_back(std::move(row));
  }
  return Json{{"fiber", group_to_json(fs.fiber)},
              {"base", group_to_json(fs.base)},
              {"phi", std::move(phi)},
              {"f", std::move(f)}};
}

inline FactorSystem factor_system_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("factor_system: expected an object");
  if (!j.contains("fiber")) throw ParseError("factor_system.fiber: missing");
  if (!j.contains("base")) throw ParseError("factor_system.base: missing");
  Group fiber = group_from_json(j.at("fiber"));
  Group base = group_from_json(j.at("base"));
  const std::size_t nh = static_cast<std::size_t>(fiber.order());
  const std::size_t nq = static_cast<std::size_t>(base.order());

  auto read_matrix = [&](const char* key, std::size_t cols, long long bound) {
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != nq)
      throw ParseError(std::string("factor_system.") + key + ": expected " +
                       std::to_string(nq) + " rows");
    std::vector<std::vector<Elem>> m(nq);
    for (std::size_t r = 0; r < nq; ++r) {
      const Json& row = j.at(key)[r];
      if (!row.is_array() || row.size() != cols)
        throw ParseError(std::string("factor_system.") + key + " row " + std::to_string(r) +
                         ": expected " + std::to_string(cols) + " entries");
      for (std::size_t c = 0; c < cols; ++c) {
        const Json& cell = row[c];
        if (!cell.is_number_integer())
          throw ParseError(std::string("factor_system.") + key + " row " +
                           std::to_string(r) + " entry " + std::to_string(c) +
                           ": expected an integer");
        long long v = cell.get<long long>();
        if (v < 0 || v >= bound)
          throw ParseError(std::string("factor_system.") + key + " row " +
                           std::to_string(r) + " entry " + std::to_string(c) +
                           ": value out of range");
        m[r].push_back(static_cast<Elem>(v));
      }
    }
    return m;
  };

  FactorSystem fs{std::move(fiber), std::move(base),
                  read_matrix("phi", nh, static_cast<long long>(nh)),
                  read_matrix("f", nq, static_cast<long long>(nh))};
  try {
    fs.validate();
  } catch (const Error& ex) {
    throw ParseError(std::string("factor_system: ") + ex.what());
  }
  return fs;
}

// ---------------------------------------------------------------------------
// Cochains
// ---------------------------------------------------------------------------

struct SerializedCochain {
  int degree = 1;
  int base_order = 1;
  std::vector<Elem> values;  // degree 1: one per base element; degree 2: flat square
};

inline Json cochain_to_json(int degree, int base_order, const std::vector<Elem>& values) {
  Json vals = Json::array();
  for (Elem v : values) vals.push_back(v);
  return Json{{"degree", degree}, {"base_order", base_order}, {"values", std::move(vals)}};
}

inline SerializedCochain cochain_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("cochain: expected an object");
  if (!j.contains("degree") || !j.at("degree").is_number_integer())
    throw ParseError("cochain.degree: expected an integer");
  int degree = j.at("degree").get<int>();
  if (degree != 1 && degree != 2) throw ParseError("cochain.degree: expected 1 or 2");
  if (!j.contains("base_order") || !j.at("base_order").is_number_integer())
    throw ParseError("cochain.base_order: expected an integer");
  int nq = j.at("base_order").get<int>();
  if (nq <= 0) throw ParseError("cochain.base_order: must be positive");
  std::size_t want = degree == 1 ? static_cast<std::size_t>(nq)
                                 : static_cast<std::size_t>(nq) * static_cast<std::size_t>(nq);
  if (!j.contains("values") || !j.at("values").is_array() || j.at("values").size() != want)
    throw ParseError("cochain.values: expected " + std::to_string(want) + " entries");
  SerializedCochain c{degree, nq, {}};
  for (std::size_t i = 0; i < want; ++i) {
    const Json& cell = j.at("values")[i];
    if (!cell.is_number_integer())
      throw ParseError("cochain.values entry " + std::to_string(i) + ": expected an integer");
    c.values.push_back(cell.get<Elem>());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json sequence_report_to_json(const SequenceReport& r) {
  Json terms = Json::array();
  for (const SeqTerm& t : r.terms) terms.push_back(Json{{"name", t.name}, {"order", t.order}});
  Json junctions = Json::array();
  for (const SeqJunction& x : r.junctions)
    junctions.push_back(Json{{"at", x.at},
                             {"exact", x.exact},
                             {"kernel_size", x.kernel_size},
                             {"image_size", x.image_size}});
  return Json{{"sequence", r.sequence},
              {"terms", std::move(terms)},
              {"junctions", std::move(junctions)},
              {"all_exact", r.all_exact()}};
}

inline SequenceReport sequence_report_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("sequence_report: expected an object");
  SequenceReport r;
  r.sequence = j.value("sequence", std::string{});
  if (j.contains("terms")) {
    if (!j.at("terms").is_array()) throw ParseError("sequence_report.terms: expected an array");
    for (std::size_t i = 0; i < j.at("terms").size(); ++i) {
      const Json& t = j.at("terms")[i];
      if (!t.is_object() || !t.contains("name") || !t.contains("order"))
        throw ParseError("sequence_report.terms entry " + std::to_string(i) +
                         ": expected {name, order}");
      r.terms.push_back({t.at("name").get<std::string>(),
                         t.at("order").get<unsigned long long>()});
    }
  }
  if (j.contains("junctions")) {
    if (!j.at("junctions").is_array())
      throw ParseError("sequence_report.junctions: expected an array");
    for (std::size_t i = 0; i < j.at("junctions").size(); ++i) {
      const Json& x = j.at("junctions")[i];
      if (!x.is_object() || !x.contains("at") || !x.contains("exact") ||
          !x.contains("kernel_size") || !x.contains("image_size"))
        throw ParseError("sequence_report.junctions entry " + std::to_string(i) +
                         ": expected {at, exact, kernel_size, image_size}");
      r.junctions.push_back({x.at("at").get<std::string>(), x.at("exact").get<bool>(),
                             x.at("kernel_size").get<unsigned long long>(),
                             x.at("image_size").get<unsigned long long>()});
    }
  }
  return r;
}

inline Json orbit_report_to_json(const OrbitReport& r) {
  return Json{{"orbit_classes", r.orbit_classes},
              {"stabilizer_pairs", r.stabilizer_pairs},
              {"shat_orbit_size", r.shat_orbit_size},
              {"iso_shat_order", r.iso_shat_order},
              {"consistent", r.consistent}};
}

inline Json counting_report_to_json(const CountingReport& r) {
  return Json{{"aut_gh", r.aut_gh},
              {"h_order", r.h_order},
              {"h0", r.h0},
              {"h1", r.h1},
              {"h2", r.h2},
              {"shat_order", r.shat_order},
              {"orbit_size", r.orbit_size},
              {"iso_shat_order", r.iso_shat_order},
              {"h0_matches_center_intersection", r.h0_matches_center_intersection},
              {"orbit_stabilizer_consistent", r.orbit_stabilizer_consistent},
              {"formula_holds", r.formula_holds},
              {"orbit_bounded", r.orbit_bounded}};
}

inline Json sbar_report_to_json(const SbarReport& r) {
  return Json{{"centric", r.centric},
              {"aut_phi_q_order", r.aut_phi_q_order},
              {"normalizer_order", r.normalizer_order},
              {"phi_q_order", r.phi_q_order},
              {"n_mod_phi_order", r.n_mod_phi.order()},
              {"p_well_defined", r.p_well_defined},
              {"p_is_homomorphism", r.p_is_homomorphism},
              {"p_of_b_is_phi_q", r.p_of_b_is_phi_q},
              {"ker_p_order", r.ker_p_order},
              {"ker_p_matches", r.ker_p_matches},
              {"lifting_well_defined", r.lifting_well_defined},
              {"image_p_matches_liftable", r.image_p_matches_liftable},
              {"p_injective", r.p_injective},
              {"p_surjective", r.p_surjective},
              {"centric_checks_ok", r.centric_checks_ok},
              {"centric_sequence", sequence_report_to_json(r.centric_sequence)}};
}

namespace detail {
inline Json flag_or_null(const std::optional<bool>& f) {
  return f ? Json(*f) : Json(nullptr);
}
}  // namespace detail

inline Json solvability_report_to_json(const SolvabilityReport& r) {
  return Json{{"fiber_solvable", r.fiber_solvable},
              {"fiber_characteristic", detail::flag_or_null(r.fiber_characteristic)},
              {"normalizer_solvable", r.normalizer_solvable},
              {"aut_ker_solvable", r.aut_ker_solvable},
              {"conditions_134", r.conditions_134},
              {"relative_solvable_direct", detail::flag_or_null(r.relative_solvable_direct)},
              {"aut_g_solvable_direct", detail::flag_or_null(r.aut_g_solvable_direct)},
              {"theorem_consistent", r.theorem_consistent},
              {"s_solvable", r.s_solvable},
              {"aut_phi_q_solvable", r.aut_phi_q_solvable},
              {"centralizer_solvable", r.centralizer_solvable},
              {"forward_implication_ok", r.forward_implication_ok},
              {"converse_implication_ok", r.converse_implication_ok},
              {"k_order", r.k_order},
              {"k_abelian", r.k_abelian},
              {"k_maps_verified", r.k_maps_verified},
              {"k_kernel_matches", r.k_kernel_matches},
              {"five_term", sequence_report_to_json(r.five_term)}};
}

inline Json normal_series_report_to_json(const NormalSeriesReport& r) {
  return Json{{"a0", r.a0},
              {"a1", r.a1},
              {"a2", r.a2},
              {"a3", r.a3},
              {"chain_normal", r.chain_normal},
              {"a2_iso_ok", r.a2_iso_ok},
              {"a1_mod_a2_iso_ok", r.a1_mod_a2_iso_ok},
              {"a0_mod_a1_iso_ok", r.a0_mod_a1_iso_ok},
              {"q2", r.q2},
              {"q1", r.q1},
              {"q0", r.q0}};
}

inline Json analysis_summary_to_json(const ExtensionAnalysis& a) {
  Json theta = Json::array();
  for (int c : a.theta_class) theta.push_back(c);
  return Json{{"label", a.ext.label()},
              {"group_order", a.ext.total().order()},
              {"fiber_order", a.ext.fiber().order()},
              {"base_order", a.ext.base().order()},
              {"s_order", a.s.size()},
              {"b_order", a.s.b_members().size()},
              {"innh_order", a.inn_fiber_order()},
              {"sbar_order", a.sbar_order()},
              {"shat_order", a.shat_order()},
              {"h0", a.coh().h0_order()},
              {"z1", a.coh().one.cocycle_count()},
              {"b1", a.coh().one.coboundary_count()},
              {"h1", a.coh().one.order()},
              {"z2", a.coh().two.cocycle_count()},
              {"b2", a.coh().two.coboundary_count()},
              {"h2", a.coh().two.order()},
              {"num_classes", a.classes.coh.two.num_classes()},
              {"orbit_classes", a.orbit},
              {"stabilizer_size", a.stabilizer.size()},
              {"theta_classes", std::move(theta)},
              {"relaut_order",
               a.relaut_computed ? Json(a.relaut.size()) : Json(nullptr)}};
}

inline Json claim_check_to_json(const ClaimCheck& c) {
  return Json{{"key", c.key},
              {"expected", c.expected},
              {"actual", c.actual},
              {"pass", c.pass},
              {"heavy_only", c.heavy_only}};
}

inline Json corpus_result_to_json(const CorpusRunResult& r) {
  Json checks = Json::array();
  for (const ClaimCheck& c : r.checks) checks.push_back(claim_check_to_json(c));
  return Json{{"name", r.name},
              {"built", r.built},
              {"build_seconds", r.build_seconds},
              {"checks", std::move(checks)},
              {"skipped", r.skipped},
              {"notes", r.notes},
              {"all_pass", r.all_pass()}};
}

inline Json descriptor_to_json(const ExampleDescriptor& d) {
  return Json{{"name", d.name},
              {"summary", d.summary},
              {"heavy_aut", d.heavy_aut},
              {"expected", d.expected},
              {"expected_heavy", d.expected_heavy},
              {"notes", d.notes}};
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& ex) {
    throw ParseError(std::string("json: ") + ex.what());
  }
}

// Loads a group from a file: JSON when the content starts with '{', plain
// Cayley-table text otherwise.
inline Group load_group(const std::string& path) {
  std::string text = read_text_file(path);
  std::string::size_type first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return group_from_json(parse_json_text(text));
  return group_from_text(text);
}

}  // namespace extauto
