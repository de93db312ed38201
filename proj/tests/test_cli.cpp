// Command-line front end: subcommand dispatch, exit codes, text and JSON
// reports, and input resolution from examples, files, and descriptors.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "extauto/cli.hpp"

using namespace extauto;
using Catch::Matchers::ContainsSubstring;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Json parse_out(const CliResult& r) { return parse_json_text(r.out); }

}  // namespace

TEST_CASE("verify all on the dihedral example reports the orbit sizes") {
  CliResult r = run({"verify", "all", "--example", "d4_center"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("orbit sizes: 1,1,3,3"));
  CHECK_THAT(r.out, ContainsSubstring("[PASS] counting identity"));
  CHECK_THAT(r.out, ContainsSubstring("[PASS] catalog claims"));
  CHECK_THAT(r.out, ContainsSubstring("0 failed"));
}

TEST_CASE("ext classes on the dihedral product finds two split classes") {
  CliResult r = run({"ext", "classes", "--example", "d4_over_z2"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring(": 2"));
  CHECK_THAT(r.out, ContainsSubstring("class 0: split"));
  CHECK_THAT(r.out, ContainsSubstring("class 1: split"));
  CHECK_THAT(r.out, ContainsSubstring("all split: yes"));

  CliResult q16 = run({"ext", "classes", "--example", "q16_over_z2", "--format", "json"});
  CHECK(q16.code == 0);
  Json j = parse_out(q16);
  CHECK(j["num_classes"] == 2);
  CHECK(j["all_split"] == true);
}

TEST_CASE("group aut on the trivial group") {
  CliResult r = run({"group", "aut", "--spec", "cyclic(1)"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("|Aut G|: 1"));
  CHECK_THAT(r.out, ContainsSubstring("solvable: yes"));
}

TEST_CASE("group info prints order and derived series") {
  CliResult r = run({"group", "info", "--spec", "dihedral(8)"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("order: 8"));
  CHECK_THAT(r.out, ContainsSubstring("abelian: no"));
  CHECK_THAT(r.out, ContainsSubstring("derived series orders: 8,2,1"));
  CHECK_THAT(r.out, ContainsSubstring("solvable: yes"));
}

TEST_CASE("group iso compares a catalog total group with a descriptor") {
  CliResult yes = run({"group", "iso", "--example", "d4_center", "--spec2", "dihedral(8)"});
  CHECK(yes.code == 0);
  CHECK_THAT(yes.out, ContainsSubstring("isomorphic: yes"));

  CliResult no = run({"group", "iso", "--spec", "dihedral(8)", "--spec2", "quaternion(8)"});
  CHECK(no.code == 0);
  CHECK_THAT(no.out, ContainsSubstring("isomorphic: no"));
}

TEST_CASE("ext orbits partitions the quaternion family") {
  CliResult r = run({"ext", "orbits", "--example", "q8_center", "--format", "json"});
  CHECK(r.code == 0);
  Json j = parse_out(r);
  CHECK(j["num_classes"] == 8);
  CHECK(j["orbit_sizes"] == Json::array({1, 1, 3, 3}));
  CHECK(j["exit_code"] == 0);
}

TEST_CASE("ext split-orbits confirms split status is constant on orbits") {
  CliResult r = run({"ext", "split-orbits", "--example", "d4_center"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("0 failed"));
  CHECK_THAT(r.out, !ContainsSubstring("MIXED"));
}

TEST_CASE("ext analyze emits a parseable summary") {
  CliResult r = run({"ext", "analyze", "--example", "s3_a3", "--format", "json"});
  CHECK(r.code == 0);
  Json j = parse_out(r);
  CHECK(j["summary"]["s_order"] == 2);
  CHECK(j["summary"]["h2"] == 1);
  CHECK(j["summary"]["relaut_order"] == 6);
  CHECK(j["centric"] == true);
}

TEST_CASE("single verify subcommands pass on a small example") {
  for (const std::string what : {"cycle", "basic", "counting", "series", "solvability"}) {
    CliResult r = run({"verify", what, "--example", "s3_a3"});
    INFO("verify " << what << "\n" << r.out << r.err);
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("1 passed, 0 failed"));
  }
}

TEST_CASE("explicitly requesting a capped computation exits with the cap code") {
  CliResult r = run({"verify", "counting", "--example", "a5_x_z7"});
  CHECK(r.code == 3);
  CHECK_THAT(r.out, ContainsSubstring("[SKIP] counting identity"));
}

TEST_CASE("verify all over the whole catalog exits cleanly") {
  CliResult r = run({"verify", "all", "--format", "json"});
  REQUIRE(r.code == 0);
  Json j = parse_out(r);
  CHECK(j["targets"].size() == corpus_catalog().size());
  CHECK(j["summary"]["failed"] == 0);
  CHECK(j["summary"]["passed"].get<int>() > 100);
  // the order-420 entry skips only its automorphism-dependent checks
  CHECK(j["summary"]["skipped"] == 4);
  CHECK(j["exit_code"] == 0);
}

TEST_CASE("corpus list names every catalog entry") {
  CliResult text = run({"corpus", "list"});
  CHECK(text.code == 0);
  for (const ExampleDescriptor& d : corpus_catalog())
    CHECK_THAT(text.out, ContainsSubstring(d.name));
  CHECK_THAT(text.out, ContainsSubstring("[heavy]"));

  CliResult js = run({"corpus", "list", "--format", "json"});
  CHECK(js.code == 0);
  Json j = parse_out(js);
  REQUIRE(j["examples"].size() == corpus_catalog().size());
  CHECK(j["examples"][0]["name"] == corpus_catalog().front().name);
}

TEST_CASE("corpus run checks recorded invariants") {
  CliResult one = run({"corpus", "run", "--example", "z4_z2"});
  CHECK(one.code == 0);
  CHECK_THAT(one.out, ContainsSubstring("z4_z2: PASS"));
  CHECK_THAT(one.out, ContainsSubstring("0 failed"));

  CliResult js = run({"corpus", "run", "--example", "v4fiber_z2cube", "--format", "json"});
  CHECK(js.code == 0);
  Json j = parse_out(js);
  REQUIRE(j["results"].size() == 1);
  CHECK(j["results"][0]["all_pass"] == true);
  CHECK(j["summary"]["failed_entries"] == 0);
}

TEST_CASE("groups and extensions load from files") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "extauto_cli_test";
  fs::create_directories(dir);

  Group s3 = standard_group("symmetric(3)");
  fs::path jpath = dir / "s3.json";
  write_text_file(jpath.string(), group_to_json(s3).dump());
  fs::path tpath = dir / "s3.txt";
  write_text_file(tpath.string(), group_to_text(s3));

  CliResult jinfo = run({"group", "info", "--group", jpath.string()});
  CHECK(jinfo.code == 0);
  CHECK_THAT(jinfo.out, ContainsSubstring("order: 6"));

  CliResult tinfo = run({"group", "info", "--group", tpath.string()});
  CHECK(tinfo.code == 0);
  CHECK_THAT(tinfo.out, ContainsSubstring("order: 6"));

  Subgroup a3 = derived_subgroup(s3);
  std::ostringstream members;
  for (std::size_t i = 0; i < a3.members.size(); ++i)
    members << (i ? "," : "") << a3.members[i];
  CliResult cls = run({"ext", "classes", "--group", jpath.string(), "--subgroup", members.str()});
  CHECK(cls.code == 0);
  CHECK_THAT(cls.out, ContainsSubstring(": 1"));

  fs::remove_all(dir);
}

TEST_CASE("usage and input mistakes exit with the usage code") {
  CHECK(run({"ext", "analyze", "--example", "nosuch"}).code == 1);
  CHECK(run({"ext", "analyze"}).code == 1);  // no source given
  CHECK(run({"ext", "analyze", "--spec", "symmetric(3)"}).code == 1);  // no subgroup
  CHECK(run({"ext", "analyze", "--spec", "symmetric(3)", "--subgroup", "0,x"}).code == 1);
  CHECK(run({"ext", "analyze", "--spec", "symmetric(3)", "--subgroup", "0,99"}).code == 1);
  CHECK(run({"ext", "analyze", "--spec", "symmetric(3)", "--subgroup", "0,1"}).code == 1);
  CHECK(run({"group", "info", "--spec", "nonsense(3)"}).code == 1);
  CHECK(run({"group", "info", "--group", "/no/such/file"}).code == 1);
  CHECK(run({"group", "info", "--bogus"}).code == 1);
  CHECK(run({"ext", "classes", "--example", "d4_center", "--format", "yaml"}).code == 1);
  CHECK(run({"group", "aut", "--spec", "cyclic(4)", "--cap-order", "-5"}).code == 1);
  CHECK(run({}).code == 1);  // a subcommand is required
  CHECK(run({"group", "iso", "--spec", "cyclic(2)"}).code == 1);  // second group missing
}

TEST_CASE("help requests exit cleanly") {
  CliResult top = run({"--help"});
  CHECK(top.code == 0);
  CHECK_THAT(top.out, ContainsSubstring("verify"));
  CHECK(run({"verify", "--help"}).code == 0);
  CHECK(run({"ext", "classes", "--help"}).code == 0);
}

TEST_CASE("malformed group files are rejected with located messages") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "extauto_cli_bad";
  fs::create_directories(dir);
  fs::path bad = dir / "bad.txt";
  write_text_file(bad.string(), "4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n");  // truncated table
  CliResult r = run({"group", "info", "--group", bad.string()});
  CHECK(r.code == 1);
  CHECK_THAT(r.err, ContainsSubstring("input error"));
  fs::remove_all(dir);
}

TEST_CASE("JSON reports round-trip through the parser") {
  for (std::vector<std::string> args :
       {std::vector<std::string>{"group", "info", "--spec", "cyclic(6)"},
        {"group", "aut", "--spec", "dihedral(8)"},
        {"ext", "classes", "--example", "z4_z2"},
        {"ext", "orbits", "--example", "v4fiber_z4z2"},
        {"verify", "cycle", "--example", "z4_z2"},
        {"corpus", "run", "--example", "z4_z2"}}) {
    args.push_back("--format");
    args.push_back("json");
    CliResult r = run(args);
    INFO("command: " << args[0] << " " << args[1]);
    Json j = parse_out(r);  // throws on malformed output
    REQUIRE(j.is_object());
    CHECK(j["exit_code"].get<int>() == r.code);
    CHECK(j.contains("command"));
    CHECK(parse_json_text(j.dump()) == j);
  }
}
