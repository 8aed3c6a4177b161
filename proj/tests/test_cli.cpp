#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "genbase/fdalg.hpp"
#include "genbase/fixtures.hpp"
#include "genbase/laurent.hpp"
#include "genbase/potential.hpp"
#include "genbase/quiver.hpp"

using namespace genbase;
using nlohmann::json;

namespace {

std::string g_cli_path;

std::string fixtures_dir() {
#ifdef FIXTURES_DIR
  return FIXTURES_DIR;
#else
  return "fixtures";
#endif
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  out += "'";
  return out;
}

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run_cli(const std::vector<std::string>& args) {
  REQUIRE_MESSAGE(!g_cli_path.empty(), "pass the CLI binary path as the first argument");
  std::string cmd = shell_quote(g_cli_path);
  for (const std::string& a : args) cmd += " " + shell_quote(a);
  cmd += " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

json run_json(const std::vector<std::string>& args, int want_status = 0) {
  RunResult r = run_cli(args);
  CAPTURE(r.out);
  REQUIRE(r.status == want_status);
  return json::parse(r.out);
}

} // namespace

TEST_CASE("fixture registry") {
  std::vector<std::string> names = fixture_names();
  CHECK(names == std::vector<std::string>{"a2", "a3", "labardini", "a2-frozen"});

  Fixture a2 = builtin_fixture("a2");
  CHECK(a2.quiver.n == 2);
  CHECK(a2.quiver.m == 2);
  CHECK(fixture_algebra(a2)->dim() == 3);

  Fixture a3 = builtin_fixture("a3");
  CHECK(a3.quiver.n == 3);
  CHECK(fixture_algebra(a3)->dim() == 6);

  Fixture frozen = builtin_fixture("a2-frozen");
  CHECK(frozen.quiver.n == 2);
  CHECK(frozen.quiver.m == 1);
  CHECK(frozen.quiver.is_frozen(2));

  CHECK_THROWS_AS(builtin_fixture("e8"), std::invalid_argument);
}

TEST_CASE("fixture files match the built-in registry") {
  for (const std::string& name : fixture_names()) {
    Fixture disk = load_fixture(fixtures_dir() + "/" + name + ".json");
    Fixture mem = builtin_fixture(name);
    CHECK(fixture_to_json(disk) == fixture_to_json(mem));
  }
}

TEST_CASE("labardini backends present the same algebra") {
  Fixture f = builtin_fixture("labardini");
  REQUIRE(f.potential.has_value());
  REQUIRE(f.relations.has_value());

  AlgebraPtr from_potential = fixture_algebra(f);
  AlgebraPtr from_rels = fixture_algebra_relations(f);
  CHECK(from_potential->dim() == 36);
  CHECK(from_rels->dim() == 36);

  // Each backend's defining relations vanish in the other's quotient.
  CHECK(check_relations(*from_rels, *f.potential));
  for (const PathCombination& rel : *f.relations) {
    bool zero = true;
    for (const Rat& c : from_potential->reduce(rel))
      if (c != 0) zero = false;
    CHECK(zero);
  }
}

TEST_CASE("bare quiver files load as fixtures") {
  std::string path = "/tmp/genbase_bare_quiver.json";
  {
    std::ofstream out(path);
    out << quiver_to_json(builtin_fixture("a2").quiver).dump() << "\n";
  }
  Fixture f = load_fixture(path);
  CHECK(f.quiver.n == 2);
  CHECK(!f.potential.has_value());
  CHECK(!f.relations.has_value());
  CHECK(fixture_algebra(f)->dim() == 3);

  Fixture resolved = resolve_fixture(path);
  CHECK(fixture_to_json(resolved) == fixture_to_json(f));
  CHECK(fixture_to_json(resolve_fixture("a2")) == fixture_to_json(builtin_fixture("a2")));
  CHECK_THROWS(resolve_fixture("/tmp/genbase_no_such_file.json"));
}

TEST_CASE("cli mutate matches in-process mutation") {
  json one = run_json({"mutate", "a2", "1"});
  IceQuiver q1 = quiver_from_json(one);
  CHECK(exchange_matrix(q1) == exchange_matrix(mutate(builtin_fixture("a2").quiver, 1)));

  json twice = run_json({"mutate", "a2", "1 1"});
  CHECK(exchange_matrix(quiver_from_json(twice)) == exchange_matrix(builtin_fixture("a2").quiver));

  json lab = run_json({"mutate", "labardini", "1 2 3"});
  IceQuiver expect = builtin_fixture("labardini").quiver;
  for (int v : {1, 2, 3}) expect = mutate(expect, v);
  CHECK(exchange_matrix(quiver_from_json(lab)) == exchange_matrix(expect));

  json from_file = run_json({"mutate", fixtures_dir() + "/a2.json", "1"});
  CHECK(from_file == one);
}

TEST_CASE("cli seed goldens") {
  json s1 = run_json({"seed", "a2", "1"});
  CHECK(s1["vars"] == json::array({"x1^-1*x2 + x1^-1", "x2"}));
  CHECK(s1["history"] == json::array({1}));

  json s0 = run_json({"seed", "a2", ""});
  CHECK(s0["vars"] == json::array({"x1", "x2"}));
  CHECK(s0["history"] == json::array());

  json s5 = run_json({"seed", "a2", "1 2 1 2 1"});
  CHECK(s5["vars"] == json::array({"x2", "x1"}));
}

TEST_CASE("cli generic-basis goldens") {
  json monomial = run_json({"generic-basis", "labardini", "(2,0,0)"});
  CHECK(monomial["value"] == "x1^2");
  CHECK(monomial["fixture"] == "labardini");

  json neg = run_json({"generic-basis", "labardini", "(1,0,-1)"});
  CHECK(neg["value"] == "x1*x3^-1 + x1^-1*x2^2*x3^-1 + x1^-1*x3");
  CHECK(neg["stats"]["min_kernel_dim"] == json::array({1, 0, 1}));
  CHECK(neg["stats"]["stable"] == true);

  // Independent recomputations with different seeds agree.
  json a = run_json({"generic-basis", "a2", "(-1,-1)", "--seed", "3"});
  json b = run_json({"generic-basis", "a2", "(-1,-1)", "--seed", "17"});
  CHECK(a["value"] == b["value"]);
  LaurentPoly got = parse_laurent(a["value"].get<std::string>(), 2);
  LaurentPoly want =
      parse_laurent("x1*x2^-2 + x1^-1*x2^-2 + 2*x2^-2 + x2^-1 + x1^-1*x2^-1", 2);
  CHECK(got == want);

  // Reduced deltas over the mutable part are lifted.
  json lifted = run_json({"generic-basis", "a2-frozen", "(-1)"});
  CHECK(lifted["lifted_delta"]["g"] == json::array({-1, 1}));
  CHECK(lifted["value"] == "x1^-1*x2 + x1^-1");
}

TEST_CASE("cli runs are deterministic byte for byte") {
  RunResult a = run_cli({"generic-basis", "labardini", "(1,0,-1)", "--seed", "42"});
  RunResult b = run_cli({"generic-basis", "labardini", "(1,0,-1)", "--seed", "42"});
  CHECK(a.status == 0);
  CHECK(a.status == b.status);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli({"mutate", "a2", "5"}).status == 2);
  CHECK(run_cli({"mutate", "a2", "x"}).status == 2);
  CHECK(run_cli({"seed", "a2-frozen", "2"}).status == 2);
  CHECK(run_cli({"mutate", "/tmp/genbase_no_such_file.json", "1"}).status == 1);
  CHECK(run_cli({"generic-basis", "a2", "1,2,3"}).status == 2);
  CHECK(run_cli({"verify", "nonsense"}).status == 2);

  std::string bad = "/tmp/genbase_bad_fixture.json";
  {
    std::ofstream out(bad);
    out << "{\"broken\n";
  }
  CHECK(run_cli({"mutate", bad, "1"}).status == 1);

  json diag = run_json({"generic-basis", "a2-frozen", "(-1)", "--trials", "1"}, 3);
  CHECK(diag["error"] == "stabilization");
  json diag_full = run_json({"generic-basis", "a2", "(-1,-1)", "--trials", "1"}, 3);
  CHECK(diag_full["error"] == "stabilization");
  CHECK(diag_full["stats"]["stable"] == false);
}

TEST_CASE("cli verify suites") {
  json vacuous = run_json({"verify", "invariants", "--only", ""});
  CHECK(vacuous["pass"] == true);
  CHECK(vacuous["checks"] == json::array());

  json inv = run_json({"verify", "invariants"});
  CHECK(inv["pass"] == true);
  std::set<std::string> names;
  for (const json& c : inv["checks"]) {
    CHECK(c["pass"] == true);
    names.insert(c["name"].get<std::string>());
  }
  CHECK(names.count("involution:a2") == 1);
  CHECK(names.count("delta-sum:labardini") == 1);
  CHECK(names.count("lift-project:a2-frozen") == 1);

  json ind = run_json({"verify", "independence"});
  CHECK(ind["pass"] == true);
  CHECK(ind["checks"][0]["rank"] == 9);
  CHECK(ind["checks"][0]["count"] == 9);

  json worked = run_json({"verify", "worked-example"});
  CHECK(worked["pass"] == true);
  REQUIRE(worked["checks"].size() == 3);
  CHECK(worked["checks"][2]["name"] == "subrepresentation-census");
  CHECK(worked["checks"][2]["nonzero"].size() == 4);
}

int main(int argc, char** argv) {
  int first_doctest_arg = 1;
  if (argc > 1 && argv[1][0] != '-') {
    g_cli_path = argv[1];
    first_doctest_arg = 2;
  }
  doctest::Context ctx;
  ctx.applyCommandLine(argc - first_doctest_arg + 1, argv + first_doctest_arg - 1);
  return ctx.run();
}
