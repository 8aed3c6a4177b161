// Command line interface for the genbase library.
//
// Subcommands:
//   mutate <quiver> <vertices>        quiver mutation at a sequence of vertices
//   seed <quiver> <vertices>          seed mutation, tracking cluster variables
//   generic-basis <fixture> <delta>   one generic basis element
//   verify <suite>                    self-check suites with a JSON report
//
// Exit codes: 0 success, 1 failure (parse errors, failed checks), 2 usage
// errors (bad vertices, malformed arguments), 3 non-stabilizing sampling.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "genbase/fdalg.hpp"
#include "genbase/fixtures.hpp"
#include "genbase/genbasis.hpp"
#include "genbase/homalg.hpp"
#include "genbase/laurent.hpp"
#include "genbase/modrep.hpp"
#include "genbase/quiver.hpp"
#include "genbase/seed.hpp"

namespace {

using namespace genbase;
using nlohmann::json;

// Problems with the invocation itself; reported on stderr with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  uint64_t seed = 0;
  int trials = 8;
  int height = 97;
  std::vector<uint32_t> primes = {2, 3, 5, 7};
  int bound = -1; // overrides the fixture reduction bound when non-negative
  bool pretty = false;
};

void print_json(const json& j, bool pretty) {
  std::cout << (pretty ? j.dump(2) : j.dump()) << "\n";
}

std::vector<std::string> split_tokens(std::string text) {
  for (char& c : text)
    if (c == ',' || c == ';' || c == '(' || c == ')' || c == '[' || c == ']') c = ' ';
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

long long int_token(const std::string& tok, const std::string& what) {
  try {
    size_t used = 0;
    long long v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + ": expected an integer, got \"" + tok + "\"");
  }
}

std::vector<int> parse_vertices(const std::string& text) {
  std::vector<int> out;
  for (const std::string& tok : split_tokens(text))
    out.push_back(static_cast<int>(int_token(tok, "vertex list")));
  return out;
}

DeltaVector parse_delta_arg(const std::string& text) {
  DeltaVector d;
  for (const std::string& tok : split_tokens(text)) d.g.push_back(Int(int_token(tok, "delta")));
  if (d.g.empty()) throw UsageError("delta: no entries given");
  return d;
}

std::vector<uint32_t> parse_primes(const std::string& text) {
  std::vector<uint32_t> out;
  for (const std::string& tok : split_tokens(text)) {
    long long v = int_token(tok, "primes");
    if (v < 2) throw UsageError("primes: entries must be at least 2");
    out.push_back(static_cast<uint32_t>(v));
  }
  if (out.empty()) throw UsageError("primes: no entries given");
  return out;
}

Fixture load_fixture_arg(const std::string& ref, const Options& opt) {
  Fixture f = resolve_fixture(ref);
  if (opt.bound >= 0) f.bound = opt.bound;
  return f;
}

std::string fixture_label(const Fixture& f, const std::string& ref) {
  return f.name.empty() ? ref : f.name;
}

int cmd_mutate(const std::string& ref, const std::string& vertices, const Options& opt) {
  Fixture f = load_fixture_arg(ref, opt);
  IceQuiver q = f.quiver;
  try {
    for (int v : parse_vertices(vertices)) q = mutate(q, v);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  print_json(quiver_to_json(q), opt.pretty);
  return 0;
}

int cmd_seed(const std::string& ref, const std::string& vertices, const Options& opt) {
  Fixture f = load_fixture_arg(ref, opt);
  Seed s = initial_seed(f.quiver);
  try {
    for (int v : parse_vertices(vertices)) s = mutate_seed(s, v);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  print_json(seed_to_json(s), opt.pretty);
  return 0;
}

int cmd_generic_basis(const std::string& ref, const std::string& delta_text, const Options& opt) {
  Fixture f = load_fixture_arg(ref, opt);
  const IceQuiver& q = f.quiver;
  AlgebraPtr alg = fixture_algebra(f);

  DeltaVector given = parse_delta_arg(delta_text);
  int len = static_cast<int>(given.g.size());
  bool lifted = false;
  DeltaVector d = given;
  if (len == q.m && q.m < q.n) {
    d = lift_frozen(given, alg, opt.trials, opt.seed, opt.height);
    lifted = true;
  } else if (len != q.n) {
    throw UsageError("delta: expected " + std::to_string(q.n) +
                     (q.m < q.n ? " or " + std::to_string(q.m) : "") + " entries, got " +
                     std::to_string(len));
  }

  GenericStats stats;
  LaurentPoly value = generic_basis_element(alg, d, opt.trials, opt.seed, &stats, opt.height);
  if (!stats.stable) {
    print_json(json{{"error", "stabilization"},
                    {"message", "generic-basis: the sampled minimum still improved in the last "
                                "round; raise --trials"},
                    {"stats", stats_to_json(stats)}},
               opt.pretty);
    return 3;
  }

  json out{{"fixture", fixture_label(f, ref)},
           {"delta", delta_to_json(given)},
           {"value", to_string(value)},
           {"stats", stats_to_json(stats)}};
  if (lifted) out["lifted_delta"] = delta_to_json(d);
  print_json(out, opt.pretty);
  return 0;
}

// ---------------------------------------------------------------------------
// verify suites

struct Check {
  std::string name;
  std::string fixture;
  bool pass = false;
  json detail = json::object();
};

void for_each_delta(int n, Int lo, Int hi, const std::function<void(const DeltaVector&)>& fn) {
  DeltaVector d;
  d.g.assign(n, lo);
  while (true) {
    fn(d);
    int i = 0;
    while (i < n && d.g[i] == hi) d.g[i++] = lo;
    if (i == n) return;
    d.g[i] += 1;
  }
}

Int delta_sum(const DeltaVector& d) {
  return std::accumulate(d.g.begin(), d.g.end(), Int(0));
}

std::vector<Check> checks_worked_example(const Options& opt) {
  std::vector<Check> out;
  Fixture f = builtin_fixture("labardini");
  AlgebraPtr alg = fixture_algebra(f);
  DeltaVector d{{Int(1), Int(0), Int(-1)}};

  GenericStats stats;
  LaurentPoly value = generic_basis_element(alg, d, opt.trials, opt.seed, &stats, opt.height);
  LaurentPoly expected = parse_laurent("x1*x3^-1 + x1^-1*x2^2*x3^-1 + x1^-1*x3", 3);
  out.push_back({"value",
                 "labardini",
                 value == expected,
                 json{{"value", to_string(value)}, {"expected", to_string(expected)}}});

  std::vector<int> want_kernel{1, 0, 1};
  out.push_back({"kernel-dimension",
                 "labardini",
                 stats.min_kernel_dim == want_kernel && stats.stable,
                 json{{"kernel", stats.min_kernel_dim}, {"expected", want_kernel}}});

  auto [complex, sample_stats] = generic_sample(alg, d, opt.trials, opt.seed, opt.height);
  Module ker = integral_form(kernel(nu_morphism(complex)).first);
  std::set<std::vector<int>> want{{0, 0, 0}, {0, 0, 1}, {1, 0, 1}};
  json census = json::object();
  bool census_ok = ker.dims == want_kernel;
  for (uint32_t p : opt.primes) {
    std::set<std::vector<int>> seen;
    json rows = json::array();
    if (census_ok) {
      ModuleP kp = reduce_mod_p(ker, p);
      for_each_delta(static_cast<int>(ker.dims.size()), 0, 1, [&](const DeltaVector& ev) {
        std::vector<int> e;
        for (const Int& x : ev.g) e.push_back(static_cast<int>(x));
        bool fits = true;
        for (size_t i = 0; i < e.size(); ++i)
          if (e[i] > ker.dims[i]) fits = false;
        if (!fits) return;
        Int c = grassmann_count(kp, e);
        if (c != 0) {
          seen.insert(e);
          rows.push_back(json{{"e", e}, {"count", c.convert_to<long long>()}});
        }
      });
    }
    census[std::to_string(p)] = rows;
    if (seen != want) census_ok = false;
  }
  out.push_back({"subrepresentation-census", "labardini", census_ok,
                 json{{"kernel_dims", ker.dims}, {"nonzero", census}}});
  return out;
}

std::vector<Check> checks_invariants(const Options& opt, const std::set<std::string>& only) {
  std::vector<Check> out;
  for (const std::string& name : fixture_names()) {
    if (!only.count(name)) continue;
    Fixture f = builtin_fixture(name);
    const IceQuiver& q = f.quiver;
    long failures = 0;
    long cases = 0;
    std::vector<IceQuiver> mutated;
    for (int i = 1; i <= q.m; ++i) mutated.push_back(mutate(q, i));
    for_each_delta(q.n, -2, 2, [&](const DeltaVector& d) {
      for (int i = 1; i <= q.m; ++i) {
        ++cases;
        if (mutate_delta(mutate_delta(d, i, q), i, mutated[static_cast<size_t>(i) - 1]) != d)
          ++failures;
      }
    });
    out.push_back({"involution:" + name, name, failures == 0,
                   json{{"cases", cases}, {"failures", failures}}});
  }

  if (only.count("labardini")) {
    Fixture f = builtin_fixture("labardini");
    const IceQuiver& q = f.quiver;
    long failures = 0;
    long cases = 0;
    for_each_delta(q.n, -3, 3, [&](const DeltaVector& d) {
      for (int i = 1; i <= q.m; ++i) {
        ++cases;
        if (delta_sum(mutate_delta(d, i, q)) != delta_sum(d)) ++failures;
      }
    });
    out.push_back({"delta-sum:labardini", "labardini", failures == 0,
                   json{{"cases", cases}, {"failures", failures}}});
  }

  if (only.count("a2-frozen")) {
    Fixture f = builtin_fixture("a2-frozen");
    AlgebraPtr alg = fixture_algebra(f);
    long failures = 0;
    long cases = 0;
    for (Int v = -2; v <= 2; ++v) {
      DeltaVector dbar{{v}};
      DeltaVector full = lift_frozen(dbar, alg, opt.trials, opt.seed, opt.height);
      ++cases;
      if (project_frozen(full, f.quiver) != dbar) ++failures;
    }
    out.push_back({"lift-project:a2-frozen", "a2-frozen", failures == 0,
                   json{{"cases", cases}, {"failures", failures}}});
  }
  return out;
}

bool quiver_is_acyclic(const IceQuiver& q) {
  std::vector<int> indeg(static_cast<size_t>(q.n), 0);
  for (const Arrow& a : q.arrows) ++indeg[static_cast<size_t>(a.tgt) - 1];
  std::vector<int> ready;
  for (int v = 1; v <= q.n; ++v)
    if (indeg[static_cast<size_t>(v) - 1] == 0) ready.push_back(v);
  int seen = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++seen;
    for (const Arrow& a : q.arrows)
      if (a.src == v && --indeg[static_cast<size_t>(a.tgt) - 1] == 0) ready.push_back(a.tgt);
  }
  return seen == q.n;
}

std::vector<Check> checks_mutation_commutes(const Options& opt, const std::set<std::string>& only) {
  std::vector<Check> out;
  struct Job {
    std::string name;
    Int lo, hi;
  };
  for (const Job& job : {Job{"a2", -2, 2}, Job{"a3", -1, 1}}) {
    if (!only.count(job.name)) continue;
    Fixture f = builtin_fixture(job.name);
    const IceQuiver& q = f.quiver;
    AlgebraPtr alg = fixture_algebra(f);
    long failures = 0;
    long cases = 0;
    std::vector<int> skipped;
    for (int k = 1; k <= q.m; ++k) {
      IceQuiver qk = mutate(q, k);
      if (!quiver_is_acyclic(qk)) {
        // The comparison needs a path algebra on the mutated side too.
        skipped.push_back(k);
        continue;
      }
      AlgebraPtr algk = from_relations(qk, {}, f.bound);
      Seed sk = mutate_seed(initial_seed(q), k);
      std::vector<FractionExpr> images;
      for (const LaurentPoly& v : sk.vars) images.push_back(frac_of(v));
      for_each_delta(q.n, job.lo, job.hi, [&](const DeltaVector& d) {
        ++cases;
        LaurentPoly direct = generic_basis_element(alg, d, opt.trials, opt.seed, nullptr,
                                                   opt.height);
        DeltaVector dk = mutate_delta(d, k, q);
        LaurentPoly other = generic_basis_element(algk, dk, opt.trials, opt.seed, nullptr,
                                                  opt.height);
        if (!frac_eq(substitute(other, images), frac_of(direct))) ++failures;
      });
    }
    out.push_back({"commute:" + job.name, job.name, failures == 0 && cases > 0,
                   json{{"cases", cases}, {"failures", failures}, {"skipped_vertices", skipped}}});
  }
  return out;
}

std::vector<Check> checks_independence(const Options& opt, const std::set<std::string>& only) {
  std::vector<Check> out;
  if (!only.count("a2")) return out;
  Fixture f = builtin_fixture("a2");
  AlgebraPtr alg = fixture_algebra(f);
  std::vector<LaurentPoly> values;
  for_each_delta(f.quiver.n, -1, 1, [&](const DeltaVector& d) {
    values.push_back(generic_basis_element(alg, d, opt.trials, opt.seed, nullptr, opt.height));
  });
  // Greedy prefix rank: keep each value that stays independent of those kept.
  std::vector<LaurentPoly> kept;
  for (const LaurentPoly& v : values) {
    kept.push_back(v);
    if (!linear_independence_check(kept)) kept.pop_back();
  }
  int rank = static_cast<int>(kept.size());
  int count = static_cast<int>(values.size());
  out.push_back({"independence:a2", "a2", rank == count,
                 json{{"count", count}, {"rank", rank}}});
  return out;
}

int cmd_verify(const std::string& suite, const std::optional<std::string>& only_arg,
               const Options& opt) {
  std::set<std::string> only;
  if (only_arg) {
    for (const std::string& tok : split_tokens(*only_arg)) only.insert(tok);
  } else {
    for (const std::string& name : fixture_names()) only.insert(name);
  }

  std::vector<Check> checks;
  if (suite == "worked-example") {
    if (only.count("labardini")) checks = checks_worked_example(opt);
  } else if (suite == "invariants") {
    checks = checks_invariants(opt, only);
  } else if (suite == "mutation-commutes-acyclic") {
    checks = checks_mutation_commutes(opt, only);
  } else if (suite == "independence") {
    checks = checks_independence(opt, only);
  } else {
    throw UsageError("unknown suite \"" + suite +
                     "\"; expected worked-example, invariants, mutation-commutes-acyclic, or "
                     "independence");
  }

  bool all = true;
  json rows = json::array();
  for (const Check& c : checks) {
    all = all && c.pass;
    json row{{"name", c.name}, {"fixture", c.fixture}, {"pass", c.pass}};
    for (auto& [k, v] : c.detail.items()) row[k] = v;
    rows.push_back(row);
  }
  json report{{"suite", suite}, {"checks", rows}, {"pass", all}};
  print_json(report, opt.pretty);
  return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"generic bases of cluster algebras from quivers with potential"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  std::string primes_text;
  app.add_option("--seed", opt.seed, "random seed for sampling");
  app.add_option("--trials", opt.trials, "samples per sampling round")->check(CLI::PositiveNumber);
  app.add_option("--height", opt.height, "coordinate height bound for samples")
      ->check(CLI::PositiveNumber);
  app.add_option("--primes", primes_text, "primes for subrepresentation censuses");
  app.add_option("--bound", opt.bound, "override the fixture path length bound");
  app.add_flag("--json", "emit JSON (always on; accepted for compatibility)");
  app.add_flag("--pretty", opt.pretty, "indent JSON output");

  std::string quiver_ref, vertices, fixture_ref, delta_text, suite;
  std::string only_value;

  CLI::App* mutate_cmd = app.add_subcommand("mutate", "mutate a quiver at a vertex sequence");
  mutate_cmd->add_option("quiver", quiver_ref, "fixture name or quiver JSON file")->required();
  mutate_cmd->add_option("vertices", vertices, "vertex sequence, e.g. \"1 2 1\"");

  CLI::App* seed_cmd = app.add_subcommand("seed", "mutate a seed at a vertex sequence");
  seed_cmd->add_option("quiver", quiver_ref, "fixture name or quiver JSON file")->required();
  seed_cmd->add_option("vertices", vertices, "vertex sequence, e.g. \"1 2 1\"");

  CLI::App* basis_cmd = app.add_subcommand("generic-basis", "compute one generic basis element");
  basis_cmd->add_option("fixture", fixture_ref, "fixture name or fixture JSON file")->required();
  basis_cmd->add_option("delta", delta_text, "delta vector, e.g. \"(1,0,-1)\"")->required();

  CLI::App* verify_cmd = app.add_subcommand("verify", "run a self-check suite");
  verify_cmd->add_option("suite", suite, "worked-example, invariants, "
                                         "mutation-commutes-acyclic, or independence")
      ->required();
  CLI::Option* only_opt =
      verify_cmd->add_option("--only", only_value, "comma separated fixture filter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (!primes_text.empty()) opt.primes = parse_primes(primes_text);
    if (app.got_subcommand(mutate_cmd)) return cmd_mutate(quiver_ref, vertices, opt);
    if (app.got_subcommand(seed_cmd)) return cmd_seed(quiver_ref, vertices, opt);
    if (app.got_subcommand(basis_cmd)) return cmd_generic_basis(fixture_ref, delta_text, opt);
    std::optional<std::string> only_arg;
    if (only_opt->count() > 0) only_arg = only_value;
    return cmd_verify(suite, only_arg, opt);
  } catch (const StabilizationError& e) {
    print_json(json{{"error", "stabilization"}, {"message", e.what()}}, opt.pretty);
    return 3;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
