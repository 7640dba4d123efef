// Acceptance run: one PASS/FAIL line per criterion.
//
// Usage: acceptance <path-to-agm-verify>
//
// The exit status is 0 when every criterion's observed status equals its
// entry in `expected` below, so ctest flags any change in either direction.

#include "support.hpp"

#include "agm/json_io.hpp"
#include "agm/objects.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

using namespace agm;
using namespace testing_support;
namespace fs = std::filesystem;

namespace {

/// Collects problems for one criterion; the criterion passes when none were recorded.
struct Outcome {
  std::vector<std::string> problems;
  std::size_t checks = 0;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) problems.push_back(what);
  }
  bool pass() const { return problems.empty(); }
};

std::string base_id(const std::string& id) {
  std::string s = id.substr(id.find('/') + 1);
  return s.substr(0, s.find('['));
}

void absorb(Outcome& o, const SuiteReport& r, const std::string& label) {
  std::map<std::string, std::size_t> fails;
  for (const auto& c : r.results) {
    ++o.checks;
    if (c.pass) continue;
    if (!c.witness) o.problems.push_back(label + ": " + c.check_id + " failed without a witness");
    ++fails[c.check_id.substr(0, c.check_id.find('/') + 1) + base_id(c.check_id)];
  }
  for (const auto& [id, k] : fails) o.problems.push_back(label + ": " + id + " failed " + std::to_string(k) + "x");
}

// ---------------------------------------------------------------------------

Outcome generic_invariance() {
  Outcome o;
  for (std::size_t n : {2u, 3u}) {
    const SuiteReport r = run_suite("general", n, 25, 1);
    absorb(o, r, "general N=" + std::to_string(n));
    std::size_t fam = 0;
    for (const auto& c : r.results) fam += base_id(c.check_id) == "W_fam";
    o.expect(fam >= 25 * 8, "fewer than 8 family combinations per scenario");
  }
  return o;
}

Outcome identity_suite() {
  Outcome o;
  for (std::size_t n : {2u, 3u}) absorb(o, run_suite("consistency", n, 10, 1), "consistency N=" + std::to_string(n));
  return o;
}

Outcome pi3_invariance() {
  Outcome o;
  for (const std::string suite : {"pi3k1", "pi3k2"})
    for (std::size_t n : {2u, 3u, 4u}) absorb(o, run_suite(suite, n, 25, 1), suite + " N=" + std::to_string(n));
  return o;
}

Outcome degenerate_reductions() {
  Outcome o;
  for (int kind : {1, 2})
    for (auto d : {Pi3Degeneracy::zero_sigma, Pi3Degeneracy::zero_phi})
      for (std::size_t n : {2u, 3u, 4u})
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
          const Pi3Instance p = instantiate_pi3(gen_pi3_scenario(n, 2, kind, seed, d));
          const std::string tag = " kind=" + std::to_string(kind) + " N=" + std::to_string(n) + " seed=" +
                                  std::to_string(seed) + (d == Pi3Degeneracy::zero_sigma ? " sigma=0" : " phi=0");
          o.expect(pi3_thomas(p.L, p.m) == direct_thomas_projective(p.L.coefficients()), "thomas" + tag);
          o.expect(pi3_weyl_derived(p.L, p.m) == direct_weyl_projective(p.L.coefficients()), "weyl" + tag);
        }
  return o;
}

Outcome sensitivity() {
  Outcome o;
  for (const std::string suite : {"pi3k1", "pi3k2"})
    for (std::size_t n : {2u, 3u, 4u})
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const Scenario clean = gen_pi3_scenario(n, 2, suite == "pi3k1" ? 1 : 2, seed);
        std::vector<CheckResult> base;
        pi3_checks(clean, base, suite + "/");
        // Perturb a component chosen from the seed, with a varying delta.
        Sabotage sab;
        sab.index = {std::size_t(seed) % n, std::size_t(seed / 2) % n, std::size_t(seed / 3 + 1) % n};
        sab.delta = frac(long(seed % 3) + 1, long(seed % 2) + 1) * (seed % 2 ? 1 : -1);
        Scenario bad = clean;
        apply_sabotage(bad, sab);
        std::vector<CheckResult> hit;
        pi3_checks(bad, hit, suite + "/");
        bool caught = false;
        for (std::size_t k = 0; k < hit.size() && k < base.size(); ++k)
          caught |= base[k].pass && !hit[k].pass && hit[k].witness.has_value();
        o.expect(caught, suite + " N=" + std::to_string(n) + " seed=" + std::to_string(seed) +
                             ": perturbation not caught by a check that passes unperturbed");
      }
  return o;
}

Outcome oracle_agreement() {
  Outcome o;
  Gen g(2024);
  for (std::size_t n : {2u, 3u})
    for (int t = 0; t < 10; ++t) {
      const std::string tag = " N=" + std::to_string(n) + " #" + std::to_string(t);
      const TensorGrid a = g.grid(n, 1, 2, 2), b = g.grid(n, 1, 1, 2);
      o.expect(contract(a, b, {{0, 1}, {2, 0}}) == naive_contract(a, b, {{0, 1}, {2, 0}}), "contract" + tag);
      o.expect(contract(a, b, {{1, 0}}) == naive_contract(a, b, {{1, 0}}), "contract" + tag);
      const Connection c = g.connection(n, 2);
      const TensorGrid r = curvature(c);
      o.expect(r == naive_curvature(c.coefficients()), "curvature" + tag);
      o.expect(ricci(c) == naive_ricci(r), "ricci" + tag);
    }
  return o;
}

// ---------------------------------------------------------------------------
// CLI contract via subprocesses

std::string quote(const std::string& s) { return "'" + s + "'"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli {
 public:
  Cli(std::string exe, fs::path dir) : exe_(std::move(exe)), dir_(std::move(dir)) {}

  /// Runs the tool with `args`; stdout and stderr land in out() and err().
  int run(const std::string& args) {
    const std::string cmd = quote(exe_) + " " + args + " >" + quote((dir_ / "stdout").string()) + " 2>" +
                            quote((dir_ / "stderr").string());
    const int status = std::system(cmd.c_str());
    out_ = slurp(dir_ / "stdout");
    err_ = slurp(dir_ / "stderr");
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  const std::string& out() const { return out_; }
  const std::string& err() const { return err_; }
  std::string path(const std::string& name) const { return quote((dir_ / name).string()); }
  fs::path file(const std::string& name) const { return dir_ / name; }

 private:
  std::string exe_;
  fs::path dir_;
  std::string out_, err_;
};

bool report_shape_ok(nlohmann::json j) {
  if (!j.is_object() || !j["suite"].is_string() || !j["dimension"].is_number_unsigned() ||
      !j["trials"].is_number_unsigned() || !j["results"].is_array() || !j["summary"]["pass"].is_number_unsigned() ||
      !j["summary"]["fail"].is_number_unsigned())
    return false;
  std::size_t pass = 0, fail = 0;
  for (auto e : j["results"]) {
    if (!e["check_id"].is_string() || !e["seed"].is_number_unsigned() || !e["invariance"].is_string()) return false;
    if (e["status"] == "pass") {
      ++pass;
      if (e.contains("witness")) return false;
    } else if (e["status"] == "fail") {
      ++fail;
      const auto& w = e["witness"];
      if (!w["index"].is_array() || !w["unbarred"].is_string() || !w["barred"].is_string() || !w["point"].is_array())
        return false;
    } else {
      return false;
    }
  }
  return pass == j["summary"]["pass"] && fail == j["summary"]["fail"];
}

Outcome cli_contract(const std::string& exe) {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("agm_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  Cli cli(exe, dir);

  for (const std::string kind : {"general", "pi3k1", "pi3k2"}) {
    o.expect(cli.run("gen --dim 3 --degree 2 --kind " + kind + " --seed 5 --out " + cli.path("a.json")) == 0,
             "gen " + kind + " exit code");
    o.expect(cli.run("gen --dim 3 --degree 2 --kind " + kind + " --seed 5 --out " + cli.path("b.json")) == 0,
             "gen " + kind + " exit code");
    const std::string a = slurp(cli.file("a.json"));
    o.expect(!a.empty() && a == slurp(cli.file("b.json")), "gen " + kind + " not byte-identical for the same seed");
    try {
      const Scenario s = load_scenario(cli.file("a.json").string());
      o.expect(scenario_to_string(s) == a, "gen " + kind + " does not round-trip");
      const Scenario ref = kind == "general" ? gen_general_scenario(3, 2, 5)
                                             : gen_pi3_scenario(3, 2, kind == "pi3k1" ? 1 : 2, 5);
      o.expect(same_scenario(s, ref), "gen " + kind + " differs from the in-memory scenario");
    } catch (const std::exception& e) {
      o.expect(false, "gen " + kind + " output does not load: " + e.what());
    }
  }
  o.expect(cli.run("gen --kind pi3k3 --out " + cli.path("c.json")) == 2, "invalid kind must exit 2");
  o.expect(cli.run("gen --kind general --out " + cli.path("no/such/dir/c.json")) != 0, "unwritable output must fail");

  o.expect(cli.run("check --suite general --dim 2 --trials 3 --seed 1 --report " + cli.path("r.json")) == 0,
           "clean general check must exit 0");
  try {
    auto j = nlohmann::json::parse(slurp(cli.file("r.json")));
    o.expect(report_shape_ok(j) && j["summary"]["fail"] == 0, "clean report shape");
  } catch (const std::exception& e) {
    o.expect(false, std::string("clean report does not parse: ") + e.what());
  }
  o.expect(cli.run("check --suite general --scenario " + cli.path("missing.json")) == 2, "missing file must exit 2");
  o.expect(cli.run("check --suite nope --dim 2") == 2, "unknown suite must exit 2");

  {
    Scenario s = gen_general_scenario(2, 2, 3);
    apply_sabotage(s, Sabotage{});
    save_text(cli.file("sab.json").string(), scenario_to_string(s));
    o.expect(cli.run("check --scenario " + cli.path("sab.json") + " --report " + cli.path("sab_report.json")) == 1,
             "sabotaged scenario must exit 1");
    try {
      auto j = nlohmann::json::parse(slurp(cli.file("sab_report.json")));
      bool witness = false;
      for (const auto& e : j["results"]) witness |= e["status"] == "fail" && e.contains("witness");
      o.expect(report_shape_ok(j) && witness, "sabotaged report lacks a witness");
    } catch (const std::exception& e) {
      o.expect(false, std::string("sabotaged report does not parse: ") + e.what());
    }
    o.expect(cli.run("check --scenario " + cli.path("sab.json") + " --format text") == 1 &&
                 cli.out().find("FAIL ") != std::string::npos && cli.out().find("index=[") != std::string::npos,
             "text report of sabotaged scenario");
  }

  {
    auto j = to_json(gen_general_scenario(2, 1, 1));
    j["mapping"]["tau"]["components"][0]["terms"] = nlohmann::json::array({{{"exps", {0, 0}}, {"coef", "x"}}});
    save_text(cli.file("bad.json").string(), j.dump());
    o.expect(cli.run("check --scenario " + cli.path("bad.json")) == 2 &&
                 cli.err().find("$.mapping.tau.components[0].terms[0].coef") != std::string::npos,
             "malformed scenario must exit 2 naming the field");
  }

  {
    Scenario flat = gen_general_scenario(3, 2, 4);
    flat.L = Connection(TensorGrid::of_valence(3, 1, 2));
    flat.fc = FamilyCoefficients{};
    save_text(cli.file("flat.json").string(), scenario_to_string(flat));
    o.expect(cli.run("dump --scenario " + cli.path("flat.json") + " --object R --format json") == 0,
             "dump R exit code");
    bool zero = true;
    const auto dumped = nlohmann::json::parse(cli.out());
    for (const auto& e : dumped.at("components")) zero &= e.at("value").at("terms").empty();
    o.expect(zero, "R of a flat connection must be zero");

    Scenario s = gen_general_scenario(3, 2, 6);
    s.fc = FamilyCoefficients{};
    save_text(cli.file("fc0.json").string(), scenario_to_string(s));
    cli.run("dump --scenario " + cli.path("fc0.json") + " --object R --format text");
    const std::string r = cli.out();
    cli.run("dump --scenario " + cli.path("fc0.json") + " --object K --format text");
    std::string k = cli.out();
    for (std::size_t p = 0; (p = k.find("K[", p)) != std::string::npos;) k.replace(p, 2, "R[");
    o.expect(!r.empty() && r == k, "K with zero coefficients must equal R");
  }

  {
    const std::string f = cli.path("a.json");  // pi3k2 from the loop above
    cli.run("dump --scenario " + f + " --object pi3_T --format json");
    auto un = nlohmann::json::parse(cli.out());
    cli.run("dump --scenario " + f + " --object pi3_T --barred --format json");
    auto ba = nlohmann::json::parse(cli.out());
    o.expect(un["components"] == ba["components"], "pi3_T must not change under the mapping");

    o.expect(cli.run("dump --scenario " + f + " --object W_assoc --at 1,-1/2,3 --format json") == 0, "dump --at");
    auto jv = nlohmann::json::parse(cli.out());
    cli.run("dump --scenario " + f + " --object W_assoc --at 1,-1/2,3 --format text");
    std::istringstream lines(cli.out());
    std::string line;
    bool parity = jv["components"].size() == 81;
    for (const auto& e : jv["components"]) {
      parity &= bool(std::getline(lines, line));
      parity &= line.substr(line.find(" = ") + 3) == e["value"].get<std::string>();
    }
    o.expect(parity, "text and JSON dumps disagree");

    o.expect(cli.run("dump --scenario " + f + " --object NotAThing") == 2 &&
                 cli.err().find("W_fam") != std::string::npos,
             "unknown object must exit 2 listing valid ids");
    o.expect(cli.run("dump --scenario " + f + " --object R --at 1,2") == 2, "wrong point arity must exit 2");
  }
  o.expect(cli.run("") == 2, "no subcommand must exit 2");
  o.expect(cli.run("--help") == 0, "--help must exit 0");

  fs::remove_all(dir);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <path-to-agm-verify>\n";
    return 2;
  }
  const std::string exe = argv[1];

  struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
    bool expected;
  };
  // Criterion 3 is expected to fail: the scalar invariant of the kind-1
  // mapping reverses sign, and every check carrying it inherits the failure.
  const std::vector<Criterion> criteria{
      {1, "generic invariance, N=2,3 x25", generic_invariance, true},
      {2, "identity suite", identity_suite, true},
      {3, "pi3 equitorsion suites, kinds 1,2, N=2,3,4 x25", pi3_invariance, false},
      {4, "degenerate reductions to projective invariants", degenerate_reductions, true},
      {5, "sensitivity to a perturbed image connection", sensitivity, true},
      {6, "naive oracle agreement", oracle_agreement, true},
      {7, "CLI contract", [&] { return cli_contract(exe); }, true},
  };

  bool as_expected = true;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.problems.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << c.id << ": " << (o.pass() ? "PASS" : "FAIL") << "  " << c.title << " ("
              << o.checks << " checks, " << o.problems.size() << " problems, " << std::fixed << std::setprecision(1)
              << secs << " s)";
    if (o.pass() != c.expected) {
      as_expected = false;
      std::cout << "  UNEXPECTED";
    } else if (!o.pass()) {
      std::cout << "  known";
    }
    std::cout << "\n";
    for (const auto& p : o.problems) std::cout << "    " << p << "\n";
  }
  return as_expected ? 0 : 1;
}
