// agm-verify: generate scenarios, run invariance suites, dump named objects.
//
// Exit codes: 0 success / all checks pass, 1 at least one failed check,
// 2 usage, I/O or parse error.

#include "agm/agm.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    agm::save_text(path, text);
}

std::string report_text(const agm::SuiteReport& r) {
  std::ostringstream out;
  out << "suite " << r.suite << " dimension " << r.dimension << " trials " << r.trials << "\n";
  for (const auto& c : r.results) {
    out << (c.pass ? "PASS " : "FAIL ") << c.check_id << " seed=" << c.seed << " (" << c.invariance << ")";
    if (c.witness) {
      out << " index=[";
      for (std::size_t k = 0; k < c.witness->index.size(); ++k) out << (k ? "," : "") << c.witness->index[k];
      out << "] unbarred=" << c.witness->unbarred.get_str() << " barred=" << c.witness->barred.get_str() << " point=(";
      for (std::size_t k = 0; k < c.witness->point.size(); ++k) out << (k ? "," : "") << c.witness->point[k].get_str();
      out << ")";
    }
    out << "\n";
  }
  out << "summary pass=" << r.passed() << " fail=" << r.failed() << "\n";
  return out.str();
}

std::vector<agm::Rational> parse_point(const std::string& text, std::size_t n) {
  std::vector<agm::Rational> pt;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) pt.push_back(agm::parse_rational(item));
  if (pt.size() != n)
    throw agm::validation_error("--at expects " + std::to_string(n) + " coordinates, got " + std::to_string(pt.size()));
  return pt;
}

std::string dump_text(const std::string& id, const agm::TensorGrid& g, const std::vector<agm::Rational>* at) {
  std::ostringstream out;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto idx = g.unflatten(k);
    out << id << "[";
    for (std::size_t s = 0; s < idx.size(); ++s) out << (s ? "," : "") << idx[s];
    out << "] = " << (at ? g.flat(k).evaluate(*at).get_str() : g.flat(k).to_string()) << "\n";
  }
  return out.str();
}

std::string dump_json(const std::string& id, bool barred, const agm::TensorGrid& g,
                      const std::vector<agm::Rational>* at) {
  agm::json comps = agm::json::array();
  for (std::size_t k = 0; k < g.size(); ++k) {
    agm::json e{{"index", g.unflatten(k)}};
    if (at)
      e["value"] = g.flat(k).evaluate(*at).get_str();
    else
      e["value"] = agm::to_json(g.flat(k));
    comps.push_back(std::move(e));
  }
  agm::json j{{"object", id},
              {"barred", barred},
              {"valence", {g.upper_count(), g.lower_count()}},
              {"components", std::move(comps)}};
  if (at) {
    agm::json pt = agm::json::array();
    for (const auto& v : *at) pt.push_back(v.get_str());
    j["at"] = std::move(pt);
  }
  return j.dump(1) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact invariance checks for almost geodesic mappings of the third type"};
  app.require_subcommand(1);

  // gen
  std::size_t gen_dim = 3;
  unsigned gen_degree = 2;
  std::string gen_kind = "general";
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Write a random scenario file");
  gen->add_option("--dim", gen_dim, "Dimension N")->check(CLI::Range(2, 6));
  gen->add_option("--degree", gen_degree, "Polynomial degree of free data")->check(CLI::Range(0, 4));
  gen->add_option("--kind", gen_kind, "Scenario kind")->check(CLI::IsMember({"general", "pi3k1", "pi3k2"}));
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("--out", gen_out, "Output file (stdout when omitted)");

  // check
  std::string suite = "all";
  std::size_t check_dim = 3;
  std::size_t trials = 25;
  std::uint64_t check_seed = 1;
  unsigned check_degree = 2;
  std::string scenario_path, report_path, check_format = "json";
  auto* check = app.add_subcommand("check", "Run an invariance suite and write a report");
  check->add_option("--suite", suite, "Suite name")->check(CLI::IsMember(agm::suite_names()));
  check->add_option("--dim", check_dim, "Dimension N")->check(CLI::Range(2, 6));
  check->add_option("--trials", trials, "Number of random trials");
  check->add_option("--seed", check_seed, "Base seed; trial t uses seed + t");
  check->add_option("--degree", check_degree, "Polynomial degree of free data")->check(CLI::Range(0, 4));
  check->add_option("--scenario", scenario_path, "Check this scenario file instead of generated ones");
  check->add_option("--report", report_path, "Report file (stdout when omitted)");
  check->add_option("--format", check_format, "Report format")->check(CLI::IsMember({"json", "text"}));

  // dump
  std::string dump_path, object_id, at_text, dump_format = "text";
  bool barred = false;
  auto* dump = app.add_subcommand("dump", "Print a named tensor or invariant of a scenario");
  dump->add_option("--scenario", dump_path, "Scenario file")->required();
  dump->add_option("--object", object_id, "Object id")->required();
  dump->add_flag("--barred", barred, "Evaluate on the image side");
  dump->add_option("--at", at_text, "Evaluate at the point \"c0,...,c{N-1}\"");
  dump->add_option("--format", dump_format, "Output format")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (*gen) {
      agm::Scenario s = gen_kind == "general"
                            ? agm::gen_general_scenario(gen_dim, gen_degree, gen_seed)
                            : agm::gen_pi3_scenario(gen_dim, gen_degree, gen_kind == "pi3k1" ? 1 : 2, gen_seed);
      emit(gen_out, agm::scenario_to_string(s));
      return 0;
    }
    if (*check) {
      agm::SuiteReport rep;
      if (!scenario_path.empty()) {
        rep = agm::run_scenario(agm::load_scenario(scenario_path));
      } else {
        agm::SuiteOptions opt;
        opt.degree = check_degree;
        rep = agm::run_suite(suite, check_dim, trials, check_seed, opt);
      }
      emit(report_path, check_format == "json" ? agm::to_json(rep).dump(1) + "\n" : report_text(rep));
      return rep.failed() == 0 ? 0 : exit_fail;
    }
    if (*dump) {
      const agm::Scenario s = agm::load_scenario(dump_path);
      const agm::TensorGrid g = agm::evaluate_object(s, object_id, barred);
      std::vector<agm::Rational> pt;
      if (!at_text.empty()) pt = parse_point(at_text, s.dimension);
      const auto* at = at_text.empty() ? nullptr : &pt;
      std::cout << (dump_format == "json" ? dump_json(object_id, barred, g, at) : dump_text(object_id, g, at));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
