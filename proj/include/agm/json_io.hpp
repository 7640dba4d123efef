#pragma once

#include "agm/verify.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace agm {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

inline json to_json(const PolyField& p) {
  json terms = json::array();
  for (const auto& t : p.terms()) {
    json exps = json::array();
    for (std::size_t k = 0; k < p.dimension(); ++k) exps.push_back(t.mono.exponent(k));
    terms.push_back({{"exps", std::move(exps)}, {"coef", to_string(t.coef)}});
  }
  return {{"terms", std::move(terms)}};
}

inline json to_json(const TensorGrid& g) {
  json comps = json::array();
  for (const auto& c : g.components()) comps.push_back(to_json(c));
  return {{"valence", {g.upper_count(), g.lower_count()}}, {"components", std::move(comps)}};
}

inline json to_json(const FamilyCoefficients& fc) {
  return {{"u", to_string(fc.u)},
          {"u_prime", to_string(fc.u_prime)},
          {"v", to_string(fc.v)},
          {"v_prime", to_string(fc.v_prime)},
          {"w", to_string(fc.w)}};
}

inline json to_json(const Scenario& s) {
  json j;
  j["dimension"] = s.dimension;
  j["degree"] = s.degree;
  j["seed"] = s.seed;
  j["connection"] = to_json(s.L.coefficients());
  if (s.L_bar) j["connection_bar"] = to_json(s.L_bar->coefficients());
  if (s.is_pi3()) {
    const auto& m = s.pi3();
    j["mapping"] = {{"type", "pi3"},      {"kind", m.kind},           {"psi", to_json(m.psi)},
                    {"sigma", to_json(m.sigma)}, {"phi", to_json(m.phi)}, {"nu", to_json(m.nu)},
                    {"mu", to_json(m.mu)}};
  } else {
    const auto& d = s.general();
    j["mapping"] = {{"type", "general"},
                    {"omega", to_json(d.omega)},
                    {"omega_bar", to_json(d.omega_bar)},
                    {"tau", to_json(d.tau)},
                    {"tau_bar", to_json(d.tau_bar)}};
  }
  j["family_coefficients"] = to_json(s.fc);
  json sels = json::array();
  for (const auto& sel : s.selectors) sels.push_back(sel.p);
  j["theta_selectors"] = std::move(sels);
  return j;
}

inline json to_json(const Witness& w) {
  json pt = json::array();
  for (const auto& v : w.point) pt.push_back(to_string(v));
  return {{"index", w.index}, {"unbarred", to_string(w.unbarred)}, {"barred", to_string(w.barred)}, {"point", pt}};
}

inline json to_json(const SuiteReport& r) {
  json results = json::array();
  for (const auto& c : r.results) {
    json e{{"check_id", c.check_id},
           {"status", c.pass ? "pass" : "fail"},
           {"seed", c.seed},
           {"invariance", c.invariance}};
    if (c.witness) e["witness"] = to_json(*c.witness);
    results.push_back(std::move(e));
  }
  return {{"suite", r.suite},
          {"dimension", r.dimension},
          {"trials", r.trials},
          {"results", std::move(results)},
          {"summary", {{"pass", r.passed()}, {"fail", r.failed()}}}};
}

// ---------------------------------------------------------------------------
// Decoding, with the JSON path of the offending field in every error
// ---------------------------------------------------------------------------

namespace detail {

[[noreturn]] inline void fail_at(const std::string& path, const std::string& what) {
  throw validation_error(path + ": " + what);
}

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail_at(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail_at(path + "." + key, "missing");
  return *it;
}

inline std::size_t as_count(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) fail_at(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline Rational as_rational(const json& j, const std::string& path) {
  if (!j.is_string()) fail_at(path, "expected a \"p/q\" string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const validation_error& e) {
    fail_at(path, e.what());
  }
}

}  // namespace detail

inline PolyField poly_from_json(const json& j, std::size_t n, const std::string& path) {
  const json& terms = detail::field(j, "terms", path);
  if (!terms.is_array()) detail::fail_at(path + ".terms", "expected an array");
  std::vector<PolyField::Term> out;
  std::vector<unsigned> e(n);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string tp = path + ".terms[" + std::to_string(t) + "]";
    const json& exps = detail::field(terms[t], "exps", tp);
    if (!exps.is_array() || exps.size() != n)
      detail::fail_at(tp + ".exps", "expected " + std::to_string(n) + " exponents");
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t v = detail::as_count(exps[k], tp + ".exps[" + std::to_string(k) + "]");
      if (v > Monomial::max_exponent) detail::fail_at(tp + ".exps[" + std::to_string(k) + "]", "exponent too large");
      e[k] = unsigned(v);
    }
    out.push_back({Monomial::from_exponents(e), detail::as_rational(detail::field(terms[t], "coef", tp), tp + ".coef")});
  }
  return PolyField::from_terms(n, std::move(out));
}

inline TensorGrid grid_from_json(const json& j, std::size_t n, std::size_t upper, std::size_t lower,
                                 const std::string& path) {
  const json& val = detail::field(j, "valence", path);
  if (!val.is_array() || val.size() != 2 || val[0] != upper || val[1] != lower)
    detail::fail_at(path + ".valence", "expected [" + std::to_string(upper) + "," + std::to_string(lower) + "]");
  TensorGrid g = TensorGrid::of_valence(n, upper, lower);
  const json& comps = detail::field(j, "components", path);
  if (!comps.is_array() || comps.size() != g.size())
    detail::fail_at(path + ".components", "expected " + std::to_string(g.size()) + " components");
  for (std::size_t k = 0; k < g.size(); ++k)
    g.flat(k) = poly_from_json(comps[k], n, path + ".components[" + std::to_string(k) + "]");
  return g;
}

inline Scenario scenario_from_json(const json& j) {
  using detail::fail_at;
  using detail::field;
  Scenario s;
  const std::size_t n = detail::as_count(field(j, "dimension", "$"), "$.dimension");
  if (n < 2 || n > max_dimension) fail_at("$.dimension", "must be in 2..6");
  s.dimension = n;
  s.degree = unsigned(detail::as_count(field(j, "degree", "$"), "$.degree"));
  if (j.contains("seed")) s.seed = detail::as_count(j["seed"], "$.seed");
  s.L = Connection(grid_from_json(field(j, "connection", "$"), n, 1, 2, "$.connection"));
  if (j.contains("connection_bar"))
    s.L_bar = Connection(grid_from_json(j["connection_bar"], n, 1, 2, "$.connection_bar"));

  const json& m = field(j, "mapping", "$");
  const json& type = field(m, "type", "$.mapping");
  const auto guard = [](const std::string& path, auto&& fn) {
    try {
      fn();
    } catch (const validation_error& e) {
      const std::string msg = e.what();
      if (msg.rfind("$", 0) == 0) throw;
      fail_at(path, msg);
    }
  };
  if (type == "general") {
    GeneralMappingData d;
    d.omega = grid_from_json(field(m, "omega", "$.mapping"), n, 1, 2, "$.mapping.omega");
    d.omega_bar = grid_from_json(field(m, "omega_bar", "$.mapping"), n, 1, 2, "$.mapping.omega_bar");
    d.tau = grid_from_json(field(m, "tau", "$.mapping"), n, 1, 2, "$.mapping.tau");
    d.tau_bar = grid_from_json(field(m, "tau_bar", "$.mapping"), n, 1, 2, "$.mapping.tau_bar");
    guard("$.mapping", [&] { validate(d, n); });
    s.mapping = std::move(d);
  } else if (type == "pi3") {
    Pi3MappingData p;
    const json& kind = field(m, "kind", "$.mapping");
    if (kind != 1 && kind != 2) fail_at("$.mapping.kind", "must be 1 or 2");
    p.kind = kind.get<int>();
    p.psi = grid_from_json(field(m, "psi", "$.mapping"), n, 0, 1, "$.mapping.psi");
    p.sigma = grid_from_json(field(m, "sigma", "$.mapping"), n, 0, 2, "$.mapping.sigma");
    p.phi = grid_from_json(field(m, "phi", "$.mapping"), n, 1, 0, "$.mapping.phi");
    p.nu = grid_from_json(field(m, "nu", "$.mapping"), n, 0, 1, "$.mapping.nu");
    p.mu = poly_from_json(field(m, "mu", "$.mapping"), n, "$.mapping.mu");
    guard("$.mapping", [&] { validate(p, n); });
    s.mapping = std::move(p);
  } else {
    fail_at("$.mapping.type", "expected \"general\" or \"pi3\"");
  }

  const json& fc = field(j, "family_coefficients", "$");
  const auto coef = [&](const char* key) {
    return detail::as_rational(field(fc, key, "$.family_coefficients"), std::string("$.family_coefficients.") + key);
  };
  s.fc = {coef("u"), coef("u_prime"), coef("v"), coef("v_prime"), coef("w")};

  const json& sels = field(j, "theta_selectors", "$");
  if (!sels.is_array()) fail_at("$.theta_selectors", "expected an array");
  for (std::size_t k = 0; k < sels.size(); ++k) {
    const std::string sp = "$.theta_selectors[" + std::to_string(k) + "]";
    if (!sels[k].is_array() || sels[k].size() != 3) fail_at(sp, "expected [p1,p2,p3]");
    ThetaSelector sel;
    for (std::size_t q = 0; q < 3; ++q) {
      if (sels[k][q] != 1 && sels[k][q] != 2) fail_at(sp + "[" + std::to_string(q) + "]", "must be 1 or 2");
      sel.p[q] = sels[k][q].get<int>();
    }
    s.selectors.push_back(sel);
  }
  return s;
}

inline std::string scenario_to_string(const Scenario& s) { return to_json(s).dump(1) + "\n"; }

inline Scenario scenario_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("$: invalid JSON (") + e.what() + ")");
  }
  return scenario_from_json(j);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return scenario_from_string(buf.str());
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

/// Structural equality of scenarios (round-trip property).
inline bool same_scenario(const Scenario& a, const Scenario& b) {
  if (a.dimension != b.dimension || a.degree != b.degree || a.seed != b.seed || !(a.L == b.L) || !(a.fc == b.fc) ||
      a.selectors != b.selectors || a.L_bar.has_value() != b.L_bar.has_value())
    return false;
  if (a.L_bar && !(*a.L_bar == *b.L_bar)) return false;
  if (a.is_pi3() != b.is_pi3()) return false;
  if (a.is_pi3()) {
    const auto &p = a.pi3(), &q = b.pi3();
    return p.kind == q.kind && p.psi == q.psi && p.sigma == q.sigma && p.phi == q.phi && p.nu == q.nu && p.mu == q.mu;
  }
  const auto &p = a.general(), &q = b.general();
  return p.omega == q.omega && p.omega_bar == q.omega_bar && p.tau == q.tau && p.tau_bar == q.tau_bar;
}

}  // namespace agm
