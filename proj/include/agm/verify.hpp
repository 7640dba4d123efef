#pragma once

#include "agm/invariants.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace agm {

// ---------------------------------------------------------------------------
// Equality checks with counterexample capture
// ---------------------------------------------------------------------------

enum class CheckMode { polynomial, origin };

/// First differing component. `point` is where the two sides were evaluated
/// (the origin in origin mode, a small integer point in polynomial mode).
struct Witness {
  MultiIndex index;
  Rational unbarred;
  Rational barred;
  std::vector<Rational> point;
};

namespace detail {

/// Smallest point of {0..deg}^N (lexicographic) where a nonzero polynomial
/// does not vanish. Such a point exists by the usual grid argument.
inline std::vector<Rational> nonvanishing_point(const PolyField& p) {
  const std::size_t n = p.dimension();
  const unsigned side = p.degree() + 1;
  std::vector<unsigned> idx(n, 0);
  std::vector<Rational> pt(n);
  while (true) {
    for (std::size_t k = 0; k < n; ++k) pt[k] = idx[k];
    if (p.evaluate(pt) != 0) return pt;
    std::size_t s = n;
    while (s > 0) {
      if (++idx[s - 1] < side) break;
      idx[s - 1] = 0;
      --s;
    }
    if (s == 0) break;
  }
  throw invariant_violation("nonzero polynomial vanished on its degree grid");
}

}  // namespace detail

inline std::optional<Witness> check_equality(const TensorGrid& unbarred, const TensorGrid& barred, CheckMode mode) {
  unbarred.check_shape(barred);
  const std::size_t n = unbarred.dimension();
  for (std::size_t k = 0; k < unbarred.size(); ++k) {
    const PolyField& a = unbarred.flat(k);
    const PolyField& b = barred.flat(k);
    if (mode == CheckMode::origin) {
      if (a.constant_term() != b.constant_term())
        return Witness{unbarred.unflatten(k), a.constant_term(), b.constant_term(), std::vector<Rational>(n)};
    } else if (!(a == b)) {
      std::vector<Rational> pt = detail::nonvanishing_point(a - b);
      return Witness{unbarred.unflatten(k), a.evaluate(pt), b.evaluate(pt), std::move(pt)};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

/// One verification instance: a connection, a mapping, and the free choices
/// consumed by the invariant families.
struct Scenario {
  std::size_t dimension = 3;
  unsigned degree = 2;
  std::uint64_t seed = 0;
  Connection L;
  std::variant<GeneralMappingData, Pi3MappingData> mapping;
  /// Explicit image connection. When absent it is derived from the mapping.
  std::optional<Connection> L_bar;
  FamilyCoefficients fc;
  /// Consecutive pairs feed the families.
  std::vector<ThetaSelector> selectors;

  bool is_pi3() const { return std::holds_alternative<Pi3MappingData>(mapping); }
  const GeneralMappingData& general() const { return std::get<GeneralMappingData>(mapping); }
  const Pi3MappingData& pi3() const { return std::get<Pi3MappingData>(mapping); }
};

inline Connection image_connection(const Scenario& s) {
  if (s.L_bar) return *s.L_bar;
  if (s.is_pi3()) return Connection(s.L.coefficients() + pi3_deformation(s.pi3()));
  return apply_general(s.L, s.general());
}

/// Source and image sides of a pi3 scenario.
struct Pi3Instance {
  Connection L;
  Pi3MappingData m;
  Connection L_bar;
  Pi3MappingData m_bar;
};

inline Pi3Instance instantiate_pi3(const Scenario& s) {
  const Connection lb = image_connection(s);
  const BarredData b = barred_data_unchecked(s.pi3(), lb);
  return {s.L, s.pi3(), lb, as_mapping_data(b, s.pi3().kind)};
}

/// Keeps the degree <= 1 part of every input. Origin values of all pi3
/// formulas depend only on first jets, so origin comparisons are unchanged.
inline Pi3Instance first_jet(const Pi3Instance& p) {
  const auto cut = [](const Pi3MappingData& m) {
    return Pi3MappingData{m.kind, truncated(m.psi, 1), truncated(m.sigma, 1), truncated(m.phi, 1),
                          truncated(m.nu, 1), m.mu.truncated(1)};
  };
  return {Connection(truncated(p.L.coefficients(), 1)), cut(p.m), Connection(truncated(p.L_bar.coefficients(), 1)),
          cut(p.m_bar)};
}

/// Small-integer random source for scenario generation.
class ScenarioRng {
 public:
  explicit ScenarioRng(std::uint64_t seed) : eng_(seed) {}

  int small() { return int(eng_() % 7) - 3; }
  std::uint64_t raw() { return eng_(); }

  Rational coefficient() { return frac(small(), long(1 + eng_() % 3)); }

  PolyField poly(std::size_t n, unsigned degree) {
    std::vector<PolyField::Term> terms;
    std::vector<unsigned> e(n, 0);
    for_each_index(degree + 1, n, [&](const MultiIndex& idx) {
      unsigned total = 0;
      for (std::size_t k = 0; k < n; ++k) total += unsigned(idx[k]);
      if (total > degree) return;
      for (std::size_t k = 0; k < n; ++k) e[k] = unsigned(idx[k]);
      terms.push_back({Monomial::from_exponents(e), Rational(small())});
    });
    return PolyField::from_terms(n, std::move(terms));
  }

  TensorGrid grid(std::size_t n, std::size_t upper, std::size_t lower, unsigned degree) {
    TensorGrid g = TensorGrid::of_valence(n, upper, lower);
    for (std::size_t k = 0; k < g.size(); ++k) g.flat(k) = poly(n, degree);
    return g;
  }

  /// Symmetric in the last two slots.
  TensorGrid symmetric(std::size_t n, std::size_t upper, unsigned degree) {
    TensorGrid g = TensorGrid::of_valence(n, upper, 2);
    const std::size_t heads = upper == 0 ? 1 : n;
    for (std::size_t h = 0; h < heads; ++h)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j; k < n; ++k) {
          PolyField p = poly(n, degree);
          slot(g, upper, h, k, j) = p;
          slot(g, upper, h, j, k) = std::move(p);
        }
    return g;
  }

  /// (1,2) grid antisymmetric in its lower pair.
  TensorGrid antisymmetric(std::size_t n, unsigned degree) {
    TensorGrid g = TensorGrid::of_valence(n, 1, 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          PolyField p = poly(n, degree);
          g(i, k, j) = -p;
          g(i, j, k) = std::move(p);
        }
    return g;
  }

  ThetaSelector selector() { return ThetaSelector::from_index(unsigned(eng_() % 8)); }

  FamilyCoefficients family() { return {coefficient(), coefficient(), coefficient(), coefficient(), coefficient()}; }

 private:
  static PolyField& slot(TensorGrid& g, std::size_t upper, std::size_t h, std::size_t j, std::size_t k) {
    return upper == 0 ? g(j, k) : g(h, j, k);
  }

  std::mt19937_64 eng_;
};

inline void check_generation_args(std::size_t n, unsigned degree) {
  if (n < 2 || n > max_dimension) throw validation_error("dimension must be in 2..6");
  if (degree > 4) throw validation_error("degree must be at most 4");
}

/// Random connection L and image L', with omega, tau arbitrary and
/// omega_bar = omega + sym(L' - L), tau_bar = tau + anti(L' - L).
inline Scenario gen_general_scenario(std::size_t n, unsigned degree, std::uint64_t seed) {
  check_generation_args(n, degree);
  ScenarioRng rng(seed);
  Scenario s;
  s.dimension = n;
  s.degree = degree;
  s.seed = seed;
  s.L = Connection(rng.grid(n, 1, 2, degree));
  const Connection target(rng.grid(n, 1, 2, degree));
  GeneralMappingData d;
  d.omega = rng.symmetric(n, 1, degree);
  d.tau = rng.antisymmetric(n, degree);
  d.omega_bar = d.omega + (target.sym() - s.L.sym());
  d.tau_bar = d.tau + (target.anti() - s.L.anti());
  s.mapping = std::move(d);
  s.fc = rng.family();
  for (int k = 0; k < 16; ++k) s.selectors.push_back(rng.selector());
  return s;
}

/// Degenerate choices for pi3 generation.
enum class Pi3Degeneracy { none, zero_sigma, zero_phi };

/// Random constrained pi3 scenario of the given subtype: L, psi, sigma, phi
/// of the given degree, nu of degree <= 1, mu constant.
inline Scenario gen_pi3_scenario(std::size_t n, unsigned degree, int kind, std::uint64_t seed,
                                 Pi3Degeneracy degeneracy = Pi3Degeneracy::none) {
  check_generation_args(n, degree);
  if (kind != 1 && kind != 2) throw validation_error("pi3 kind must be 1 or 2");
  ScenarioRng rng(seed);
  Scenario s;
  s.dimension = n;
  s.degree = degree;
  s.seed = seed;
  s.L = Connection(rng.grid(n, 1, 2, degree));
  Pi3MappingData raw;
  raw.kind = kind;
  raw.psi = rng.grid(n, 0, 1, degree);
  raw.sigma = rng.symmetric(n, 0, degree);
  raw.phi = rng.grid(n, 1, 0, degree);
  raw.nu = rng.grid(n, 0, 1, std::min(degree, 1u));
  raw.mu = rng.poly(n, 0);
  if (degeneracy == Pi3Degeneracy::zero_sigma) raw.sigma = TensorGrid::of_valence(n, 0, 2);
  if (degeneracy == Pi3Degeneracy::zero_phi) raw.phi = TensorGrid::of_valence(n, 1, 0);
  s.mapping = build_pi3_scenario(s.L, raw).mapping;
  if (degeneracy == Pi3Degeneracy::zero_phi) {
    // the imposed linear part of phi vanishes only when mu does
    auto& m = std::get<Pi3MappingData>(s.mapping);
    m.mu = PolyField(n);
    m.phi = TensorGrid::of_valence(n, 1, 0);
  }
  s.fc = rng.family();
  for (int k = 0; k < 8; ++k) s.selectors.push_back(rng.selector());
  return s;
}

/// Adds `delta` to the constant term of one component of the image connection.
struct Sabotage {
  MultiIndex index{0, 0, 1};
  Rational delta{1};
};

inline void apply_sabotage(Scenario& s, const Sabotage& sab) {
  TensorGrid l = image_connection(s).coefficients();
  l.at(sab.index) += PolyField::constant(s.dimension, sab.delta);
  s.L_bar = Connection(std::move(l));
}

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

struct CheckResult {
  std::string check_id;
  bool pass = true;
  std::uint64_t seed = 0;
  std::optional<Witness> witness;
  /// "total", "valued" or "identity"; documents what kind of claim was checked.
  std::string invariance;
};

struct SuiteReport {
  std::string suite;
  std::size_t dimension = 0;
  std::size_t trials = 0;
  std::vector<CheckResult> results;

  std::size_t passed() const {
    return std::size_t(std::count_if(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; }));
  }
  std::size_t failed() const { return results.size() - passed(); }
};

namespace detail {

struct Recorder {
  std::vector<CheckResult>& out;
  std::string prefix;
  std::uint64_t seed;

  void operator()(const std::string& id, const char* invariance, const TensorGrid& unbarred,
                  const TensorGrid& barred, CheckMode mode) const {
    auto w = check_equality(unbarred, barred, mode);
    out.push_back({prefix + id, !w.has_value(), seed, std::move(w), invariance});
  }

  void zero(const std::string& id, const TensorGrid& g, CheckMode mode) const {
    (*this)(id, "identity", g, g * Rational(0), mode);
  }
};

inline std::string pair_label(const ThetaSelector& a, const ThetaSelector& b) {
  return "[" + a.to_string() + "," + b.to_string() + "]";
}

/// d^i_j s_mn
inline TensorGrid delta_times(const TensorGrid& s) {
  const std::size_t n = s.dimension();
  TensorGrid out = TensorGrid::of_valence(n, 1, 3);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t q = 0; q < n; ++q) out(i, i, m, q) = s(m, q);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Check lists
// ---------------------------------------------------------------------------

/// Barred == unbarred for every generic invariant, as polynomials.
inline void general_checks(const Scenario& s, std::vector<CheckResult>& out, const std::string& prefix = "general/") {
  const detail::Recorder rec{out, prefix, s.seed};
  const auto P = CheckMode::polynomial;
  const Connection& l = s.L;
  const Connection lb = image_connection(s);
  const GeneralMappingData& d = s.general();
  const GeneralInvariantSet a = general_invariants(l, d.omega, d.tau);
  const GeneralInvariantSet b = general_invariants(lb, d.omega_bar, d.tau_bar);
  rec("T_assoc", "total", a.thomas, b.thomas, P);
  rec("W_assoc", "total", a.weyl, b.weyl, P);
  rec("T_tor", "total", a.torsion, b.torsion, P);
  for (unsigned k = 0; k < 8; ++k)
    rec("theta[" + ThetaSelector::from_index(k).to_string() + "]", "total", a.theta.entries[k], b.theta.entries[k], P);
  const char* names[] = {"Theta_jmn", "Theta_jnm", "Theta_mnj"};
  for (std::size_t k = 0; k < 3; ++k) rec(names[k], "total", a.big_theta[k], b.big_theta[k], P);
  for (std::size_t k = 0; k + 1 < s.selectors.size(); k += 2) {
    const auto &x = s.selectors[k], &y = s.selectors[k + 1];
    rec("W_fam" + detail::pair_label(x, y), "total", a.family(s.fc, x, y), b.family(s.fc, x, y), P);
  }
}

/// Mapping postconditions and barred == unbarred for every pi3 invariant.
/// Invariants are compared at the origin on first jets; the Thomas-type
/// invariant is additionally compared as a polynomial.
inline void pi3_checks(const Scenario& s, std::vector<CheckResult>& out, const std::string& prefix) {
  const detail::Recorder rec{out, prefix, s.seed};
  const auto P = CheckMode::polynomial;
  const auto O = CheckMode::origin;
  const Pi3Instance full = instantiate_pi3(s);
  const std::size_t n = s.dimension;

  rec.zero("constraint_residual", basic_equation_residual(full.L, full.m), O);
  rec("equitorsion", "identity", full.L.anti(), full.L_bar.anti(), P);
  rec.zero("barred_residual", basic_equation_residual(full.L_bar, full.m_bar), O);
  const Pi3Omega om = omega_pi3(full.L, full.m);
  const Pi3Omega omb = omega_pi3(full.L_bar, full.m_bar);
  rec("rho_shift", "identity", om.rho + full.m.psi, omb.rho, P);
  rec("sigma_shift", "identity", -om.sigma_t, omb.sigma_t, P);
  rec("omega_shift", "identity", om.omega + (full.L_bar.sym() - full.L.sym()), omb.omega, P);
  rec("pi3_T/poly", "total", pi3_thomas(full.L, full.m), pi3_thomas(full.L_bar, full.m_bar), P);

  const Pi3Instance j = first_jet(full);
  rec("pi3_T", "total", pi3_thomas(j.L, j.m), pi3_thomas(j.L_bar, j.m_bar), O);
  Pi3Evaluator u(j.L, j.m), v(j.L_bar, j.m_bar);
  rec("pi3_Wc", "valued", u.weyl_assoc(), v.weyl_assoc(), O);
  rec("pi3_Wd", "valued", u.weyl_derived(), v.weyl_derived(), O);
  for (std::size_t k = 0; k + 1 < s.selectors.size(); k += 2) {
    const auto &a = s.selectors[k], &b = s.selectors[k + 1];
    const std::string lbl = detail::pair_label(a, b);
    rec("pi3_calW" + lbl, "valued", u.family(s.fc, a, b, FamilyBase::assoc), v.family(s.fc, a, b, FamilyBase::assoc),
        O);
    rec("pi3_W" + lbl, "valued", u.family(s.fc, a, b, FamilyBase::derived),
        v.family(s.fc, a, b, FamilyBase::derived), O);
  }
  if (s.pi3().kind != 1) return;
  const TensorGrid sc = u.scalar();
  rec("pi3_s", "valued", sc, v.scalar(), O);
  rec("pi3_Wdd", "valued", u.weyl_dd(), v.weyl_dd(), O);
  const TensorGrid wddd = u.weyl_ddd();
  rec("pi3_Wddd", "valued", wddd, v.weyl_ddd(), O);
  rec("pi3_Wddd-pi3_Wd", "identity", wddd - u.weyl_derived(), detail::delta_times(sc) * frac(-1, long(n + 1)), P);
}

/// Internal oracles: identities that must hold exactly for any input.
inline void consistency_checks(std::size_t n, unsigned degree, std::uint64_t seed, std::vector<CheckResult>& out,
                               const std::string& prefix = "consistency/") {
  const detail::Recorder rec{out, prefix, seed};
  const auto P = CheckMode::polynomial;
  const auto O = CheckMode::origin;

  const Scenario g = gen_general_scenario(n, degree, seed);
  const Connection& l = g.L;
  const Connection lb = image_connection(g);
  const GeneralMappingData& d = g.general();

  // a^i_{j|mn} - a^i_{j|nm} = a^a_j R^i_amn - a^i_a R^a_jmn
  {
    ScenarioRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const TensorGrid a = rng.grid(n, 1, 1, degree);
    const TensorGrid dd = cov_deriv(cov_deriv(a, l, 0), l, 0);
    const TensorGrid r = curvature(l);
    TensorGrid rhs = TensorGrid::of_valence(n, 1, 3);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t jj = 0; jj < n; ++jj)
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t q = 0; q < n; ++q)
            for (std::size_t al = 0; al < n; ++al)
              rhs(i, jj, m, q) += a(al, jj) * r(i, al, m, q) - a(i, al) * r(al, jj, m, q);
    rec("ricci_identity", "identity", alternate(dd, 2, 3), rhs, P);
  }
  rec("ricci_family_contraction", "identity", ricci_family(l, g.fc), trace(curvature_family(l, g.fc), 0, 3), P);
  rec("curvature_torsion_free", "identity", curvature(l), curvature(Connection(l.sym())), P);
  rec("sym_conn_deriv", "identity", sym_conn_deriv(l), cov_deriv(l.sym(), l, 0), P);

  const TensorGrid that = l.anti() - d.tau;
  const TensorGrid that_bar = lb.anti() - d.tau_bar;
  // Theta_jmn = That^a_jm That^i_an
  rec("Theta_composition", "identity", big_theta(l, d.tau), permute(contract(that, that, {{0, 1}}), {2, 0, 1, 3}), P);
  {
    // That'_{jm||n} - That_{jm|n} = P^i_an That^a_jm - P^a_jn That^i_am - P^a_mn That^i_ja,  P = sym(L' - L)
    const TensorGrid p = lb.sym() - l.sym();
    TensorGrid rhs = TensorGrid::of_valence(n, 1, 3);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t jj = 0; jj < n; ++jj)
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t q = 0; q < n; ++q)
            for (std::size_t a = 0; a < n; ++a)
              rhs(i, jj, m, q) +=
                  p(i, a, q) * that(a, jj, m) - p(a, jj, q) * that(i, a, m) - p(a, m, q) * that(i, jj, a);
    rec("torsion_covariant", "identity", cov_deriv(that_bar, lb, 0) - cov_deriv(that, l, 0), rhs, P);
  }
  {
    const TensorGrid& t = l.anti();
    const TensorGrid& tb = lb.anti();
    TensorGrid z = TensorGrid::of_valence(n, 1, 3);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t jj = 0; jj < n; ++jj)
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t q = 0; q < n; ++q)
            for (std::size_t a = 0; a < n; ++a) {
              PolyField& v = z(i, jj, m, q);
              v += tb(a, jj, m) * tb(i, a, q) - t(a, jj, m) * t(i, a, q);
              v -= tb(a, jj, m) * d.tau_bar(i, a, q) + tb(i, a, q) * d.tau_bar(a, jj, m);
              v += d.tau_bar(a, jj, m) * d.tau_bar(i, a, q);
              v += t(a, jj, m) * d.tau(i, a, q) + t(i, a, q) * d.tau(a, jj, m);
              v -= d.tau(a, jj, m) * d.tau(i, a, q);
            }
    rec.zero("TT-TT", z, P);
  }

  for (int kind : {1, 2}) {
    const std::string k = "k" + std::to_string(kind) + "/";
    const Scenario ps = gen_pi3_scenario(n, degree, kind, seed);
    const Pi3Instance full = instantiate_pi3(ps);
    const Pi3Omega om = omega_pi3(full.L, full.m);
    rec(k + "T_red_substitution", "identity", thomas_reduced(full.L, om.sigma_t), pi3_thomas(full.L, full.m), P);
    const Pi3Instance j = first_jet(full);
    const Pi3Omega oj = omega_pi3(j.L, j.m);
    const TensorGrid wrs = weyl_rho_sigma(j.L, oj.rho, oj.sigma_t);
    rec(k + "W_rs_vs_W_assoc", "identity", wrs, weyl_assoc(j.L, oj.omega), P);
    rec(k + "pi3_Wc_vs_W_rs", "identity", pi3_weyl_assoc(j.L, j.m), wrs, O);
    if (kind != 1) continue;
    rec(k + "pi3_Wddd_vs_W_der", "identity", pi3_weyl_ddd(j.L, j.m), weyl_derived(j.L, oj.sigma_t), O);
    const Pi3XYZ xyz = pi3_xyz(j.L, j.m);
    {
      // R-blocks + d^i_j X_[mn] + d^i_[m Y_jn] + Z
      const TensorGrid r = curvature(j.L);
      TensorGrid w = weyl_projective(j.L) + xyz.z;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = 0; jj < n; ++jj)
          for (std::size_t m = 0; m < n; ++m)
            for (std::size_t q = 0; q < n; ++q) {
              if (i == jj) w(i, jj, m, q) += xyz.x(m, q) - xyz.x(q, m);
              if (i == m) w(i, jj, m, q) += xyz.y(jj, q);
              if (i == q) w(i, jj, m, q) -= xyz.y(jj, m);
            }
      rec(k + "xyz_reassembly", "identity", w, pi3_weyl_derived_full(j.L, j.m), O);
    }
    rec(k + "Y_antisymmetric_part", "identity", alternate(xyz.y, 0, 1),
        pi3_scalar(j.L, j.m) * frac(-1, long(n + 1)), P);
    rec(k + "pi3_s_sign_reversal", "identity", -pi3_scalar(j.L, j.m), pi3_scalar(j.L_bar, j.m_bar), O);
  }
}

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"general", "pi3k1", "pi3k2", "consistency", "all"};
  return names;
}

struct SuiteOptions {
  unsigned degree = 2;
  std::optional<Sabotage> sabotage;
};

/// Runs `trials` independent trials; trial t uses scenario seed `seed + t`.
inline SuiteReport run_suite(const std::string& name, std::size_t n, std::size_t trials, std::uint64_t seed,
                             const SuiteOptions& opt = {}) {
  if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end())
    throw validation_error("unknown suite '" + name + "'");
  check_generation_args(n, opt.degree);
  SuiteReport rep{name, n, trials, {}};
  const bool all = name == "all";
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = seed + t;
    if (all || name == "general") {
      Scenario sc = gen_general_scenario(n, opt.degree, s);
      if (opt.sabotage) apply_sabotage(sc, *opt.sabotage);
      general_checks(sc, rep.results);
    }
    for (int kind : {1, 2}) {
      const std::string sname = kind == 1 ? "pi3k1" : "pi3k2";
      if (!all && name != sname) continue;
      Scenario sc = gen_pi3_scenario(n, opt.degree, kind, s);
      if (opt.sabotage) apply_sabotage(sc, *opt.sabotage);
      pi3_checks(sc, rep.results, sname + "/");
    }
    if (all || name == "consistency") consistency_checks(n, opt.degree, s, rep.results);
  }
  return rep;
}

/// Runs the checks matching a given scenario once.
inline SuiteReport run_scenario(const Scenario& s) {
  SuiteReport rep;
  rep.dimension = s.dimension;
  rep.trials = 1;
  if (s.is_pi3()) {
    rep.suite = s.pi3().kind == 1 ? "pi3k1" : "pi3k2";
    pi3_checks(s, rep.results, rep.suite + "/");
  } else {
    rep.suite = "general";
    general_checks(s, rep.results);
  }
  return rep;
}

}  // namespace agm
