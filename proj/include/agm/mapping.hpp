#pragma once

#include "agm/connection.hpp"

#include <string>

namespace agm {

/// Arbitrary split of a deformation L' - L into symmetric parts (omega,
/// omega_bar) and antisymmetric parts (tau, tau_bar).
struct GeneralMappingData {
  TensorGrid omega, omega_bar;
  TensorGrid tau, tau_bar;
};

namespace detail {

inline void require_valence(const TensorGrid& g, std::size_t dim, std::size_t upper, std::size_t lower,
                            const std::string& what) {
  const auto expect = TensorGrid::of_valence(dim, upper, lower);
  if (!g.same_shape(expect))
    throw validation_error(what + ": expected valence (" + std::to_string(upper) + "," + std::to_string(lower) +
                           ") over dimension " + std::to_string(dim));
}

}  // namespace detail

inline void validate(const GeneralMappingData& d, std::size_t dim) {
  detail::require_valence(d.omega, dim, 1, 2, "omega");
  detail::require_valence(d.omega_bar, dim, 1, 2, "omega_bar");
  detail::require_valence(d.tau, dim, 1, 2, "tau");
  detail::require_valence(d.tau_bar, dim, 1, 2, "tau_bar");
  if (!is_symmetric(d.omega, 1, 2)) throw validation_error("omega: not symmetric in its lower pair");
  if (!is_symmetric(d.omega_bar, 1, 2)) throw validation_error("omega_bar: not symmetric in its lower pair");
  if (!is_antisymmetric(d.tau, 1, 2)) throw validation_error("tau: not antisymmetric in its lower pair");
  if (!is_antisymmetric(d.tau_bar, 1, 2)) throw validation_error("tau_bar: not antisymmetric in its lower pair");
}

/// L' = L + (omega_bar - omega) + (tau_bar - tau).
inline Connection apply_general(const Connection& c, const GeneralMappingData& d) {
  validate(d, c.dimension());
  return Connection(c.coefficients() + (d.omega_bar - d.omega) + (d.tau_bar - d.tau));
}

/// Ingredients of an almost geodesic mapping of the third type, subtype `kind`:
///   L'^i_(jk) = L^i_(jk) + psi_j d^i_k + psi_k d^i_j + 2 sigma_jk phi^i
///   phi^i_{kind|j} = nu_j phi^i + mu d^i_j
struct Pi3MappingData {
  int kind = 1;
  TensorGrid psi;    // (0,1)
  TensorGrid sigma;  // (0,2), symmetric
  TensorGrid phi;    // (1,0)
  TensorGrid nu;     // (0,1)
  PolyField mu;
};

inline void validate(const Pi3MappingData& m, std::size_t dim) {
  if (m.kind != 1 && m.kind != 2) throw validation_error("pi3 kind must be 1 or 2");
  detail::require_valence(m.psi, dim, 0, 1, "psi");
  detail::require_valence(m.sigma, dim, 0, 2, "sigma");
  detail::require_valence(m.phi, dim, 1, 0, "phi");
  detail::require_valence(m.nu, dim, 0, 1, "nu");
  if (m.mu.dimension() != dim) throw validation_error("mu: wrong dimension");
  if (!is_symmetric(m.sigma, 0, 1)) throw validation_error("sigma: not symmetric");
}

/// Image-side data of a pi3 mapping: the target connection and the
/// ingredients of the inverse mapping's basic equations.
struct BarredData {
  Connection L_bar;
  TensorGrid psi_bar, sigma_bar, phi_bar, nu_bar;
  PolyField mu_bar;
};

/// phi^i_{kind|j} - nu_j phi^i - mu d^i_j, slots (i; j). Zero at the origin
/// exactly when the second basic equation holds there.
inline TensorGrid basic_equation_residual(const Connection& c, const Pi3MappingData& m) {
  const std::size_t n = c.dimension();
  TensorGrid r = cov_deriv(m.phi, c, m.kind);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      r(i, j) -= m.nu(j) * m.phi(i);
      if (i == j) r(i, j) -= m.mu;
    }
  return r.with_names({"i", "j"});
}

/// 2 sigma_jk phi^i + psi_j d^i_k + psi_k d^i_j.
inline TensorGrid pi3_deformation(const Pi3MappingData& m) {
  const std::size_t n = m.phi.dimension();
  TensorGrid p = TensorGrid::of_valence(n, 1, 2, {"i", "j", "k"});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        PolyField v = m.sigma(j, k) * m.phi(i) * Rational(2);
        if (i == k) v += m.psi(j);
        if (i == j) v += m.psi(k);
        p(i, j, k) = std::move(v);
      }
  return p;
}

struct Pi3Scenario {
  Pi3MappingData mapping;  // with the basic equation imposed at the origin
  Connection L_bar;
};

/// Overwrites the linear part of phi so the kind's basic equation holds at
/// the origin, then deforms L. All other jets of the raw data are kept.
inline Pi3Scenario build_pi3_scenario(const Connection& c, const Pi3MappingData& raw) {
  const std::size_t n = c.dimension();
  validate(raw, n);
  Pi3MappingData m = raw;
  const TensorGrid& l = c.coefficients();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<PolyField::Term> terms;
    for (const auto& t : raw.phi(i).terms())
      if (t.mono.total_degree() != 1) terms.push_back(t);
    for (std::size_t j = 0; j < n; ++j) {
      // d_j phi^i(0) = -L^i_{aj} phi^a + nu_j phi^i + mu d^i_j   (kind 1)
      // d_j phi^i(0) = -L^i_{ja} phi^a + nu_j phi^i + mu d^i_j   (kind 2)
      Rational v = raw.nu(j).constant_term() * raw.phi(i).constant_term();
      if (i == j) v += raw.mu.constant_term();
      for (std::size_t a = 0; a < n; ++a) {
        const PolyField& g = m.kind == 1 ? l(i, a, j) : l(i, j, a);
        v -= g.constant_term() * raw.phi(a).constant_term();
      }
      terms.push_back({Monomial::variable(j), v});
    }
    m.phi(i) = PolyField::from_terms(n, std::move(terms));
  }
  Connection l_bar(l + pi3_deformation(m));
  return {std::move(m), std::move(l_bar)};
}

/// Inverse-mapping data: psi' = -psi, sigma' = -sigma, phi' = phi,
/// nu'_j = nu_j + psi_j + 2 sigma_ja phi^a, mu' = mu + psi_a phi^a.
/// No postcondition check; see derive_barred_data.
inline BarredData barred_data_unchecked(const Pi3MappingData& m, const Connection& l_bar) {
  const std::size_t n = l_bar.dimension();
  validate(m, n);
  BarredData b{l_bar, -m.psi, -m.sigma, m.phi, m.nu, m.mu};
  for (std::size_t j = 0; j < n; ++j) {
    PolyField v = m.psi(j);
    for (std::size_t a = 0; a < n; ++a) v += m.sigma(j, a) * m.phi(a) * Rational(2);
    b.nu_bar(j) += v;
  }
  for (std::size_t a = 0; a < n; ++a) b.mu_bar += m.psi(a) * m.phi(a);
  return b;
}

/// As barred_data_unchecked, but throws invariant_violation when the
/// image-side basic equation fails at the origin or torsion is not preserved.
inline BarredData derive_barred_data(const Connection& c, const Pi3MappingData& m, const Connection& l_bar) {
  BarredData b = barred_data_unchecked(m, l_bar);
  Pi3MappingData as_map{m.kind, b.psi_bar, b.sigma_bar, b.phi_bar, b.nu_bar, b.mu_bar};
  for (const auto& v : evaluate_at_origin(basic_equation_residual(l_bar, as_map)))
    if (v != 0) throw invariant_violation("image-side basic equation fails at the origin");
  if (!(l_bar.anti() == c.anti())) throw invariant_violation("mapping is not equitorsion");
  return b;
}

/// The barred side expressed as mapping data (same subtype).
inline Pi3MappingData as_mapping_data(const BarredData& b, int kind) {
  return {kind, b.psi_bar, b.sigma_bar, b.phi_bar, b.nu_bar, b.mu_bar};
}

/// omega^i_jk = d^i_k rho_j + d^i_j rho_k + sigma^i_jk with
/// rho_j = (S^a_ja + sigma_ja phi^a)/(N+1) and sigma^i_jk = -sigma_jk phi^i.
struct Pi3Omega {
  TensorGrid omega;    // (1,2)
  TensorGrid rho;      // (0,1)
  TensorGrid sigma_t;  // (1,2)
};

inline Pi3Omega omega_pi3(const Connection& c, const Pi3MappingData& m) {
  const std::size_t n = c.dimension();
  const Rational inv = frac(1, long(n + 1));
  TensorGrid rho = TensorGrid::of_valence(n, 0, 1, {"j"});
  for (std::size_t j = 0; j < n; ++j) {
    PolyField v(n);
    for (std::size_t a = 0; a < n; ++a) v += c.sym()(a, j, a) + m.sigma(j, a) * m.phi(a);
    rho(j) = v * inv;
  }
  TensorGrid st = TensorGrid::of_valence(n, 1, 2, {"i", "j", "k"});
  TensorGrid om = st;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        st(i, j, k) = -(m.sigma(j, k) * m.phi(i));
        PolyField v = st(i, j, k);
        if (i == k) v += rho(j);
        if (i == j) v += rho(k);
        om(i, j, k) = std::move(v);
      }
  return {std::move(om), std::move(rho), std::move(st)};
}

}  // namespace agm
