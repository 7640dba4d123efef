#pragma once

#include "agm/mapping.hpp"

#include <array>
#include <optional>
#include <string>

namespace agm {

/// Chooses, per slot, between omega_(1) = S (associated space) and omega_(2) = omega.
struct ThetaSelector {
  std::array<int, 3> p{1, 1, 1};

  static ThetaSelector from_index(unsigned bits) {
    return {{int(bits >> 2 & 1u) + 1, int(bits >> 1 & 1u) + 1, int(bits & 1u) + 1}};
  }

  unsigned index() const { return unsigned((p[0] - 1) * 4 + (p[1] - 1) * 2 + (p[2] - 1)); }

  std::string to_string() const {
    return std::to_string(p[0]) + std::to_string(p[1]) + std::to_string(p[2]);
  }

  friend bool operator==(const ThetaSelector&, const ThetaSelector&) = default;
};

inline void validate(const ThetaSelector& sel) {
  for (int v : sel.p)
    if (v != 1 && v != 2) throw validation_error("theta selector entries must be 1 or 2");
}

/// Argument order of the torsion-torsion invariant: Theta^i_{jmn}, Theta^i_{jnm}, Theta^i_{mnj}.
enum class ThetaOrder { jmn, jnm, mnj };

/// Which reading of the contracted-correction invariants to evaluate. The
/// printed form of two equations drops the sigma_{aj} factor from a nu term,
/// leaving a dangling index; `literal` sums that index, `corrected` restores
/// the factor.
enum class Transcription { corrected, literal };

/// Base invariant of a pi3 family.
enum class FamilyBase { assoc, derived };

namespace detail {

inline TensorGrid weyl_grid(std::size_t n) { return TensorGrid::of_valence(n, 1, 3, {"i", "j", "m", "n"}); }

inline bool kd(std::size_t a, std::size_t b) { return a == b; }

/// t_j = S^a_{ja}
inline TensorGrid sym_trace(const Connection& c) {
  const std::size_t n = c.dimension();
  TensorGrid t = TensorGrid::of_valence(n, 0, 1, {"j"});
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t a = 0; a < n; ++a) t(j) += c.sym()(a, j, a);
  return t;
}

/// R + 1/(N+1) d^i_j R_[mn] + N/(N^2-1) d^i_[m R_jn] + 1/(N^2-1) d^i_[m R_n]j
/// for a given curvature/Ricci pair.
inline TensorGrid projective_weyl_part(const TensorGrid& r, const TensorGrid& ric) {
  const std::size_t n = r.dimension();
  const long nl = long(n);
  const Rational c1 = frac(1, nl + 1), c2 = frac(nl, nl * nl - 1), c3 = frac(1, nl * nl - 1);
  TensorGrid w = r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField& v = w(i, j, m, q);
          if (kd(i, j)) v += (ric(m, q) - ric(q, m)) * c1;
          if (kd(i, m)) v += ric(j, q) * c2 + ric(q, j) * c3;
          if (kd(i, q)) v -= ric(j, m) * c2 + ric(m, j) * c3;
        }
  return w;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Invariants of a general mapping with deformation split (omega, tau)
// ---------------------------------------------------------------------------

/// S - omega
inline TensorGrid thomas_assoc(const Connection& c, const TensorGrid& omega) { return c.sym() - omega; }

/// R - omega^i_{jm|n} + omega^i_{jn|m} + omega^a_{jm} omega^i_{an} - omega^a_{jn} omega^i_{am}
inline TensorGrid weyl_assoc(const Connection& c, const TensorGrid& omega) {
  const std::size_t n = c.dimension();
  const TensorGrid dw = cov_deriv(omega, c, 0);
  TensorGrid w = curvature(c);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField v = dw(i, j, q, m) - dw(i, j, m, q);
          for (std::size_t a = 0; a < n; ++a) {
            v += omega(a, j, m) * omega(i, a, q);
            v -= omega(a, j, q) * omega(i, a, m);
          }
          w(i, j, m, q) += v;
        }
  return w;
}

/// Thomas-type invariant for omega = d rho + d rho + sigma_t, rho eliminated by traces.
inline TensorGrid thomas_reduced(const Connection& c, const TensorGrid& sigma_t) {
  const std::size_t n = c.dimension();
  const Rational inv = frac(1, long(n + 1));
  TensorGrid tr = TensorGrid::of_valence(n, 0, 1);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t a = 0; a < n; ++a) tr(j) += c.sym()(a, j, a) - sigma_t(a, j, a);
  TensorGrid out = c.sym() - sigma_t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        if (detail::kd(i, k)) out(i, j, k) -= tr(j) * inv;
        if (detail::kd(i, j)) out(i, j, k) -= tr(k) * inv;
      }
  return out;
}

/// Weyl-type invariant in terms of rho and sigma_t:
/// R - d^i_[m rho_j|n] - d^i_j rho_[m|n] - sigma^i_j[m|n] - d^i_[m rho_j rho_n]
///   - d^i_[m rho_a sigma^a_jn] + sigma^a_j[m sigma^i_an]
/// The rho.sigma block carries a minus sign; with it the result equals
/// weyl_assoc(d rho + d rho + sigma_t).
inline TensorGrid weyl_rho_sigma(const Connection& c, const TensorGrid& rho, const TensorGrid& sigma_t) {
  const std::size_t n = c.dimension();
  using detail::kd;
  const TensorGrid drho = cov_deriv(rho, c, 0);
  const TensorGrid dst = cov_deriv(sigma_t, c, 0);
  TensorGrid rs = TensorGrid::of_valence(n, 0, 2);  // rho_a sigma^a_jn
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t a = 0; a < n; ++a) rs(j, q) += rho(a) * sigma_t(a, j, q);
  TensorGrid w = curvature(c);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField v(n);
          if (kd(i, m)) v -= drho(j, q) + rho(j) * rho(q) + rs(j, q);
          if (kd(i, q)) v += drho(j, m) + rho(j) * rho(m) + rs(j, m);
          if (kd(i, j)) v -= drho(m, q) - drho(q, m);
          v -= dst(i, j, m, q) - dst(i, j, q, m);
          for (std::size_t a = 0; a < n; ++a) {
            v += sigma_t(a, j, m) * sigma_t(i, a, q);
            v -= sigma_t(a, j, q) * sigma_t(i, a, m);
          }
          w(i, j, m, q) += v;
        }
  return w;
}

/// Derived Weyl-type invariant: the projective Weyl tensor of S - sigma_t,
/// expanded around the curvature of S.
inline TensorGrid weyl_derived(const Connection& c, const TensorGrid& sigma_t) {
  const std::size_t n = c.dimension();
  using detail::kd;
  const long nl = long(n);
  const Rational c1 = frac(1, nl + 1), c4 = frac(1, nl * nl - 1), np1(nl + 1);
  const TensorGrid r = curvature(c);
  const TensorGrid ric = ricci_from(r);
  const TensorGrid ds = cov_deriv(sigma_t, c, 0);  // sigma^i_{jk|l}

  // tr_{jn} = sigma^a_{aj|n}
  TensorGrid tr = TensorGrid::of_valence(n, 0, 2);
  // blk_{jn} = sigma^a_{jn|a} - sigma^a_{ja|n} - sigma^a_{jn} sigma^b_{ab} + sigma^a_{jb} sigma^b_{na}
  TensorGrid blk = TensorGrid::of_valence(n, 0, 2);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t a = 0; a < n; ++a) {
        tr(j, q) += ds(a, a, j, q);
        PolyField v = ds(a, j, q, a) - ds(a, j, a, q);
        for (std::size_t b = 0; b < n; ++b) {
          v -= sigma_t(a, j, q) * sigma_t(b, a, b);
          v += sigma_t(a, j, b) * sigma_t(b, q, a);
        }
        blk(j, q) += v;
      }
  // E_{jn} = sigma^a_{a[j|n]} + (N+1) blk_{jn}
  TensorGrid e = TensorGrid::of_valence(n, 0, 2);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t q = 0; q < n; ++q) e(j, q) = tr(j, q) - tr(q, j) + blk(j, q) * np1;

  TensorGrid w = detail::projective_weyl_part(r, ric);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField v = ds(i, j, q, m) - ds(i, j, m, q);
          if (kd(i, j)) v += (tr(m, q) - tr(q, m)) * c1;
          for (std::size_t a = 0; a < n; ++a) {
            v += sigma_t(a, j, m) * sigma_t(i, a, q);
            v -= sigma_t(a, j, q) * sigma_t(i, a, m);
          }
          if (kd(i, m)) v -= e(j, q) * c4;
          if (kd(i, q)) v += e(j, m) * c4;
          w(i, j, m, q) += v;
        }
  return w;
}

/// Thomas projective parameter S^i_jk - (d^i_k t_j + d^i_j t_k)/(N+1) of the associated space.
inline TensorGrid thomas_projective(const Connection& c) {
  return thomas_reduced(c, TensorGrid::of_valence(c.dimension(), 1, 2));
}

/// Weyl projective tensor of the associated space.
inline TensorGrid weyl_projective(const Connection& c) {
  const TensorGrid r = curvature(c);
  return detail::projective_weyl_part(r, ricci_from(r));
}

/// anti(L) - tau
inline TensorGrid thomas_torsion(const Connection& c, const TensorGrid& tau) { return c.anti() - tau; }

/// Equitorsion reduction: anti(L).
inline TensorGrid thomas_torsion0(const Connection& c) { return c.anti(); }

namespace detail {

inline const TensorGrid& pick(int p, const Connection& c, const TensorGrid& omega) {
  return p == 1 ? c.sym() : omega;
}

}  // namespace detail

/// theta^i_{(p).jmn} = T^i_{jm|n} - tau^i_{jm|n} - w1^i_{an} That^a_{jm}
///                     + w2^a_{jn} That^i_{am} + w3^a_{mn} That^i_{ja},  That = T - tau.
inline TensorGrid theta(const Connection& c, const ThetaSelector& sel, const TensorGrid& omega,
                        const TensorGrid& tau) {
  validate(sel);
  const std::size_t n = c.dimension();
  const TensorGrid that = c.anti() - tau;
  const TensorGrid dthat = cov_deriv(that, c, 0);
  const TensorGrid& w1 = detail::pick(sel.p[0], c, omega);
  const TensorGrid& w2 = detail::pick(sel.p[1], c, omega);
  const TensorGrid& w3 = detail::pick(sel.p[2], c, omega);
  TensorGrid out = detail::weyl_grid(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField v = dthat(i, j, m, q);
          for (std::size_t a = 0; a < n; ++a) {
            v -= w1(i, a, q) * that(a, j, m);
            v += w2(a, j, q) * that(i, a, m);
            v += w3(a, m, q) * that(i, j, a);
          }
          out(i, j, m, q) = std::move(v);
        }
  return out;
}

/// Equitorsion variant (tau = 0).
inline TensorGrid theta0(const Connection& c, const ThetaSelector& sel, const TensorGrid& omega) {
  return theta(c, sel, omega, TensorGrid::of_valence(c.dimension(), 1, 2));
}

/// Theta^i_jmn = T^a_jm T^i_an - T^a_jm tau^i_an - T^i_an tau^a_jm + tau^a_jm tau^i_an,
/// evaluated with the requested argument order.
inline TensorGrid big_theta(const Connection& c, const TensorGrid& tau, ThetaOrder order = ThetaOrder::jmn) {
  const std::size_t n = c.dimension();
  const TensorGrid& t = c.anti();
  TensorGrid base = detail::weyl_grid(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField v(n);
          for (std::size_t a = 0; a < n; ++a) {
            v += t(a, j, m) * t(i, a, q);
            v -= t(a, j, m) * tau(i, a, q);
            v -= t(i, a, q) * tau(a, j, m);
            v += tau(a, j, m) * tau(i, a, q);
          }
          base(i, j, m, q) = std::move(v);
        }
  switch (order) {
    case ThetaOrder::jmn:
      return base;
    case ThetaOrder::jnm:
      return permute(base, {0, 1, 3, 2});
    case ThetaOrder::mnj:
      // out(i,j,m,n) = base(i,m,n,j)
      return permute(base, {0, 3, 1, 2});
  }
  throw structural_error("unknown theta order");
}

/// W_assoc + u theta(sel1) + u' theta(sel2) + v Theta_jmn + v' Theta_jnm + w Theta_mnj.
inline TensorGrid weyl_family(const Connection& c, const FamilyCoefficients& fc, const ThetaSelector& sel1,
                              const ThetaSelector& sel2, const TensorGrid& omega, const TensorGrid& tau) {
  TensorGrid w = weyl_assoc(c, omega);
  w += theta(c, sel1, omega, tau) * fc.u;
  w += theta(c, sel2, omega, tau) * fc.u_prime;
  if (fc.v != 0) w += big_theta(c, tau, ThetaOrder::jmn) * fc.v;
  if (fc.v_prime != 0) w += big_theta(c, tau, ThetaOrder::jnm) * fc.v_prime;
  if (fc.w != 0) w += big_theta(c, tau, ThetaOrder::mnj) * fc.w;
  return w;
}

/// Equitorsion family: W_assoc + u theta0(sel1) + u' theta0(sel2).
inline TensorGrid weyl_family0(const Connection& c, const FamilyCoefficients& fc, const ThetaSelector& sel1,
                               const ThetaSelector& sel2, const TensorGrid& omega) {
  TensorGrid w = weyl_assoc(c, omega);
  w += theta0(c, sel1, omega) * fc.u;
  w += theta0(c, sel2, omega) * fc.u_prime;
  return w;
}

/// All eight theta objects of one side, built from one derivative and six products.
struct ThetaTable {
  std::array<TensorGrid, 8> entries;
  const TensorGrid& operator[](const ThetaSelector& s) const { return entries[s.index()]; }
};

inline ThetaTable theta_table(const Connection& c, const TensorGrid& omega, const TensorGrid& tau) {
  const std::size_t n = c.dimension();
  const TensorGrid that = c.anti() - tau;
  const TensorGrid dthat = cov_deriv(that, c, 0);
  // u1 = w^i_an That^a_jm, u2 = w^a_jn That^i_am, u3 = w^a_mn That^i_ja for w = S, omega
  std::array<std::array<TensorGrid, 3>, 2> u;
  for (int k = 0; k < 2; ++k) {
    const TensorGrid& w = k == 0 ? c.sym() : omega;
    for (auto& g : u[k]) g = detail::weyl_grid(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t m = 0; m < n; ++m)
          for (std::size_t q = 0; q < n; ++q)
            for (std::size_t a = 0; a < n; ++a) {
              u[k][0](i, j, m, q) += w(i, a, q) * that(a, j, m);
              u[k][1](i, j, m, q) += w(a, j, q) * that(i, a, m);
              u[k][2](i, j, m, q) += w(a, m, q) * that(i, j, a);
            }
  }
  ThetaTable out;
  for (unsigned b = 0; b < 8; ++b) {
    const auto sel = ThetaSelector::from_index(b);
    out.entries[b] = dthat - u[sel.p[0] - 1][0] + u[sel.p[1] - 1][1] + u[sel.p[2] - 1][2];
  }
  return out;
}

/// Every generic invariant of one side of a general mapping.
struct GeneralInvariantSet {
  TensorGrid thomas, weyl, torsion;
  ThetaTable theta;
  std::array<TensorGrid, 3> big_theta;  // argument orders jmn, jnm, mnj

  /// Same value as weyl_family.
  TensorGrid family(const FamilyCoefficients& fc, const ThetaSelector& sel1, const ThetaSelector& sel2) const {
    TensorGrid w = weyl;
    w += theta[sel1] * fc.u;
    w += theta[sel2] * fc.u_prime;
    w += big_theta[0] * fc.v;
    w += big_theta[1] * fc.v_prime;
    w += big_theta[2] * fc.w;
    return w;
  }
};

inline GeneralInvariantSet general_invariants(const Connection& c, const TensorGrid& omega, const TensorGrid& tau) {
  GeneralInvariantSet g{thomas_assoc(c, omega), weyl_assoc(c, omega), thomas_torsion(c, tau),
                        theta_table(c, omega, tau), {}};
  g.big_theta[0] = big_theta(c, tau, ThetaOrder::jmn);
  g.big_theta[1] = permute(g.big_theta[0], {0, 1, 3, 2});
  g.big_theta[2] = permute(g.big_theta[0], {0, 3, 1, 2});
  return g;
}

// ---------------------------------------------------------------------------
// Invariants of equitorsion pi3 mappings
// ---------------------------------------------------------------------------

namespace detail {

/// Shared building blocks of the pi3 formulas. `eps` is the sign of the
/// torsion term in phi^i_{|j} = eps T^i_{aj} phi^a + nu_j phi^i + mu d^i_j
/// (-1 for subtype 1, +1 for subtype 2).
struct Pi3Pieces {
  std::size_t n;
  Rational eps;
  TensorGrid r, ric;
  TensorGrid t;       // t_j = S^a_ja
  TensorGrid dt;      // t_{j|n}
  TensorGrid ds;      // sigma_{jk|n}
  TensorGrid q;       // q_j = sigma_ja phi^a
  PolyField tphi;     // t_a phi^a
  PolyField cc;       // sigma_ab phi^a phi^b
  TensorGrid a;       // A_ij = (sigma_ai|j + eps sigma_bi T^b_aj + sigma_ai nu_j) phi^a
  TensorGrid a_lit;   // A_ij with the sigma_aj factor of the nu term dropped
  TensorGrid b;       // B_jn = (sigma_jn|a + eps sigma_jn T^b_ab + sigma_jn nu_a) phi^a
  TensorGrid csig;    // C_jn = (sigma_jn sigma_ab - sigma_ja sigma_nb) phi^a phi^b
  TensorGrid s;       // s_mn = A_mn - A_nm
  TensorGrid z;       // Z^i_jmn
};

inline Pi3Pieces pi3_pieces(const Connection& c, const Pi3MappingData& m) {
  validate(m, c.dimension());
  const std::size_t n = c.dimension();
  Pi3Pieces p{n, Rational(m.kind == 1 ? -1 : 1), {}, {}, {}, {}, {}, {}, PolyField(n), PolyField(n),
              {}, {}, {}, {}, {}, {}};
  const TensorGrid& tor = c.anti();
  p.r = curvature(c);
  p.ric = ricci_from(p.r);
  p.t = sym_trace(c);
  p.dt = cov_deriv(p.t, c, 0);
  p.ds = cov_deriv(m.sigma, c, 0);
  p.q = TensorGrid::of_valence(n, 0, 1);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t a = 0; a < n; ++a) p.q(j) += m.sigma(j, a) * m.phi(a);
  for (std::size_t a = 0; a < n; ++a) {
    p.tphi += p.t(a) * m.phi(a);
    p.cc += p.q(a) * m.phi(a);
  }
  PolyField phisum(n);
  for (std::size_t a = 0; a < n; ++a) phisum += m.phi(a);

  // tphi_j^b = T^b_{aj} phi^a
  TensorGrid tphi = TensorGrid::of_valence(n, 1, 1);
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < n; ++a) tphi(b, j) += tor(b, a, j) * m.phi(a);
  PolyField ttr(n);  // T^b_{ab} phi^a
  for (std::size_t b = 0; b < n; ++b) ttr += tphi(b, b);

  p.a = TensorGrid::of_valence(n, 0, 2);
  p.a_lit = p.a;
  p.b = p.a;
  p.csig = p.a;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      PolyField v(n);
      for (std::size_t a = 0; a < n; ++a) v += p.ds(a, i, j) * m.phi(a);
      PolyField tv(n);
      for (std::size_t b = 0; b < n; ++b) tv += m.sigma(b, i) * tphi(b, j);
      v += tv * p.eps;
      p.a_lit(i, j) = v + m.nu(j) * phisum;
      v += p.q(i) * m.nu(j);
      p.a(i, j) = std::move(v);

      PolyField w(n);
      for (std::size_t a = 0; a < n; ++a) w += p.ds(i, j, a) * m.phi(a);
      w += m.sigma(i, j) * ttr * p.eps;
      for (std::size_t a = 0; a < n; ++a) w += m.sigma(i, j) * m.nu(a) * m.phi(a);
      p.b(i, j) = std::move(w);

      p.csig(i, j) = m.sigma(i, j) * p.cc - p.q(i) * p.q(j);
    }
  p.s = p.a;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p.s(i, j) = p.a(i, j) - p.a(j, i);

  // zz_{jmn}^i = sigma_jm|n phi^i + eps sigma_jm T^i_an phi^a + sigma_jm nu_n phi^i + sigma_jm q_n phi^i
  p.z = weyl_grid(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t mm = 0; mm < n; ++mm)
        for (std::size_t qq = 0; qq < n; ++qq) {
          if (mm == qq) continue;
          const auto term = [&](std::size_t x, std::size_t y) {
            PolyField v = (p.ds(j, x, y) + m.sigma(j, x) * (m.nu(y) + p.q(y))) * m.phi(i);
            v += m.sigma(j, x) * tphi(i, y) * p.eps;
            return v;
          };
          p.z(i, j, mm, qq) = term(mm, qq) - term(qq, mm);
        }
  return p;
}

/// d^i_[m Y_jn] with Y_jn = (B + C)_jn/(N-1) - N/(N^2-1) A'_jn - A_nj/(N^2-1),
/// where A' is `a_block` (the corrected or literal reading).
inline void add_derived_blocks(TensorGrid& w, const Pi3Pieces& p, const TensorGrid& a_block) {
  const std::size_t n = p.n;
  const long nl = long(n);
  const Rational c1 = frac(1, nl - 1), c2 = frac(nl, nl * nl - 1), c3 = frac(1, nl * nl - 1);
  TensorGrid y = TensorGrid::of_valence(n, 0, 2);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t q = 0; q < n; ++q)
      y(j, q) = (p.b(j, q) + p.csig(j, q)) * c1 - a_block(j, q) * c2 - p.a(q, j) * c3;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          if (kd(i, m)) w(i, j, m, q) += y(j, q);
          if (kd(i, q)) w(i, j, m, q) -= y(j, m);
        }
}

/// Adds coef * d^i_j s_mn.
inline void add_trace_block(TensorGrid& w, const TensorGrid& s, const Rational& coef) {
  const std::size_t n = w.dimension();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t m = 0; m < n; ++m)
      for (std::size_t q = 0; q < n; ++q) w(i, i, m, q) += s(m, q) * coef;
}

inline void require_kind1(const Pi3MappingData& m, const char* what) {
  if (m.kind != 1) throw structural_error(std::string(what) + " is defined for subtype 1 only");
}

}  // namespace detail

/// Thomas-type invariant (both subtypes):
/// S - d^i_k (t_j + q_j)/(N+1) - d^i_j (t_k + q_k)/(N+1) + sigma_jk phi^i.
inline TensorGrid pi3_thomas(const Connection& c, const Pi3MappingData& m) {
  validate(m, c.dimension());
  const std::size_t n = c.dimension();
  const Rational inv = frac(1, long(n + 1));
  const TensorGrid t = detail::sym_trace(c);
  TensorGrid out = c.sym();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        PolyField& v = out(i, j, k);
        v += m.sigma(j, k) * m.phi(i);
        if (detail::kd(i, k)) {
          PolyField tq = t(j);
          for (std::size_t a = 0; a < n; ++a) tq += m.sigma(j, a) * m.phi(a);
          v -= tq * inv;
        }
        if (detail::kd(i, j)) {
          PolyField tq = t(k);
          for (std::size_t a = 0; a < n; ++a) tq += m.sigma(k, a) * m.phi(a);
          v -= tq * inv;
        }
      }
  return out;
}

namespace detail {

inline TensorGrid pi3_weyl_assoc_from(const Pi3Pieces& p, const Pi3MappingData& m) {
  const std::size_t n = p.n;
  const Rational c1 = frac(1, long(n + 1)), c2 = frac(1, long((n + 1) * (n + 1)));
  TensorGrid w = p.r;
  w += p.z;
  // -(1/(N+1)) d^i_j s'_mn; s' is built from sigma_ma rather than sigma_am, equal by symmetry of sigma
  add_trace_block(w, p.s, -c1);
  // X_jn of the d^i_[m X_jn] block
  TensorGrid x = TensorGrid::of_valence(n, 0, 2);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t q = 0; q < n; ++q) {
      PolyField e = -(m.mu * m.sigma(j, q));
      e -= (p.dt(j, q) + p.a(j, q) + m.mu * m.sigma(j, q)) * c1;
      e += m.sigma(j, q) * (p.tphi + p.cc) * c1;
      e -= (p.t(j) + p.q(j)) * (p.t(q) + p.q(q)) * c2;
      x(j, q) = std::move(e);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t mm = 0; mm < n; ++mm)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField& v = w(i, j, mm, q);
          if (kd(i, j)) v += (p.ric(mm, q) - p.ric(q, mm)) * c1;
          if (kd(i, mm)) v += x(j, q);
          if (kd(i, q)) v -= x(j, mm);
        }
  return w;
}

/// Projective Weyl part + Z + d^i_[m Y_jn]: the reduced derived form.
inline TensorGrid pi3_reduced_from(const Pi3Pieces& p, bool literal) {
  TensorGrid w = projective_weyl_part(p.r, p.ric);
  w += p.z;
  add_derived_blocks(w, p, literal ? p.a_lit : p.a);
  return w;
}

/// s'_mn = (sigma_[m a|n] - sigma_[m b T^b_a n] + sigma_[m a nu_n]) phi^a, built from sigma_ma.
inline TensorGrid pi3_scalar_transposed(const Pi3Pieces& p, const Connection& c, const Pi3MappingData& m) {
  const std::size_t n = p.n;
  TensorGrid sp = TensorGrid::of_valence(n, 0, 2);
  const TensorGrid& tor = c.anti();
  const auto term = [&](std::size_t x, std::size_t y) {
    PolyField v(n);
    for (std::size_t a = 0; a < n; ++a) {
      PolyField inner = p.ds(x, a, y) + m.sigma(x, a) * m.nu(y);
      for (std::size_t b = 0; b < n; ++b) inner -= m.sigma(x, b) * tor(b, a, y);
      v += inner * m.phi(a);
    }
    return v;
  };
  for (std::size_t mm = 0; mm < n; ++mm)
    for (std::size_t q = 0; q < n; ++q) sp(mm, q) = term(mm, q) - term(q, mm);
  return sp;
}

}  // namespace detail

/// Basic associated Weyl-type invariant of a pi3 mapping (the rho/sigma form
/// with phi's derivative replaced through the basic equation).
inline TensorGrid pi3_weyl_assoc(const Connection& c, const Pi3MappingData& m) {
  return detail::pi3_weyl_assoc_from(detail::pi3_pieces(c, m), m);
}

/// Derived Weyl-type invariant of a pi3 mapping in its reduced form (no d^i_j s block).
inline TensorGrid pi3_weyl_derived(const Connection& c, const Pi3MappingData& m,
                                   Transcription tr = Transcription::corrected) {
  return detail::pi3_reduced_from(detail::pi3_pieces(c, m), tr == Transcription::literal && m.kind == 1);
}

/// The unreduced derived invariant: reduced form - d^i_j s_mn/(N+1).
inline TensorGrid pi3_weyl_derived_full(const Connection& c, const Pi3MappingData& m) {
  const auto p = detail::pi3_pieces(c, m);
  TensorGrid w = detail::pi3_reduced_from(p, false);
  detail::add_trace_block(w, p.s, -frac(1, long(p.n + 1)));
  return w;
}

struct Pi3XYZ {
  TensorGrid x, y, z;
};

/// X_ij = -A_ij/(N+1);  Y_ij = (B+C)_ij/(N-1) - N/(N^2-1) A_ij - A_ji/(N^2-1);  Z^i_jmn.
inline Pi3XYZ pi3_xyz(const Connection& c, const Pi3MappingData& m) {
  detail::require_kind1(m, "pi3_xyz");
  const auto p = detail::pi3_pieces(c, m);
  const std::size_t n = p.n;
  const long nl = long(n);
  const Rational c0 = frac(-1, nl + 1), c1 = frac(1, nl - 1), c2 = frac(nl, nl * nl - 1), c3 = frac(1, nl * nl - 1);
  Pi3XYZ out{TensorGrid::of_valence(n, 0, 2, {"i", "j"}), TensorGrid::of_valence(n, 0, 2, {"i", "j"}), p.z};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.x(i, j) = p.a(i, j) * c0;
      out.y(i, j) = (p.b(i, j) + p.csig(i, j)) * c1 - p.a(i, j) * c2 - p.a(j, i) * c3;
    }
  return out;
}

/// s_ij = (sigma_a[i|j] - sigma_b[i T^b_aj] + sigma_a[i nu_j]) phi^a.
inline TensorGrid pi3_scalar(const Connection& c, const Pi3MappingData& m) {
  detail::require_kind1(m, "pi3_scalar");
  return detail::pi3_pieces(c, m).s.with_names({"i", "j"});
}

/// Reduced form - N/(N+1) d^i_j s_mn.
inline TensorGrid pi3_weyl_dd(const Connection& c, const Pi3MappingData& m,
                              Transcription tr = Transcription::corrected) {
  detail::require_kind1(m, "pi3_weyl_dd");
  const auto p = detail::pi3_pieces(c, m);
  const long nl = long(p.n);
  TensorGrid w = detail::pi3_reduced_from(p, tr == Transcription::literal);
  detail::add_trace_block(w, p.s, frac(-nl, nl + 1));
  return w;
}

/// Reduced form + (N-1)/(2(N+1)) d^i_j s_mn - 1/2 d^i_j s'_mn.
inline TensorGrid pi3_weyl_ddd(const Connection& c, const Pi3MappingData& m) {
  detail::require_kind1(m, "pi3_weyl_ddd");
  const auto p = detail::pi3_pieces(c, m);
  const long nl = long(p.n);
  TensorGrid w = detail::pi3_reduced_from(p, false);
  detail::add_trace_block(w, p.s, frac(nl - 1, 2 * (nl + 1)));
  detail::add_trace_block(w, detail::pi3_scalar_transposed(p, c, m), frac(-1, 2));
  return w;
}

/// Family of pi3 invariants:
/// base + u T^i_jm|n + u' T^i_jn|m - u (w1^i_an T^a_jm - w2^a_jn T^i_am - w3^a_mn T^i_ja)
///      - u' (v1^i_am T^a_jn - v2^a_jm T^i_an - v3^a_mn T^i_ja)
/// with omega_(1) = S and omega_(2) the pi3 omega.
inline TensorGrid pi3_family(const Connection& c, const Pi3MappingData& m, const FamilyCoefficients& fc,
                             const ThetaSelector& sel1, const ThetaSelector& sel2, FamilyBase base,
                             Transcription tr = Transcription::corrected) {
  validate(sel1);
  validate(sel2);
  const std::size_t n = c.dimension();
  TensorGrid w = base == FamilyBase::assoc ? pi3_weyl_assoc(c, m) : pi3_weyl_derived(c, m, tr);
  const TensorGrid omega = omega_pi3(c, m).omega;
  const TensorGrid& t = c.anti();
  const TensorGrid dt = cov_deriv(t, c, 0);
  const auto& w1 = detail::pick(sel1.p[0], c, omega);
  const auto& w2 = detail::pick(sel1.p[1], c, omega);
  const auto& w3 = detail::pick(sel1.p[2], c, omega);
  const auto& v1 = detail::pick(sel2.p[0], c, omega);
  const auto& v2 = detail::pick(sel2.p[1], c, omega);
  const auto& v3 = detail::pick(sel2.p[2], c, omega);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t mm = 0; mm < n; ++mm)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField bu = dt(i, j, mm, q);
          PolyField bp = dt(i, j, q, mm);
          for (std::size_t a = 0; a < n; ++a) {
            bu -= w1(i, a, q) * t(a, j, mm) - w2(a, j, q) * t(i, a, mm) - w3(a, mm, q) * t(i, j, a);
            bp -= v1(i, a, mm) * t(a, j, q) - v2(a, j, mm) * t(i, a, q) - v3(a, mm, q) * t(i, j, a);
          }
          w(i, j, mm, q) += bu * fc.u + bp * fc.u_prime;
        }
  return w;
}

/// Evaluates many pi3 invariants of one side of a mapping, sharing the
/// common building blocks. Equivalent to the free functions above.
class Pi3Evaluator {
 public:
  Pi3Evaluator(Connection c, Pi3MappingData m)
      : c_(std::move(c)), m_(std::move(m)), p_(detail::pi3_pieces(c_, m_)) {}

  TensorGrid thomas() const { return pi3_thomas(c_, m_); }

  const TensorGrid& weyl_assoc() {
    if (!assoc_) assoc_ = detail::pi3_weyl_assoc_from(p_, m_);
    return *assoc_;
  }

  const TensorGrid& weyl_derived() {
    if (!reduced_) reduced_ = detail::pi3_reduced_from(p_, false);
    return *reduced_;
  }

  TensorGrid scalar() const {
    detail::require_kind1(m_, "pi3_scalar");
    return p_.s;
  }

  TensorGrid weyl_dd() {
    detail::require_kind1(m_, "pi3_weyl_dd");
    const long nl = long(p_.n);
    TensorGrid w = weyl_derived();
    detail::add_trace_block(w, p_.s, frac(-nl, nl + 1));
    return w;
  }

  TensorGrid weyl_ddd() {
    detail::require_kind1(m_, "pi3_weyl_ddd");
    const long nl = long(p_.n);
    TensorGrid w = weyl_derived();
    detail::add_trace_block(w, p_.s, frac(nl - 1, 2 * (nl + 1)));
    detail::add_trace_block(w, detail::pi3_scalar_transposed(p_, c_, m_), frac(-1, 2));
    return w;
  }

  /// The u-block of the family is theta with tau = 0 and the pi3 omega; the
  /// u'-block is the same object with m and n exchanged.
  TensorGrid family(const FamilyCoefficients& fc, const ThetaSelector& sel1, const ThetaSelector& sel2,
                    FamilyBase base) {
    if (!thetas_) thetas_ = theta_table(c_, omega_pi3(c_, m_).omega, TensorGrid::of_valence(p_.n, 1, 2));
    TensorGrid w = base == FamilyBase::assoc ? weyl_assoc() : weyl_derived();
    w += (*thetas_)[sel1] * fc.u;
    w += permute((*thetas_)[sel2], {0, 1, 3, 2}) * fc.u_prime;
    return w;
  }

 private:
  Connection c_;
  Pi3MappingData m_;
  detail::Pi3Pieces p_;
  std::optional<TensorGrid> assoc_, reduced_;
  std::optional<ThetaTable> thetas_;
};

}  // namespace agm
