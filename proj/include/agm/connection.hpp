#pragma once

#include "agm/tensor.hpp"

#include <utility>

namespace agm {

/// Coefficients L^i_{jk} of a non-symmetric affine connection, slots (i; j, k).
///
/// Stored as a grid for convenience even though L is not tensorial; the
/// symmetric part (associated space) and the antisymmetric part are split
/// once at construction.
class Connection {
 public:
  Connection() = default;

  explicit Connection(TensorGrid coefficients) : coef_(std::move(coefficients)) {
    if (coef_.rank() != 3 || coef_.slots()[0] != Variance::upper || coef_.slots()[1] != Variance::lower ||
        coef_.slots()[2] != Variance::lower)
      throw structural_error("connection coefficients must have valence (1,2)");
    if (coef_.dimension() < 2) throw structural_error("connection dimension must be at least 2");
    coef_ = coef_.with_names({"i", "j", "k"});
    const std::size_t n = coef_.dimension();
    sym_ = TensorGrid::of_valence(n, 1, 2, {"i", "j", "k"});
    anti_ = sym_;
    const Rational half = frac(1, 2);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          sym_(i, j, k) = (coef_(i, j, k) + coef_(i, k, j)) * half;
          anti_(i, j, k) = (coef_(i, j, k) - coef_(i, k, j)) * half;
        }
  }

  std::size_t dimension() const { return coef_.dimension(); }
  const TensorGrid& coefficients() const { return coef_; }
  /// L^i_{(jk)}: coefficients of the associated space.
  const TensorGrid& sym() const { return sym_; }
  /// L^i_{[jk]}/2: the torsion-carrying part.
  const TensorGrid& anti() const { return anti_; }

  friend bool operator==(const Connection& a, const Connection& b) { return a.coef_ == b.coef_; }

 private:
  TensorGrid coef_;
  TensorGrid sym_;
  TensorGrid anti_;
};

/// Free coefficients u, u', v, v', w of the curvature family.
struct FamilyCoefficients {
  Rational u, u_prime, v, v_prime, w;
  friend bool operator==(const FamilyCoefficients&, const FamilyCoefficients&) = default;
};

struct ConnectionParts {
  TensorGrid sym;
  TensorGrid anti;
};

inline ConnectionParts split(const Connection& c) { return {c.sym(), c.anti()}; }

/// Covariant derivative of t, with the derivative index appended as the last
/// lower slot. Kind 0 uses the associated space; kinds 1-4 are the four
/// derivatives of the non-symmetric connection, applied slot by slot:
///   kind 1: +L^i_{ak} / -L^a_{jk}    kind 2: +L^i_{ka} / -L^a_{kj}
///   kind 3: +L^i_{ak} / -L^a_{kj}    kind 4: +L^i_{ka} / -L^a_{jk}
inline TensorGrid cov_deriv(const TensorGrid& t, const Connection& c, int kind) {
  if (kind < 0 || kind > 4) throw structural_error("covariant derivative kind must be in 0..4");
  if (t.dimension() != c.dimension()) throw structural_error("cov_deriv: dimension mismatch");
  const std::size_t n = t.dimension();
  const TensorGrid& gamma = kind == 0 ? c.sym() : c.coefficients();
  // upper slots contract with gamma(i, a, k) or gamma(i, k, a)
  const bool upper_swapped = kind == 2 || kind == 4;
  // lower slots contract with gamma(a, j, k) or gamma(a, k, j)
  const bool lower_swapped = kind == 2 || kind == 3;

  TensorGrid out = gradient(t);
  const std::size_t r = t.rank();
  MultiIndex src(r);
  for (std::size_t off = 0; off < out.size(); ++off) {
    const MultiIndex oi = out.unflatten(off);
    const std::size_t k = oi[r];
    PolyField& acc = out.flat(off);
    for (std::size_t s = 0; s < r; ++s) {
      std::copy(oi.begin(), oi.begin() + std::ptrdiff_t(r), src.begin());
      const std::size_t free = oi[s];
      for (std::size_t a = 0; a < n; ++a) {
        src[s] = a;
        const PolyField& val = t.at(src);
        if (val.is_zero()) continue;
        if (t.slots()[s] == Variance::upper) {
          const PolyField& g = upper_swapped ? gamma(free, k, a) : gamma(free, a, k);
          if (!g.is_zero()) acc += g * val;
        } else {
          const PolyField& g = lower_swapped ? gamma(a, k, free) : gamma(a, free, k);
          if (!g.is_zero()) acc -= g * val;
        }
      }
    }
  }
  return out;
}

/// R^i_{jmn} of the associated space:
/// S^i_{jm,n} - S^i_{jn,m} + S^a_{jm} S^i_{an} - S^a_{jn} S^i_{am}.
inline TensorGrid curvature(const Connection& c) {
  const std::size_t n = c.dimension();
  const TensorGrid& s = c.sym();
  const TensorGrid ds = gradient(s);
  TensorGrid r = TensorGrid::of_valence(n, 1, 3, {"i", "j", "m", "n"});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          if (m == q) continue;
          if (q < m) {
            r(i, j, m, q) = -r(i, j, q, m);
            continue;
          }
          PolyField v = ds(i, j, m, q) - ds(i, j, q, m);
          for (std::size_t a = 0; a < n; ++a) {
            v += s(a, j, m) * s(i, a, q);
            v -= s(a, j, q) * s(i, a, m);
          }
          r(i, j, m, q) = std::move(v);
        }
  return r;
}

/// R_{ij} = R^a_{ija}.
inline TensorGrid ricci_from(const TensorGrid& curv) { return trace(curv, 0, 3).with_names({"i", "j"}); }

inline TensorGrid ricci(const Connection& c) { return ricci_from(curvature(c)); }

/// K^i_{jmn} = R + u T^i_{jm|n} + u' T^i_{jn|m} + v T^a_{jm} T^i_{an}
///           + v' T^a_{jn} T^i_{am} + w T^a_{mn} T^i_{aj},  T = anti(L).
inline TensorGrid curvature_family(const Connection& c, const FamilyCoefficients& fc) {
  const std::size_t n = c.dimension();
  const TensorGrid& t = c.anti();
  const TensorGrid dt = cov_deriv(t, c, 0);
  TensorGrid k = curvature(c);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField v = dt(i, j, m, q) * fc.u + dt(i, j, q, m) * fc.u_prime;
          for (std::size_t a = 0; a < n; ++a) {
            v += t(a, j, m) * t(i, a, q) * fc.v;
            v += t(a, j, q) * t(i, a, m) * fc.v_prime;
            v += t(a, m, q) * t(i, a, j) * fc.w;
          }
          k(i, j, m, q) += v;
        }
  return k;
}

/// K_{ij} = R_{ij} + u T^a_{ij|a} + u' T^a_{ia|j} + v T^a_{ij} T^b_{ab} - (v'+w) T^a_{ib} T^b_{ja}.
inline TensorGrid ricci_family(const Connection& c, const FamilyCoefficients& fc) {
  const std::size_t n = c.dimension();
  const TensorGrid& t = c.anti();
  const TensorGrid dt = cov_deriv(t, c, 0);
  TensorGrid k = ricci(c);
  const Rational vw = fc.v_prime + fc.w;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      PolyField v(n);
      for (std::size_t a = 0; a < n; ++a) {
        v += dt(a, i, j, a) * fc.u;
        v += dt(a, i, a, j) * fc.u_prime;
        for (std::size_t b = 0; b < n; ++b) {
          v += t(a, i, j) * t(b, a, b) * fc.v;
          v -= t(a, i, b) * t(b, j, a) * vw;
        }
      }
      k(i, j) += v;
    }
  return k;
}

/// S^i_{jm|n} = S^i_{jm,n} + S^i_{an} S^a_{jm} - S^a_{jn} S^i_{am} - S^a_{mn} S^i_{ja},
/// written out directly rather than through cov_deriv.
inline TensorGrid sym_conn_deriv(const Connection& c) {
  const std::size_t n = c.dimension();
  const TensorGrid& s = c.sym();
  TensorGrid out = TensorGrid::of_valence(n, 1, 3, {"i", "j", "m", "n"});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField v = s(i, j, m).partial(q);
          for (std::size_t a = 0; a < n; ++a) {
            v += s(i, a, q) * s(a, j, m);
            v -= s(a, j, q) * s(i, a, m);
            v -= s(a, m, q) * s(i, j, a);
          }
          out(i, j, m, q) = std::move(v);
        }
  return out;
}

}  // namespace agm
