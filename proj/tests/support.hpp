#pragma once

// Random generators and naive re-derivations shared by the test binaries.
// Nothing here calls the library routine it is meant to check.

#include "agm/agm.hpp"

#include <random>
#include <utility>
#include <vector>

namespace testing_support {

using agm::Connection;
using agm::PolyField;
using agm::Rational;
using agm::TensorGrid;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }

  Rational rational() { return agm::frac(integer(-4, 4), integer(1, 3)); }

  PolyField poly(std::size_t n, unsigned degree) {
    std::vector<PolyField::Term> terms;
    std::vector<unsigned> e(n);
    const int count = int(integer(0, 5));
    for (int t = 0; t < count; ++t) {
      unsigned left = unsigned(integer(0, degree));
      std::fill(e.begin(), e.end(), 0u);
      while (left-- > 0) ++e[std::size_t(integer(0, long(n) - 1))];
      terms.push_back({agm::Monomial::from_exponents(e), rational()});
    }
    return PolyField::from_terms(n, std::move(terms));
  }

  TensorGrid grid(std::size_t n, std::size_t upper, std::size_t lower, unsigned degree) {
    TensorGrid g = TensorGrid::of_valence(n, upper, lower);
    for (std::size_t k = 0; k < g.size(); ++k) g.flat(k) = poly(n, degree);
    return g;
  }

  Connection connection(std::size_t n, unsigned degree) { return Connection(grid(n, 1, 2, degree)); }

  /// Symmetric in the last two slots.
  TensorGrid symmetric12(std::size_t n, unsigned degree) {
    TensorGrid g = grid(n, 1, 2, degree);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) g(i, k, j) = g(i, j, k);
    return g;
  }

  TensorGrid antisymmetric12(std::size_t n, unsigned degree) {
    TensorGrid g = grid(n, 1, 2, degree);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        g(i, j, j) = PolyField(n);
        for (std::size_t k = j + 1; k < n; ++k) g(i, k, j) = -g(i, j, k);
      }
    return g;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

inline PolyField constant(std::size_t n, long v) { return PolyField::constant(n, Rational(v)); }

inline PolyField x(std::size_t n, std::size_t k) { return PolyField::variable(n, k); }

/// Odometer over {0..n-1}^rank.
inline std::vector<std::vector<std::size_t>> all_indices(std::size_t n, std::size_t rank) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> idx(rank, 0);
  while (true) {
    out.push_back(idx);
    std::size_t s = rank;
    while (s > 0 && ++idx[s - 1] == n) idx[--s] = 0;
    if (s == 0) return out;
  }
}

/// Brute-force Einstein summation: walk every pair of full indices and keep
/// those that agree on the paired slots.
inline TensorGrid naive_contract(const TensorGrid& a, const TensorGrid& b,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const std::size_t n = a.dimension();
  std::vector<bool> a_used(a.rank()), b_used(b.rank());
  for (auto [sa, sb] : pairs) a_used[sa] = b_used[sb] = true;
  std::vector<agm::Variance> slots;
  for (std::size_t s = 0; s < a.rank(); ++s)
    if (!a_used[s]) slots.push_back(a.slots()[s]);
  for (std::size_t s = 0; s < b.rank(); ++s)
    if (!b_used[s]) slots.push_back(b.slots()[s]);
  TensorGrid out(n, slots);
  for (const auto& ia : all_indices(n, a.rank()))
    for (const auto& ib : all_indices(n, b.rank())) {
      bool ok = true;
      for (auto [sa, sb] : pairs) ok = ok && ia[sa] == ib[sb];
      if (!ok) continue;
      std::vector<std::size_t> io;
      for (std::size_t s = 0; s < a.rank(); ++s)
        if (!a_used[s]) io.push_back(ia[s]);
      for (std::size_t s = 0; s < b.rank(); ++s)
        if (!b_used[s]) io.push_back(ib[s]);
      out.at(io) += a.at(ia) * b.at(ib);
    }
  return out;
}

/// Symmetric part computed straight from the coefficients.
inline TensorGrid sym_of(const TensorGrid& l) {
  const std::size_t n = l.dimension();
  TensorGrid s = TensorGrid::of_valence(n, 1, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) s(i, j, k) = (l(i, j, k) + l(i, k, j)) * agm::frac(1, 2);
  return s;
}

/// R^i_jmn = S^i_jm,n - S^i_jn,m + S^a_jm S^i_an - S^a_jn S^i_am.
inline TensorGrid naive_curvature(const TensorGrid& l) {
  const std::size_t n = l.dimension();
  const TensorGrid s = sym_of(l);
  TensorGrid r = TensorGrid::of_valence(n, 1, 3);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField v = s(i, j, m).partial(q) - s(i, j, q).partial(m);
          for (std::size_t a = 0; a < n; ++a) v += s(a, j, m) * s(i, a, q) - s(a, j, q) * s(i, a, m);
          r(i, j, m, q) = v;
        }
  return r;
}

/// R_ij = R^a_ija.
inline TensorGrid naive_ricci(const TensorGrid& r) {
  const std::size_t n = r.dimension();
  TensorGrid out = TensorGrid::of_valence(n, 0, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < n; ++a) out(i, j) += r(a, i, j, a);
  return out;
}

/// Thomas projective parameter of the associated space.
inline TensorGrid direct_thomas_projective(const TensorGrid& l) {
  const std::size_t n = l.dimension();
  const TensorGrid s = sym_of(l);
  const Rational inv = agm::frac(1, long(n + 1));
  TensorGrid out = s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t a = 0; a < n; ++a) {
          if (i == k) out(i, j, k) -= s(a, j, a) * inv;
          if (i == j) out(i, j, k) -= s(a, k, a) * inv;
        }
  return out;
}

/// Weyl projective tensor of the associated space, written out per component.
inline TensorGrid direct_weyl_projective(const TensorGrid& l) {
  const std::size_t n = l.dimension();
  const TensorGrid r = naive_curvature(l);
  const TensorGrid ric = naive_ricci(r);
  const long nl = long(n);
  TensorGrid w = r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < n; ++m)
        for (std::size_t q = 0; q < n; ++q) {
          PolyField v = w(i, j, m, q);
          if (i == j) v += (ric(m, q) - ric(q, m)) * agm::frac(1, nl + 1);
          if (i == m) v += (ric(j, q) * nl + ric(q, j)) * agm::frac(1, nl * nl - 1);
          if (i == q) v -= (ric(j, m) * nl + ric(m, j)) * agm::frac(1, nl * nl - 1);
          w(i, j, m, q) = v;
        }
  return w;
}

inline bool all_zero_at_origin(const TensorGrid& g) {
  for (const auto& v : agm::evaluate_at_origin(g))
    if (v != 0) return false;
  return true;
}

inline bool same_at_origin(const TensorGrid& a, const TensorGrid& b) {
  return agm::evaluate_at_origin(a) == agm::evaluate_at_origin(b);
}

}  // namespace testing_support
