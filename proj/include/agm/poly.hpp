#pragma once

#include "agm/rational.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace agm {

inline constexpr std::size_t max_dimension = 6;

/// Exponent vector of a monomial, packed one byte per variable.
class Monomial {
 public:
  static constexpr unsigned bits = 8;
  static constexpr std::uint64_t max_exponent = (1u << bits) - 1;

  constexpr Monomial() = default;

  static Monomial from_exponents(std::span<const unsigned> exps) {
    if (exps.size() > max_dimension) throw structural_error("too many variables in monomial");
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < exps.size(); ++k) {
      if (exps[k] > max_exponent) throw structural_error("monomial exponent overflow");
      key |= std::uint64_t(exps[k]) << (bits * k);
    }
    return Monomial(key);
  }

  static constexpr Monomial variable(std::size_t k) { return Monomial(std::uint64_t(1) << (bits * k)); }

  constexpr unsigned exponent(std::size_t k) const { return unsigned((key_ >> (bits * k)) & max_exponent); }

  constexpr unsigned total_degree() const {
    unsigned d = 0;
    for (std::size_t k = 0; k < max_dimension; ++k) d += exponent(k);
    return d;
  }

  constexpr bool is_constant() const { return key_ == 0; }
  constexpr std::uint64_t key() const { return key_; }

  /// Caller guarantees no per-variable overflow (checked through total degree).
  constexpr Monomial operator*(Monomial other) const { return Monomial(key_ + other.key_); }

  constexpr Monomial lowered(std::size_t k) const { return Monomial(key_ - (std::uint64_t(1) << (bits * k))); }

  friend constexpr auto operator<=>(Monomial, Monomial) = default;

 private:
  constexpr explicit Monomial(std::uint64_t key) : key_(key) {}
  std::uint64_t key_ = 0;
};

/// Exact multivariate polynomial in x^0..x^{N-1} with rational coefficients.
///
/// Terms are kept sorted by monomial with no zero coefficients, so structural
/// equality is mathematical equality. The empty term list is zero.
class PolyField {
 public:
  struct Term {
    Monomial mono;
    Rational coef;
    friend bool operator==(const Term&, const Term&) = default;
  };

  PolyField() = default;
  explicit PolyField(std::size_t dim) : dim_(dim) { check_dim(dim); }

  static PolyField constant(std::size_t dim, const Rational& value) {
    PolyField p(dim);
    if (value != 0) p.terms_.push_back({Monomial(), value});
    return p;
  }

  static PolyField variable(std::size_t dim, std::size_t k) {
    if (k >= dim) throw structural_error("variable index out of range");
    PolyField p(dim);
    p.terms_.push_back({Monomial::variable(k), Rational(1)});
    return p;
  }

  static PolyField monomial(std::size_t dim, std::span<const unsigned> exps, const Rational& coef) {
    if (exps.size() != dim) throw structural_error("exponent vector length differs from dimension");
    PolyField p(dim);
    if (coef != 0) p.terms_.push_back({Monomial::from_exponents(exps), coef});
    return p;
  }

  /// Builds a canonical polynomial from arbitrary (possibly repeated, zero) terms.
  static PolyField from_terms(std::size_t dim, std::vector<Term> terms) {
    PolyField p(dim);
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
  }

  std::size_t dimension() const { return dim_; }
  std::span<const Term> terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.total_degree());
    return d;
  }

  Rational constant_term() const {
    if (!terms_.empty() && terms_.front().mono.is_constant()) return terms_.front().coef;
    return Rational(0);
  }

  Rational coefficient(Monomial m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, Monomial key) { return t.mono < key; });
    if (it != terms_.end() && it->mono == m) return it->coef;
    return Rational(0);
  }

  Rational evaluate(std::span<const Rational> point) const {
    if (point.size() != dim_) throw structural_error("evaluation point has wrong dimension");
    Rational sum = 0;
    for (const auto& t : terms_) {
      Rational v = t.coef;
      for (std::size_t k = 0; k < dim_; ++k)
        for (unsigned e = t.mono.exponent(k); e > 0; --e) v *= point[k];
      sum += v;
    }
    return sum;
  }

  /// Formal partial derivative with respect to x^k.
  PolyField partial(std::size_t k) const {
    if (k >= dim_) throw structural_error("partial derivative axis out of range");
    PolyField out(dim_);
    for (const auto& t : terms_) {
      const unsigned e = t.mono.exponent(k);
      if (e == 0) continue;
      out.terms_.push_back({t.mono.lowered(k), t.coef * e});
    }
    // lowering one exponent preserves the ordering of distinct terms that keep e > 0
    std::sort(out.terms_.begin(), out.terms_.end(), [](const Term& a, const Term& b) { return a.mono < b.mono; });
    return out;
  }

  /// Keeps only terms of total degree <= d.
  PolyField truncated(unsigned d) const {
    PolyField out(dim_);
    for (const auto& t : terms_)
      if (t.mono.total_degree() <= d) out.terms_.push_back(t);
    return out;
  }

  PolyField operator-() const {
    PolyField out = *this;
    for (auto& t : out.terms_) t.coef = -t.coef;
    return out;
  }

  PolyField& operator+=(const PolyField& b) {
    accumulate(b, false);
    return *this;
  }
  PolyField& operator-=(const PolyField& b) {
    accumulate(b, true);
    return *this;
  }
  PolyField& operator*=(const PolyField& b) { return *this = *this * b; }

  PolyField& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.coef *= s;
    return *this;
  }

  friend PolyField operator+(PolyField a, const PolyField& b) {
    a.accumulate(b, false);
    return a;
  }
  friend PolyField operator-(PolyField a, const PolyField& b) {
    a.accumulate(b, true);
    return a;
  }

  friend PolyField operator*(const PolyField& a, const PolyField& b) {
    a.check_same(b);
    PolyField out(a.dim_);
    if (a.is_zero() || b.is_zero()) return out;
    if (a.degree() + b.degree() > Monomial::max_exponent) throw structural_error("polynomial degree overflow");
    if (a.terms_.size() == 1 && a.terms_.front().mono.is_constant()) return b * a.terms_.front().coef;
    if (b.terms_.size() == 1 && b.terms_.front().mono.is_constant()) return a * b.terms_.front().coef;
    out.terms_.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_) out.terms_.push_back({ta.mono * tb.mono, ta.coef * tb.coef});
    out.normalize();
    return out;
  }

  friend PolyField operator*(PolyField a, const Rational& s) {
    a *= s;
    return a;
  }
  friend PolyField operator*(const Rational& s, PolyField a) {
    a *= s;
    return a;
  }

  friend bool operator==(const PolyField& a, const PolyField& b) {
    return a.dim_ == b.dim_ && a.terms_ == b.terms_;
  }

  /// Human-readable form, e.g. "3/2*x0^2*x1 - x2 + 5".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    // highest monomial first reads more naturally
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      Rational c = it->coef;
      if (out.empty()) {
        if (c < 0) {
          out += "-";
          c = -c;
        }
      } else {
        out += c < 0 ? " - " : " + ";
        if (c < 0) c = -c;
      }
      std::string mono;
      for (std::size_t k = 0; k < dim_; ++k) {
        const unsigned e = it->mono.exponent(k);
        if (e == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += "x" + std::to_string(k);
        if (e > 1) mono += "^" + std::to_string(e);
      }
      if (mono.empty())
        out += c.get_str();
      else if (c == 1)
        out += mono;
      else
        out += c.get_str() + "*" + mono;
    }
    return out;
  }

 private:
  static void check_dim(std::size_t dim) {
    if (dim == 0 || dim > max_dimension) throw structural_error("polynomial dimension must be in 1..6");
  }

  void check_same(const PolyField& b) const {
    if (dim_ != b.dim_) throw structural_error("polynomial dimension mismatch");
  }

  /// this += b (or -= b), moving this's own coefficients instead of copying them.
  void accumulate(const PolyField& b, bool subtract) {
    check_same(b);
    if (b.terms_.empty()) return;
    if (terms_.empty()) {
      terms_ = b.terms_;
      if (subtract)
        for (auto& t : terms_) t.coef = -t.coef;
      return;
    }
    std::vector<Term> out;
    out.reserve(terms_.size() + b.terms_.size());
    auto ia = terms_.begin();
    auto ib = b.terms_.begin();
    while (ia != terms_.end() || ib != b.terms_.end()) {
      if (ib == b.terms_.end() || (ia != terms_.end() && ia->mono < ib->mono)) {
        out.push_back(std::move(*ia++));
      } else if (ia == terms_.end() || ib->mono < ia->mono) {
        out.push_back({ib->mono, subtract ? Rational(-ib->coef) : ib->coef});
        ++ib;
      } else {
        if (subtract)
          ia->coef -= ib->coef;
        else
          ia->coef += ib->coef;
        if (ia->coef != 0) out.push_back(std::move(*ia));
        ++ia;
        ++ib;
      }
    }
    terms_ = std::move(out);
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.mono < b.mono; });
    std::size_t w = 0;
    for (std::size_t r = 0; r < terms_.size();) {
      Monomial m = terms_[r].mono;
      Rational c = std::move(terms_[r].coef);
      for (++r; r < terms_.size() && terms_[r].mono == m; ++r) c += terms_[r].coef;
      if (c != 0) terms_[w++] = Term{m, std::move(c)};
    }
    terms_.resize(w);
  }

  std::size_t dim_ = 1;
  std::vector<Term> terms_;
};

}  // namespace agm
