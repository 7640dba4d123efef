#pragma once

#include "agm/poly.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace agm {

enum class Variance : std::uint8_t { upper, lower };

using MultiIndex = std::vector<std::size_t>;

/// Dense grid of polynomial components over dimension N with an explicit
/// variance per slot. Storage is row-major in declared slot order.
class TensorGrid {
 public:
  TensorGrid() = default;

  TensorGrid(std::size_t dim, std::vector<Variance> slots, std::vector<std::string> names = {})
      : dim_(dim), slots_(std::move(slots)), names_(std::move(names)) {
    if (dim == 0 || dim > max_dimension) throw structural_error("grid dimension must be in 1..6");
    if (!names_.empty() && names_.size() != slots_.size())
      throw structural_error("slot names must match slot count");
    std::size_t n = 1;
    for (std::size_t s = 0; s < slots_.size(); ++s) n *= dim_;
    comps_.assign(n, PolyField(dim_));
  }

  /// Upper slots first, then lower slots.
  static TensorGrid of_valence(std::size_t dim, std::size_t upper, std::size_t lower,
                               std::vector<std::string> names = {}) {
    std::vector<Variance> slots(upper, Variance::upper);
    slots.insert(slots.end(), lower, Variance::lower);
    return TensorGrid(dim, std::move(slots), std::move(names));
  }

  static TensorGrid scalar(const PolyField& value) {
    TensorGrid g(value.dimension(), {});
    g.comps_[0] = value;
    return g;
  }

  std::size_t dimension() const { return dim_; }
  std::size_t rank() const { return slots_.size(); }
  std::span<const Variance> slots() const { return slots_; }
  std::span<const std::string> slot_names() const { return names_; }
  std::size_t size() const { return comps_.size(); }

  std::size_t upper_count() const { return std::size_t(std::count(slots_.begin(), slots_.end(), Variance::upper)); }
  std::size_t lower_count() const { return rank() - upper_count(); }

  bool same_shape(const TensorGrid& o) const { return dim_ == o.dim_ && slots_ == o.slots_; }

  std::span<const PolyField> components() const { return comps_; }
  PolyField& flat(std::size_t k) { return comps_[k]; }
  const PolyField& flat(std::size_t k) const { return comps_[k]; }

  std::size_t offset(std::span<const std::size_t> idx) const {
    if (idx.size() != rank()) throw structural_error("index arity differs from grid rank");
    std::size_t off = 0;
    for (std::size_t k : idx) {
      if (k >= dim_) throw structural_error("index component out of range");
      off = off * dim_ + k;
    }
    return off;
  }

  MultiIndex unflatten(std::size_t off) const {
    MultiIndex idx(rank());
    for (std::size_t s = rank(); s-- > 0;) {
      idx[s] = off % dim_;
      off /= dim_;
    }
    return idx;
  }

  PolyField& at(std::span<const std::size_t> idx) { return comps_[offset(idx)]; }
  const PolyField& at(std::span<const std::size_t> idx) const { return comps_[offset(idx)]; }

  template <typename... I>
  PolyField& operator()(I... idx) {
    return comps_[fast_offset(idx...)];
  }
  template <typename... I>
  const PolyField& operator()(I... idx) const {
    return comps_[fast_offset(idx...)];
  }

  /// Fills every component from f(multi-index).
  template <typename F>
  TensorGrid& fill(F&& f) {
    for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] = f(unflatten(k));
    return *this;
  }

  bool is_zero() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const PolyField& p) { return p.is_zero(); });
  }

  TensorGrid& operator+=(const TensorGrid& b) {
    check_shape(b);
    for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] += b.comps_[k];
    return *this;
  }
  TensorGrid& operator-=(const TensorGrid& b) {
    check_shape(b);
    for (std::size_t k = 0; k < comps_.size(); ++k) comps_[k] -= b.comps_[k];
    return *this;
  }
  TensorGrid& operator*=(const Rational& s) {
    for (auto& c : comps_) c *= s;
    return *this;
  }

  friend TensorGrid operator+(TensorGrid a, const TensorGrid& b) { return a += b; }
  friend TensorGrid operator-(TensorGrid a, const TensorGrid& b) { return a -= b; }
  friend TensorGrid operator*(TensorGrid a, const Rational& s) { return a *= s; }
  friend TensorGrid operator*(const Rational& s, TensorGrid a) { return a *= s; }
  TensorGrid operator-() const {
    TensorGrid out = *this;
    for (auto& c : out.comps_) c = -c;
    return out;
  }

  /// Component-wise equality; slot names are documentation and do not participate.
  friend bool operator==(const TensorGrid& a, const TensorGrid& b) {
    return a.same_shape(b) && a.comps_ == b.comps_;
  }

  TensorGrid with_names(std::vector<std::string> names) const {
    TensorGrid out = *this;
    if (!names.empty() && names.size() != rank()) throw structural_error("slot names must match slot count");
    out.names_ = std::move(names);
    return out;
  }

  void check_shape(const TensorGrid& b) const {
    if (!same_shape(b)) throw structural_error("grid shape mismatch");
  }

 private:
  template <typename... I>
  std::size_t fast_offset(I... idx) const {
    std::size_t off = 0;
    ((off = off * dim_ + std::size_t(idx)), ...);
    return off;
  }

  std::size_t dim_ = 1;
  std::vector<Variance> slots_;
  std::vector<std::string> names_;
  std::vector<PolyField> comps_{PolyField(1)};
};

/// Calls f(index) for every multi-index of the given rank over {0..dim-1}.
template <typename F>
void for_each_index(std::size_t dim, std::size_t rank, F&& f) {
  MultiIndex idx(rank, 0);
  while (true) {
    f(std::as_const(idx));
    std::size_t s = rank;
    while (s > 0) {
      if (++idx[s - 1] < dim) break;
      idx[s - 1] = 0;
      --s;
    }
    if (s == 0) return;
  }
}

inline TensorGrid kronecker_delta(std::size_t dim) {
  TensorGrid d = TensorGrid::of_valence(dim, 1, 1, {"i", "j"});
  for (std::size_t i = 0; i < dim; ++i) d(i, i) = PolyField::constant(dim, 1);
  return d;
}

/// Einstein summation over each (slot of a, slot of b) pair. Paired slots
/// must have opposite variance. Remaining slots are ordered a-then-b.
inline TensorGrid contract(const TensorGrid& a, const TensorGrid& b,
                           std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  if (a.dimension() != b.dimension()) throw structural_error("contract: dimension mismatch");
  const std::size_t dim = a.dimension();
  std::vector<int> a_pair(a.rank(), -1), b_pair(b.rank(), -1);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [sa, sb] = pairs[p];
    if (sa >= a.rank() || sb >= b.rank()) throw structural_error("contract: slot out of range");
    if (a_pair[sa] >= 0 || b_pair[sb] >= 0) throw structural_error("contract: slot paired twice");
    if (a.slots()[sa] == b.slots()[sb]) throw structural_error("contract: paired slots must have opposite variance");
    a_pair[sa] = int(p);
    b_pair[sb] = int(p);
  }
  std::vector<Variance> out_slots;
  std::vector<std::string> out_names;
  const bool named = !a.slot_names().empty() && !b.slot_names().empty();
  std::vector<std::size_t> a_free, b_free;
  for (std::size_t s = 0; s < a.rank(); ++s)
    if (a_pair[s] < 0) {
      a_free.push_back(s);
      out_slots.push_back(a.slots()[s]);
      if (named) out_names.push_back(a.slot_names()[s]);
    }
  for (std::size_t s = 0; s < b.rank(); ++s)
    if (b_pair[s] < 0) {
      b_free.push_back(s);
      out_slots.push_back(b.slots()[s]);
      if (named) out_names.push_back(b.slot_names()[s]);
    }
  TensorGrid out(dim, out_slots, out_names);
  MultiIndex ia(a.rank()), ib(b.rank());
  for_each_index(dim, out.rank(), [&](const MultiIndex& oi) {
    for (std::size_t k = 0; k < a_free.size(); ++k) ia[a_free[k]] = oi[k];
    for (std::size_t k = 0; k < b_free.size(); ++k) ib[b_free[k]] = oi[a_free.size() + k];
    PolyField sum(dim);
    for_each_index(dim, pairs.size(), [&](const MultiIndex& si) {
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        ia[pairs[p].first] = si[p];
        ib[pairs[p].second] = si[p];
      }
      const PolyField& x = a.at(ia);
      const PolyField& y = b.at(ib);
      if (!x.is_zero() && !y.is_zero()) sum += x * y;
    });
    out.at(oi) = std::move(sum);
  });
  return out;
}

inline TensorGrid contract(const TensorGrid& a, const TensorGrid& b,
                           std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
  return contract(a, b, std::span<const std::pair<std::size_t, std::size_t>>(pairs.begin(), pairs.size()));
}

inline TensorGrid outer(const TensorGrid& a, const TensorGrid& b) {
  return contract(a, b, std::span<const std::pair<std::size_t, std::size_t>>{});
}

/// Contraction of one upper and one lower slot of the same grid.
inline TensorGrid trace(const TensorGrid& t, std::size_t s1, std::size_t s2) {
  if (s1 >= t.rank() || s2 >= t.rank() || s1 == s2) throw structural_error("trace: bad slots");
  if (t.slots()[s1] == t.slots()[s2]) throw structural_error("trace: slots must have opposite variance");
  std::vector<Variance> slots;
  std::vector<std::string> names;
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < t.rank(); ++s)
    if (s != s1 && s != s2) {
      keep.push_back(s);
      slots.push_back(t.slots()[s]);
      if (!t.slot_names().empty()) names.push_back(t.slot_names()[s]);
    }
  TensorGrid out(t.dimension(), slots, names);
  MultiIndex full(t.rank());
  for_each_index(t.dimension(), out.rank(), [&](const MultiIndex& oi) {
    for (std::size_t k = 0; k < keep.size(); ++k) full[keep[k]] = oi[k];
    PolyField sum(t.dimension());
    for (std::size_t a = 0; a < t.dimension(); ++a) {
      full[s1] = a;
      full[s2] = a;
      sum += t.at(full);
    }
    out.at(oi) = std::move(sum);
  });
  return out;
}

/// t(..s1..s2..) - t(..s2..s1..). No factor 1/2.
inline TensorGrid alternate(const TensorGrid& t, std::size_t s1, std::size_t s2) {
  if (s1 >= t.rank() || s2 >= t.rank() || s1 == s2) throw structural_error("alternate: bad slots");
  if (t.slots()[s1] != t.slots()[s2]) throw structural_error("alternate: slots must have equal variance");
  TensorGrid out = t;
  MultiIndex sw(t.rank());
  for (std::size_t k = 0; k < t.size(); ++k) {
    sw = t.unflatten(k);
    std::swap(sw[s1], sw[s2]);
    out.flat(k) = t.flat(k) - t.at(sw);
  }
  return out;
}

/// Reorders slots: slot s of the result is slot perm[s] of t.
inline TensorGrid permute(const TensorGrid& t, std::span<const std::size_t> perm) {
  if (perm.size() != t.rank()) throw structural_error("permute: arity mismatch");
  std::vector<Variance> slots(t.rank());
  std::vector<std::string> names(t.slot_names().empty() ? 0 : t.rank());
  for (std::size_t s = 0; s < t.rank(); ++s) {
    slots[s] = t.slots()[perm[s]];
    if (!names.empty()) names[s] = t.slot_names()[perm[s]];
  }
  TensorGrid out(t.dimension(), slots, names);
  MultiIndex src(t.rank());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const MultiIndex oi = out.unflatten(k);
    for (std::size_t s = 0; s < t.rank(); ++s) src[perm[s]] = oi[s];
    out.flat(k) = t.at(src);
  }
  return out;
}

inline TensorGrid permute(const TensorGrid& t, std::initializer_list<std::size_t> perm) {
  return permute(t, std::span<const std::size_t>(perm.begin(), perm.size()));
}

/// Symmetric in two slots (exact).
inline bool is_symmetric(const TensorGrid& t, std::size_t s1, std::size_t s2) {
  return alternate(t, s1, s2).is_zero();
}

inline bool is_antisymmetric(const TensorGrid& t, std::size_t s1, std::size_t s2) {
  std::vector<std::size_t> perm(t.rank());
  std::iota(perm.begin(), perm.end(), std::size_t(0));
  std::swap(perm[s1], perm[s2]);
  return (t + permute(t, perm)).is_zero();
}

/// Partial derivative of every component, appended as a trailing lower slot.
inline TensorGrid gradient(const TensorGrid& t) {
  std::vector<Variance> slots(t.slots().begin(), t.slots().end());
  slots.push_back(Variance::lower);
  std::vector<std::string> names(t.slot_names().begin(), t.slot_names().end());
  if (!names.empty()) names.push_back("d");
  TensorGrid out(t.dimension(), slots, names);
  const std::size_t n = t.dimension();
  for (std::size_t k = 0; k < t.size(); ++k)
    for (std::size_t d = 0; d < n; ++d) out.flat(k * n + d) = t.flat(k).partial(d);
  return out;
}

/// Multiplies every component by a polynomial.
inline TensorGrid times(const TensorGrid& t, const PolyField& f) {
  TensorGrid out = t;
  for (std::size_t k = 0; k < out.size(); ++k) out.flat(k) = t.flat(k) * f;
  return out;
}

/// Value of each component at x = 0, in storage order.
inline std::vector<Rational> evaluate_at_origin(const TensorGrid& t) {
  std::vector<Rational> out;
  out.reserve(t.size());
  for (const auto& c : t.components()) out.push_back(c.constant_term());
  return out;
}

inline std::vector<Rational> evaluate_at(const TensorGrid& t, std::span<const Rational> point) {
  std::vector<Rational> out;
  out.reserve(t.size());
  for (const auto& c : t.components()) out.push_back(c.evaluate(point));
  return out;
}

/// Grid whose components are the degree <= d truncations of t.
inline TensorGrid truncated(const TensorGrid& t, unsigned d) {
  TensorGrid out = t;
  for (std::size_t k = 0; k < out.size(); ++k) out.flat(k) = t.flat(k).truncated(d);
  return out;
}

}  // namespace agm
