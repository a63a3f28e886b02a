#pragma once

// Bigraded Hilbert series of quotients by monomial ideals.
//
// A series is numerator / prod_g (1 - T^{p_g} S^{q_g}), with T tracking the
// cohomological degree and S the weight. The numerator of a monomial ideal is
// computed with the pivot recursion
//
//   N(I) = N(I + (x^e)) + T^{p}S^{q} N(I : x^e)
//
// which terminates because both ideals on the right are strictly simpler.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "subtle/poly.hpp"

namespace subtle {

/// Integer polynomial in T (p-degree) and S (weight).
class IntPoly2 {
 public:
  using Key = std::pair<std::int64_t, std::int64_t>;  // (p, q)

  IntPoly2() = default;
  static IntPoly2 constant(std::int64_t c) {
    IntPoly2 r;
    r.add(0, 0, c);
    return r;
  }
  /// 1 - T^p S^q
  static IntPoly2 one_minus(Bidegree d) {
    IntPoly2 r = constant(1);
    r.add(d.p, d.q, -1);
    return r;
  }

  void add(std::int64_t p, std::int64_t q, std::int64_t c) {
    if (c == 0) return;
    auto [it, inserted] = coeffs_.try_emplace(Key{p, q}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) coeffs_.erase(it);
    }
  }

  const std::map<Key, std::int64_t>& coefficients() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::int64_t at(std::int64_t p, std::int64_t q) const {
    auto it = coeffs_.find({p, q});
    return it == coeffs_.end() ? 0 : it->second;
  }

  IntPoly2& operator+=(const IntPoly2& o) {
    for (auto [k, c] : o.coeffs_) add(k.first, k.second, c);
    return *this;
  }
  friend IntPoly2 operator+(IntPoly2 a, const IntPoly2& b) { return a += b; }

  friend IntPoly2 operator*(const IntPoly2& a, const IntPoly2& b) {
    IntPoly2 r;
    for (auto [ka, ca] : a.coeffs_)
      for (auto [kb, cb] : b.coeffs_) r.add(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return r;
  }

  /// Multiplies by the monomial T^p S^q.
  IntPoly2 shifted(Bidegree d) const {
    IntPoly2 r;
    for (auto [k, c] : coeffs_) r.coeffs_.emplace(Key{k.first + d.p, k.second + d.q}, c);
    return r;
  }

  friend bool operator==(const IntPoly2&, const IntPoly2&) = default;

 private:
  std::map<Key, std::int64_t> coeffs_;
};

class HilbertSeries {
 public:
  HilbertSeries(IntPoly2 numerator, std::vector<Bidegree> denominator)
      : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {}

  const IntPoly2& numerator() const noexcept { return numerator_; }
  const std::vector<Bidegree>& denominator() const noexcept { return denominator_; }

  IntPoly2 denominator_poly() const {
    IntPoly2 d = IntPoly2::constant(1);
    for (auto b : denominator_) d = d * IntPoly2::one_minus(b);
    return d;
  }

  /// Multiplies the series by (1 - T^p S^q).
  HilbertSeries times_factor(Bidegree d) const {
    return HilbertSeries(numerator_ * IntPoly2::one_minus(d), denominator_);
  }

  /// Equality as rational functions (cross-multiplied numerators).
  friend bool operator==(const HilbertSeries& a, const HilbertSeries& b) {
    if (a.denominator_ == b.denominator_) return a.numerator_ == b.numerator_;
    return a.numerator_ * b.denominator_poly() == b.numerator_ * a.denominator_poly();
  }

  struct Entry {
    std::int64_t dim;
    std::int64_t p;
    std::int64_t q;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Power-series coefficients with p + q <= max_d, sorted by (p, q);
  /// zero coefficients are omitted.
  std::vector<Entry> expand(std::int64_t max_d) const {
    std::map<IntPoly2::Key, std::int64_t> acc;
    for (auto [k, c] : numerator_.coefficients())
      if (k.first + k.second <= max_d) acc[k] += c;
    // Divide by each factor (1 - T^p S^q) in turn: multiply by the geometric series.
    for (auto b : denominator_) {
      std::int64_t step = b.combined();
      std::map<IntPoly2::Key, std::int64_t> next;
      for (auto [k, c] : acc) {
        if (c == 0) continue;
        for (std::int64_t j = 0; k.first + k.second + j * step <= max_d; ++j)
          next[{k.first + j * b.p, k.second + j * b.q}] += c;
      }
      acc = std::move(next);
    }
    std::vector<Entry> out;
    for (auto [k, c] : acc)
      if (c != 0) out.push_back({c, k.first, k.second});
    return out;
  }

 private:
  IntPoly2 numerator_;
  std::vector<Bidegree> denominator_;
};

namespace detail {

using Exponents = std::vector<std::uint32_t>;

inline bool exps_divide(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

// Removes non-minimal generators (and duplicates).
inline std::vector<Exponents> minimalize(std::vector<Exponents> gens) {
  std::sort(gens.begin(), gens.end(), [](const Exponents& a, const Exponents& b) {
    auto sa = std::accumulate(a.begin(), a.end(), std::uint64_t{0});
    auto sb = std::accumulate(b.begin(), b.end(), std::uint64_t{0});
    return sa != sb ? sa < sb : a < b;
  });
  std::vector<Exponents> out;
  for (auto& g : gens) {
    bool redundant = false;
    for (const auto& h : out)
      if (exps_divide(h, g)) {
        redundant = true;
        break;
      }
    if (!redundant) out.push_back(std::move(g));
  }
  return out;
}

inline Bidegree exps_bidegree(const std::vector<Bidegree>& degs, const Exponents& e) {
  Bidegree d;
  for (std::size_t i = 0; i < e.size(); ++i) d = d + static_cast<std::int64_t>(e[i]) * degs[i];
  return d;
}

inline IntPoly2 numerator_rec(std::vector<Exponents> gens, const std::vector<Bidegree>& degs) {
  gens = minimalize(std::move(gens));
  if (gens.empty()) return IntPoly2::constant(1);
  const std::size_t nvars = degs.size();

  std::vector<std::size_t> count(nvars, 0);
  for (const auto& g : gens)
    for (std::size_t i = 0; i < nvars; ++i)
      if (g[i]) ++count[i];

  std::size_t pivot = nvars;
  for (std::size_t i = 0; i < nvars; ++i)
    if (count[i] >= 2 && (pivot == nvars || count[i] > count[pivot])) pivot = i;

  if (pivot == nvars) {
    // Pairwise coprime generators form a regular sequence.
    IntPoly2 r = IntPoly2::constant(1);
    for (const auto& g : gens) r = r * IntPoly2::one_minus(exps_bidegree(degs, g));
    return r;
  }

  // x^e with e the least positive exponent of the pivot; x^e is not in the
  // ideal because the pivot occurs in at least two minimal generators.
  std::uint32_t e = 0;
  for (const auto& g : gens)
    if (g[pivot] && (e == 0 || g[pivot] < e)) e = g[pivot];

  Exponents pivot_mon(nvars, 0);
  pivot_mon[pivot] = e;

  std::vector<Exponents> sum = gens;
  sum.push_back(pivot_mon);

  std::vector<Exponents> colon = std::move(gens);
  for (auto& g : colon) g[pivot] = g[pivot] > e ? g[pivot] - e : 0;

  IntPoly2 r = numerator_rec(std::move(sum), degs);
  r += numerator_rec(std::move(colon), degs).shifted(exps_bidegree(degs, pivot_mon));
  return r;
}

}  // namespace detail

/// Hilbert series of ring / (monomials).
inline HilbertSeries monomial_hilbert_series(const Ring& ring, const std::vector<Monomial>& monomials) {
  std::vector<Bidegree> degs;
  for (const auto& g : ring.generators()) degs.push_back(g.degree);
  std::vector<detail::Exponents> gens;
  for (const auto& m : monomials) gens.push_back(m.exponents);
  return HilbertSeries(detail::numerator_rec(std::move(gens), degs), degs);
}

}  // namespace subtle
