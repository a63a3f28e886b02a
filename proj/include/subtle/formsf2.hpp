#pragma once

// Bilinear forms over F2, their right radicals, Frobenius-twisted sequences
// B(x, y^{2^l}) and the Quillen forms that control the length h(n) of the
// regular sequence in the tau-killed setting.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "subtle/poly.hpp"

namespace subtle {

/// Arithmetic in F_{2^e}, 1 <= e <= 16, elements as bit vectors modulo the
/// Conway polynomial of degree e.
class Gf2e {
 public:
  static constexpr unsigned max_degree = 16;

  explicit Gf2e(unsigned e) : e_(e) {
    if (e < 1 || e > max_degree) throw domain_error("field degree must lie in [1, 16]");
    modulus_ = conway_polynomial(e);
  }

  /// Conway polynomials over F2, bit i is the coefficient of x^i.
  static std::uint32_t conway_polynomial(unsigned e) {
    static constexpr std::array<std::uint32_t, 17> table = {
        0,
        0b11,                  // x + 1
        0b111,                 // x^2 + x + 1
        0b1011,                // x^3 + x + 1
        0b10011,               // x^4 + x + 1
        0b100101,              // x^5 + x^2 + 1
        0b1011011,             // x^6 + x^4 + x^3 + x + 1
        0b10000011,            // x^7 + x + 1
        0b100011101,           // x^8 + x^4 + x^3 + x^2 + 1
        0b1000010001,          // x^9 + x^4 + 1
        0b10001101111,         // x^10 + x^6 + x^5 + x^3 + x^2 + x + 1
        0b100000000101,        // x^11 + x^2 + 1
        0b1000011101011,       // x^12 + x^7 + x^6 + x^5 + x^3 + x + 1
        0b10000000011011,      // x^13 + x^4 + x^3 + x + 1
        0b100000010101001,     // x^14 + x^7 + x^5 + x^3 + 1
        0b1000000000110101,    // x^15 + x^5 + x^4 + x^2 + 1
        0b10000000000101101,   // x^16 + x^5 + x^3 + x^2 + 1
    };
    return table.at(e);
  }

  unsigned degree() const noexcept { return e_; }
  std::uint32_t order() const noexcept { return std::uint32_t{1} << e_; }
  std::uint32_t modulus() const noexcept { return modulus_; }

  /// The class of x, a generator of the multiplicative group (for e >= 2).
  std::uint32_t generator() const noexcept { return e_ == 1 ? 1 : 2; }

  static std::uint32_t add(std::uint32_t a, std::uint32_t b) noexcept { return a ^ b; }

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept {
    std::uint32_t r = 0;
    while (b) {
      if (b & 1) r ^= a;
      b >>= 1;
      a <<= 1;
      if (a & (std::uint32_t{1} << e_)) a ^= modulus_;
    }
    return r;
  }

  std::uint32_t pow(std::uint32_t a, std::uint64_t k) const noexcept {
    std::uint32_t r = 1;
    while (k) {
      if (k & 1) r = mul(r, a);
      a = mul(a, a);
      k >>= 1;
    }
    return r;
  }

  std::uint32_t inv(std::uint32_t a) const {
    if (a == 0) throw domain_error("zero has no inverse");
    return pow(a, order() - 2);
  }

  std::uint32_t frobenius(std::uint32_t a) const noexcept { return mul(a, a); }

 private:
  unsigned e_;
  std::uint32_t modulus_ = 0;
};

/// A subspace of F_{2^e}^dim, stored in reduced row echelon form.
class Subspace {
 public:
  using Vector = std::vector<std::uint32_t>;

  /// Span of the given vectors over F_{2^e}.
  Subspace(std::size_t ambient_dim, std::vector<Vector> vectors, unsigned field_degree = 1)
      : field_(field_degree), ambient_dim_(ambient_dim) {
    for (const auto& v : vectors) {
      if (v.size() != ambient_dim) throw domain_error("vector length does not match ambient dimension");
      for (auto c : v)
        if (c >= field_.order()) throw domain_error("coordinate outside the field");
    }
    basis_ = echelon(std::move(vectors));
  }

  std::size_t dim() const noexcept { return basis_.size(); }
  std::size_t ambient_dim() const noexcept { return ambient_dim_; }
  const std::vector<Vector>& basis() const noexcept { return basis_; }
  const Gf2e& field() const noexcept { return field_; }

  bool contains(const Vector& v) const {
    auto rows = basis_;
    rows.push_back(v);
    return echelon(std::move(rows)).size() == basis_.size();
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.field_.degree() == b.field_.degree() && a.ambient_dim_ == b.ambient_dim_ && a.basis_ == b.basis_;
  }

 private:
  std::vector<Vector> echelon(std::vector<Vector> rows) const {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < ambient_dim_ && rank < rows.size(); ++col) {
      std::size_t pivot = rank;
      while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
      if (pivot == rows.size()) continue;
      std::swap(rows[rank], rows[pivot]);
      auto inv = field_.inv(rows[rank][col]);
      for (auto& c : rows[rank]) c = field_.mul(c, inv);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == rank || rows[r][col] == 0) continue;
        auto f = rows[r][col];
        for (std::size_t c = 0; c < ambient_dim_; ++c) rows[r][c] ^= field_.mul(f, rows[rank][c]);
      }
      ++rank;
    }
    rows.resize(rank);
    return rows;
  }

  Gf2e field_;
  std::size_t ambient_dim_;
  std::vector<Vector> basis_;
};

/// True iff coordinatewise squaring maps W into itself, i.e. W is spanned by
/// F2-rational vectors.
inline bool frobenius_stable(const Subspace& w) {
  for (const auto& v : w.basis()) {
    Subspace::Vector sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = w.field().frobenius(v[i]);
    if (!w.contains(sq)) return false;
  }
  return true;
}

/// B(x, y) = x^T M y over F2.
class BilinearFormF2 {
 public:
  explicit BilinearFormF2(std::size_t dim) : dim_(dim), m_(dim * dim, 0) {}

  BilinearFormF2(std::vector<std::vector<std::uint8_t>> rows) : BilinearFormF2(rows.size()) {
    for (std::size_t i = 0; i < dim_; ++i) {
      if (rows[i].size() != dim_) throw parse_error("bilinear form matrix must be square");
      for (std::size_t j = 0; j < dim_; ++j) {
        if (rows[i][j] > 1) throw parse_error("bilinear form entries must be 0 or 1");
        m_[i * dim_ + j] = rows[i][j];
      }
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::uint8_t at(std::size_t i, std::size_t j) const { return m_.at(i * dim_ + j); }
  void set(std::size_t i, std::size_t j, bool v) { m_.at(i * dim_ + j) = v ? 1 : 0; }

  std::vector<std::vector<std::uint8_t>> rows() const {
    std::vector<std::vector<std::uint8_t>> out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out[i].assign(m_.begin() + i * dim_, m_.begin() + (i + 1) * dim_);
    return out;
  }

  bool evaluate(const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& y) const {
    std::uint8_t s = 0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) s ^= x[i] & at(i, j) & y[j];
    return s;
  }

  friend bool operator==(const BilinearFormF2&, const BilinearFormF2&) = default;

 private:
  std::size_t dim_;
  std::vector<std::uint8_t> m_;
};

/// rad_r(B) = { y : B(x, y) = 0 for all x } = ker M.
inline Subspace right_radical(const BilinearFormF2& b) {
  const std::size_t n = b.dim();
  // Row reduce M, then read the kernel off the free columns.
  std::vector<std::vector<std::uint8_t>> rows = b.rows();
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < n; ++col) {
    std::size_t p = rank;
    while (p < n && !rows[p][col]) ++p;
    if (p == n) continue;
    std::swap(rows[rank], rows[p]);
    for (std::size_t r = 0; r < n; ++r)
      if (r != rank && rows[r][col])
        for (std::size_t c = 0; c < n; ++c) rows[r][c] ^= rows[rank][c];
    pivot_cols.push_back(col);
    ++rank;
  }
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::vector<Subspace::Vector> kernel;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Subspace::Vector v(n, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < rank; ++r)
      if (rows[r][free]) v[pivot_cols[r]] = 1;
    kernel.push_back(std::move(v));
  }
  return Subspace(n, std::move(kernel), 1);
}

/// The form governing the tau-killed sequence for BSO_n, n >= 4:
///   n = 2m:   B(x, y) = sum_{i != j <= m-1} x_i y_j   on F2^{m-1}
///   n = 2m+1: B(x, y) = sum_{i <= m-1} (x_i + x_m) y_i on F2^m
inline BilinearFormF2 quillen_form(int n) {
  if (n < 4) throw domain_error("quillen_form needs n >= 4");
  const int m = n / 2;
  if (n % 2 == 0) {
    BilinearFormF2 b(static_cast<std::size_t>(m - 1));
    for (int i = 0; i < m - 1; ++i)
      for (int j = 0; j < m - 1; ++j)
        if (i != j) b.set(i, j, true);
    return b;
  }
  BilinearFormF2 b(static_cast<std::size_t>(m));
  for (int i = 0; i < m - 1; ++i) {
    b.set(i, i, true);
    b.set(m - 1, i, true);
  }
  return b;
}

/// F2[x_1..x_d, y_1..y_d], every variable of bidegree (0)[1]. The y's come
/// first in the generator order.
inline Ring twisted_ring(std::size_t dim) {
  std::vector<Generator> g;
  for (std::size_t i = 1; i <= dim; ++i) g.push_back({"y" + std::to_string(i), {1, 0}});
  for (std::size_t i = 1; i <= dim; ++i) g.push_back({"x" + std::to_string(i), {1, 0}});
  return Ring(std::move(g));
}

/// B(x, y), B(x, y^2), ..., B(x, y^{2^{count-1}}) in twisted_ring(dim B).
inline std::vector<Poly> twisted_sequence(const BilinearFormF2& b, int count) {
  if (count < 1) throw domain_error("twisted_sequence needs count >= 1");
  if (count > 31) throw overflow_error("Frobenius twist exponent out of range");
  const std::size_t d = b.dim();
  Ring ring = twisted_ring(d);
  std::vector<Poly> out;
  for (int l = 0; l < count; ++l) {
    std::vector<Monomial> terms;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        if (!b.at(i, j)) continue;
        std::vector<std::uint32_t> e(2 * d, 0);
        e[d + i] = 1;
        e[j] = std::uint32_t{1} << l;
        terms.push_back(make_monomial(ring, std::move(e)));
      }
    out.emplace_back(ring, std::move(terms));
  }
  return out;
}

/// Closed-form length of the tau-killed regular sequence (n >= 2).
inline int h_expected(int n) {
  if (n < 2) throw domain_error("h table starts at n = 2");
  const int l = (n - 1) / 8;
  static constexpr std::array<int, 8> offset = {0, 1, 1, 1, 2, 3, 3, 3};  // n = 8l+1 .. 8l+8
  return 4 * l + offset[(n - 1) % 8];
}

/// h(n) from the Quillen form: dim V - dim rad_r(B) + 1; h(2) = h(3) = 1.
inline int h_of(int n) {
  if (n < 2) throw domain_error("h_of needs n >= 2");
  if (n < 4) return 1;
  auto b = quillen_form(n);
  return static_cast<int>(b.dim() - right_radical(b).dim()) + 1;
}

/// Target of the beta maps: F2[y_1..y_m, x_1..x_m (, x_{m+1})] with
/// x_i of bidegree (0)[1] and y_i of bidegree (1)[2].
inline Ring beta_target_ring(int n) {
  const int m = n / 2;
  std::vector<Generator> g;
  for (int i = 1; i <= m; ++i) g.push_back({"y" + std::to_string(i), {2, 1}});
  for (int i = 1; i <= m + n % 2; ++i) g.push_back({"x" + std::to_string(i), {1, 0}});
  return Ring(std::move(g));
}

/// beta_n : H(BO_n) -> F2[x, y] killing tau, induced by O_2^m (x O_1) in O_n:
///   u_{2j}   -> sigma_j(y_1..y_m)
///   u_{2j+1} -> sum_i x_i sigma_j(y without y_i) (+ x_{m+1} sigma_j(y) for odd n)
inline RingMap beta_map(int n) {
  if (n < 1) throw domain_error("beta_map needs n >= 1");
  Ring source = ring_bo(n);
  Ring target = beta_target_ring(n);
  const int m = n / 2;
  auto x = [&](int i) { return Poly::variable(target, "x" + std::to_string(i)); };
  auto y = [&](int i) { return Poly::variable(target, "y" + std::to_string(i)); };

  // Elementary symmetric polynomials of y_1..y_m with y_skip left out.
  auto sigma = [&](int j, int skip) {
    std::vector<Poly> e(static_cast<std::size_t>(m) + 1, Poly(target));
    e[0] = Poly::one(target);
    for (int i = 1; i <= m; ++i) {
      if (i == skip) continue;
      for (int k = m; k >= 1; --k) e[k] += e[k - 1] * y(i);
    }
    return j <= m ? e[j] : Poly(target);
  };

  std::vector<Poly> images;
  for (std::size_t g = 0; g < source.size(); ++g) {
    const auto& name = source.generator(g).name;
    if (name == "t") {
      images.emplace_back(target);
      continue;
    }
    int i = std::stoi(name.substr(1));
    if (i % 2 == 0) {
      images.push_back(sigma(i / 2, 0));
    } else {
      int j = i / 2;
      Poly img(target);
      for (int k = 1; k <= m; ++k) img += x(k) * sigma(j, k);
      if (n % 2) img += x(m + 1) * sigma(j, 0);
      images.push_back(std::move(img));
    }
  }
  return RingMap(std::move(source), std::move(target), std::move(images), MapKind::preserves_p);
}

}  // namespace subtle
