#pragma once

// Bigraded polynomial arithmetic over F2.
//
// A Ring is an immutable list of named generators, each carrying a bidegree
// (q)[p] (weight q, cohomological degree p). Monomials are exponent vectors;
// polynomials are sorted sets of monomials since every coefficient is 1.
//
// Monomial order: graded reverse lexicographic with respect to the combined
// degree d = p + q of each generator. The generator named "t" (tau) is always
// the last variable, so among monomials of equal combined degree the ones
// carrying fewer factors of tau come first.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "subtle/error.hpp"

namespace subtle {

/// Bidegree (q)[p]: p is the cohomological degree, q the weight.
struct Bidegree {
  std::int64_t p = 0;
  std::int64_t q = 0;

  constexpr std::int64_t combined() const noexcept { return p + q; }

  friend constexpr Bidegree operator+(Bidegree a, Bidegree b) noexcept {
    return {a.p + b.p, a.q + b.q};
  }
  friend constexpr Bidegree operator*(std::int64_t k, Bidegree a) noexcept {
    return {k * a.p, k * a.q};
  }
  friend constexpr bool operator==(Bidegree, Bidegree) noexcept = default;
  friend constexpr auto operator<=>(Bidegree, Bidegree) noexcept = default;
};

/// Bidegree of the subtle Stiefel-Whitney class u_i: ([i/2])[i].
constexpr Bidegree subtle_class_degree(std::int64_t i) noexcept { return {i, i / 2}; }

struct Generator {
  std::string name;
  Bidegree degree;
};

namespace detail {

inline bool parse_uint(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// Accepts exactly the generator names of the polynomial grammar, in
// canonical form (no leading zeros): t, u<k>, w<k>, v<k>, x<k>, y<k>.
inline bool is_canonical_generator_name(std::string_view name) {
  if (name == "t") return true;
  if (name.size() < 2) return false;
  if (std::string_view("uwvxy").find(name[0]) == std::string_view::npos) return false;
  auto digits = name.substr(1);
  std::uint64_t value = 0;
  if (!parse_uint(digits, value)) return false;
  return std::to_string(value) == digits;
}

}  // namespace detail

class Ring {
 public:
  /// The coefficient field F2 (no generators).
  Ring() : data_(std::make_shared<const Data>()) {}

  /// Builds a ring from generators. "t" is moved to the last position, so
  /// generator indices follow the given order except for tau.
  explicit Ring(std::vector<Generator> generators) {
    auto data = std::make_shared<Data>();
    std::optional<Generator> tau;
    for (auto& g : generators) {
      if (g.name.empty()) throw ring_error("empty generator name");
      if (!detail::is_canonical_generator_name(g.name))
        throw ring_error("generator name '" + g.name + "' does not match the polynomial grammar");
      if (g.degree.p < 0 || g.degree.q < 0)
        throw ring_error("generator " + g.name + " has a negative bidegree component");
      if (g.degree.combined() <= 0)
        throw ring_error("generator " + g.name + " has all-zero bidegree");
      if (data->index.contains(g.name) || (tau && g.name == "t"))
        throw ring_error("duplicate generator name " + g.name);
      if (g.name == "t") {
        if (g.degree != Bidegree{0, 1}) throw ring_error("t must have bidegree (1)[0]");
        tau = std::move(g);
        continue;
      }
      data->index.emplace(g.name, data->gens.size());
      data->gens.push_back(std::move(g));
    }
    if (tau) {
      data->tau = data->gens.size();
      data->index.emplace(tau->name, data->gens.size());
      data->gens.push_back(std::move(*tau));
    }
    for (const auto& g : data->gens) data->weights.push_back(g.degree.combined());
    // Printing order: t, then by letter and numeric index.
    for (std::size_t i = 0; i < data->gens.size(); ++i) data->print_order.push_back(i);
    auto key = [&](std::size_t i) {
      const auto& name = data->gens[i].name;
      if (name == "t") return std::pair<char, std::uint64_t>('\0', 0);
      std::uint64_t v = 0;
      detail::parse_uint(std::string_view(name).substr(1), v);
      return std::pair(name[0], v);
    };
    std::sort(data->print_order.begin(), data->print_order.end(),
              [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    data_ = std::move(data);
  }

  std::size_t size() const noexcept { return data_->gens.size(); }
  const Generator& generator(std::size_t i) const { return data_->gens.at(i); }
  std::span<const Generator> generators() const noexcept { return data_->gens; }
  std::span<const std::int64_t> weights() const noexcept { return data_->weights; }
  std::optional<std::size_t> tau() const noexcept { return data_->tau; }
  /// Generator indices in printing order: t first, then by letter and index.
  std::span<const std::size_t> print_order() const noexcept { return data_->print_order; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = data_->index.find(std::string(name));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }
  bool has(std::string_view name) const { return index_of(name).has_value(); }

  friend bool operator==(const Ring& a, const Ring& b) {
    if (a.data_ == b.data_) return true;
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto& x = a.data_->gens[i];
      const auto& y = b.data_->gens[i];
      if (x.name != y.name || x.degree != y.degree) return false;
    }
    return true;
  }

 private:
  struct Data {
    std::vector<Generator> gens;
    std::vector<std::int64_t> weights;
    std::unordered_map<std::string, std::size_t> index;
    std::optional<std::size_t> tau;
    std::vector<std::size_t> print_order;
  };
  std::shared_ptr<const Data> data_;
};

inline Ring ring_new(std::vector<Generator> generators) { return Ring(std::move(generators)); }

/// Exponent vector plus its cached combined (weighted) degree.
struct Monomial {
  std::vector<std::uint32_t> exponents;
  std::int64_t degree = 0;

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.degree == b.degree && a.exponents == b.exponents;
  }
};

inline Monomial unit_monomial(const Ring& ring) {
  return Monomial{std::vector<std::uint32_t>(ring.size(), 0), 0};
}

inline Monomial make_monomial(const Ring& ring, std::vector<std::uint32_t> exponents) {
  if (exponents.size() != ring.size()) throw ring_error("exponent vector length does not match ring");
  std::int64_t d = 0;
  auto w = ring.weights();
  for (std::size_t i = 0; i < exponents.size(); ++i) d += w[i] * static_cast<std::int64_t>(exponents[i]);
  return Monomial{std::move(exponents), d};
}

/// Weighted graded reverse lexicographic comparison: -1, 0 or 1.
inline int compare(const Monomial& a, const Monomial& b) noexcept {
  if (a.degree != b.degree) return a.degree < b.degree ? -1 : 1;
  for (std::size_t i = a.exponents.size(); i-- > 0;) {
    if (a.exponents[i] != b.exponents[i]) return a.exponents[i] > b.exponents[i] ? -1 : 1;
  }
  return 0;
}

struct MonomialGreater {
  bool operator()(const Monomial& a, const Monomial& b) const noexcept { return compare(a, b) > 0; }
};

inline Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.exponents.resize(a.exponents.size());
  for (std::size_t i = 0; i < a.exponents.size(); ++i) {
    std::uint64_t s = std::uint64_t{a.exponents[i]} + b.exponents[i];
    if (s > std::numeric_limits<std::uint32_t>::max()) throw overflow_error("exponent overflow");
    r.exponents[i] = static_cast<std::uint32_t>(s);
  }
  r.degree = a.degree + b.degree;
  return r;
}

inline bool divides(const Monomial& a, const Monomial& b) noexcept {
  if (a.degree > b.degree) return false;
  for (std::size_t i = 0; i < a.exponents.size(); ++i)
    if (a.exponents[i] > b.exponents[i]) return false;
  return true;
}

/// b / a; requires divides(a, b).
inline Monomial quotient(const Monomial& b, const Monomial& a) {
  Monomial r;
  r.exponents.resize(b.exponents.size());
  for (std::size_t i = 0; i < b.exponents.size(); ++i) r.exponents[i] = b.exponents[i] - a.exponents[i];
  r.degree = b.degree - a.degree;
  return r;
}

inline Monomial lcm(const Ring& ring, const Monomial& a, const Monomial& b) {
  std::vector<std::uint32_t> e(a.exponents.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::max(a.exponents[i], b.exponents[i]);
  return make_monomial(ring, std::move(e));
}

inline bool coprime(const Monomial& a, const Monomial& b) noexcept {
  for (std::size_t i = 0; i < a.exponents.size(); ++i)
    if (a.exponents[i] != 0 && b.exponents[i] != 0) return false;
  return true;
}

inline Bidegree bidegree(const Ring& ring, const Monomial& m) {
  Bidegree d;
  for (std::size_t i = 0; i < m.exponents.size(); ++i)
    d = d + static_cast<std::int64_t>(m.exponents[i]) * ring.generator(i).degree;
  return d;
}

/// Polynomial over F2: a set of monomials kept in descending monomial order.
class Poly {
 public:
  explicit Poly(Ring ring) : ring_(std::move(ring)) {}

  /// Canonicalizes an arbitrary list of monomials (sorting, F2 cancellation).
  Poly(Ring ring, std::vector<Monomial> terms) : ring_(std::move(ring)), terms_(std::move(terms)) {
    canonicalize();
  }

  static Poly one(const Ring& ring) { return Poly(ring, {unit_monomial(ring)}); }

  static Poly variable(const Ring& ring, std::size_t index, std::uint32_t power = 1) {
    auto m = unit_monomial(ring);
    m.exponents.at(index) = power;
    return Poly(ring, {make_monomial(ring, std::move(m.exponents))});
  }

  static Poly variable(const Ring& ring, std::string_view name, std::uint32_t power = 1) {
    auto idx = ring.index_of(name);
    if (!idx) throw parse_error("unknown generator " + std::string(name));
    return variable(ring, *idx, power);
  }

  static Poly monomial(const Ring& ring, Monomial m) {
    Poly p(ring);
    p.terms_.push_back(std::move(m));
    return p;
  }

  const Ring& ring() const noexcept { return ring_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_one() const noexcept { return terms_.size() == 1 && terms_[0].degree == 0 && is_unit(terms_[0]); }
  const Monomial& leading() const { return terms_.front(); }

  friend bool operator==(const Poly& a, const Poly& b) {
    return a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

  Poly& operator+=(const Poly& other) {
    check_same_ring(other);
    terms_ = merge_add(terms_, 0, other.terms_);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  // Subtraction coincides with addition over F2.
  friend Poly operator-(Poly a, const Poly& b) { return a += b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_same_ring(b);
    if (a.is_zero() || b.is_zero()) return Poly(a.ring_);
    if (b.size() == 1) return a.times(b.terms_[0]);
    if (a.size() == 1) return b.times(a.terms_[0]);
    std::vector<Monomial> all;
    all.reserve(a.size() * b.size());
    for (const auto& x : a.terms_)
      for (const auto& y : b.terms_) all.push_back(x * y);
    return Poly(a.ring_, std::move(all));
  }
  Poly& operator*=(const Poly& other) { return *this = *this * other; }

  /// Multiplication by a single monomial preserves the term order.
  Poly times(const Monomial& m) const {
    Poly r(ring_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back(t * m);
    return r;
  }

  /// Frobenius: squaring is additive over F2.
  Poly square() const {
    Poly r(ring_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back(t * t);
    return r;
  }

  Poly pow(std::uint64_t e) const {
    Poly result = one(ring_);
    Poly base = *this;
    while (e) {
      if (e & 1) result *= base;
      e >>= 1;
      if (e) base = base.square();
    }
    return result;
  }

  /// this + m * g, the basic step of polynomial reduction.
  void add_multiple(const Monomial& m, const Poly& g) {
    std::vector<Monomial> scaled;
    scaled.reserve(g.terms_.size());
    for (const auto& t : g.terms_) scaled.push_back(t * m);
    terms_ = merge_add(terms_, 0, scaled);
  }

  // Internal access for the reduction kernels.
  std::vector<Monomial>& mutable_terms() noexcept { return terms_; }

  static std::vector<Monomial> merge_add(const std::vector<Monomial>& a, std::size_t a_start,
                                         const std::vector<Monomial>& b) {
    std::vector<Monomial> out;
    out.reserve(a.size() - a_start + b.size());
    std::size_t i = a_start, j = 0;
    while (i < a.size() && j < b.size()) {
      int c = compare(a[i], b[j]);
      if (c > 0) {
        out.push_back(a[i++]);
      } else if (c < 0) {
        out.push_back(b[j++]);
      } else {
        ++i;
        ++j;
      }
    }
    for (; i < a.size(); ++i) out.push_back(a[i]);
    for (; j < b.size(); ++j) out.push_back(b[j]);
    return out;
  }

 private:
  static bool is_unit(const Monomial& m) {
    return std::all_of(m.exponents.begin(), m.exponents.end(), [](auto e) { return e == 0; });
  }

  void check_same_ring(const Poly& other) const {
    if (!(ring_ == other.ring_)) throw ring_error("polynomials live in different rings");
  }

  void canonicalize() {
    for (const auto& t : terms_)
      if (t.exponents.size() != ring_.size()) throw ring_error("monomial does not belong to ring");
    std::sort(terms_.begin(), terms_.end(), MonomialGreater{});
    std::vector<Monomial> out;
    out.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size();) {
      std::size_t j = i;
      while (j < terms_.size() && compare(terms_[j], terms_[i]) == 0) ++j;
      if ((j - i) % 2 == 1) out.push_back(std::move(terms_[i]));
      i = j;
    }
    terms_ = std::move(out);
  }

  Ring ring_;
  std::vector<Monomial> terms_;
};

/// Result of a homogeneity query. The zero polynomial is homogeneous of every
/// bidegree and is reported separately.
struct Homogeneity {
  enum class Kind { zero, homogeneous, inhomogeneous };
  Kind kind = Kind::zero;
  Bidegree degree{};

  bool is_homogeneous() const noexcept { return kind == Kind::homogeneous; }
  bool is_zero() const noexcept { return kind == Kind::zero; }
  friend bool operator==(const Homogeneity&, const Homogeneity&) = default;
};

inline Homogeneity bidegree_of(const Poly& x) {
  if (x.is_zero()) return {};
  Bidegree d = bidegree(x.ring(), x.terms().front());
  for (const auto& t : x.terms())
    if (bidegree(x.ring(), t) != d) return {Homogeneity::Kind::inhomogeneous, {}};
  return {Homogeneity::Kind::homogeneous, d};
}

/// Returns the bidegree of a bihomogeneous nonzero polynomial, throwing otherwise.
inline Bidegree require_bihomogeneous(const Poly& x, std::string_view what = "polynomial") {
  auto h = bidegree_of(x);
  if (h.kind != Homogeneity::Kind::homogeneous)
    throw inhomogeneous_error(std::string(what) + " is not bihomogeneous");
  return h.degree;
}

// ---------------------------------------------------------------------------
// Printing and parsing.
//
//   poly   := term ('+' term)*
//   term   := factor ('*' factor)*
//   factor := gen ('^' uint)? | '0' | '1'
//   gen    := 't' | 'u'uint | 'w'uint | 'v'uint | 'x'uint | 'y'uint

inline std::string to_string(const Ring& ring, const Monomial& m) {
  std::string out;
  auto emit = [&](std::size_t i) {
    if (m.exponents[i] == 0) return;
    if (!out.empty()) out += '*';
    out += ring.generator(i).name;
    if (m.exponents[i] != 1) out += '^' + std::to_string(m.exponents[i]);
  };
  for (auto i : ring.print_order()) emit(i);
  return out.empty() ? "1" : out;
}

inline std::string to_string(const Poly& x) {
  if (x.is_zero()) return "0";
  std::string out;
  for (const auto& t : x.terms()) {
    if (!out.empty()) out += '+';
    out += to_string(x.ring(), t);
  }
  return out;
}

namespace detail {

class PolyParser {
 public:
  PolyParser(const Ring& ring, std::string_view text) : ring_(ring) {
    for (char c : text)
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') text_ += c;
  }

  Poly parse() {
    if (text_.empty()) fail("empty input");
    std::vector<Monomial> terms;
    parse_term(terms);
    while (peek() == '+') {
      ++pos_;
      parse_term(terms);
    }
    if (pos_ != text_.size()) fail(std::string("unexpected character '") + text_[pos_] + "'");
    return Poly(ring_, std::move(terms));
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error("malformed polynomial at offset " + std::to_string(pos_) + ": " + what);
  }

  std::uint64_t parse_uint() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    if (start == pos_) fail("expected an unsigned integer");
    std::uint64_t v = 0;
    if (!parse_uint_checked(std::string_view(text_).substr(start, pos_ - start), v))
      throw overflow_error("integer out of range in polynomial text");
    return v;
  }

  static bool parse_uint_checked(std::string_view s, std::uint64_t& v) { return detail::parse_uint(s, v); }

  void parse_term(std::vector<Monomial>& terms) {
    std::vector<std::uint64_t> exps(ring_.size(), 0);
    bool zero = parse_factor(exps);
    while (peek() == '*') {
      ++pos_;
      zero = parse_factor(exps) || zero;
    }
    if (zero) return;
    std::vector<std::uint32_t> e(exps.size());
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] > std::numeric_limits<std::uint32_t>::max()) throw overflow_error("exponent overflow");
      e[i] = static_cast<std::uint32_t>(exps[i]);
    }
    terms.push_back(make_monomial(ring_, std::move(e)));
  }

  // Returns true when the factor is the literal 0.
  bool parse_factor(std::vector<std::uint64_t>& exps) {
    char c = peek();
    if (c == '0' || c == '1') {
      ++pos_;
      return c == '0';
    }
    std::string name;
    if (c == 't') {
      ++pos_;
      name = "t";
    } else if (c == 'u' || c == 'w' || c == 'v' || c == 'x' || c == 'y') {
      ++pos_;
      name = std::string(1, c) + std::to_string(parse_uint());
    } else {
      fail(c == '\0' ? std::string("unexpected end of input") : std::string("unexpected character '") + c + "'");
    }
    auto idx = ring_.index_of(name);
    if (!idx) throw parse_error("unknown generator " + name);
    std::uint64_t power = 1;
    if (peek() == '^') {
      ++pos_;
      power = parse_uint();
    }
    exps[*idx] += power;
    if (exps[*idx] > std::numeric_limits<std::uint32_t>::max()) throw overflow_error("exponent overflow");
    return false;
  }

  const Ring& ring_;
  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Poly parse_poly(const Ring& ring, std::string_view text) {
  return detail::PolyParser(ring, text).parse();
}

// ---------------------------------------------------------------------------
// Ring homomorphisms.

/// Which bidegree compatibility a map is expected to satisfy.
enum class MapKind {
  generic,
  /// Preserves the cohomological degree p (beta maps, t, i).
  preserves_p,
  /// Preserves the full bidegree.
  preserves_bidegree,
};

class RingMap {
 public:
  RingMap(Ring source, Ring target, std::vector<Poly> images, MapKind kind = MapKind::generic)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)), kind_(kind) {
    if (images_.size() != source_.size()) throw ring_error("ring map needs one image per source generator");
    for (const auto& im : images_)
      if (!(im.ring() == target_)) throw ring_error("ring map image lives outside the target ring");
  }

  const Ring& source() const noexcept { return source_; }
  const Ring& target() const noexcept { return target_; }
  const Poly& image(std::size_t i) const { return images_.at(i); }
  MapKind kind() const noexcept { return kind_; }

  /// Checks the compatibility recorded in kind() on every generator.
  bool compatible() const {
    for (std::size_t i = 0; i < images_.size(); ++i) {
      const auto& im = images_[i];
      if (im.is_zero() || kind_ == MapKind::generic) continue;
      auto src = source_.generator(i).degree;
      if (kind_ == MapKind::preserves_bidegree) {
        auto h = bidegree_of(im);
        if (!h.is_homogeneous() || h.degree != src) return false;
      } else {
        for (const auto& t : im.terms())
          if (bidegree(target_, t).p != src.p) return false;
      }
    }
    return true;
  }

 private:
  Ring source_;
  Ring target_;
  std::vector<Poly> images_;
  MapKind kind_;
};

inline Poly apply_map(const RingMap& f, const Poly& x) {
  if (!(x.ring() == f.source())) throw ring_error("polynomial does not live in the source ring of the map");
  // Powers of generator images are reused across terms.
  std::vector<std::vector<Poly>> powers(f.source().size());
  auto power = [&](std::size_t i, std::uint32_t e) -> const Poly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Poly::one(f.target()));
    while (cache.size() <= e) cache.push_back(cache.back() * f.image(i));
    return cache[e];
  };
  std::vector<Monomial> acc;
  for (const auto& t : x.terms()) {
    Poly term = Poly::one(f.target());
    for (std::size_t i = 0; i < t.exponents.size() && !term.is_zero(); ++i)
      if (t.exponents[i]) term *= power(i, t.exponents[i]);
    for (auto& m : term.mutable_terms()) acc.push_back(std::move(m));
  }
  return Poly(f.target(), std::move(acc));
}

// ---------------------------------------------------------------------------
// Standard rings.

/// H(BO_n) = F2[t, u_1..u_n] with deg u_i = ([i/2])[i].
inline Ring ring_bo(int n, std::vector<Generator> extra = {}) {
  std::vector<Generator> g;
  for (int i = 1; i <= n; ++i) g.push_back({"u" + std::to_string(i), subtle_class_degree(i)});
  for (auto& e : extra) g.push_back(std::move(e));
  g.push_back({"t", {0, 1}});
  return Ring(std::move(g));
}

/// H(BSO_n) = F2[t, u_2..u_n].
inline Ring ring_bso(int n, std::vector<Generator> extra = {}) {
  std::vector<Generator> g;
  for (int i = 2; i <= n; ++i) g.push_back({"u" + std::to_string(i), subtle_class_degree(i)});
  for (auto& e : extra) g.push_back(std::move(e));
  g.push_back({"t", {0, 1}});
  return Ring(std::move(g));
}

/// Singular cohomology F2[w_1..w_n]; weights are zero.
inline Ring ring_bo_top(int n, std::vector<Generator> extra = {}) {
  std::vector<Generator> g;
  for (int i = 1; i <= n; ++i) g.push_back({"w" + std::to_string(i), {i, 0}});
  for (auto& e : extra) g.push_back(std::move(e));
  return Ring(std::move(g));
}

inline Ring ring_bso_top(int n, std::vector<Generator> extra = {}) {
  std::vector<Generator> g;
  for (int i = 2; i <= n; ++i) g.push_back({"w" + std::to_string(i), {i, 0}});
  for (auto& e : extra) g.push_back(std::move(e));
  return Ring(std::move(g));
}

}  // namespace subtle
