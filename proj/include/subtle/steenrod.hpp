#pragma once

// Steenrod squares on rings of subtle Stiefel-Whitney classes.
//
// Generators u_m follow the Wu formula
//   Sq^k u_m = sum_{j=0}^{k} C(m+j-k-1, j) u_{k-j} u_{m+j}   (k < m)
//   Sq^m u_m = u_m^2,  Sq^k u_m = 0 for k > m,
// with u_0 = 1 and u_i = 0 beyond the rank (and u_1 = 0 without a u1
// generator). Tau is inert. Products use the motivic Cartan rule
//   Sq^k(xy) = sum_{a+b=k} tau^{[a, b both odd]} Sq^a x Sq^b y,
// the only placement of tau that keeps Sq^k of bidegree (k/2)[k]. The
// topological flavour (w-generators, no tau) drops the tau factor.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subtle/poly.hpp"

namespace subtle {

/// C(n, k) mod 2 by Lucas' theorem; zero for n < 0 or k outside [0, n].
constexpr bool binomial_mod2(std::int64_t n, std::int64_t k) noexcept {
  if (n < 0 || k < 0 || k > n) return false;
  return (k & ~n) == 0;
}

class SteenrodContext {
 public:
  enum class Flavor { motivic, topological };

  /// n is the number of subtle classes: u_i vanishes for i > n.
  SteenrodContext(Ring ring, int n) : ring_(std::move(ring)), n_(n) {
    if (n < 1) throw domain_error("Steenrod context needs n >= 1");
    bool has_u = false, has_w = false;
    for (const auto& g : ring_.generators()) {
      has_u = has_u || g.name[0] == 'u';
      has_w = has_w || g.name[0] == 'w';
    }
    if (has_u && has_w) throw ring_error("ring mixes u- and w-generators");
    flavor_ = has_w ? Flavor::topological : Flavor::motivic;
    if (flavor_ == Flavor::motivic && !ring_.tau() && has_u)
      throw ring_error("motivic Steenrod context needs the generator t");
    const char letter = prefix();
    classes_.assign(static_cast<std::size_t>(n) + 1, std::nullopt);
    for (int i = 1; i <= n; ++i) {
      classes_[i] = ring_.index_of(std::string(1, letter) + std::to_string(i));
      if (i >= 2 && !classes_[i])
        throw ring_error("ring lacks generator " + std::string(1, letter) + std::to_string(i));
    }
    for (const auto& g : ring_.generators()) {
      if (g.name == "t" || g.name[0] != letter) continue;
      if (std::stoll(g.name.substr(1)) > n) throw ring_error("generator " + g.name + " exceeds the rank");
    }
  }

  static SteenrodContext bo(int n) { return {ring_bo(n), n}; }
  static SteenrodContext bso(int n) { return {ring_bso(n), n}; }
  static SteenrodContext bo_top(int n) { return {ring_bo_top(n), n}; }
  static SteenrodContext bso_top(int n) { return {ring_bso_top(n), n}; }

  const Ring& ring() const noexcept { return ring_; }
  int n() const noexcept { return n_; }
  Flavor flavor() const noexcept { return flavor_; }
  bool topological() const noexcept { return flavor_ == Flavor::topological; }
  char prefix() const noexcept { return topological() ? 'w' : 'u'; }

  /// The class u_i (w_i) as a polynomial: 1 for i = 0, 0 when absent.
  Poly subtle_class(std::int64_t i) const {
    if (i == 0) return Poly::one(ring_);
    if (i < 0 || i > n_ || !classes_[static_cast<std::size_t>(i)]) return Poly(ring_);
    return Poly::variable(ring_, *classes_[static_cast<std::size_t>(i)]);
  }

  /// Index m with generator == u_m, or nullopt for tau.
  std::optional<int> class_of_generator(std::size_t index) const {
    for (int i = 1; i <= n_; ++i)
      if (classes_[i] == index) return i;
    return std::nullopt;
  }

 private:
  Ring ring_;
  int n_;
  Flavor flavor_ = Flavor::motivic;
  std::vector<std::optional<std::size_t>> classes_;
};

namespace detail {

class SquareEvaluator {
 public:
  explicit SquareEvaluator(const SteenrodContext& ctx) : ctx_(ctx) {
    if (auto t = ctx.ring().tau()) tau_ = Poly::variable(ctx.ring(), *t);
  }

  /// Sq^k u_m by the Wu formula.
  const Poly& wu(int m, int k) {
    auto key = std::pair(m, k);
    if (auto it = wu_cache_.find(key); it != wu_cache_.end()) return it->second;
    Poly r(ctx_.ring());
    if (k == 0) {
      r = ctx_.subtle_class(m);
    } else if (k == m) {
      r = ctx_.subtle_class(m).square();
    } else if (k < m) {
      for (int j = 0; j <= k; ++j)
        if (binomial_mod2(m + j - k - 1, j)) r += ctx_.subtle_class(k - j) * ctx_.subtle_class(m + j);
    }
    return wu_cache_.emplace(key, std::move(r)).first->second;
  }

  /// Sq^0..Sq^k of the monomial m, as a vector indexed by the square.
  std::vector<Poly> total(const Monomial& m, int k) {
    const Ring& ring = ctx_.ring();
    std::vector<Poly> acc(static_cast<std::size_t>(k) + 1, Poly(ring));
    // Tau (and its powers) only passes through Sq^0.
    Monomial tau_part = unit_monomial(ring);
    if (auto t = ring.tau()) tau_part = make_monomial(ring, tau_exponents(m, *t));
    acc[0] = Poly::monomial(ring, tau_part);

    for (std::size_t g = 0; g < m.exponents.size(); ++g) {
      if (m.exponents[g] == 0 || g == ring.tau()) continue;
      auto cls = ctx_.class_of_generator(g);
      if (!cls)
        throw domain_error("Steenrod squares are undefined on generator " + ring.generator(g).name);
      for (std::uint32_t rep = 0; rep < m.exponents[g]; ++rep) acc = cartan(acc, *cls, k);
    }
    return acc;
  }

 private:
  static std::vector<std::uint32_t> tau_exponents(const Monomial& m, std::size_t t) {
    std::vector<std::uint32_t> e(m.exponents.size(), 0);
    e[t] = m.exponents[t];
    return e;
  }

  std::vector<Poly> cartan(const std::vector<Poly>& x, int cls, int k) {
    const Ring& ring = ctx_.ring();
    std::vector<Poly> out(static_cast<std::size_t>(k) + 1, Poly(ring));
    for (int b = 0; b <= std::min(k, cls); ++b) {
      const Poly& sb = wu(cls, b);
      if (sb.is_zero()) continue;
      for (int a = 0; a + b <= k; ++a) {
        if (x[a].is_zero()) continue;
        Poly term = x[a] * sb;
        if ((a & 1) && (b & 1) && !ctx_.topological()) term = term * tau_;
        out[a + b] += term;
      }
    }
    return out;
  }

  const SteenrodContext& ctx_;
  Poly tau_{Ring()};
  std::map<std::pair<int, int>, Poly> wu_cache_;
};

}  // namespace detail

/// Sq^k x, computed termwise over F2.
inline Poly sq(const SteenrodContext& ctx, int k, const Poly& x) {
  if (k < 0) throw domain_error("Steenrod square index must be nonnegative");
  if (!(x.ring() == ctx.ring())) throw ring_error("polynomial does not live in the Steenrod context ring");
  detail::SquareEvaluator eval(ctx);
  std::vector<Monomial> acc;
  for (const auto& t : x.terms()) {
    auto pieces = eval.total(t, k);
    for (auto& m : pieces[static_cast<std::size_t>(k)].mutable_terms()) acc.push_back(std::move(m));
  }
  return Poly(ctx.ring(), std::move(acc));
}

/// theta_0 = u_2, theta_{j+1} = Sq^{2^j} theta_j, returned for j = 0..count-1.
inline std::vector<Poly> theta_sequence(const SteenrodContext& ctx, int count) {
  if (count < 0) throw domain_error("theta count must be nonnegative");
  if (count > 30) throw overflow_error("theta index out of range");
  std::vector<Poly> out;
  if (count == 0) return out;
  out.push_back(ctx.subtle_class(2));
  for (int j = 0; j + 1 < count; ++j) out.push_back(sq(ctx, 1 << j, out.back()));
  return out;
}

inline Poly theta(const SteenrodContext& ctx, int j) {
  if (j < 0) throw domain_error("theta index must be nonnegative");
  return theta_sequence(ctx, j + 1).back();
}

/// w * alpha in the rank-1 free module generated by a Thom class alpha of
/// bidegree ([rank/2])[rank].
struct ThomModuleElement {
  Poly coefficient;
  int rank;

  Bidegree alpha_degree() const { return subtle_class_degree(rank); }
  friend bool operator==(const ThomModuleElement&, const ThomModuleElement&) = default;
};

/// Sq^k (w alpha) = sum_{a+b=k} tau^{[a, b odd]} Sq^a w * u_b alpha, with
/// Sq^b alpha = u_b alpha for b <= rank and 0 beyond.
inline ThomModuleElement thom_sq(const SteenrodContext& ctx, int k, const ThomModuleElement& e) {
  if (k < 0) throw domain_error("Steenrod square index must be nonnegative");
  if (e.rank < 1 || e.rank > ctx.n()) throw domain_error("Thom class rank exceeds the context rank");
  const Ring& ring = ctx.ring();
  Poly out(ring);
  Poly tau = ring.tau() ? Poly::variable(ring, *ring.tau()) : Poly::one(ring);
  for (int b = 0; b <= std::min(k, e.rank); ++b) {
    Poly ub = ctx.subtle_class(b);
    if (ub.is_zero()) continue;
    Poly term = sq(ctx, k - b, e.coefficient) * ub;
    if (((k - b) & 1) && (b & 1) && !ctx.topological()) term = term * tau;
    out += term;
  }
  return {std::move(out), e.rank};
}

}  // namespace subtle
