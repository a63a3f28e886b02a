#pragma once

// Presentations of the motivic cohomology of BO_n, BSO_n, BSpin_n and BG_2
// over an algebraically closed base (H = F2[t]), together with the checks
// that tie them to the theta sequence:
//   * k(n): theta_0..theta_{k-1} regular in H(BSO_n) and theta_k in I_k,
//   * H(BSpin_n) = H(BSO_n)/I_k [v_{2^k}],
//   * relations among subtle classes of Spin_n-torsors.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subtle/formsf2.hpp"
#include "subtle/grobner.hpp"
#include "subtle/hilbert.hpp"
#include "subtle/poly.hpp"
#include "subtle/steenrod.hpp"

namespace subtle {

/// Length k(n) of the regular theta sequence, by n mod 8.
inline int k_expected(int n) {
  if (n < 2) throw domain_error("k table starts at n = 2");
  const int l = (n - 1) / 8;
  static constexpr std::array<int, 8> offset = {0, 1, 2, 2, 3, 3, 3, 3};  // n = 8l+1 .. 8l+8
  return 4 * l + offset[(n - 1) % 8];
}

/// Bidegree of v_{2^k}: (2^{k-1})[2^k].
inline Bidegree spin_class_degree(int k) {
  if (k < 1 || k > 30) throw domain_error("v-class index out of range");
  return {std::int64_t{1} << k, std::int64_t{1} << (k - 1)};
}

/// Scans j = 0, 1, ...: theta_j must either be a nonzerodivisor modulo
/// I_j = (theta_0..theta_{j-1}) or lie in I_j; the first j with theta_j in
/// I_j is k(n). Anything else is reported as a mismatch.
inline int k_computed(int n, const GroebnerOptions& options = {}) {
  if (n < 2) throw domain_error("k_computed needs n >= 2");
  auto ctx = SteenrodContext::bso(n);
  const Ring& ring = ctx.ring();
  GroebnerBasis ideal(ring, {});
  HilbertSeries hs = hilbert_series(ideal);
  Poly th = ctx.subtle_class(2);
  for (int j = 0;; ++j) {
    if (j > 0) th = sq(ctx, 1 << (j - 1), th);
    if (ideal_member(th, ideal)) return j;
    GroebnerOptions step = options;
    step.context = "n=" + std::to_string(n) + ", theta_" + std::to_string(j) +
                   (options.context.empty() ? "" : ", " + options.context);
    Bidegree d = require_bihomogeneous(th, "theta");
    GroebnerBasis next = extend_basis(ideal, {th}, step);
    HilbertSeries next_hs = hilbert_series(next);
    if (!(next_hs == hs.times_factor(d)))
      throw mismatch_error("n=" + std::to_string(n) + ": theta_" + std::to_string(j) +
                           " is a zero divisor modulo I_" + std::to_string(j) + " but not in it");
    ideal = std::move(next);
    hs = std::move(next_hs);
  }
}

struct Mq1Report {
  int n = 0;
  int k = 0;
  int h = 0;
  /// theta_0..theta_{k-1} is a regular sequence.
  bool regular = false;
  bool theta_k_in_ik = false;
  /// t, theta_0..theta_{h-1} is a regular sequence.
  bool tau_prefix_regular = false;

  bool all() const noexcept { return regular && theta_k_in_ik && tau_prefix_regular; }
};

inline Mq1Report verify_mq1(int n, int k, const GroebnerOptions& options = {}) {
  if (n < 2) throw domain_error("verify_mq1 needs n >= 2");
  if (k < 0) throw domain_error("verify_mq1 needs k >= 0");
  auto ctx = SteenrodContext::bso(n);
  const Ring& ring = ctx.ring();
  Mq1Report report;
  report.n = n;
  report.k = k;
  report.h = h_of(n);
  auto thetas = theta_sequence(ctx, std::max(k + 1, report.h));

  GroebnerOptions opt = options;
  opt.context = "n=" + std::to_string(n) + ", k=" + std::to_string(k);
  std::vector<Poly> prefix(thetas.begin(), thetas.begin() + k);
  auto cert = certify_sequence(ring, prefix, opt);
  report.regular = cert.verdict.regular;
  report.theta_k_in_ik = ideal_member(thetas[static_cast<std::size_t>(k)], cert.basis);

  std::vector<Poly> tau_seq{Poly::variable(ring, *ring.tau())};
  tau_seq.insert(tau_seq.end(), thetas.begin(), thetas.begin() + report.h);
  report.tau_prefix_regular = is_regular_sequence(ring, tau_seq, opt).regular;
  return report;
}

enum class Family { BO, BSO, BSpin, BG2, BO_top, BSO_top, BSpin_top };

inline std::string_view to_string(Family f) {
  switch (f) {
    case Family::BO: return "BO";
    case Family::BSO: return "BSO";
    case Family::BSpin: return "BSpin";
    case Family::BG2: return "BG2";
    case Family::BO_top: return "BO_top";
    case Family::BSO_top: return "BSO_top";
    case Family::BSpin_top: return "BSpin_top";
  }
  return "?";
}

inline bool is_topological(Family f) {
  return f == Family::BO_top || f == Family::BSO_top || f == Family::BSpin_top;
}

struct Presentation {
  Family family;
  std::optional<int> n;
  Ring ring;
  GroebnerBasis relations;
  std::optional<int> k;
};

inline Presentation present(Family family, std::optional<int> n = std::nullopt,
                            const GroebnerOptions& options = {}) {
  if (family == Family::BG2) {
    Ring ring({{"u4", subtle_class_degree(4)}, {"u6", subtle_class_degree(6)}, {"u7", subtle_class_degree(7)},
               {"t", {0, 1}}});
    return {family, std::nullopt, ring, GroebnerBasis(ring, {}), std::nullopt};
  }
  if (!n || *n < 2)
    throw domain_error("family " + std::string(to_string(family)) + " needs n >= 2");
  const int rank = *n;
  switch (family) {
    case Family::BO: {
      Ring r = ring_bo(rank);
      return {family, rank, r, GroebnerBasis(r, {}), std::nullopt};
    }
    case Family::BSO: {
      Ring r = ring_bso(rank);
      return {family, rank, r, GroebnerBasis(r, {}), std::nullopt};
    }
    case Family::BO_top: {
      Ring r = ring_bo_top(rank);
      return {family, rank, r, GroebnerBasis(r, {}), std::nullopt};
    }
    case Family::BSO_top: {
      Ring r = ring_bso_top(rank);
      return {family, rank, r, GroebnerBasis(r, {}), std::nullopt};
    }
    case Family::BSpin:
    case Family::BSpin_top: {
      const bool top = family == Family::BSpin_top;
      const int k = k_expected(rank);
      Bidegree vdeg = spin_class_degree(k);
      if (top) vdeg.q = 0;
      Generator v{"v" + std::to_string(1 << k), vdeg};
      if (rank == 2) {
        // Spin_2 = G_m: the cohomology is free on v_2.
        std::vector<Generator> gens{v};
        if (!top) gens.push_back({"t", {0, 1}});
        Ring r(std::move(gens));
        return {family, rank, r, GroebnerBasis(r, {}), k};
      }
      Ring r = top ? ring_bso_top(rank, {v}) : ring_bso(rank, {v});
      SteenrodContext ctx(r, rank);
      GroebnerOptions opt = options;
      opt.context = std::string(to_string(family)) + " n=" + std::to_string(rank);
      return {family, rank, r, groebner_basis(r, theta_sequence(ctx, k), opt), k};
    }
    case Family::BG2: break;
  }
  throw domain_error("unsupported family");
}

/// Hilbert series of the free algebra on generators of the given bidegrees.
inline HilbertSeries free_algebra_series(std::vector<Bidegree> generators) {
  return HilbertSeries(IntPoly2::constant(1), std::move(generators));
}

struct PoincareSeries {
  HilbertSeries series;
  std::vector<HilbertSeries::Entry> expansion;
};

inline PoincareSeries poincare(const Presentation& pres, std::int64_t max_d) {
  if (max_d < 0) throw domain_error("max degree must be nonnegative");
  auto hs = hilbert_series(pres.relations);
  auto exp = hs.expand(max_d);
  return {std::move(hs), std::move(exp)};
}

/// Ranks of the quotient as a free F2[t]-module by cohomological degree
/// p = 0..max_p, read from the series of the quotient modulo t. Topological
/// presentations have no t and report plain F2-dimensions.
inline std::vector<std::int64_t> module_ranks(const Presentation& pres, std::int64_t max_p,
                                              const GroebnerOptions& options = {}) {
  GroebnerBasis gb = pres.relations;
  if (auto t = pres.ring.tau()) gb = extend_basis(gb, {Poly::variable(pres.ring, *t)}, options);
  std::vector<std::int64_t> ranks(static_cast<std::size_t>(max_p) + 1, 0);
  // Weights never exceed the cohomological degree, so p + q <= 2 max_p covers
  // every coefficient with p <= max_p.
  for (const auto& e : hilbert_series(gb).expand(2 * max_p))
    if (e.p <= max_p) ranks[static_cast<std::size_t>(e.p)] += e.dim;
  return ranks;
}

// ---------------------------------------------------------------------------
// Grading maps between H_top(BSO_n) = F2[w_2..w_n] and H(BSO_n).

namespace detail {

inline Ring topological_ring_of(const Ring& motivic) {
  std::vector<Generator> g;
  for (const auto& gen : motivic.generators()) {
    if (gen.name == "t") continue;
    if (gen.name[0] != 'u') throw domain_error("t_map only handles u-generators and t");
    g.push_back({"w" + gen.name.substr(1), {gen.degree.p, 0}});
  }
  return Ring(std::move(g));
}

inline Ring motivic_ring_of(const Ring& top) {
  std::vector<Generator> g;
  for (const auto& gen : top.generators()) {
    if (gen.name[0] != 'w') throw domain_error("i_map and h_map only handle w-generators");
    g.push_back({"u" + gen.name.substr(1), subtle_class_degree(gen.degree.p)});
  }
  g.push_back({"t", {0, 1}});
  return Ring(std::move(g));
}

}  // namespace detail

/// i: w_i -> u_i.
inline RingMap i_ring_map(const Ring& top) {
  Ring target = detail::motivic_ring_of(top);
  std::vector<Poly> images;
  for (const auto& gen : top.generators()) images.push_back(Poly::variable(target, "u" + gen.name.substr(1)));
  return RingMap(top, target, std::move(images), MapKind::preserves_p);
}

/// t: t -> 1, u_i -> w_i.
inline RingMap t_ring_map(const Ring& motivic) {
  Ring target = detail::topological_ring_of(motivic);
  std::vector<Poly> images;
  for (const auto& gen : motivic.generators()) {
    if (gen.name == "t")
      images.push_back(Poly::one(target));
    else
      images.push_back(Poly::variable(target, "w" + gen.name.substr(1)));
  }
  return RingMap(motivic, target, std::move(images), MapKind::preserves_p);
}

inline Poly i_map(const Poly& x) { return apply_map(i_ring_map(x.ring()), x); }
inline Poly t_map(const Poly& x) { return apply_map(t_ring_map(x.ring()), x); }

/// h(m) = t^{[p/2] - q} i(m) on monomials, extended linearly.
inline Poly h_map(const Poly& x) {
  RingMap i = i_ring_map(x.ring());
  const Ring& target = i.target();
  const std::size_t tau = *target.tau();
  std::vector<Monomial> out;
  for (const auto& t : x.terms()) {
    Poly image = apply_map(i, Poly::monomial(x.ring(), t));
    const Monomial& m = image.leading();
    Bidegree d = bidegree(target, m);
    std::int64_t shift = d.p / 2 - d.q;
    if (shift < 0) throw domain_error("h_map: negative tau exponent for " + to_string(image));
    std::vector<std::uint32_t> e = m.exponents;
    e[tau] += static_cast<std::uint32_t>(shift);
    out.push_back(make_monomial(target, std::move(e)));
  }
  return Poly(target, std::move(out));
}

// ---------------------------------------------------------------------------
// Relations for Spin_n-torsors.

/// Generators of the monomial ideal of vanishing classes: u_2 and the Chern
/// classes c_i = t^{i mod 2} u_i^2 for 3 <= i <= n.
inline std::vector<Poly> chern_monomials(const SteenrodContext& ctx) {
  const Ring& ring = ctx.ring();
  Poly tau = Poly::variable(ring, *ring.tau());
  std::vector<Poly> out{ctx.subtle_class(2)};
  for (int i = 3; i <= ctx.n(); ++i) {
    Poly c = ctx.subtle_class(i).square();
    if (i % 2) c = c * tau;
    out.push_back(std::move(c));
  }
  return out;
}

/// Membership in a monomial ideal: every term divisible by some generator.
inline bool in_monomial_ideal(const Poly& x, const std::vector<Poly>& monomials) {
  for (const auto& t : x.terms()) {
    bool hit = false;
    for (const auto& g : monomials)
      if (divides(g.leading(), t)) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

struct TorsorRelation {
  int j;
  /// sum_{h=0}^{2^j} u_{2^j-h} u_{2^j+1+h}
  Poly relation;
  /// theta_{j+1} + relation, which must vanish modulo the Chern ideal.
  Poly residual;
  bool verified;
};

inline Poly torsor_relation_poly(const SteenrodContext& ctx, int j) {
  const std::int64_t a = std::int64_t{1} << j;
  Poly r(ctx.ring());
  for (std::int64_t h = 0; h <= a; ++h) r += ctx.subtle_class(a - h) * ctx.subtle_class(a + 1 + h);
  return r;
}

inline std::vector<TorsorRelation> torsor_relations(int n, int max_j) {
  if (n < 3) throw domain_error("torsor_relations needs n >= 3");
  auto ctx = SteenrodContext::bso(n);
  auto chern = chern_monomials(ctx);
  std::vector<TorsorRelation> out;
  int count = 0;
  while (count <= max_j && (1 << count) + 1 <= n) ++count;
  auto thetas = theta_sequence(ctx, count + 1);
  for (int j = 0; j < count; ++j) {
    Poly rel = torsor_relation_poly(ctx, j);
    Poly residual = thetas[static_cast<std::size_t>(j) + 1] + rel;
    bool ok = in_monomial_ideal(residual, chern);
    out.push_back({j, std::move(rel), std::move(residual), ok});
  }
  return out;
}

/// {2^{j-1} : j >= 1, 2^j + 1 <= n}
inline std::vector<int> j_lower_bound(int n) {
  if (n < 3) throw domain_error("j_lower_bound needs n >= 3");
  std::vector<int> out;
  for (int j = 1; j < 31 && (1 << j) + 1 <= n; ++j) out.push_back(1 << (j - 1));
  return out;
}

// ---------------------------------------------------------------------------
// G_2.

struct G2Report {
  /// v8 is a nonzerodivisor on the BSpin_7 quotient.
  bool v8_regular = false;
  /// HS(BG2) = HS(BSpin_7) (1 - T^8 S^4).
  bool series_identity = false;
};

/// extra_relations are added to the BSpin_7 relations before the v8 test
/// (they do not affect the series identity).
inline G2Report g2_gysin_check(const std::vector<Poly>& extra_relations = {}, const GroebnerOptions& options = {}) {
  Presentation spin7 = present(Family::BSpin, 7, options);
  Presentation g2 = present(Family::BG2);
  Poly v8 = Poly::variable(spin7.ring, "v8");
  Bidegree d8 = require_bihomogeneous(v8);

  G2Report report;
  GroebnerBasis base = extra_relations.empty() ? spin7.relations : extend_basis(spin7.relations, extra_relations, options);
  HilbertSeries before = hilbert_series(base);
  HilbertSeries after = hilbert_series(extend_basis(base, {v8}, options));
  report.v8_regular = after == before.times_factor(d8);
  report.series_identity = hilbert_series(g2.relations) == hilbert_series(spin7.relations).times_factor(d8);
  return report;
}

}  // namespace subtle
