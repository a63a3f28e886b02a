#pragma once

// Buchberger's algorithm over F2 with the Gebauer-Moeller pair update
// (which subsumes the coprime and chain criteria) and sugar-degree pair
// selection. Bases are returned fully reduced, so they are unique for the
// fixed monomial order of the ring.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subtle/hilbert.hpp"
#include "subtle/poly.hpp"

namespace subtle {

struct GroebnerOptions {
  /// Maximum number of S-pair reductions per basis computation.
  std::uint64_t budget = 10'000'000;
  /// Prepended to the budget_exceeded message.
  std::string context;
};

class GroebnerBasis {
 public:
  GroebnerBasis(Ring ring, std::vector<Poly> elements, std::uint64_t reductions = 0)
      : ring_(std::move(ring)), elements_(std::move(elements)), reductions_(reductions) {}

  const Ring& ring() const noexcept { return ring_; }
  const std::vector<Poly>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }
  /// S-pair reductions spent while building the basis.
  std::uint64_t reductions() const noexcept { return reductions_; }

  std::vector<Monomial> leading_monomials() const {
    std::vector<Monomial> out;
    for (const auto& g : elements_) out.push_back(g.leading());
    return out;
  }

  /// The unit ideal has the reduced basis {1}.
  bool is_unit_ideal() const { return elements_.size() == 1 && elements_[0].is_one(); }

  friend bool operator==(const GroebnerBasis& a, const GroebnerBasis& b) {
    return a.ring_ == b.ring_ && a.elements_ == b.elements_;
  }

 private:
  Ring ring_;
  std::vector<Poly> elements_;
  std::uint64_t reductions_;
};

namespace detail {

// Index of the first basis element whose leading monomial divides m.
inline std::optional<std::size_t> find_reducer(const std::vector<const Poly*>& basis, const Monomial& m) {
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (divides(basis[i]->leading(), m)) return i;
  return std::nullopt;
}

// Full reduction of x by the (not necessarily reduced) list basis.
inline Poly reduce_fully(Poly x, const std::vector<const Poly*>& basis) {
  Poly remainder(x.ring());
  auto& rem = remainder.mutable_terms();
  auto work = std::move(x.mutable_terms());
  std::size_t start = 0;
  while (start < work.size()) {
    const Monomial& lead = work[start];
    auto r = find_reducer(basis, lead);
    if (!r) {
      rem.push_back(lead);
      ++start;
      continue;
    }
    const Poly& g = *basis[*r];
    Monomial q = quotient(lead, g.leading());
    std::vector<Monomial> scaled;
    scaled.reserve(g.size());
    for (const auto& t : g.terms()) scaled.push_back(t * q);
    work = Poly::merge_add(work, start, scaled);
    start = 0;
  }
  // Remainder terms were emitted in descending order already.
  return remainder;
}

struct Pair {
  std::size_t i;
  std::size_t j;
  Monomial lcm;
  std::int64_t sugar;
};

inline bool pair_before(const Pair& a, const Pair& b) {
  if (a.sugar != b.sugar) return a.sugar < b.sugar;
  int c = compare(a.lcm, b.lcm);
  if (c != 0) return c < 0;
  return std::pair(a.j, a.i) < std::pair(b.j, b.i);
}

class Buchberger {
 public:
  Buchberger(Ring ring, const GroebnerOptions& options) : ring_(std::move(ring)), options_(options) {}

  // Elements that already form a Groebner basis; none of their pairs is queued.
  void seed_basis(const std::vector<Poly>& basis) {
    for (const auto& g : basis) {
      polys_.push_back(g);
      sugar_.push_back(max_degree(g));
      active_.push_back(polys_.size() - 1);
    }
  }

  void add_generator(Poly f) {
    std::int64_t s = max_degree(f);
    f = reduce_fully(std::move(f), active_polys());
    if (f.is_zero()) return;
    insert(std::move(f), s);
  }

  void run() {
    while (!pairs_.empty()) {
      auto it = std::min_element(pairs_.begin(), pairs_.end(), pair_before);
      Pair p = *it;
      *it = std::move(pairs_.back());
      pairs_.pop_back();

      if (++reductions_ > options_.budget) throw budget_exceeded(reductions_ - 1, options_.context);

      const Poly& f = polys_[p.i];
      const Poly& g = polys_[p.j];
      Poly s(ring_);
      s.add_multiple(quotient(p.lcm, f.leading()), f);
      s.add_multiple(quotient(p.lcm, g.leading()), g);
      Poly h = reduce_fully(std::move(s), active_polys());
      if (!h.is_zero()) insert(std::move(h), p.sugar);
    }
  }

  GroebnerBasis result() const {
    // The active set is minimal: every inserted element is fully reduced
    // against the active set, and elements whose leading monomial becomes
    // divisible are retired. Interreduce the tails.
    std::vector<Poly> basis;
    for (auto idx : active_) basis.push_back(polys_[idx]);
    std::sort(basis.begin(), basis.end(),
              [](const Poly& a, const Poly& b) { return compare(a.leading(), b.leading()) < 0; });
    std::vector<Poly> reduced;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      std::vector<const Poly*> others;
      for (std::size_t l = 0; l < basis.size(); ++l)
        if (l != k) others.push_back(&basis[l]);
      Poly tail(ring_);
      tail.mutable_terms().assign(basis[k].terms().begin() + 1, basis[k].terms().end());
      Poly r = reduce_fully(std::move(tail), others);
      r += Poly::monomial(ring_, basis[k].leading());
      reduced.push_back(std::move(r));
    }
    return GroebnerBasis(ring_, std::move(reduced), reductions_);
  }

 private:
  std::vector<const Poly*> active_polys() const {
    std::vector<const Poly*> out;
    out.reserve(active_.size());
    for (auto idx : active_) out.push_back(&polys_[idx]);
    return out;
  }

  static std::int64_t max_degree(const Poly& f) {
    std::int64_t d = 0;
    for (const auto& t : f.terms()) d = std::max(d, t.degree);
    return d;
  }

  std::int64_t pair_sugar(std::size_t i, std::size_t j, const Monomial& l) const {
    const auto& fi = polys_[i];
    const auto& fj = polys_[j];
    return std::max(sugar_[i] + l.degree - fi.leading().degree, sugar_[j] + l.degree - fj.leading().degree);
  }

  // Gebauer-Moeller update for a new element h.
  void insert(Poly h, std::int64_t sugar) {
    // A constant makes the ideal the unit ideal.
    if (h.leading().degree == 0 && std::all_of(h.leading().exponents.begin(), h.leading().exponents.end(),
                                               [](auto e) { return e == 0; })) {
      polys_.push_back(Poly::one(ring_));
      sugar_.push_back(0);
      active_.assign(1, polys_.size() - 1);
      pairs_.clear();
      return;
    }
    polys_.push_back(std::move(h));
    sugar_.push_back(sugar);
    const std::size_t hi = polys_.size() - 1;
    const Monomial& lh = polys_[hi].leading();

    struct Candidate {
      std::size_t g;
      Monomial lcm;
      bool coprime;
    };
    std::vector<Candidate> c;
    for (auto g : active_) {
      const Monomial& lg = polys_[g].leading();
      c.push_back({g, lcm(ring_, lh, lg), coprime(lh, lg)});
    }

    // Criterion M and F: keep a pair only if no other new pair's lcm divides
    // its lcm (ties resolved in favour of the earliest, or of a coprime one).
    std::vector<Candidate> d;
    for (std::size_t a = 0; a < c.size(); ++a) {
      bool keep = true;
      for (std::size_t b = 0; b < c.size() && keep; ++b) {
        if (a == b) continue;
        if (!divides(c[b].lcm, c[a].lcm)) continue;
        bool equal = c[b].lcm == c[a].lcm;
        if (!equal) {
          keep = false;
        } else if (c[b].coprime && !c[a].coprime) {
          keep = false;
        } else if (c[b].coprime == c[a].coprime && b < a) {
          keep = false;
        }
      }
      if (keep) d.push_back(c[a]);
    }

    // Criterion B_k on old pairs.
    std::vector<Pair> kept;
    for (auto& p : pairs_) {
      bool drop = divides(lh, p.lcm) && !(lcm(ring_, polys_[p.i].leading(), lh) == p.lcm) &&
                  !(lcm(ring_, polys_[p.j].leading(), lh) == p.lcm);
      if (!drop) kept.push_back(std::move(p));
    }
    pairs_ = std::move(kept);

    // Coprime leading monomials: the S-polynomial reduces to zero.
    for (auto& cand : d) {
      if (cand.coprime) continue;
      auto s = pair_sugar(cand.g, hi, cand.lcm);
      pairs_.push_back({cand.g, hi, std::move(cand.lcm), s});
    }

    std::vector<std::size_t> next;
    for (auto g : active_)
      if (!divides(lh, polys_[g].leading())) next.push_back(g);
    next.push_back(hi);
    active_ = std::move(next);
  }

  Ring ring_;
  GroebnerOptions options_;
  std::vector<Poly> polys_;
  std::vector<std::int64_t> sugar_;
  std::vector<std::size_t> active_;
  std::vector<Pair> pairs_;
  std::uint64_t reductions_ = 0;
};

inline void check_ring(const Ring& ring, const Poly& p) {
  if (!(p.ring() == ring)) throw ring_error("polynomial does not live in the basis ring");
}

}  // namespace detail

/// Reduced Groebner basis of the ideal generated by gens (zeros are dropped).
inline GroebnerBasis groebner_basis(const Ring& ring, const std::vector<Poly>& gens,
                                   const GroebnerOptions& options = {}) {
  std::vector<Poly> sorted;
  for (const auto& g : gens) {
    detail::check_ring(ring, g);
    if (!g.is_zero()) sorted.push_back(g);
  }
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Poly& a, const Poly& b) { return compare(a.leading(), b.leading()) < 0; });
  detail::Buchberger alg(ring, options);
  for (auto& g : sorted) alg.add_generator(std::move(g));
  alg.run();
  return alg.result();
}

/// Basis of the ideal (basis) + (extra), reusing the fact that basis is
/// already a Groebner basis.
inline GroebnerBasis extend_basis(const GroebnerBasis& basis, const std::vector<Poly>& extra,
                                  const GroebnerOptions& options = {}) {
  detail::Buchberger alg(basis.ring(), options);
  alg.seed_basis(basis.elements());
  for (const auto& g : extra) {
    detail::check_ring(basis.ring(), g);
    if (!g.is_zero()) alg.add_generator(g);
  }
  alg.run();
  return alg.result();
}

inline Poly normal_form(const Poly& x, const GroebnerBasis& gb) {
  detail::check_ring(gb.ring(), x);
  std::vector<const Poly*> basis;
  for (const auto& g : gb.elements()) basis.push_back(&g);
  return detail::reduce_fully(x, basis);
}

inline bool ideal_member(const Poly& x, const GroebnerBasis& gb) { return normal_form(x, gb).is_zero(); }

/// Bigraded Hilbert series of ring / ideal, read off the leading monomials.
inline HilbertSeries hilbert_series(const GroebnerBasis& gb) {
  for (const auto& g : gb.elements()) require_bihomogeneous(g, "basis element " + to_string(g));
  return monomial_hilbert_series(gb.ring(), gb.leading_monomials());
}

/// Krull dimension of ring / ideal: the largest set of variables containing
/// the support of no leading monomial. The unit ideal gives -1.
inline int krull_dimension(const GroebnerBasis& gb) {
  const std::size_t n = gb.ring().size();
  if (gb.is_unit_ideal()) return -1;
  if (n > 64) throw domain_error("krull_dimension supports at most 64 variables");
  std::vector<std::uint64_t> supports;
  for (const auto& m : gb.leading_monomials()) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (m.exponents[i]) s |= std::uint64_t{1} << i;
    supports.push_back(s);
  }
  // Minimum set of variables meeting every support (branch and bound);
  // its complement is a maximal independent set.
  std::size_t best = n;
  auto search = [&](auto&& self, std::uint64_t chosen, std::size_t size) -> void {
    if (size >= best) return;
    const std::uint64_t* open = nullptr;
    int open_bits = 65;
    for (const auto& s : supports)
      if (!(s & chosen)) {
        int bits = __builtin_popcountll(s);
        if (bits < open_bits) {
          open_bits = bits;
          open = &s;
        }
      }
    if (!open) {
      best = size;
      return;
    }
    for (std::uint64_t rest = *open; rest; rest &= rest - 1)
      self(self, chosen | (rest & -rest), size + 1);
  };
  search(search, 0, 0);
  return static_cast<int>(n - best);
}

struct RegularityResult {
  bool regular = true;
  /// One-based index of the first element that fails the Hilbert-series drop.
  std::optional<std::size_t> witness;
  friend bool operator==(const RegularityResult&, const RegularityResult&) = default;
};

/// Regularity verdict plus the basis of the ideal generated by the whole
/// sequence, which callers reuse for membership tests.
struct SequenceCertificate {
  RegularityResult verdict;
  GroebnerBasis basis;
};

/// Regular-sequence certificate: each f_i must multiply the Hilbert series
/// of the previous quotient by exactly (1 - T^{p_i} S^{q_i}). The basis of
/// the full ideal is built even past the first failure.
inline SequenceCertificate certify_sequence(const Ring& ring, const std::vector<Poly>& seq,
                                            const GroebnerOptions& options = {}) {
  SequenceCertificate cert{{}, GroebnerBasis(ring, {})};
  std::optional<HilbertSeries> hs = hilbert_series(cert.basis);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    detail::check_ring(ring, seq[i]);
    if (seq[i].is_zero()) {
      if (cert.verdict.regular) cert.verdict = {false, i + 1};
      continue;
    }
    Bidegree d = require_bihomogeneous(seq[i], "sequence element " + std::to_string(i + 1));
    if (d.combined() <= 0) throw domain_error("sequence elements must have positive degree");
    cert.basis = extend_basis(cert.basis, {seq[i]}, options);
    if (!cert.verdict.regular) continue;
    HilbertSeries next = hilbert_series(cert.basis);
    if (!(next == hs->times_factor(d))) {
      cert.verdict = {false, i + 1};
      continue;
    }
    hs = std::move(next);
  }
  return cert;
}

inline RegularityResult is_regular_sequence(const Ring& ring, const std::vector<Poly>& seq,
                                            const GroebnerOptions& options = {}) {
  GroebnerBasis gb(ring, {});
  HilbertSeries hs = hilbert_series(gb);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    detail::check_ring(ring, seq[i]);
    if (seq[i].is_zero()) return {false, i + 1};
    Bidegree d = require_bihomogeneous(seq[i], "sequence element " + std::to_string(i + 1));
    if (d.combined() <= 0) throw domain_error("sequence elements must have positive degree");
    gb = extend_basis(gb, {seq[i]}, options);
    HilbertSeries next = hilbert_series(gb);
    if (!(next == hs.times_factor(d))) return {false, i + 1};
    hs = std::move(next);
  }
  return {};
}

}  // namespace subtle
