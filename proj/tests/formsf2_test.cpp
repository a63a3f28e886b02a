#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "subtle/formsf2.hpp"
#include "subtle/grobner.hpp"
#include "subtle/spaces.hpp"

using namespace subtle;

namespace {

// Polynomial product over F2 of bit-encoded polynomials, reduced modulo m.
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m, unsigned deg) {
  std::uint64_t r = 0;
  for (; b; b >>= 1) {
    if (b & 1) r ^= a;
    a <<= 1;
    if (a >> deg & 1) a ^= m;
  }
  return r;
}

}  // namespace

TEST(Gf2e, ModuliArePrimitive) {
  for (unsigned e = 1; e <= 16; ++e) {
    std::uint64_t m = Gf2e::conway_polynomial(e);
    ASSERT_EQ(m >> e, 1u) << e;
    // Order of x is exactly 2^e - 1: x^(2^e - 1) = 1 and no proper divisor
    // of 2^e - 1 works. This also implies irreducibility.
    std::uint64_t order = (std::uint64_t{1} << e) - 1;
    auto xpow = [&](std::uint64_t k) {
      std::uint64_t r = 1, base = e == 1 ? 1 : 2;
      for (; k; k >>= 1) {
        if (k & 1) r = mulmod(r, base, m, e);
        base = mulmod(base, base, m, e);
      }
      return r;
    };
    EXPECT_EQ(xpow(order), 1u) << e;
    for (std::uint64_t p = 2; p <= order; ++p) {
      if (order % p) continue;
      bool prime = true;
      for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) prime = false;
      if (prime) {
        EXPECT_NE(xpow(order / p), 1u) << "e=" << e << " p=" << p;
      }
    }
  }
}

TEST(Gf2e, FieldAxioms) {
  std::mt19937 rng(3);
  for (unsigned e : {1u, 2u, 5u, 8u, 16u}) {
    Gf2e f(e);
    std::uniform_int_distribution<std::uint32_t> el(0, f.order() - 1);
    for (int i = 0; i < 200; ++i) {
      auto a = el(rng), b = el(rng), c = el(rng);
      EXPECT_EQ(f.mul(a, b), f.mul(b, a));
      EXPECT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
      EXPECT_EQ(f.mul(a, b ^ c), f.mul(a, b) ^ f.mul(a, c));
      if (a) {
        EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
      }
      EXPECT_EQ(f.frobenius(a ^ b), f.frobenius(a) ^ f.frobenius(b));
    }
  }
  EXPECT_THROW(Gf2e(0), domain_error);
  EXPECT_THROW(Gf2e(17), domain_error);
  EXPECT_THROW(Gf2e(4).inv(0), domain_error);
}

TEST(Frobenius, Examples) {
  const std::uint32_t w = Gf2e(2).generator();
  EXPECT_TRUE(frobenius_stable(Subspace(2, {{1, 0}, {0, 1}}, 2)));
  EXPECT_FALSE(frobenius_stable(Subspace(2, {{1, w}}, 2)));
  EXPECT_TRUE(frobenius_stable(Subspace(2, {{1, 1}}, 2)));
  EXPECT_THROW(Subspace(2, {{1, 4}}, 2), domain_error);
  EXPECT_THROW(Subspace(2, {{1}}, 2), domain_error);
}

TEST(Frobenius, SpansOfRationalVectorsAreStable) {
  std::mt19937 rng(5);
  for (unsigned e : {2u, 3u, 4u, 8u}) {
    Gf2e f(e);
    std::uniform_int_distribution<std::uint32_t> el(0, f.order() - 1);
    for (int i = 0; i < 50; ++i) {
      // Nonzero multiples of random F2-vectors, plus random combinations, so
      // the span is always the extension of the rational span.
      std::vector<Subspace::Vector> rational(2, Subspace::Vector(4));
      for (auto& v : rational)
        for (auto& c : v) c = rng() & 1;
      std::vector<Subspace::Vector> span;
      for (const auto& r : rational) {
        std::uint32_t c = 1 + el(rng) % (f.order() - 1);
        Subspace::Vector v(4, 0);
        for (std::size_t k = 0; k < 4; ++k) v[k] = f.mul(c, r[k]);
        span.push_back(v);
      }
      for (int j = 0; j < 2; ++j) {
        Subspace::Vector v(4, 0);
        for (const auto& r : rational) {
          auto c = el(rng);
          for (std::size_t k = 0; k < 4; ++k) v[k] ^= f.mul(c, r[k]);
        }
        span.push_back(v);
      }
      EXPECT_TRUE(frobenius_stable(Subspace(4, span, e)));
    }
  }
}

TEST(Radical, Examples) {
  EXPECT_EQ(right_radical(quillen_form(10)).dim(), 0u);
  auto r12 = right_radical(quillen_form(12));
  ASSERT_EQ(r12.dim(), 1u);
  EXPECT_EQ(r12.basis()[0], (Subspace::Vector{1, 1, 1, 1, 1}));
  auto r9 = right_radical(quillen_form(9));
  ASSERT_EQ(r9.dim(), 1u);
  EXPECT_EQ(r9.basis()[0], (Subspace::Vector{0, 0, 0, 1}));
}

TEST(Radical, KernelIsOrthogonal) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t d = 1 + rng() % 6;
    BilinearFormF2 b(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) b.set(i, j, rng() & 1);
    auto rad = right_radical(b);
    // Brute force over all y.
    std::size_t count = 0;
    for (std::uint32_t y = 0; y < (1u << d); ++y) {
      std::vector<std::uint8_t> yv(d);
      for (std::size_t k = 0; k < d; ++k) yv[k] = y >> k & 1;
      bool in = true;
      for (std::size_t i = 0; i < d && in; ++i) {
        std::vector<std::uint8_t> e(d, 0);
        e[i] = 1;
        in = !b.evaluate(e, yv);
      }
      if (in) {
        ++count;
        EXPECT_TRUE(rad.contains(Subspace::Vector(yv.begin(), yv.end())));
      }
    }
    EXPECT_EQ(count, std::size_t{1} << rad.dim());
  }
}

TEST(Quillen, Examples) {
  auto b8 = quillen_form(8);
  ASSERT_EQ(b8.dim(), 3u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(b8.at(i, j), i == j ? 0 : 1);

  // (x1+x3)y1 + (x2+x3)y2
  auto b7 = quillen_form(7);
  EXPECT_EQ(b7.rows(), (std::vector<std::vector<std::uint8_t>>{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}}));

  auto b4 = quillen_form(4);
  EXPECT_EQ(b4.rows(), (std::vector<std::vector<std::uint8_t>>{{0}}));
  EXPECT_THROW(quillen_form(3), domain_error);
}

TEST(Quillen, RadicalParity) {
  for (int m = 2; m <= 100; ++m) {
    auto even = right_radical(quillen_form(2 * m));
    if (m % 2) {
      EXPECT_EQ(even.dim(), 0u) << m;
    } else {
      ASSERT_EQ(even.dim(), 1u) << m;
      EXPECT_EQ(even.basis()[0], Subspace::Vector(static_cast<std::size_t>(m - 1), 1)) << m;
    }
    auto odd = right_radical(quillen_form(2 * m + 1));
    ASSERT_EQ(odd.dim(), 1u) << m;
    Subspace::Vector em(static_cast<std::size_t>(m), 0);
    em.back() = 1;
    EXPECT_EQ(odd.basis()[0], em) << m;
  }
}

TEST(Twisted, Examples) {
  BilinearFormF2 b({{0, 1}, {1, 0}});
  auto seq = twisted_sequence(b, 2);
  ASSERT_EQ(seq.size(), 2u);
  EXPECT_EQ(to_string(seq[0]), "x1*y2+x2*y1");
  EXPECT_EQ(to_string(seq[1]), "x1*y2^2+x2*y1^2");
  EXPECT_EQ(twisted_sequence(b, 1).size(), 1u);
  EXPECT_THROW(twisted_sequence(b, 0), domain_error);
}

TEST(Twisted, QuillenSequencesAreRegular) {
  for (int n = 4; n <= 10; ++n) {
    auto b = quillen_form(n);
    const int len = static_cast<int>(b.dim() - right_radical(b).dim());
    if (len == 0) continue;
    auto seq = twisted_sequence(b, len);
    const Ring& r = seq[0].ring();
    auto cert = certify_sequence(r, seq);
    EXPECT_TRUE(cert.verdict.regular) << n;
    if (b.dim() <= 4) {
      EXPECT_EQ(krull_dimension(cert.basis), static_cast<int>(2 * b.dim()) - len) << n;
    }
  }
}

TEST(H, Examples) {
  EXPECT_EQ(h_of(7), 3);
  EXPECT_EQ(h_of(4), 1);
  EXPECT_EQ(h_of(12), 5);
  EXPECT_EQ(h_of(2), 1);
  EXPECT_EQ(h_of(3), 1);
  EXPECT_THROW(h_of(1), domain_error);
}

TEST(H, MatchesTable) {
  for (int n = 2; n <= 200; ++n) EXPECT_EQ(h_of(n), h_expected(n)) << n;
}

TEST(Beta, ImagesKillTauAndPreserveP) {
  for (int n = 2; n <= 10; ++n) {
    auto beta = beta_map(n);
    EXPECT_TRUE(beta.compatible());
    EXPECT_TRUE(apply_map(beta, Poly::variable(beta.source(), "t")).is_zero());
  }
}

// beta(u_1) and beta(u_2) cut out the subvariety on which the Quillen forms
// live; theta_{l+1} then restricts to sum_i x_i y_i^{2^l}.
TEST(Beta, ThetaRestrictsToTwistedDiagonal) {
  for (int n = 4; n <= 8; ++n) {
    auto beta = beta_map(n);
    SteenrodContext ctx(beta.source(), n);
    auto th = theta_sequence(ctx, 4);
    const Ring& target = beta.target();
    const int m = n / 2;
    // Nothing is quotiented out: compare beta(theta_{l+1}) against the
    // closed form in the full polynomial ring.
    for (int l = 0; l + 1 < 4; ++l) {
      Poly expected(target);
      for (int i = 1; i <= m; ++i)
        expected += Poly::variable(target, "x" + std::to_string(i)) *
                    Poly::variable(target, "y" + std::to_string(i), 1u << l);
      if (n % 2) {
        // x_{m+1} pairs with sigma_1(y)^{2^l}.
        Poly s(target);
        for (int i = 1; i <= m; ++i) s += Poly::variable(target, "y" + std::to_string(i), 1u << l);
        expected += Poly::variable(target, "x" + std::to_string(m + 1)) * s;
      }
      Poly got = apply_map(beta, th[static_cast<std::size_t>(l) + 1]);
      // Modulo beta(u1) and beta(u2) the images agree.
      auto gb = groebner_basis(target, {apply_map(beta, Poly::variable(beta.source(), "u1")),
                                        apply_map(beta, Poly::variable(beta.source(), "u2"))});
      EXPECT_EQ(normal_form(got, gb), normal_form(expected, gb)) << "n=" << n << " l=" << l;
    }
  }
}
