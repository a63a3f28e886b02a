#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "subtle/spaces.hpp"
#include "subtle/steenrod.hpp"

using namespace subtle;

TEST(Binomial, Lucas) {
  for (int n = -3; n < 40; ++n)
    for (int k = -2; k < 42; ++k) EXPECT_EQ(binomial_mod2(n, k), oracle::TotalSquare::binom2(n, k)) << n << " " << k;
}

TEST(Sq, Examples) {
  auto ctx = SteenrodContext::bso(5);
  const Ring& r = ctx.ring();
  EXPECT_EQ(to_string(sq(ctx, 1, parse_poly(r, "u2"))), "u3");
  EXPECT_EQ(to_string(sq(ctx, 2, parse_poly(r, "u2"))), "u2^2");
  EXPECT_TRUE(sq(ctx, 3, parse_poly(r, "u2")).is_zero());
  EXPECT_EQ(to_string(sq(ctx, 2, parse_poly(r, "u3"))), "u2*u3+u5");
  // u2*u3 sits on the slope-2 diagonal, (5)[2]; the top square is squaring.
  Poly m = parse_poly(r, "u2*u3");
  EXPECT_EQ(sq(ctx, 5, m), m.square());
  // With a factor of t the class is off the diagonal and t passes through.
  Poly tm = parse_poly(r, "t*u2*u3");
  EXPECT_EQ(sq(ctx, 5, tm), Poly::variable(r, "t") * m.square());
  EXPECT_NE(sq(ctx, 5, tm), tm.square());
  EXPECT_EQ(sq(ctx, 0, tm), tm);
}

TEST(Sq, BoFlavourKeepsU1) {
  auto ctx = SteenrodContext::bo(5);
  EXPECT_EQ(to_string(sq(ctx, 1, parse_poly(ctx.ring(), "u2"))), "u1*u2+u3");
  EXPECT_EQ(to_string(sq(ctx, 1, parse_poly(ctx.ring(), "u1"))), "u1^2");
}

TEST(Sq, TauIsInert) {
  auto ctx = SteenrodContext::bso(4);
  Poly t = Poly::variable(ctx.ring(), "t");
  EXPECT_EQ(sq(ctx, 0, t), t);
  EXPECT_TRUE(sq(ctx, 1, t).is_zero());
  EXPECT_TRUE(sq(ctx, 2, t.pow(3)).is_zero());
}

TEST(Sq, ClassesBeyondTheRankVanish) {
  auto ctx = SteenrodContext::bso(4);
  // Sq^2 u3 = u2 u3 + u5 and u5 = 0 at rank 4.
  EXPECT_EQ(to_string(sq(ctx, 2, parse_poly(ctx.ring(), "u3"))), "u2*u3");
}

TEST(Sq, Errors) {
  auto ctx = SteenrodContext::bso(4);
  EXPECT_THROW(sq(ctx, -1, Poly::one(ctx.ring())), domain_error);
  EXPECT_THROW(sq(ctx, 1, Poly::variable(ring_bso(5), "u2")), ring_error);
  Ring with_v = ring_bso(4, {{"v4", {4, 2}}});
  SteenrodContext vctx(with_v, 4);
  EXPECT_THROW(sq(vctx, 1, Poly::variable(with_v, "v4")), domain_error);
  EXPECT_NO_THROW(sq(vctx, 1, Poly::variable(with_v, "u2")));
  EXPECT_THROW(SteenrodContext(ring_bso(4), 3), ring_error);
  EXPECT_THROW(SteenrodContext(Ring({{"u3", {3, 1}}, {"t", {0, 1}}}), 3), ring_error);
}

TEST(Theta, Examples) {
  auto ctx7 = SteenrodContext::bso(7);
  EXPECT_EQ(to_string(theta(ctx7, 0)), "u2");
  EXPECT_EQ(to_string(theta(ctx7, 1)), "u3");
  EXPECT_EQ(to_string(theta(ctx7, 2)), "u2*u3+u5");
  EXPECT_THROW(theta(ctx7, -1), domain_error);
}

TEST(Theta, Theta3HandExpansion) {
  // Sq^4(u2 u3 + u5) with u1 = 0 in BSO_11:
  //   Sq^4 u5      = u4u5 + u3u6 + u2u7 + u9          (all binomials C(j,j))
  //   Sq^4(u2 u3)  = t Sq^1u2 Sq^3u3 + Sq^2u2 Sq^2u3
  //                = t u3^3 + u2^2 (u2u3 + u5)
  auto ctx = SteenrodContext::bso(11);
  const Ring& r = ctx.ring();
  Poly expected = parse_poly(r, "u4*u5+u3*u6+u2*u7+u9+t*u3^3+u2^3*u3+u2^2*u5");
  Poly th3 = theta(ctx, 3);
  EXPECT_EQ(th3, expected);
  EXPECT_EQ(require_bihomogeneous(th3), (Bidegree{9, 4}));
  // Modulo the Chern monomial ideal it is the torsor relation.
  EXPECT_TRUE(in_monomial_ideal(th3 + parse_poly(r, "u4*u5+u3*u6+u2*u7+u9"), chern_monomials(ctx)));
}

TEST(Theta, Bidegrees) {
  auto ctx = SteenrodContext::bso(12);
  auto th = theta_sequence(ctx, 5);
  EXPECT_EQ(require_bihomogeneous(th[0]), (Bidegree{2, 1}));
  for (int j = 1; j < 5; ++j)
    EXPECT_EQ(require_bihomogeneous(th[j]), (Bidegree{(1 << j) + 1, 1 << (j - 1)})) << j;
}

TEST(Theta, MatchesOracle) {
  for (int n : {5, 8, 11}) {
    auto ctx = SteenrodContext::bso(n);
    oracle::TotalSquare ts(ctx.ring(), n, 'u');
    Poly x = ctx.subtle_class(2);
    auto th = theta_sequence(ctx, 5);
    for (int j = 0; j < 5; ++j) {
      EXPECT_EQ(th[j], x) << "n=" << n << " j=" << j;
      x = ts.sq(1 << j, x);
    }
  }
}

TEST(Theta, TopologicalRhoIsImageOfTheta) {
  for (int n : {5, 7, 9, 12}) {
    auto ctx = SteenrodContext::bso(n);
    auto top = SteenrodContext::bso_top(n);
    auto th = theta_sequence(ctx, 5);
    auto rho = theta_sequence(top, 5);
    for (int j = 0; j < 5; ++j) {
      EXPECT_EQ(t_map(th[j]), rho[j]) << "n=" << n << " j=" << j;
      EXPECT_EQ(h_map(rho[j]), th[j]) << "n=" << n << " j=" << j;
    }
  }
}

TEST(Sq, AgreesWithOracleOnRandomInputs) {
  std::mt19937_64 rng(71);
  for (int n : {3, 5, 8}) {
    for (auto ctx : {SteenrodContext::bso(n), SteenrodContext::bo(n), SteenrodContext::bso_top(n)}) {
      oracle::TotalSquare ts(ctx.ring(), n, ctx.prefix());
      for (int i = 0; i < 150; ++i) {
        Poly x = oracle::random_poly(ctx.ring(), rng, 3, 2);
        int k = static_cast<int>(rng() % 9);
        EXPECT_EQ(sq(ctx, k, x), ts.sq(k, x)) << to_string(x) << " k=" << k;
      }
    }
  }
}

TEST(Sq, CartanAssociativityAndHLinearity) {
  std::mt19937_64 rng(73);
  auto ctx = SteenrodContext::bso(7);
  Poly t = Poly::variable(ctx.ring(), "t");
  for (int i = 0; i < 150; ++i) {
    Poly x = oracle::random_poly(ctx.ring(), rng, 2, 1), y = oracle::random_poly(ctx.ring(), rng, 2, 1),
         z = oracle::random_poly(ctx.ring(), rng, 2, 1);
    int k = static_cast<int>(rng() % 10);
    EXPECT_EQ(sq(ctx, k, (x * y) * z), sq(ctx, k, x * (y * z)));
    EXPECT_EQ(sq(ctx, k, t * x), t * sq(ctx, k, x));
    // Linearity.
    EXPECT_EQ(sq(ctx, k, x + y), sq(ctx, k, x) + sq(ctx, k, y));
  }
}

TEST(Sq, SlopeTwoDiagonal) {
  auto ctx = SteenrodContext::bso(8);
  for (int m = 0; m <= 12; ++m) {
    for (const auto& w : oracle::monomials_of(ctx.ring(), subtle_class_degree(m))) {
      Poly x = Poly::monomial(ctx.ring(), w);
      EXPECT_EQ(sq(ctx, m, x), x.square()) << to_string(x);
      for (int j = m + 1; j <= m + 3; ++j) EXPECT_TRUE(sq(ctx, j, x).is_zero()) << to_string(x) << " j=" << j;
    }
  }
}

TEST(Thom, Examples) {
  auto ctx = SteenrodContext::bso(3);
  ThomModuleElement alpha{Poly::one(ctx.ring()), 3};
  EXPECT_EQ(alpha.alpha_degree(), (Bidegree{3, 1}));
  EXPECT_EQ(to_string(thom_sq(ctx, 2, alpha).coefficient), "u2");
  EXPECT_TRUE(thom_sq(ctx, 5, alpha).coefficient.is_zero());
  ThomModuleElement w{parse_poly(ctx.ring(), "u2*u3+t*u2^2"), 3};
  EXPECT_EQ(thom_sq(ctx, 0, w), w);
  EXPECT_EQ(to_string(thom_sq(ctx, 3, alpha).coefficient), "u3");
  EXPECT_THROW(thom_sq(ctx, 1, ThomModuleElement{Poly::one(ctx.ring()), 4}), domain_error);
}

TEST(Thom, BidegreeShift) {
  std::mt19937_64 rng(79);
  auto ctx = SteenrodContext::bso(6);
  for (int i = 0; i < 200; ++i) {
    std::uniform_int_distribution<std::int64_t> pp(0, 8);
    std::int64_t p = pp(rng);
    Poly w = oracle::random_poly_of(ctx.ring(), {p, p / 2 - static_cast<std::int64_t>(rng() % 2)}, rng);
    if (w.is_zero()) continue;
    Bidegree d = require_bihomogeneous(w) + subtle_class_degree(5);
    int k = static_cast<int>(rng() % 7);
    auto r = thom_sq(ctx, k, {w, 5});
    if (r.coefficient.is_zero()) continue;
    Bidegree got = require_bihomogeneous(r.coefficient) + subtle_class_degree(5);
    EXPECT_EQ(got, (Bidegree{d.p + k, d.q + k / 2}));
  }
}
