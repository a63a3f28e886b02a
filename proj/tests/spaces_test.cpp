#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "subtle/spaces.hpp"

using namespace subtle;

namespace {

HilbertSeries free_on(const std::vector<std::string>& names, const Ring& ambient) {
  std::vector<Bidegree> d;
  for (const auto& n : names) d.push_back(ambient.generator(*ambient.index_of(n)).degree);
  return free_algebra_series(d);
}

}  // namespace

TEST(KTable, Expected) {
  const int table[] = {1, 2, 2, 3, 3, 3, 3, 4, 5, 6, 6, 7, 7, 7, 7};
  for (int n = 2; n <= 16; ++n) EXPECT_EQ(k_expected(n), table[n - 2]) << n;
  EXPECT_EQ(k_expected(7), 3);
  EXPECT_EQ(k_expected(12), 6);
  EXPECT_EQ(k_expected(2), 1);
  EXPECT_THROW(k_expected(1), domain_error);
}

TEST(KTable, MonotoneLifting) {
  for (int n = 2; n < 500; ++n) {
    int d = k_expected(n + 1) - k_expected(n);
    EXPECT_TRUE(d == 0 || d == 1) << n;
  }
}

TEST(KTable, ComputedSmallRanks) {
  EXPECT_EQ(k_computed(3), 2);
  EXPECT_EQ(k_computed(7), 3);
  for (int n = 2; n <= 8; ++n) EXPECT_EQ(k_computed(n), k_expected(n)) << n;
  EXPECT_THROW(k_computed(1), domain_error);
}

TEST(KTable, BudgetExceededNamesTheStep) {
  GroebnerOptions opt;
  opt.budget = 0;
  try {
    k_computed(11, opt);
    FAIL();
  } catch (const budget_exceeded& e) {
    EXPECT_NE(e.context().find("n=11"), std::string::npos) << e.context();
    EXPECT_NE(e.context().find("theta_"), std::string::npos) << e.context();
  }
}

TEST(Mq1, Examples) {
  auto r7 = verify_mq1(7, 3);
  EXPECT_TRUE(r7.regular);
  EXPECT_TRUE(r7.theta_k_in_ik);
  EXPECT_TRUE(r7.tau_prefix_regular);
  EXPECT_EQ(r7.h, 3);
  auto r4 = verify_mq1(4, 2);
  EXPECT_TRUE(r4.all());
  EXPECT_EQ(r4.h, 1);
  EXPECT_FALSE(verify_mq1(3, 3).regular);
  // One step short: theta_1 is not in I_1 = (u2).
  EXPECT_FALSE(verify_mq1(7, 2).theta_k_in_ik);
}

TEST(Present, BoAndBsoAreFree) {
  for (int n = 2; n <= 6; ++n) {
    EXPECT_TRUE(present(Family::BO, n).relations.empty());
    EXPECT_TRUE(present(Family::BSO_top, n).relations.empty());
    auto bso = present(Family::BSO, n);
    EXPECT_TRUE(bso.relations.empty());
    EXPECT_EQ(bso.ring, ring_bso(n));
  }
  EXPECT_THROW(present(Family::BSO, 1), domain_error);
  EXPECT_THROW(present(Family::BSpin), domain_error);
}

TEST(Present, BSpin3) {
  auto p = present(Family::BSpin, 3);
  EXPECT_EQ(p.k, 2);
  std::vector<std::string> names;
  for (const auto& g : p.ring.generators()) names.push_back(g.name);
  EXPECT_EQ(names, (std::vector<std::string>{"u2", "u3", "v4", "t"}));
  std::vector<std::string> rels;
  for (const auto& r : p.relations.elements()) rels.push_back(to_string(r));
  std::sort(rels.begin(), rels.end());
  EXPECT_EQ(rels, (std::vector<std::string>{"u2", "u3"}));
  EXPECT_EQ(hilbert_series(p.relations), free_on({"t", "v4"}, p.ring));
}

TEST(Present, BSpinClosedForms) {
  const std::vector<std::vector<std::string>> free = {
      {"t", "v2"}, {"t", "v4"}, {"t", "u4", "v4"}, {"t", "u4", "v8"}, {"t", "u4", "u6", "v8"}, {"t", "u4", "u6", "u7", "v8"}};
  for (int n = 2; n <= 7; ++n) {
    auto p = present(Family::BSpin, n);
    EXPECT_EQ(hilbert_series(p.relations), free_on(free[static_cast<std::size_t>(n - 2)], p.ring)) << n;
  }
}

TEST(Present, U2VanishesInBSpin) {
  for (int n = 3; n <= 8; ++n) {
    auto p = present(Family::BSpin, n);
    EXPECT_TRUE(ideal_member(Poly::variable(p.ring, "u2"), p.relations)) << n;
  }
}

TEST(Present, TopologicalBSpinMatchesQuillen) {
  // H(BSpin_n) = F2[w_2..w_n]/(rho_0..rho_{k-1}) [v_{2^k}]; k agrees with the
  // motivic value.
  for (int n = 3; n <= 7; ++n) {
    auto p = present(Family::BSpin_top, n);
    EXPECT_FALSE(p.ring.tau());
    auto motivic = present(Family::BSpin, n);
    EXPECT_EQ(p.relations.size(), motivic.relations.size()) << n;
  }
}

TEST(Present, BG2) {
  auto p = present(Family::BG2);
  EXPECT_FALSE(p.n);
  EXPECT_TRUE(p.relations.empty());
  std::vector<std::string> names;
  for (const auto& g : p.ring.generators()) names.push_back(g.name);
  EXPECT_EQ(names, (std::vector<std::string>{"u4", "u6", "u7", "t"}));
}

TEST(Poincare, BG2RanksMatchEnumeration) {
  auto p = present(Family::BG2);
  auto ranks = module_ranks(p, 8);
  // Oracle: count monomials u4^a u6^b u7^c with 4a + 6b + 7c = p.
  std::vector<std::int64_t> expected(9, 0);
  for (int a = 0; 4 * a <= 8; ++a)
    for (int b = 0; 4 * a + 6 * b <= 8; ++b)
      for (int c = 0; 4 * a + 6 * b + 7 * c <= 8; ++c) ++expected[static_cast<std::size_t>(4 * a + 6 * b + 7 * c)];
  EXPECT_EQ(ranks, expected);
  EXPECT_EQ(ranks, (std::vector<std::int64_t>{1, 0, 0, 0, 1, 0, 1, 1, 1}));
}

TEST(Poincare, FreeBso3) {
  auto p = present(Family::BSO, 3);
  auto ps = poincare(p, 12);
  EXPECT_EQ(ps.series, free_on({"t", "u2", "u3"}, p.ring));
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> got;
  for (const auto& e : ps.expansion) got[{e.p, e.q}] = e.dim;
  EXPECT_EQ(got, oracle::quotient_dims(p.ring, {}, 12));
}

TEST(Poincare, BSpin6ExpansionMatchesOracle) {
  auto p = present(Family::BSpin, 6);
  auto ps = poincare(p, 16);
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> got;
  for (const auto& e : ps.expansion) got[{e.p, e.q}] = e.dim;
  EXPECT_EQ(got, oracle::quotient_dims(p.ring, p.relations.elements(), 16));
}

TEST(Maps, Examples) {
  Ring top = ring_bso_top(7);
  EXPECT_EQ(to_string(h_map(parse_poly(top, "w3"))), "u3");
  Ring mot = ring_bso(7);
  EXPECT_EQ(to_string(t_map(parse_poly(mot, "t*u5+u2*u3"))), "w2*w3+w5");
  Poly th2 = theta(SteenrodContext::bso(7), 2);
  EXPECT_EQ(h_map(t_map(th2)), th2);
  EXPECT_EQ(to_string(i_map(parse_poly(top, "w2*w3"))), "u2*u3");
  EXPECT_EQ(to_string(h_map(parse_poly(top, "w3^2"))), "t*u3^2");
}

TEST(Maps, THIsIdentityAndHIsTwistedMultiplicative) {
  std::mt19937_64 rng(83);
  Ring top = ring_bso_top(7);
  for (int i = 0; i < 200; ++i) {
    std::int64_t p1 = static_cast<std::int64_t>(rng() % 10), p2 = static_cast<std::int64_t>(rng() % 10);
    Poly x = oracle::random_poly_of(top, {p1, 0}, rng), y = oracle::random_poly_of(top, {p2, 0}, rng);
    EXPECT_EQ(t_map(h_map(x)), x);
    Poly lhs = h_map(x * y);
    Poly rhs = h_map(x) * h_map(y);
    if ((p1 * p2) % 2) rhs = rhs * Poly::variable(rhs.ring(), "t");
    EXPECT_EQ(lhs, rhs) << to_string(x) << " | " << to_string(y);
  }
}

TEST(Maps, Errors) {
  Ring mot = ring_bso(4);
  EXPECT_THROW(h_map(parse_poly(mot, "u2")), domain_error);
  EXPECT_THROW(t_map(Poly::variable(ring_bso(4, {{"v4", {4, 2}}}), "v4")), domain_error);
}

TEST(Torsor, Examples) {
  auto r5 = torsor_relations(5, 0);
  ASSERT_EQ(r5.size(), 1u);
  EXPECT_EQ(to_string(r5[0].relation), "u3");
  EXPECT_TRUE(r5[0].verified);

  auto r7 = torsor_relations(7, 1);
  ASSERT_EQ(r7.size(), 2u);
  EXPECT_EQ(to_string(r7[1].relation), "u2*u3+u5");
  EXPECT_TRUE(r7[1].verified);
  EXPECT_TRUE(r7[1].residual.is_zero());

  auto r11 = torsor_relations(11, 2);
  ASSERT_EQ(r11.size(), 3u);
  EXPECT_EQ(to_string(r11[2].relation), "u4*u5+u3*u6+u2*u7+u9");
  EXPECT_TRUE(r11[2].verified);
  EXPECT_THROW(torsor_relations(2, 0), domain_error);
}

TEST(Torsor, AllSmallRanksVerify) {
  for (int n = 3; n <= 11; ++n)
    for (const auto& r : torsor_relations(n, 10)) {
      EXPECT_TRUE(r.verified) << "n=" << n << " j=" << r.j;
      EXPECT_LE((1 << r.j) + 1, n);
    }
}

TEST(Torsor, ChernIdealWithoutU2) {
  // With u2 replaced by c2 = u2^2 the residuals still lie in the ideal.
  for (int n = 3; n <= 11; ++n) {
    auto ctx = SteenrodContext::bso(n);
    auto chern = chern_monomials(ctx);
    chern.front() = chern.front().square();
    for (const auto& r : torsor_relations(n, 10))
      EXPECT_TRUE(in_monomial_ideal(r.residual, chern)) << "n=" << n << " j=" << r.j;
  }
}

TEST(JBound, Examples) {
  EXPECT_EQ(j_lower_bound(11), (std::vector<int>{1, 2, 4}));
  EXPECT_EQ(j_lower_bound(3), (std::vector<int>{1}));
  EXPECT_EQ(j_lower_bound(17), (std::vector<int>{1, 2, 4, 8}));
  EXPECT_EQ(j_lower_bound(16), (std::vector<int>{1, 2, 4}));
  EXPECT_THROW(j_lower_bound(2), domain_error);
}

TEST(G2, Gysin) {
  auto rep = g2_gysin_check();
  EXPECT_TRUE(rep.v8_regular);
  EXPECT_TRUE(rep.series_identity);
  Ring r = present(Family::BSpin, 7).ring;
  auto bad = g2_gysin_check({Poly::variable(r, "v8")});
  EXPECT_FALSE(bad.v8_regular);
}

TEST(G2, SeriesAgreeToDegree30) {
  auto g2 = poincare(present(Family::BG2), 30).expansion;
  auto spin7 = present(Family::BSpin, 7);
  HilbertSeries quotient = hilbert_series(extend_basis(spin7.relations, {Poly::variable(spin7.ring, "v8")}));
  EXPECT_EQ(g2, quotient.expand(30));
}
