#include <gtest/gtest.h>

#include "aiso/pathology.hpp"
#include "support.hpp"

using namespace aiso;
using test::share;

TEST(MakeJ, Examples) {
  auto a = make_J({0, 1}, 0.5);
  EXPECT_DOUBLE_EQ(a.dist(0, 0, 1), 1.0);
  EXPECT_EQ(a.predicates[0].values, (std::vector<double>{0, 1}));
  auto b = make_J({0.5, 0.25}, 0.5);
  EXPECT_DOUBLE_EQ(b.dist(0, 0, 1), 0.5);
  EXPECT_EQ(b.predicates[0].values, (std::vector<double>{0.25, 0.5}));
  EXPECT_THROW(make_J({}, 0.5), InputError);
  EXPECT_THROW(make_J({1.5}, 0.5), InputError);
  EXPECT_THROW(make_J({0.5}, -0.1), InputError);
  EXPECT_EQ(make_J({0.5, 0.5, 0.25}, 0).sorts[0].size(), 2u);
}

TEST(MakeJ, AlwaysValid) {
  for (double eps : {0.0, 0.1, 0.5, 1.0}) EXPECT_TRUE(validate_structure(make_J(dyadic_grid(3), eps)).empty());
}

TEST(DyadicGrid, Step) {
  auto g = dyadic_grid(4);
  EXPECT_EQ(g.size(), 17u);
  EXPECT_DOUBLE_EQ(g[1], 1.0 / 16);
}

TEST(Irreg, MatchedU) {
  auto a = share(make_J({0, 0.5, 1}, 0.3)), b = share(make_J({0, 0.5, 1}, 0));
  auto c = diagonal(a, b);
  auto r = check_irreg_characterization(c, 0.3);
  EXPECT_TRUE(r.u_match);
  EXPECT_TRUE(r.holds);
  EXPECT_DOUBLE_EQ(r.dis_gh, r.dis_iu);
  auto id = check_irreg_characterization(Correlation::identity(a), 0.0);
  EXPECT_TRUE(id.holds);
  EXPECT_EQ(id.dis_iu, 0.0);
}

TEST(Irreg, MatchedUDisGh) {
  // U matched on the diagonal; the metrics differ by (1 - 0.4) at one pair.
  auto a = share(make_J({0.0, 0.4}, 1.0)), b = share(make_J({0.0, 0.4}, 0.0));
  auto r = check_irreg_characterization(diagonal(a, b), 0.3);
  EXPECT_TRUE(r.u_match);
  EXPECT_NEAR(r.dis_gh, 0.3, 1e-12);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(check_irreg_characterization(diagonal(a, b), 0.2).holds);
}

TEST(Irreg, MismatchDiverges) {
  auto a = share(make_J({0.0, 0.5}, 0.5)), b = share(make_J({0.1, 0.5}, 0.5));
  auto r = check_irreg_characterization(diagonal(a, b), 0.5, 16);
  EXPECT_FALSE(r.u_match);
  EXPECT_TRUE(r.divergent);
  EXPECT_GE(r.dis_iu, 1.6 - 1e-9);
  EXPECT_TRUE(r.holds);
}

TEST(Demo, ShiftingCorrelations) {
  auto rep = disjoint_union_demo(3, 4, 16);
  ASSERT_EQ(rep.rows.size(), 4u);
  EXPECT_TRUE(rep.ok);
  for (const auto& row : rep.rows) {
    EXPECT_LE(row.dis, row.bound + row.slack + 1e-9) << row.k;
    EXPECT_DOUBLE_EQ(row.slack, 1.0 / 32);
  }
  EXPECT_DOUBLE_EQ(rep.rows[0].bound, 0.5);
  EXPECT_DOUBLE_EQ(rep.rows[3].bound, 0.0625);
}

TEST(Demo, ShiftingIsCorrelation) {
  const auto d = dyadic_grid(2);
  auto m = share(disjoint_union(d, {1, 0.5, 0.25}));
  auto n = share(disjoint_union(d, {0, 1, 0.5}));
  for (std::size_t k = 0; k <= 1; ++k) EXPECT_TRUE(is_correlation(shifting_correlation(m, n, d.size(), 3, k)).ok);
  EXPECT_THROW(shifting_correlation(m, n, d.size(), 3, 2), InputError);
}

TEST(Diagonal, GapLimitedDistortion) {
  // The eps metric floor only bites below eps; at the smallest grid gap g the
  // diagonal distortion is (eps - g) / 2, or 0 when eps <= g.
  const auto d = dyadic_grid(4);
  auto z = share(make_J(d, 0));
  for (double eps : {0.25, 0.5, 1.0}) {
    auto e = share(make_J(d, eps));
    auto sys = builtin("iu", e->signature());
    EXPECT_NEAR(distortion(sys, diagonal(e, z)).value, (eps - 1.0 / 16) / 2, 1e-12);
  }
  auto e = share(make_J(d, 0.05));
  EXPECT_EQ(distortion(builtin("iu", e->signature()), diagonal(e, z)).value, 0.0);
}

TEST(Trend, DivergesLinearly) {
  const std::vector<double> d0{0, 0.25, 0.5}, d1{0.125, 0.375, 0.625};
  auto t = divergence_trend(d0, d1, 0.25, {4, 8, 16});
  ASSERT_EQ(t.size(), 3u);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_GE(t[i].rho + 1e-9, t[i].bound);
    if (i) EXPECT_GT(t[i].rho, t[i - 1].rho);
  }
}
