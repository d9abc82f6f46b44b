#include <gtest/gtest.h>

#include "aiso/backforth.hpp"
#include "aiso/corrsearch.hpp"
#include "aiso/kernels.hpp"
#include "support.hpp"

using namespace aiso;
using test::share;

namespace {

struct Pair {
  StructurePtr m, n;
  DistortionSystem sys;
};

Pair one_two() {
  auto m = share(test::one_point()), n = share(test::two_point(2));
  return {m, n, builtin("gh", m->signature())};
}

}  // namespace

TEST(R0, GhOnTuples) {
  auto p = one_two();
  const auto w = WeakModulus::ones();
  EXPECT_EQ(r0(p.sys, w, *p.m, {{0, 0}}, *p.n, {{0, 1}}), 0.0);
  EXPECT_DOUBLE_EQ(r0(p.sys, w, *p.m, {{0, 0}, {0, 0}}, *p.n, {{0, 0}, {0, 1}}), 1.0);
  EXPECT_THROW(r0(p.sys, w, *p.m, {{0, 0}}, *p.n, {}), InputError);
}

TEST(R0, ModulusFiltersGenerators) {
  auto p = one_two();
  WeakModulus tight{{0.1}, false};
  EXPECT_EQ(r0(p.sys, tight, *p.m, {{0, 0}, {0, 0}}, *p.n, {{0, 0}, {0, 1}}), 0.0);
}

TEST(RFinite, OnePointTwoPoint) {
  auto p = one_two();
  const auto w = WeakModulus::ones();
  EXPECT_EQ(r_finite(p.sys, w, *p.m, *p.n, 0), 0.0);
  EXPECT_EQ(r_finite(p.sys, w, *p.m, *p.n, 1), 0.0);
  EXPECT_EQ(r_finite(p.sys, w, *p.m, *p.n, 2), 1.0);
  EXPECT_THROW(r_finite(p.sys, w, *p.m, *p.n, 5), InputError);
}

TEST(RInfty, OnePointTwoPoint) {
  auto p = one_two();
  auto t = r_infty_capped(p.sys, WeakModulus::ones(), *p.m, *p.n, 2);
  EXPECT_EQ(t.empty_value(), 1.0);
  EXPECT_EQ(scott_rank_capped(t), 2u);
  EXPECT_EQ(t.value(0, {0}, {1}), 0.0);
  EXPECT_EQ(t.value(t.levels.size() - 1, {0}, {1}), 1.0);
  std::vector<std::size_t> a, b;
  t.decode(2, t.code({0, 0}, {1, 0}), a, b);
  EXPECT_EQ(b, (std::vector<std::size_t>{1, 0}));
}

TEST(RInfty, IdenticalInputs) {
  std::mt19937_64 rng(6);
  auto m = share(test::random_structure(rng, 3));
  auto t = r_infty_capped(builtin("iu", m->signature(), {{"n_max", 2}}), WeakModulus::ones(), *m, *m, 2);
  EXPECT_EQ(t.empty_value(), 0.0);
  // Off-diagonal tuple pairs still move, so only the diagonal is pinned at zero.
  for (std::size_t alpha = 0; alpha < t.levels.size(); ++alpha)
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(t.value(alpha, {a, b}, {a, b}), 0.0);
  auto one = share(test::space({{0}}));
  EXPECT_EQ(scott_rank_capped(r_infty_capped(builtin("gh", one->signature()), WeakModulus::ones(), *one, *one, 3)),
            0u);
}

// Every entry is nondecreasing along the stages.
TEST(BackForthProperty, MonotoneAcrossStages) {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 6; ++trial) {
    auto m = share(test::random_structure(rng, 2 + trial % 2));
    auto n = share(test::random_structure(rng, 3));
    auto t = r_infty_capped(builtin(trial % 2 ? "gh" : "iu", m->signature(), {{"n_max", 3}}), WeakModulus::ones(),
                            *m, *n, 3);
    for (std::size_t alpha = 1; alpha < t.levels.size(); ++alpha)
      for (std::size_t l = 0; l <= t.k; ++l)
        for (std::size_t c = 0; c < t.levels[alpha][l].size(); ++c) {
          const double lo = t.levels[alpha - 1][l][c], hi = t.levels[alpha][l][c];
          if (!std::isnan(lo)) EXPECT_GE(hi + 1e-12, lo);
        }
  }
}

// Swapping the structures transposes the table; the empty value is a pseudo-metric.
TEST(BackForthProperty, SymmetryAndTriangle) {
  std::mt19937_64 rng(47);
  const auto w = WeakModulus::ones();
  for (int trial = 0; trial < 10; ++trial) {
    auto a = share(test::random_structure(rng, 1 + trial % 3));
    auto b = share(test::random_structure(rng, 2));
    auto c = share(test::random_structure(rng, 1 + (trial + 1) % 3));
    auto sys = builtin(trial % 2 ? "gh" : "fghk", a->signature());
    auto ab = r_infty_capped(sys, w, *a, *b, 2), ba = r_infty_capped(sys, w, *b, *a, 2);
    auto bc = r_infty_capped(sys, w, *b, *c, 2), ac = r_infty_capped(sys, w, *a, *c, 2);
    EXPECT_EQ(ab.empty_value(), ba.empty_value());
    for (std::size_t x = 0; x < a->sorts[0].size(); ++x)
      for (std::size_t y = 0; y < b->sorts[0].size(); ++y)
        EXPECT_EQ(ab.value(ab.levels.size(), {x}, {y}), ba.value(ba.levels.size(), {y}, {x}));
    EXPECT_LE(ac.empty_value(), ab.empty_value() + bc.empty_value() + 1e-9);
  }
}

TEST(RInfty, Guard) {
  std::mt19937_64 rng(6);
  auto m = share(test::random_structure(rng, 8));
  EXPECT_THROW(r_infty_capped(builtin("gh", m->signature()), WeakModulus::ones(), *m, *m, 4), InputError);
}

// r_finite is monotone in rounds and the capped fixed point sits below rho.
TEST(BackForthProperty, MonotoneAndBelowRho) {
  std::mt19937_64 rng(44);
  const auto w = WeakModulus::ones();
  for (int t = 0; t < 12; ++t) {
    auto m = share(test::random_structure(rng, 1 + t % 3));
    auto n = share(test::random_structure(rng, 2 + t % 2));
    auto sys = builtin(t % 2 ? "gh" : "fghk", m->signature());
    double prev = 0.0;
    for (std::size_t k = 0; k <= 3; ++k) {
      const double r = r_finite(sys, w, *m, *n, k);
      EXPECT_GE(r + 1e-12, prev);
      prev = r;
    }
    const auto tab = r_infty_capped(sys, w, *m, *n, 3);
    EXPECT_LE(tab.empty_value(), rho_exact(sys, m, n).value + 1e-9);
    EXPECT_GE(tab.empty_value() + 1e-12, prev);
  }
}

TEST(BackForthProperty, ThreadInvariance) {
  std::mt19937_64 rng(45);
  auto m = share(test::random_structure(rng, 3));
  auto n = share(test::random_structure(rng, 4));
  auto sys = builtin("iu", m->signature(), {{"n_max", 3}});
  kern::set_threads(1);
  auto a = r_infty_capped(sys, WeakModulus::ones(), *m, *n, 3);
  kern::set_threads(4);
  auto b = r_infty_capped(sys, WeakModulus::ones(), *m, *n, 3);
  kern::set_threads(0);
  EXPECT_EQ(a.stabilization, b.stabilization);
  ASSERT_EQ(a.levels.size(), b.levels.size());
  for (std::size_t i = 0; i < a.levels.size(); ++i)
    for (std::size_t l = 0; l < a.levels[i].size(); ++l)
      for (std::size_t c = 0; c < a.levels[i][l].size(); ++c) {
        const double x = a.levels[i][l][c], y = b.levels[i][l][c];
        EXPECT_TRUE((std::isnan(x) && std::isnan(y)) || x == y);
      }
}
