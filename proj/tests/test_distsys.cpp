#include <gtest/gtest.h>

#include "support.hpp"

using namespace aiso;
using test::share;
using test::space;

namespace {

MetricStructure with_u(MetricStructure m, std::vector<double> u, double lip = 1.0) {
  m.predicates.push_back({"U", 1, {"S"}, std::move(u), 0.0, 1.0, {lip}});
  return m;
}

}  // namespace

TEST(Builtin, Families) {
  const auto sig = with_u(space({{0, 1}, {1, 0}}), {0, 1}).signature();
  EXPECT_EQ(builtin("gh", sig).generators.size(), 1u);
  auto lip = builtin("lip", sig);
  EXPECT_EQ(lip.generators.size(), 4u);
  EXPECT_EQ(lip.truncation.at("r_max"), 4.0);
  auto iu = builtin("iu", sig, {{"n_max", 3}});
  EXPECT_EQ(iu.generators.size(), 4u);
  EXPECT_EQ(iu.truncation.at("n_max"), 3.0);
  EXPECT_EQ(builtin("iu", sig).generators.size(), 17u);
  EXPECT_EQ(builtin("fghk", sig).generators.size(), 2u);
  EXPECT_EQ(builtin("eghk", sig).generators.size(), 2u);
  EXPECT_THROW(builtin("nope", sig), InputError);
  EXPECT_THROW(builtin("kadets", sig), InputError);
  EXPECT_THROW(builtin("iu", space({{0}}).signature()), InputError);
  EXPECT_THROW(builtin("lip", sig, {{"r_max", 0}}), InputError);
}

TEST(Builtin, FghkWeights) {
  EXPECT_DOUBLE_EQ(fghk_weight(0, 0.0, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(fghk_weight(1, -3.0, 1.0), 0.125);
  const auto m = with_u(space({{0, 1}, {1, 0}}, 2), {0, 1});
  auto sys = builtin("fghk", m.signature());
  EXPECT_DOUBLE_EQ(sys.generators[0]->c, 0.5);
  EXPECT_DOUBLE_EQ(sys.generators[1]->c, 0.5 / 3.0);
}

TEST(Builtin, AddDeduplicates) {
  const auto sig = space({{0}}).signature();
  DistortionSystem s;
  EXPECT_TRUE(s.add(parse("(scale 0.5 (d S x0 x1))", sig)));
  EXPECT_FALSE(s.add(parse("(scale 0.5 (d S x0 x1))", sig)));
  EXPECT_TRUE(s.add(parse("(scale 0.5 (d S x1 x0))", sig)));
}

TEST(Distortion, TwoPointSpaces) {
  auto a = share(test::two_point(1)), b = share(test::two_point(3));
  auto sys = builtin("gh", a->signature());
  auto id = Correlation::empty(a, b);
  id.relation[0] = BoolMatrix::identity(2);
  auto r = distortion(sys, id);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->generator, 0u);
  // First maximizer: x0 = (0,0), x1 = (1,1).
  EXPECT_EQ(r.witness->tuple[0].left, 0u);
  EXPECT_EQ(r.witness->tuple[1].left, 1u);
  EXPECT_DOUBLE_EQ(distortion(sys, Correlation::all(a, b)).value, 1.5);
}

TEST(Distortion, RejectsMismatchedSorts) {
  auto a = share(space({{0}}, 1, "S")), b = share(space({{0}}, 1, "T"));
  auto c = Correlation::all(a, b);
  EXPECT_THROW(distortion(builtin("gh", a->signature()), c), InputError);
}

TEST(Distortion, AgreesWithBruteForce) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    auto a = share(test::random_structure(rng, 2 + t % 2));
    auto b = share(test::random_structure(rng, 2 + (t / 2) % 2));
    for (const char* name : {"gh", "lip", "iu", "fghk", "eghk"}) {
      auto sys = builtin(name, a->signature(), {{"n_max", 4}});
      std::size_t seen = 0;
      test::for_each_correlation(a, b, [&](const Correlation& c) {
        if (seen++ % 3) return;
        EXPECT_NEAR(distortion(sys, c).value, test::brute_distortion(sys, c), 1e-12) << name;
      });
    }
  }
}

// Appending quantified and max/min-combined generators leaves dis unchanged.
TEST(DistortionProperty, QuantifierSafety) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    auto a = share(test::random_structure(rng, 2 + t % 3));
    auto b = share(test::random_structure(rng, 2 + (t / 3) % 3));
    const char* names[] = {"gh", "iu", "fghk", "lip"};
    const auto sig = a->signature();
    auto sys = builtin(names[t % 4], sig, {{"n_max", 3}});
    Correlation c = Correlation::all(a, b);
    std::uniform_int_distribution<int> coin(0, 2);
    for (std::size_t i = 0; i < a->sorts[0].size(); ++i)
      for (std::size_t j = 0; j < b->sorts[0].size(); ++j)
        if (coin(rng) == 0) c.relation[0].set(i, j, false);
    if (!is_correlation(c).ok) c = Correlation::all(a, b);
    const double before = distortion(sys, c).value;
    auto ext = sys;
    for (const auto& g : sys.generators) {
      for (const auto& [v, s] : g->free) {
        ext.add(fm::sup(v, s, g));
        ext.add(fm::inf(v, s, g));
      }
      ext.add(fm::max(g, sys.generators[0]));
      ext.add(fm::min(g, sys.generators.back()));
    }
    EXPECT_NEAR(distortion(ext, c).value, before, 1e-9);
  }
}

TEST(Completeness, FghkIsAtomicallyComplete) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    auto m = test::random_structure(rng, 3);
    auto r = check_atomic_completeness(builtin("fghk", m.signature()), m);
    EXPECT_TRUE(r.complete) << r.atomic;
  }
}

TEST(Completeness, GhMissesThePredicate) {
  auto m = with_u(space({{0, 1}, {1, 0}}), {0.0, 0.5});
  auto r = check_atomic_completeness(builtin("gh", m.signature()), m);
  EXPECT_FALSE(r.complete);
  EXPECT_NE(r.atomic.find("U"), std::string::npos);
}

TEST(Functionality, GhWitness) {
  auto a = test::two_point(1), b = test::two_point(3);
  auto sys = builtin("gh", a.signature());
  auto phi = sys.generators[0];
  auto ok = functionality_witness_check(sys, phi, 0.5, 1.5, {&a, &b});
  EXPECT_TRUE(ok.ok) << ok.message;
  auto bad = functionality_witness_check(sys, phi, 2.0, 0.5, {&a, &b});
  EXPECT_FALSE(bad.ok);
  EXPECT_TRUE(functionality_witness_check(sys, functionality_witness(phi), 0.3, 1.5, {&a}).ok);
  auto other = parse("(d S x0 x1)", a.signature());
  EXPECT_FALSE(functionality_witness_check(sys, other, 0.5, 1.5, {&a}).ok);
}

TEST(Chi, EghkBlockValue) {
  // inf_y U(y) + d(x, y) on the 2-point space with U = (0, 1), d = 0.5.
  auto m = with_u(space({{0, 0.5}, {0.5, 0}}), {0.0, 0.5});
  auto sig = m.signature();
  auto chi = chi_atomic(sig, fm::pred(sig, "U", {0}));
  EXPECT_DOUBLE_EQ(evaluate(chi, m, {{0, {0, 1}}}), 0.5);
  EXPECT_DOUBLE_EQ(evaluate(chi, m, {{0, {0, 0}}}), 0.0);
}
