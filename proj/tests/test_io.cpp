#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "aiso/io.hpp"
#include "support.hpp"

using namespace aiso;

TEST(Io, StructureRoundTrip) {
  std::mt19937_64 rng(1);
  auto m = test::random_structure(rng, 3);
  m.constants["c"] = {0, 2};
  auto j = structure_to_json(m);
  auto back = structure_from_json(Json::parse(j.dump()));
  ASSERT_EQ(back.sorts.size(), 1u);
  EXPECT_EQ(back.sorts[0], m.sorts[0]);
  EXPECT_EQ(back.predicates[0], m.predicates[0]);
  EXPECT_EQ(back.constants.at("c"), (PointRef{0, 2}));
}

TEST(Io, NestedValues) {
  auto j = Json::parse(R"({"sorts":[{"name":"S","points":["a","b"],"metric":[[0,1],[1,0]],"diameter_bound":1}],
    "predicates":[{"name":"Q","arity":2,"arg_sorts":["S","S"],"values":[[0,0.5],[0.25,1]],"range":[0,1],"lipschitz":[1,1]}],
    "constants":{"k":["S","b"]}})");
  auto m = structure_from_json(j);
  EXPECT_EQ(m.predicates[0].values, (std::vector<double>{0, 0.5, 0.25, 1}));
  EXPECT_EQ(m.constants.at("k").point, 1u);
  EXPECT_TRUE(validate_structure(m).empty());
}

TEST(Io, Errors) {
  EXPECT_THROW(read_json("/nonexistent/file.json"), IoError);
  EXPECT_THROW(structure_from_json(Json::parse("[]")), IoError);
  EXPECT_THROW(structure_from_json(Json::parse(R"({"sorts":[{"name":"S"}]})")), IoError);
  auto p = std::filesystem::temp_directory_path() / "aiso_bad.json";
  std::ofstream(p) << "{ not json";
  EXPECT_THROW(read_json(p.string()), IoError);
}

TEST(Io, Correlation) {
  auto a = test::share(test::two_point(1));
  auto c = correlation_from_json(Json::parse(R"({"relation":{"S":[[1,0],[0,1]]},"anchors":[["S","p0",0]]})"), a, a);
  EXPECT_EQ(c.relation[0], BoolMatrix::identity(2));
  ASSERT_EQ(c.anchors.size(), 1u);
  auto back = correlation_from_json(Json::parse(correlation_to_json(c).dump()), a, a);
  EXPECT_EQ(back.relation[0], c.relation[0]);
  EXPECT_EQ(back.anchors, c.anchors);
  EXPECT_THROW(correlation_from_json(Json::parse(R"({"relation":{"S":[[1,0]]}})"), a, a), IoError);
}

TEST(Io, System) {
  const auto sig = test::two_point(1).signature();
  auto s = system_from_json(Json::parse(R"J({"name":"mine","generators":["(scale 0.5 (d S x0 x1))"]})J"), sig);
  EXPECT_EQ(s.name, "mine");
  EXPECT_EQ(s.generators.size(), 1u);
  auto b = system_from_json(Json::parse(R"({"builtin":"lip","truncation":{"r_max":2}})"), sig);
  EXPECT_EQ(b.generators.size(), 2u);
  EXPECT_THROW(system_from_json(Json::parse(R"({"name":"x"})"), sig), IoError);
  EXPECT_THROW(system_from_json(Json::parse(R"J({"generators":["(d S x0"]})J"), sig), ParseError);
}

TEST(Io, Banach) {
  auto b = banach_from_json(Json::parse(
      R"({"dim":2,"field":"complex","norm":"l2","samples":[[0,0],[[0,1],1]],"radius_cap":2})"));
  EXPECT_EQ(b.field, Field::Complex);
  EXPECT_EQ(b.samples[1][0], cplx(0, 1));
  EXPECT_TRUE(validate_banach(b).empty());
  EXPECT_THROW(banach_from_json(Json::parse(R"({"dim":2,"field":"quaternion","norm":"l2","samples":[],"radius_cap":1})")),
               IoError);
  auto a = matrix_from_json(Json::parse("[[1,0],[0,[0,1]]]"));
  EXPECT_EQ(a[1][1], cplx(0, 1));
}
