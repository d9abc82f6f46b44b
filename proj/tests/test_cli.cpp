#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace {

struct Run {
  int code = -1;
  std::vector<nlohmann::json> records;
  std::string text;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(AISO_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  while (fgets(buf.data(), buf.size(), p)) r.text += buf.data();
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::size_t at = 0;
  while (at < r.text.size()) {
    const auto nl = r.text.find('\n', at);
    const auto line = r.text.substr(at, nl - at);
    if (!line.empty() && line[0] == '{') r.records.push_back(nlohmann::json::parse(line));
    at = nl == std::string::npos ? r.text.size() : nl + 1;
  }
  return r;
}

std::string data(const std::string& f) { return std::string(DATA_DIR) + "/" + f; }

}  // namespace

TEST(Cli, Validate) {
  EXPECT_EQ(run("validate " + data("triangle.json")).code, 0);
  auto bad = run("validate " + data("triangle_bad.json"));
  EXPECT_EQ(bad.code, 1);
  ASSERT_EQ(bad.records.size(), 1u);
  EXPECT_FALSE(bad.records[0]["violations"].empty());
  EXPECT_EQ(bad.records[0]["violations"][0]["tuple"], nlohmann::json({0, 1, 2}));
  EXPECT_EQ(run("validate " + data("missing.json")).code, 2);
}

TEST(Cli, Rho) {
  auto twin = run("rho --left " + data("triangle.json") + " --right " + data("triangle_twin.json"));
  ASSERT_EQ(twin.code, 0);
  EXPECT_EQ(twin.records[0]["value"], 0.0);
  auto pair = run("rho --left " + data("two_point_1.json") + " --right " + data("two_point_3.json"));
  EXPECT_DOUBLE_EQ(pair.records[0]["value"].get<double>(), 1.0);
  EXPECT_TRUE(pair.records[0].contains("nodes"));
  EXPECT_TRUE(pair.records[0].contains("truncation"));
  auto lip = run("rho --system lip --trunc r_max=4 --left " + data("triangle.json") + " --right " +
                 data("triangle_scaled.json"));
  EXPECT_LE(lip.records[0]["value"].get<double>(), 0.5 + 1e-9);
  auto heur = run("rho --heuristic --seed 3 --left " + data("two_point_1.json") + " --right " +
                  data("two_point_3.json"));
  EXPECT_GE(heur.records[0]["value"].get<double>(), 1.0 - 1e-12);
  EXPECT_EQ(run("rho --max-cells 2 --left " + data("triangle.json") + " --right " + data("triangle_twin.json")).code,
            1);
  EXPECT_EQ(run("rho --max-cells 2 --force --left " + data("triangle.json") + " --right " +
                data("triangle_twin.json"))
                .code,
            0);
}

TEST(Cli, DisAndEval) {
  auto d = run("dis --left " + data("one_point.json") + " --right " + data("two_point_2.json") +
               " --correlation " + data("point_to_pair.json"));
  ASSERT_EQ(d.code, 0);
  EXPECT_DOUBLE_EQ(d.records[0]["value"].get<double>(), 1.0);
  auto e = run("eval --structure " + data("triangle_u.json") +
               " --formula '(sup x1:S (min (pred U x1) (d S x0 x1)))' --assign x0=a");
  ASSERT_EQ(e.code, 0);
  EXPECT_DOUBLE_EQ(e.records[0]["value"].get<double>(), 0.5);
  EXPECT_EQ(run("eval --structure " + data("triangle_u.json") + " --formula '(const 1'").code, 2);
}

TEST(Cli, BackAndForth) {
  const auto pair = " --left " + data("one_point.json") + " --right " + data("two_point_2.json");
  EXPECT_EQ(run("baf --rounds 1" + pair).records[0]["value"], 0.0);
  const double r2 = run("baf --rounds 2" + pair).records[0]["value"].get<double>();
  EXPECT_DOUBLE_EQ(r2, 1.0);
  EXPECT_LE(r2, run("rho" + pair).records[0]["value"].get<double>() + 1e-9);
  auto fix = run("baf --fixpoint --dump" + pair);
  ASSERT_GT(fix.records.size(), 1u);
  EXPECT_TRUE(fix.records.front().contains("alpha"));
  EXPECT_EQ(fix.records.back()["stabilization"], 2);
  auto same = run("scott --left " + data("one_point.json"));
  EXPECT_EQ(same.records[0]["scott_rank"], 0);
  EXPECT_EQ(same.records[0]["empty_value"], 0.0);
  EXPECT_EQ(run("baf --rounds 9" + pair).code, 1);
}

TEST(Cli, Embound) {
  auto e = run("embound --banach " + data("plane_l2.json") + " --target " + data("plane_l2.json") + " --map " +
               data("map_diag.json"));
  ASSERT_EQ(e.code, 0);
  EXPECT_EQ(e.records[0]["points"], 7);
  EXPECT_EQ(e.records[0]["generators"], 64);
  EXPECT_LE(e.records[0]["dis"].get<double>(),
            0.1 + e.records[0]["modulus"].get<double>() * e.records[0]["residual"].get<double>());
}

TEST(Cli, DemosAndDeterminism) {
  auto f = run("demo fghk");
  EXPECT_EQ(f.code, 0);
  for (const auto& r : f.records) EXPECT_EQ(r["result"], "PASS");
  auto iu = run("demo iu");
  ASSERT_GE(iu.records.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(iu.records[i]["result"], "PASS");
  const auto args = "--threads 1 rho --left " + data("triangle.json") + " --right " + data("triangle_scaled.json");
  EXPECT_EQ(run(args).text, run(args).text);
  EXPECT_EQ(run(args).text, run("--threads 4" + std::string(args).substr(11)).text);
  auto human = run("--format human rho --left " + data("two_point_1.json") + " --right " + data("two_point_3.json"));
  EXPECT_NE(human.text.find("value: 1"), std::string::npos);
  EXPECT_EQ(run("demo nope").code, 2);
}
