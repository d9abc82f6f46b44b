#include "aiso/scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "aiso/corrsearch.hpp"
#include "aiso/distsys.hpp"
#include "aiso/embound.hpp"
#include "aiso/pathology.hpp"

namespace aiso {

namespace {

Mat mul(const Mat& a, const Mat& b) {
  Mat c(a.size(), std::vector<cplx>(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Mat diag(double a, double b) { return {{a, 0}, {0, b}}; }

SampledBanach unit_space(NormKind k) {
  SampledBanach b;
  b.dim = 2;
  b.norm = k;
  b.samples = {{0, 0}};
  return b;
}

struct MapCase {
  std::string name;
  NormKind from, to;
  Mat a;
  bool rebalance;
};

std::vector<MapCase> map_cases(double eps) {
  const double h = std::exp(eps / 2);
  const double c = std::cos(0.3), s = std::sin(0.3);
  std::vector<MapCase> out;
  for (auto k : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
    out.push_back({"diag", k, k, diag(h, 1 / h), false});
    out.push_back({"scalar", k, k, diag(h, h), false});
  }
  out.push_back({"rotation*diag*3", NormKind::L2, NormKind::L2, mul({{3 * c, -3 * s}, {3 * s, 3 * c}}, diag(h, 1 / h)), true});
  out.push_back({"isometry*diag", NormKind::L1, NormKind::Linf, mul({{1, 1}, {1, -1}}, diag(h, 1 / h)), false});
  out.push_back({"isometry*diag*5", NormKind::Linf, NormKind::L1,
                 mul({{2.5, 2.5}, {2.5, -2.5}}, diag(h, 1 / h)), true});
  return out;
}

}  // namespace

std::vector<ScenarioLine> bm_backward_scenario(const std::vector<double>& eps_values) {
  std::vector<ScenarioLine> out;
  for (double eps : eps_values) {
    for (auto mc : map_cases(eps)) {
      const auto from = unit_space(mc.from), to = unit_space(mc.to);
      if (mc.rebalance) mc.a = rebalance(mc.a, from, to).map;
      const double na = operator_norm(mc.a, from, to);
      const double ni = operator_norm(inverse(mc.a), to, from);
      const auto g = radial_grid(2, Field::Real, mc.from, 8, 1);
      const auto h = apply_map(g, mc.a, mc.to);
      auto m = std::make_shared<const MetricStructure>(embound(g, {1.0}));
      auto n = std::make_shared<const MetricStructure>(embound(h, {1.0}));
      const auto sys = bm_generators(m->signature());
      const auto lc = linear_map_correlation(g, m, h, n, mc.a);
      const double dis = distortion(sys, lc.correlation).value;
      const double L = generator_modulus(sys);
      const double bound = eps + L * lc.residual;
      const double cap = std::sqrt(std::exp(eps));
      ScenarioLine line;
      line.check = "bm<= " + norm_name(mc.from, false) + "->" + norm_name(mc.to, false) + " " + mc.name;
      line.ok = na <= cap + 1e-12 && ni <= cap + 1e-12 && dis <= bound + 1e-9;
      line.record = {{"eps", eps},        {"map", mc.name},  {"from", norm_name(mc.from, false)},
                     {"to", norm_name(mc.to, false)}, {"norm", na}, {"inv_norm", ni},
                     {"dis", dis},        {"residual", lc.residual}, {"modulus", L},
                     {"bound", bound},    {"samples", g.samples.size()}};
      out.push_back(std::move(line));
    }
  }
  return out;
}

std::vector<ScenarioLine> bm_forward_scenario(const std::vector<double>& eps_values) {
  std::vector<ScenarioLine> out;
  const double e = std::exp(0.5);
  for (double eps : eps_values)
    for (auto k : {NormKind::L1, NormKind::L2, NormKind::Linf}) {
      SampledBanach b;
      b.dim = 2;
      b.norm = k;
      b.samples = {{0, 0}, {1, 0}, {0, e}, {-1 / e, 0}, {0.5, -0.5}};
      b.radius_cap = 3;
      const double h = std::exp(eps / 2);
      const Mat a = diag(h, 1 / h);
      const auto c = apply_map(b, a, k);
      auto m = std::make_shared<const MetricStructure>(embound(b, {1.0}));
      auto n = std::make_shared<const MetricStructure>(embound(c, {1.0}));
      const auto sys = bm_generators(m->signature());
      const double slack = eps / (2 * sys.truncation.at("r_max") - 1);
      const auto fc = check_bm_forward(b, m, c, n, sys, eps, slack);
      // The searched space is not vacuous: the linear correlation is within eps.
      const double lin = distortion(sys, linear_map_correlation(b, m, c, n, a).correlation).value;
      ScenarioLine line;
      line.check = "bm=> " + norm_name(k, false);
      line.ok = fc.ok && lin <= eps + 1e-9;
      line.record = {{"eps", eps},           {"norm", norm_name(k, false)}, {"slack", slack},
                     {"bad_cells", fc.bad_cells}, {"searches", fc.searches},
                     {"linear_dis", lin},    {"message", fc.message}};
      out.push_back(std::move(line));
    }
  return out;
}

std::vector<ScenarioLine> iu_scenario(std::size_t k_max, unsigned grid) {
  std::vector<ScenarioLine> out;
  const auto rep = disjoint_union_demo(k_max, grid, 16);
  for (const auto& r : rep.rows)
    out.push_back({"R_k k=" + std::to_string(r.k), r.ok,
                   {{"k", r.k}, {"dis", r.dis}, {"bound", r.bound}, {"slack", r.slack}}});
  const auto d = dyadic_grid(grid);
  auto zero = std::make_shared<const MetricStructure>(make_J(d, 0.0));
  for (double eps : {0.25, 0.5}) {
    auto j = std::make_shared<const MetricStructure>(make_J(d, eps));
    const double dis = distortion(builtin("iu", j->signature()), diagonal(j, zero)).value;
    out.push_back({"diagonal eps=" + std::to_string(eps).substr(0, 4), std::abs(dis - eps / 2) <= 1e-9,
                   {{"eps", eps}, {"dis", dis}, {"expected", eps / 2}}});
  }
  const std::vector<double> d0{0, 0.25, 0.5}, d1{0.125, 0.375, 0.625};
  const auto trend = divergence_trend(d0, d1, 0.25, {4, 8, 16});
  bool ok = true;
  Json rows = Json::array();
  for (std::size_t i = 0; i < trend.size(); ++i) {
    ok = ok && trend[i].rho + 1e-9 >= trend[i].bound && (i == 0 || trend[i].rho > trend[i - 1].rho);
    rows.push_back({{"n_max", trend[i].n_max}, {"rho", trend[i].rho}, {"bound", trend[i].bound}});
  }
  out.push_back({"mismatched U trend", ok, {{"trend", rows}}});
  return out;
}

MetricStructure random_cloud(std::mt19937_64& rng, std::size_t n, bool with_predicates) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  Sort s;
  s.name = "S";
  s.diameter_bound = 2.0;
  s.metric.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    s.points.push_back("p" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j)
      s.metric[i][j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
  }
  MetricStructure m;
  m.sorts.push_back(s);
  if (!with_predicates) return m;
  const double c = u(rng);
  Predicate p{"U", 1, {"S"}, {}, 0.0, 1.0, {0.5}};
  for (std::size_t i = 0; i < n; ++i) p.values.push_back(std::clamp(c + 0.5 * s.metric[i][0], 0.0, 1.0));
  Predicate q{"Q", 2, {"S", "S"}, {}, 0.0, 1.0, {1.0, 1.0}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q.values.push_back(std::min(1.0, 0.5 * (p.values[i] + s.metric[j][0])));
  m.predicates = {p, q};
  return m;
}

std::vector<ScenarioLine> fghk_scenario(std::size_t structures, std::uint64_t seed) {
  std::vector<ScenarioLine> out;
  Signature sig = Signature::metric_only({"S"});
  sig.predicates.push_back({"P", {0}, 0.0, 1.0, {1.0}});
  const auto w = builtin("fghk", sig).generators.at(0)->c;
  out.push_back({"fghk weight", w == 0.5, {{"weight", w}, {"expected", 0.5}}});
  std::mt19937_64 rng(seed);
  std::size_t complete = 0;
  Json failures = Json::array();
  for (std::size_t t = 0; t < structures; ++t) {
    const auto m = random_cloud(rng, 2 + t % 3);
    const auto r = check_atomic_completeness(builtin("fghk", m.signature()), m);
    if (r.complete) ++complete;
    else failures.push_back({{"structure", t}, {"atomic", r.atomic}});
  }
  out.push_back({"fghk atomic completeness", complete == structures,
                 {{"structures", structures}, {"complete", complete}, {"failures", failures}}});
  return out;
}

}  // namespace aiso
