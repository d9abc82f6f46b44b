#include "aiso/pathology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace aiso {

namespace {

std::string label(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

Predicate unary_u(const std::vector<double>& values) {
  Predicate u;
  u.name = "U";
  u.arity = 1;
  u.arg_sorts = {"J"};
  u.values = values;
  u.range_lo = 0.0;
  u.range_hi = 1.0;
  u.lipschitz = {1.0};
  return u;
}

std::vector<double> normalize(std::vector<double> d) {
  if (d.empty()) throw InputError("D must be nonempty");
  for (double x : d)
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("D must lie in [0, 1]");
  std::sort(d.begin(), d.end());
  d.erase(std::unique(d.begin(), d.end()), d.end());
  return d;
}

}  // namespace

MetricStructure make_J(std::vector<double> d, double eps) {
  return disjoint_union(d, {eps});
}

std::vector<double> dyadic_grid(unsigned g) {
  const double den = std::ldexp(1.0, static_cast<int>(g));
  std::vector<double> out;
  for (double j = 0; j <= den; ++j) out.push_back(j / den);
  return out;
}

MetricStructure disjoint_union(const std::vector<double>& d_in, const std::vector<double>& eps) {
  const auto d = normalize(d_in);
  if (eps.empty()) throw InputError("at least one component is needed");
  for (double e : eps)
    if (!(e >= 0.0 && e <= 1.0)) throw InputError("eps must lie in [0, 1]");
  const std::size_t p = d.size(), n = p * eps.size();
  Sort s;
  s.name = "J";
  s.diameter_bound = 1.0;
  s.metric.assign(n, std::vector<double>(n, 1.0));
  std::vector<double> u;
  for (std::size_t c = 0; c < eps.size(); ++c)
    for (std::size_t i = 0; i < p; ++i) {
      s.points.push_back(eps.size() == 1 ? label(d[i]) : label(d[i]) + "@" + std::to_string(c));
      u.push_back(d[i]);
      for (std::size_t j = 0; j < p; ++j)
        s.metric[c * p + i][c * p + j] = i == j ? 0.0 : std::max(std::abs(d[i] - d[j]), eps[c]);
    }
  MetricStructure m;
  m.sorts.push_back(std::move(s));
  m.predicates.push_back(unary_u(u));
  return m;
}

IrregCheck check_irreg_characterization(const Correlation& r, double eps_bound,
                                        std::size_t n_max) {
  IrregCheck out;
  const auto& m = *r.left;
  const auto& n = *r.right;
  const auto um = m.find_predicate("U"), un = n.find_predicate("U");
  if (!um || !un) throw InputError("both structures need the predicate U");
  const auto& rel = r.relation.at(0);
  for (std::size_t a = 0; a < rel.rows(); ++a)
    for (std::size_t b = 0; b < rel.cols(); ++b)
      if (rel(a, b)) {
        const double gap = std::abs(m.predicates[*um].values[a] - n.predicates[*un].values[b]);
        out.max_gap = std::max(out.max_gap, gap);
      }
  out.u_match = out.max_gap == 0.0;
  const auto sig = m.signature();
  out.dis_gh = distortion(builtin("gh", sig), r).value;
  out.dis_iu = distortion(builtin("iu", sig, {{"n_max", static_cast<double>(n_max)}}), r).value;
  if (out.u_match) {
    out.holds = (out.dis_iu <= eps_bound + kTol) == (out.dis_gh <= eps_bound + kTol) &&
                std::abs(out.dis_iu - out.dis_gh) <= kTol;
  } else {
    out.divergent = out.dis_iu + kTol >= static_cast<double>(n_max) * out.max_gap;
    out.holds = out.divergent;
  }
  return out;
}

Correlation shifting_correlation(StructurePtr m, StructurePtr n, std::size_t p,
                                 std::size_t comps, std::size_t k) {
  if (k + 2 > comps) throw InputError("k too large for the number of components");
  Correlation c = Correlation::empty(m, n);
  auto& rel = c.relation.at(0);
  // N component 0 is J(D,0); N component j + 1 is M component j.
  auto link = [&](std::size_t mc, std::size_t nc) {
    for (std::size_t i = 0; i < p; ++i) rel.set(mc * p + i, nc * p + i);
  };
  for (std::size_t i = 0; i < k; ++i) link(i, i + 1);
  link(k, 0);
  for (std::size_t i = k; i + 2 <= comps; ++i) link(i + 1, i + 1);
  return c;
}

Correlation diagonal(StructurePtr a, StructurePtr b) {
  Correlation c = Correlation::empty(a, b);
  const std::size_t n = a->sorts.at(0).size();
  if (b->sorts.at(0).size() != n) throw InputError("diagonal needs equal point sets");
  for (std::size_t i = 0; i < n; ++i) c.relation[0].set(i, i);
  return c;
}

DemoReport disjoint_union_demo(std::size_t k_max, unsigned g, std::size_t n_max) {
  DemoReport rep;
  rep.grid = g;
  rep.n_max = n_max;
  const auto d = dyadic_grid(g);
  const std::size_t comps = k_max + 2;
  rep.components = comps;
  std::vector<double> em, en{0.0};
  for (std::size_t i = 0; i < comps; ++i) em.push_back(std::ldexp(1.0, -static_cast<int>(i)));
  for (std::size_t i = 0; i + 1 < comps; ++i) en.push_back(em[i]);
  auto m = std::make_shared<const MetricStructure>(disjoint_union(d, em));
  auto n = std::make_shared<const MetricStructure>(disjoint_union(d, en));
  const auto sys = builtin("iu", m->signature(), {{"n_max", static_cast<double>(n_max)}});
  const double slack = std::ldexp(1.0, -static_cast<int>(g) - 1);
  for (std::size_t k = 0; k <= k_max; ++k) {
    DemoRow row;
    row.k = k;
    row.dis = distortion(sys, shifting_correlation(m, n, d.size(), comps, k)).value;
    row.bound = std::ldexp(1.0, -static_cast<int>(k) - 1);
    row.slack = slack;
    row.ok = row.dis <= row.bound + row.slack + kTol;
    rep.ok = rep.ok && row.ok;
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<TrendPoint> divergence_trend(const std::vector<double>& d0, const std::vector<double>& d1,
                                         double eps, const std::vector<std::size_t>& n_values) {
  auto a = std::make_shared<const MetricStructure>(make_J(d0, eps));
  auto b = std::make_shared<const MetricStructure>(make_J(d1, eps));
  double gap = std::numeric_limits<double>::infinity();
  for (double x : d0)
    for (double y : d1) gap = std::min(gap, std::abs(x - y));
  std::vector<TrendPoint> out;
  for (auto nm : n_values) {
    const auto sys = builtin("iu", a->signature(), {{"n_max", static_cast<double>(nm)}});
    out.push_back({nm, rho_exact(sys, a, b).value, static_cast<double>(nm) * gap});
  }
  return out;
}

}  // namespace aiso
