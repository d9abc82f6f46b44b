#pragma once

// Fixtures, random generators and brute-force oracles shared by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "aiso/distsys.hpp"
#include "aiso/formula.hpp"
#include "aiso/mstruct.hpp"

namespace test {

using namespace aiso;

inline StructurePtr share(MetricStructure m) { return std::make_shared<const MetricStructure>(std::move(m)); }

inline MetricStructure space(const std::vector<std::vector<double>>& d, double diam = 0.0,
                             const std::string& sort = "S") {
  Sort s;
  s.name = sort;
  for (std::size_t i = 0; i < d.size(); ++i) s.points.push_back("p" + std::to_string(i));
  s.metric = d;
  double top = 0.0;
  for (const auto& r : d)
    for (double v : r) top = std::max(top, v);
  s.diameter_bound = diam > 0 ? diam : std::max(top, 1.0);
  MetricStructure m;
  m.sorts.push_back(s);
  return m;
}

inline MetricStructure two_point(double a, double diam = 4.0) { return space({{0, a}, {a, 0}}, diam); }
inline MetricStructure one_point(double diam = 4.0) { return space({{0}}, diam); }

// Random planar point cloud rescaled into diameter <= 2, with an optional
// unary 1/2-Lipschitz [0,1]-valued U built as a McShane extension.
inline MetricStructure random_structure(std::mt19937_64& rng, std::size_t n, bool with_u = true,
                                        double diam = 2.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      d[i][j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
  auto m = space(d, diam);
  if (with_u) {
    Predicate p;
    p.name = "U";
    p.arity = 1;
    p.arg_sorts = {"S"};
    p.range_lo = 0.0;
    p.range_hi = 1.0;
    p.lipschitz = {0.5};
    const double c = u(rng);
    for (std::size_t i = 0; i < n; ++i) p.values.push_back(std::clamp(c + 0.5 * d[i][0], 0.0, 1.0));
    m.predicates.push_back(p);
  }
  return m;
}

// Calls f on every total surjective relation between single-sort structures
// of sizes a and b, in increasing bitmask order.
inline void for_each_correlation(StructurePtr l, StructurePtr r,
                                 const std::function<void(const Correlation&)>& f) {
  const std::size_t a = l->sorts[0].size(), b = r->sorts[0].size(), cells = a * b;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << cells); ++mask) {
    Correlation c = Correlation::empty(l, r);
    for (std::size_t k = 0; k < cells; ++k)
      if (mask >> k & 1) c.relation[0].set(k / b, k % b);
    if (is_correlation(c).ok) f(c);
  }
}

// Distortion straight from the definition, through the tree evaluator.
inline double brute_distortion(const DistortionSystem& sys, const Correlation& c) {
  double best = 0.0;
  for (const auto& g : sys.generators) {
    std::vector<std::pair<std::size_t, std::string>> vars(g->free.begin(), g->free.end());
    std::function<void(std::size_t, Assignment&, Assignment&)> rec = [&](std::size_t i, Assignment& am,
                                                                          Assignment& an) {
      if (i == vars.size()) {
        best = std::max(best, std::abs(evaluate(g, *c.left, am) - evaluate(g, *c.right, an)));
        return;
      }
      const auto s = *c.left->find_sort(vars[i].second);
      const auto& bm = c.relation[s];
      for (std::size_t x = 0; x < bm.rows(); ++x)
        for (std::size_t y = 0; y < bm.cols(); ++y)
          if (bm(x, y)) {
            am[vars[i].first] = {s, x};
            an[vars[i].first] = {s, y};
            rec(i + 1, am, an);
          }
    };
    Assignment am, an;
    rec(0, am, an);
  }
  return best;
}

inline double brute_rho(const DistortionSystem& sys, StructurePtr l, StructurePtr r) {
  double best = std::numeric_limits<double>::infinity();
  for_each_correlation(l, r, [&](const Correlation& c) { best = std::min(best, brute_distortion(sys, c)); });
  return best;
}

// Random formula over the signature of random_structure: sort S, optional U.
class FormulaGen {
 public:
  FormulaGen(const Signature& sig, std::mt19937_64& rng) : sig_(sig), rng_(rng) {}

  // Free variables are drawn from x0..x{nvars-1}; bound variables from x10 up.
  Formula operator()(std::size_t depth, std::size_t nvars = 3) {
    std::vector<std::size_t> vars(nvars);
    for (std::size_t i = 0; i < nvars; ++i) vars[i] = i;
    fresh_ = 10;
    return gen(depth, vars);
  }

 private:
  Formula gen(std::size_t depth, const std::vector<std::size_t>& vars) {
    std::uniform_int_distribution<int> pick(0, depth == 0 ? 2 : 12);
    std::uniform_int_distribution<std::size_t> vi(0, vars.size() - 1);
    auto var = [&] { return vars[vi(rng_)]; };
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    auto sub = [&] { return gen(depth - 1, vars); };
    const bool has_u = sig_.find_predicate("U") != nullptr;
    switch (pick(rng_)) {
      case 0: return fm::constant(u(rng_));
      case 1: return fm::dist(sig_, "S", var(), var());
      case 2: return has_u ? fm::pred(sig_, "U", {var()}) : fm::dist(sig_, "S", var(), var());
      case 3: return fm::neg(sub());
      case 4: return fm::scale(u(rng_), sub());
      case 5: return fm::add(sub(), sub());
      case 6: return fm::max(sub(), sub());
      case 7: return fm::min(sub(), sub());
      case 8: return fm::absdiff(sub(), sub());
      case 9: {
        const double a = u(rng_), b = u(rng_);
        return fm::clamp(sub(), std::min(a, b), std::max(a, b));
      }
      case 10: {
        const double a = u(rng_), b = u(rng_);
        return fm::cliplog(sub(), std::min(a, b), std::max(a, b));
      }
      default: {
        const std::size_t y = fresh_++;
        auto inner = vars;
        inner.push_back(y);
        auto body = fm::max(gen(depth - 1, inner), fm::dist(sig_, "S", y, var()));
        return pick(rng_) % 2 ? fm::sup(y, "S", body) : fm::inf(y, "S", body);
      }
    }
  }

  Signature sig_;
  std::mt19937_64& rng_;
  std::size_t fresh_ = 10;
};

}  // namespace test
