#pragma once

// Interval structures J(D, eps) with U(x) = x and d(x, y) = max(|x - y|, eps),
// their disjoint unions, and the finite checks on the IU system.

#include <cstddef>
#include <vector>

#include "aiso/corrsearch.hpp"
#include "aiso/distsys.hpp"
#include "aiso/mstruct.hpp"

namespace aiso {

// D is sorted and deduplicated. Throws InputError on an empty D, values
// outside [0, 1], or eps outside [0, 1].
MetricStructure make_J(std::vector<double> d, double eps);

// {j / 2^g : 0 <= j <= 2^g}.
std::vector<double> dyadic_grid(unsigned g = 4);

struct IrregCheck {
  bool holds = true;
  bool u_match = true;   // U^M(a) = U^N(b) on every related pair
  bool divergent = false;
  double dis_gh = 0.0;
  double dis_iu = 0.0;
  double max_gap = 0.0;  // largest |U^M(a) - U^N(b)| over related pairs
};

// With matched U the IU and GH distortions must agree (so dis_IU <= eps iff
// dis_GH <= eps); with a mismatch dis_IU must reach n_max times the gap.
IrregCheck check_irreg_characterization(const Correlation& r, double eps_bound,
                                        std::size_t n_max = 16);

// Components J(D, eps_i) laid side by side in one sort, cross distances 1.
MetricStructure disjoint_union(const std::vector<double>& d, const std::vector<double>& eps);

struct DemoRow {
  std::size_t k = 0;
  double dis = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool ok = false;
};

struct DemoReport {
  std::vector<DemoRow> rows;
  std::size_t components = 0;
  std::size_t n_max = 0;
  unsigned grid = 4;
  bool ok = true;
};

// M = J(D,1) + J(D,1/2) + ... (k_max + 2 components), N = J(D,0) + the first
// k_max + 1 of those; R_k shifts components k.. of M down by one.
DemoReport disjoint_union_demo(std::size_t k_max = 3, unsigned g = 4, std::size_t n_max = 16);

// The shifting correlation R_k between the demo structures.
Correlation shifting_correlation(StructurePtr m, StructurePtr n, std::size_t points_per_component,
                                 std::size_t components, std::size_t k);

// Pairs x in J(D, eps) with x in J(D, 0).
Correlation diagonal(StructurePtr a, StructurePtr b);

struct TrendPoint {
  std::size_t n_max = 0;
  double rho = 0.0;
  double bound = 0.0;  // n_max * min gap between D0 and D1
};

// rho_IU between J(D0, eps) and J(D1, eps) for each n_max.
std::vector<TrendPoint> divergence_trend(const std::vector<double>& d0, const std::vector<double>& d1,
                                         double eps, const std::vector<std::size_t>& n_values);

}  // namespace aiso
