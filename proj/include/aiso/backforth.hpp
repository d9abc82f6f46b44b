#pragma once

// Back-and-forth pseudo-metrics r_alpha on finite structures, with a depth cap
// on tuple length, and the capped Scott rank.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "aiso/distsys.hpp"
#include "aiso/formula.hpp"
#include "aiso/mstruct.hpp"

namespace aiso {

// Points of a structure numbered globally: sort by sort, in order.
std::vector<PointRef> global_points(const MetricStructure& s);

// sup over Omega-respecting generator instances of |psi^M(m) - psi^N(n)|.
// Generator variable x_j binds tuple positions p >= j, in increasing order.
double r0(const DistortionSystem& sys, const WeakModulus& omega, const MetricStructure& m,
          const std::vector<PointRef>& mbar, const MetricStructure& n,
          const std::vector<PointRef>& nbar);

// r_rounds on the empty tuples, bottoming out in r0 on tuples of length rounds.
// Throws InputError when rounds exceeds depth_cap.
double r_finite(const DistortionSystem& sys, const WeakModulus& omega, const MetricStructure& m,
                const MetricStructure& n, std::size_t rounds, std::size_t depth_cap = 4);

struct BafTable {
  std::size_t k = 0;
  WeakModulus omega;
  std::map<std::string, double> truncation;
  std::size_t stabilization = 0;  // least alpha with r_alpha = r_{alpha+1}
  std::size_t left_points = 0;
  std::size_t right_points = 0;
  // levels[alpha][len][code]; code packs the pairs (m_i, n_i) base left*right,
  // first pair most significant. Sort-inconsistent codes hold NaN.
  std::vector<std::vector<std::vector<double>>> levels;

  double value(std::size_t alpha, const std::vector<std::size_t>& mbar,
               const std::vector<std::size_t>& nbar) const;
  double empty_value() const { return levels.back()[0][0]; }
  std::size_t code(const std::vector<std::size_t>& mbar, const std::vector<std::size_t>& nbar) const;
  void decode(std::size_t len, std::size_t code, std::vector<std::size_t>& mbar,
              std::vector<std::size_t>& nbar) const;
};

// Iterates the successor operator on all tuple pairs of length <= k, holding
// length-k pairs at r0, until an exact fixed point.
BafTable r_infty_capped(const DistortionSystem& sys, const WeakModulus& omega,
                        const MetricStructure& m, const MetricStructure& n, std::size_t k);

std::size_t scott_rank_capped(const BafTable& t);

}  // namespace aiso
