#pragma once

// rho_Delta by exact branch-and-bound over correlations, a local-search upper
// bound, pointed (anchored) search, and the stratified-language distance.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aiso/distsys.hpp"
#include "aiso/kernels.hpp"
#include "aiso/mstruct.hpp"

namespace aiso {

class SizeGuardError : public InputError {
 public:
  using InputError::InputError;
};

struct SearchOptions {
  std::size_t max_cells = 36;  // per sort
  bool force = false;          // ignore max_cells
  std::vector<AnchorPair> anchors;
  std::vector<AnchorPair> forbidden;
  // Only correlations with distortion <= cutoff are accepted.
  std::optional<double> cutoff;
  bool first_feasible = false;  // with cutoff: stop at the first accepted correlation
  bool seed_incumbent = true;   // start from the local-search result
  std::uint64_t seed = 1;
  std::size_t budget = 400;  // local-search evaluations
};

struct SearchResult {
  double value = 0.0;
  std::optional<Correlation> witness;  // empty only when nothing met the cutoff
  std::size_t nodes = 0;
  bool exact = false;
  std::map<std::string, double> truncation;
};

// Precomputed generator tables for one (system, M, N) instance.
class DistortionEvaluator {
 public:
  DistortionEvaluator(const DistortionSystem& sys, StructurePtr left, StructurePtr right);

  double distortion(const Correlation& c) const;

  const std::vector<kern::Table>& left_tables() const { return tl_; }
  const std::vector<kern::Table>& right_tables() const { return tr_; }
  const StructurePtr& left() const { return left_; }
  const StructurePtr& right() const { return right_; }

 private:
  StructurePtr left_, right_;
  std::vector<kern::Table> tl_, tr_;
};

SearchResult rho_exact(const DistortionSystem& sys, StructurePtr m, StructurePtr n,
                       const SearchOptions& opts = {});

SearchResult rho_heuristic(const DistortionSystem& sys, StructurePtr m, StructurePtr n,
                           std::size_t budget, std::uint64_t seed = 1,
                           const std::vector<AnchorPair>& anchors = {});

// Anchors the i-th entries of the two tuples together. Throws InputError when
// the tuples differ in length or sort.
SearchResult rho_pointed(const DistortionSystem& sys, StructurePtr m,
                         const std::vector<PointRef>& mbar, StructurePtr n,
                         const std::vector<PointRef>& nbar, SearchOptions opts = {});

// 2^-i for the largest i with isomorphic reducts to levels[0..i]; 0 when the
// reducts agree at every level and 2 when they already differ at level 0.
double rho_stratified(const std::vector<Signature>& levels, const MetricStructure& m,
                      const MetricStructure& n);

// Isomorphism of the reducts to the given signature (desk-scale backtracking).
bool reducts_isomorphic(const Signature& level, const MetricStructure& m,
                        const MetricStructure& n);

}  // namespace aiso
