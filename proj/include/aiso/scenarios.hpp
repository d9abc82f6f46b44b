#pragma once

// End-to-end scenarios shared by the `demo` command and the acceptance suite.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "aiso/io.hpp"
#include "aiso/mstruct.hpp"

namespace aiso {

struct ScenarioLine {
  std::string check;
  bool ok = true;
  Json record;
};

// Linear maps with both operator norms <= sqrt(e^eps) on sampled l1/l2/linf
// planes; each line compares dis_BM with eps + L * residual.
std::vector<ScenarioLine> bm_backward_scenario(const std::vector<double>& eps = {0.1, 0.2, 0.4});

// Small embounded spaces: no correlation with dis_BM <= eps relates zero or
// infinity to anything else, or samples whose norms are too far apart.
std::vector<ScenarioLine> bm_forward_scenario(const std::vector<double>& eps = {0.1, 0.2, 0.4});

// R_k rows, the diagonal J(D,eps) -> J(D,0) check, and the n_max trend.
std::vector<ScenarioLine> iu_scenario(std::size_t k_max = 3, unsigned grid = 4);

// fghk weight of a [0,1]-valued predicate and atomic completeness on random
// structures.
std::vector<ScenarioLine> fghk_scenario(std::size_t structures = 20, std::uint64_t seed = 1);

// Planar point cloud with a unary 1/2-Lipschitz U and a binary 1-Lipschitz Q.
MetricStructure random_cloud(std::mt19937_64& rng, std::size_t n, bool with_predicates = true);

}  // namespace aiso
