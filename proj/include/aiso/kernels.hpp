#pragma once

// Dense numeric kernels shared by distsys, corrsearch and backforth. Every
// kernel has a serial reference and an OpenMP version; both return the same
// value and the same witness for any thread count.

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "aiso/formula.hpp"
#include "aiso/mstruct.hpp"

namespace aiso::kern {

enum class Exec { Serial, Parallel };

// Sets the OpenMP team size; 0 restores the runtime default.
void set_threads(int n);
int threads();

// Values of a formula on every assignment of its free variables, taken in
// increasing variable-index order; the last variable varies fastest.
struct Table {
  std::vector<std::size_t> vars;   // free variable indices, ascending
  std::vector<std::size_t> sorts;  // sort index of each variable
  std::vector<std::size_t> dims;
  std::vector<std::size_t> strides;
  std::vector<double> values;

  std::size_t arity() const { return vars.size(); }
};

Table tabulate(const Formula& f, const MetricStructure& s, Exec exec = Exec::Parallel);

using PairList = std::vector<std::pair<std::size_t, std::size_t>>;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct SupResult {
  double value = 0.0;
  std::size_t generator = npos;  // npos when no tuple was examined
  PairList tuple;                // (left point, right point) per variable
};

// sup over generators g and related tuples of |g^M - g^N|. The witness is the
// first maximizer in (generator, tuple) lexicographic order.
SupResult distortion(const std::vector<Table>& left, const std::vector<Table>& right,
                     const std::vector<PairList>& pairs, Exec exec = Exec::Parallel);

// Parallel map over an index range with a per-index result; used for the
// level sweeps of the back-and-forth tables.
template <class F>
void parallel_for(std::size_t n, F&& f, Exec exec = Exec::Parallel) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < static_cast<long long>(n); ++i) f(static_cast<std::size_t>(i));
}

}  // namespace aiso::kern
