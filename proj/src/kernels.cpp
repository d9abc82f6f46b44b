#include "aiso/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aiso::kern {

namespace {
int g_threads = 0;

struct Item {
  double value = -1.0;
  PairList tuple;
};

// Scans all tuples of generator g whose first position is fixed to pairs[s0][first].
void scan(const Table& tl, const Table& tr, const std::vector<PairList>& pairs, std::size_t first,
          Item& out) {
  const std::size_t a = tl.arity();
  if (a == 0) {
    out.value = std::abs(tl.values[0] - tr.values[0]);
    return;
  }
  std::vector<const PairList*> lists(a);
  for (std::size_t i = 0; i < a; ++i) lists[i] = &pairs[tl.sorts[i]];
  for (std::size_t i = 1; i < a; ++i)
    if (lists[i]->empty()) return;
  std::vector<std::size_t> pos(a, 0);
  pos[0] = first;
  while (true) {
    std::size_t il = 0, ir = 0;
    for (std::size_t i = 0; i < a; ++i) {
      const auto& p = (*lists[i])[pos[i]];
      il += p.first * tl.strides[i];
      ir += p.second * tr.strides[i];
    }
    const double v = std::abs(tl.values[il] - tr.values[ir]);
    if (v > out.value) {
      out.value = v;
      out.tuple.resize(a);
      for (std::size_t i = 0; i < a; ++i) out.tuple[i] = (*lists[i])[pos[i]];
    }
    bool done = true;
    for (std::size_t k = a; k-- > 1;) {
      if (++pos[k] < lists[k]->size()) {
        done = false;
        break;
      }
      pos[k] = 0;
    }
    if (done) return;
  }
}

}  // namespace

void set_threads(int n) {
  g_threads = n;
#ifdef _OPENMP
  if (n > 0)
    omp_set_num_threads(n);
  else
    omp_set_num_threads(omp_get_num_procs());
#endif
}

int threads() {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

Table tabulate(const Formula& f, const MetricStructure& s, Exec exec) {
  Table t;
  for (const auto& [idx, sort] : f->free) {
    auto si = s.find_sort(sort);
    if (!si) throw InputError("structure has no sort '" + sort + "'");
    t.vars.push_back(idx);
    t.sorts.push_back(*si);
    t.dims.push_back(s.sorts[*si].size());
  }
  const std::size_t a = t.vars.size();
  t.strides.assign(a, 1);
  for (std::size_t i = a; i-- > 1;) t.strides[i - 1] = t.strides[i] * t.dims[i];
  std::size_t cells = 1;
  for (auto d : t.dims) cells *= d;
  t.values.assign(cells, 0.0);
  const BoundFormula bf(f, s);
  auto one = [&](std::size_t idx, std::vector<std::size_t>& env) {
    for (std::size_t i = 0; i < a; ++i) env[t.vars[i]] = (idx / t.strides[i]) % t.dims[i];
    t.values[idx] = bf(env);
  };
  if (exec == Exec::Serial || cells < 64) {
    std::vector<std::size_t> env(bf.env_size(), 0);
    for (std::size_t i = 0; i < cells; ++i) one(i, env);
  } else {
#pragma omp parallel
    {
      std::vector<std::size_t> env(bf.env_size(), 0);
#pragma omp for schedule(static)
      for (long long i = 0; i < static_cast<long long>(cells); ++i)
        one(static_cast<std::size_t>(i), env);
    }
  }
  return t;
}

SupResult distortion(const std::vector<Table>& left, const std::vector<Table>& right,
                     const std::vector<PairList>& pairs, Exec exec) {
  // Work items: (generator, index into the first variable's pair list).
  std::vector<std::pair<std::size_t, std::size_t>> items;
  for (std::size_t g = 0; g < left.size(); ++g) {
    if (left[g].arity() == 0) {
      items.emplace_back(g, 0);
      continue;
    }
    const auto& first = pairs[left[g].sorts[0]];
    for (std::size_t j = 0; j < first.size(); ++j) items.emplace_back(g, j);
  }
  std::vector<Item> results(items.size());
  auto run = [&](std::size_t i) {
    scan(left[items[i].first], right[items[i].first], pairs, items[i].second, results[i]);
  };
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < items.size(); ++i) run(i);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < static_cast<long long>(items.size()); ++i)
      run(static_cast<std::size_t>(i));
  }
  SupResult best;
  double bv = -1.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (results[i].value > bv) {
      bv = results[i].value;
      best.value = bv;
      best.generator = items[i].first;
      best.tuple = results[i].tuple;
    }
  }
  return best;
}

}  // namespace aiso::kern
