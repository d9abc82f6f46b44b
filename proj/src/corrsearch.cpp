#include "aiso/corrsearch.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace aiso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Cell {
  std::size_t sort, l, r;
};

void check_compatible(const MetricStructure& m, const MetricStructure& n) {
  if (m.sorts.size() != n.sorts.size())
    throw InputError("structures have different numbers of sorts");
  for (std::size_t s = 0; s < m.sorts.size(); ++s)
    if (m.sorts[s].name != n.sorts[s].name)
      throw InputError("sort " + std::to_string(s) + " is '" + m.sorts[s].name + "' vs '" +
                       n.sorts[s].name + "'");
}

void check_pairs(const std::vector<AnchorPair>& ps, const MetricStructure& m,
                 const MetricStructure& n, const char* what) {
  for (const auto& a : ps)
    if (a.sort >= m.sorts.size() || a.left >= m.sorts[a.sort].size() ||
        a.right >= n.sorts[a.sort].size())
      throw InputError(std::string(what) + " pair out of range");
}

// Cell layout shared by the exact search and the local search: sorts in
// order, each sort's matrix row-major.
struct Layout {
  std::vector<Cell> cells;
  std::vector<std::size_t> offset;  // first cell of each sort
  std::vector<std::size_t> rows, cols;

  Layout(const MetricStructure& m, const MetricStructure& n) {
    for (std::size_t s = 0; s < m.sorts.size(); ++s) {
      offset.push_back(cells.size());
      rows.push_back(m.sorts[s].size());
      cols.push_back(n.sorts[s].size());
      for (std::size_t l = 0; l < rows[s]; ++l)
        for (std::size_t r = 0; r < cols[s]; ++r) cells.push_back({s, l, r});
    }
  }
  std::size_t id(std::size_t s, std::size_t l, std::size_t r) const {
    return offset[s] + l * cols[s] + r;
  }
  std::size_t size() const { return cells.size(); }

  Correlation to_correlation(const std::vector<signed char>& bits, StructurePtr m,
                             StructurePtr n, const std::vector<AnchorPair>& anchors) const {
    Correlation c = Correlation::empty(std::move(m), std::move(n));
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (bits[i] == 1) c.relation[cells[i].sort].set(cells[i].l, cells[i].r);
    c.anchors = anchors;
    return c;
  }

  std::vector<kern::PairList> pairs(const std::vector<signed char>& bits) const {
    std::vector<kern::PairList> p(offset.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
      if (bits[i] == 1) p[cells[i].sort].emplace_back(cells[i].l, cells[i].r);
    return p;
  }

  bool valid(const std::vector<signed char>& bits) const {
    for (std::size_t s = 0; s < offset.size(); ++s) {
      for (std::size_t l = 0; l < rows[s]; ++l) {
        bool any = false;
        for (std::size_t r = 0; r < cols[s] && !any; ++r) any = bits[id(s, l, r)] == 1;
        if (!any) return false;
      }
      for (std::size_t r = 0; r < cols[s]; ++r) {
        bool any = false;
        for (std::size_t l = 0; l < rows[s] && !any; ++l) any = bits[id(s, l, r)] == 1;
        if (!any) return false;
      }
    }
    return true;
  }
};

// Local search over valid correlations; returns the best bit vector found.
struct LocalSearch {
  const Layout& lay;
  const DistortionEvaluator& ev;
  std::vector<signed char> fixed;  // 1 anchored, -1 forbidden, 0 free
  std::mt19937_64 rng;
  std::size_t evals = 0;

  double eval(const std::vector<signed char>& bits) {
    ++evals;
    return kern::distortion(ev.left_tables(), ev.right_tables(), lay.pairs(bits),
                            kern::Exec::Serial)
        .value;
  }

  bool repair(std::vector<signed char>& bits) {
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (fixed[i]) bits[i] = fixed[i] == 1 ? 1 : 0;
    for (std::size_t s = 0; s < lay.offset.size(); ++s) {
      auto fix_line = [&](bool by_row, std::size_t k) {
        const std::size_t other = by_row ? lay.cols[s] : lay.rows[s];
        std::vector<std::size_t> allowed;
        for (std::size_t j = 0; j < other; ++j) {
          const std::size_t c = by_row ? lay.id(s, k, j) : lay.id(s, j, k);
          if (bits[c] == 1) return true;
          if (fixed[c] != -1) allowed.push_back(c);
        }
        if (allowed.empty()) return false;
        bits[allowed[rng() % allowed.size()]] = 1;
        return true;
      };
      for (std::size_t l = 0; l < lay.rows[s]; ++l)
        if (!fix_line(true, l)) return false;
      for (std::size_t r = 0; r < lay.cols[s]; ++r)
        if (!fix_line(false, r)) return false;
    }
    return true;
  }

  std::vector<signed char> diagonal() {
    std::vector<signed char> bits(lay.size(), 0);
    for (std::size_t s = 0; s < lay.offset.size(); ++s) {
      const std::size_t m = lay.rows[s], n = lay.cols[s];
      for (std::size_t i = 0; i < m; ++i) bits[lay.id(s, i, i * n / m)] = 1;
      for (std::size_t j = 0; j < n; ++j) bits[lay.id(s, j * m / n, j)] = 1;
    }
    return bits;
  }

  std::optional<std::pair<double, std::vector<signed char>>> run(std::size_t budget) {
    std::optional<std::pair<double, std::vector<signed char>>> best;
    auto offer = [&](double v, const std::vector<signed char>& b) {
      if (!best || v < best->first || (v == best->first && b < best->second)) best = {v, b};
    };
    std::vector<std::vector<signed char>> starts;
    starts.push_back(diagonal());
    starts.emplace_back(lay.size(), 1);
    const std::size_t restarts = 3;
    for (std::size_t k = 0; k < restarts; ++k) starts.emplace_back(lay.size(), 0);
    const std::size_t per = std::max<std::size_t>(1, budget / starts.size());
    std::vector<std::size_t> free_cells;
    for (std::size_t i = 0; i < lay.size(); ++i)
      if (!fixed[i]) free_cells.push_back(i);
    for (auto& bits : starts) {
      if (!repair(bits)) return std::nullopt;
      double cur = eval(bits);
      offer(cur, bits);
      for (std::size_t it = 0; it < per && !free_cells.empty(); ++it) {
        const std::size_t c = free_cells[rng() % free_cells.size()];
        bits[c] = bits[c] == 1 ? 0 : 1;
        if (!lay.valid(bits)) {
          bits[c] = bits[c] == 1 ? 0 : 1;
          continue;
        }
        const double v = eval(bits);
        if (v <= cur) {
          cur = v;
          offer(cur, bits);
        } else {
          bits[c] = bits[c] == 1 ? 0 : 1;
        }
      }
    }
    // Greedy thinning of the best relation.
    auto bits = best->second;
    double cur = best->first;
    for (std::size_t c : free_cells) {
      if (bits[c] != 1) continue;
      bits[c] = 0;
      if (lay.valid(bits)) {
        const double v = eval(bits);
        if (v <= cur) {
          cur = v;
          offer(cur, bits);
          continue;
        }
      }
      bits[c] = 1;
    }
    return best;
  }
};

std::vector<signed char> fixed_cells(const Layout& lay, const SearchOptions& o) {
  std::vector<signed char> f(lay.size(), 0);
  for (const auto& a : o.forbidden) f[lay.id(a.sort, a.left, a.right)] = -1;
  for (const auto& a : o.anchors) {
    auto& x = f[lay.id(a.sort, a.left, a.right)];
    if (x == -1) throw InputError("a pair is both anchored and forbidden");
    x = 1;
  }
  return f;
}

class BranchAndBound {
 public:
  BranchAndBound(const Layout& lay, const DistortionEvaluator& ev, std::vector<signed char> fixed)
      : lay_(lay), ev_(ev), fixed_(std::move(fixed)) {
    const std::size_t C = lay_.size();
    const auto& tl = ev_.left_tables();
    const auto& tr = ev_.right_tables();
    // Pair costs: the largest discrepancy over tuples drawn from {c1, c2}.
    pair_.assign(C * C, 0.0);
    kern::parallel_for(C, [&](std::size_t i) {
      for (std::size_t j = i; j < C; ++j) {
        double best = 0.0;
        const Cell a = lay_.cells[i], b = lay_.cells[j];
        for (std::size_t g = 0; g < tl.size(); ++g) {
          const auto& t = tl[g];
          const std::size_t ar = t.arity();
          bool ok = true;
          std::vector<std::vector<const Cell*>> options(ar);
          for (std::size_t p = 0; p < ar; ++p) {
            if (t.sorts[p] == a.sort) options[p].push_back(&a);
            if (t.sorts[p] == b.sort && j != i) options[p].push_back(&b);
            if (options[p].empty()) ok = false;
          }
          if (!ok || ar == 0) continue;
          std::vector<std::size_t> idx(ar, 0);
          while (true) {
            std::size_t il = 0, ir = 0;
            for (std::size_t p = 0; p < ar; ++p) {
              il += options[p][idx[p]]->l * t.strides[p];
              ir += options[p][idx[p]]->r * tr[g].strides[p];
            }
            best = std::max(best, std::abs(t.values[il] - tr[g].values[ir]));
            std::size_t k = ar;
            bool done = true;
            while (k-- > 0) {
              if (++idx[k] < options[k].size()) {
                done = false;
                break;
              }
              idx[k] = 0;
            }
            if (done) break;
          }
        }
        pair_[i * C + j] = pair_[j * C + i] = best;
      }
    });
    base_ = 0.0;
    for (std::size_t g = 0; g < tl.size(); ++g)
      if (tl[g].arity() == 0) base_ = std::max(base_, std::abs(tl[g].values[0] - tr[g].values[0]));
  }

  void set_incumbent(double v, std::vector<signed char> bits) {
    best_ = v;
    inc_ = std::move(bits);
    have_inc_ = true;
  }
  void set_bound(double v) { best_ = v; }
  void set_first_feasible(bool f) { first_ = f; }

  void run() {
    const std::size_t C = lay_.size();
    bits_.assign(C, -1);  // -1 undecided
    R_.assign(lay_.offset.size(), {});
    row_cov_.assign(C, 0);
    col_cov_.assign(C, 0);
    est_.assign(C, 0.0);
    for (std::size_t i = 0; i < C; ++i) est_[i] = std::max(base_, pair_[i * C + i]);
    cur_ = base_;
    for (std::size_t i = 0; i < C; ++i)
      if (fixed_[i] == -1) bits_[i] = 0;
    for (std::size_t i = 0; i < C; ++i)
      if (fixed_[i] == 1) include(i);
    dfs(0);
  }

  std::size_t nodes() const { return nodes_; }
  bool have_incumbent() const { return have_inc_; }
  double best() const { return best_; }
  const std::vector<signed char>& incumbent() const { return inc_; }

 private:
  std::size_t row_key(const Cell& c) const { return lay_.offset[c.sort] + c.l; }
  std::size_t col_key(const Cell& c) const { return lay_.offset[c.sort] + c.r; }

  // Largest discrepancy over tuples that use cell c at least once, the
  // other positions drawn from the current relation R ∪ {c}.
  double delta(std::size_t cid) const {
    const Cell& c = lay_.cells[cid];
    const auto& tl = ev_.left_tables();
    const auto& tr = ev_.right_tables();
    double best = 0.0;
    kern::PairList with = R_[c.sort];
    with.emplace_back(c.l, c.r);
    for (std::size_t g = 0; g < tl.size(); ++g) {
      const auto& t = tl[g];
      const std::size_t ar = t.arity();
      for (std::size_t p = 0; p < ar; ++p) {
        if (t.sorts[p] != c.sort) continue;
        // Positions before p use R, position p is c, positions after use R ∪ {c}.
        std::vector<const kern::PairList*> lists(ar);
        bool empty = false;
        for (std::size_t q = 0; q < ar; ++q) {
          if (q == p) continue;
          lists[q] = (q < p) ? &R_[t.sorts[q]] : (t.sorts[q] == c.sort ? &with : &R_[t.sorts[q]]);
          if (lists[q]->empty()) empty = true;
        }
        if (empty) continue;
        std::vector<std::size_t> idx(ar, 0);
        while (true) {
          std::size_t il = c.l * t.strides[p], ir = c.r * tr[g].strides[p];
          for (std::size_t q = 0; q < ar; ++q) {
            if (q == p) continue;
            const auto& pr = (*lists[q])[idx[q]];
            il += pr.first * t.strides[q];
            ir += pr.second * tr[g].strides[q];
          }
          best = std::max(best, std::abs(t.values[il] - tr[g].values[ir]));
          bool done = true;
          for (std::size_t k = ar; k-- > 0;) {
            if (k == p) continue;
            if (++idx[k] < lists[k]->size()) {
              done = false;
              break;
            }
            idx[k] = 0;
          }
          if (done) break;
        }
      }
    }
    return best;
  }

  struct Undo {
    double cur;
    std::vector<double> est;
  };

  Undo include(std::size_t cid) {
    Undo u{cur_, est_};
    const Cell& c = lay_.cells[cid];
    cur_ = std::max(cur_, delta(cid));
    bits_[cid] = 1;
    R_[c.sort].emplace_back(c.l, c.r);
    ++row_cov_[row_key(c)];
    ++col_cov_[col_key(c)];
    const std::size_t C = lay_.size();
    for (std::size_t i = 0; i < C; ++i) est_[i] = std::max(est_[i], pair_[i * C + cid]);
    return u;
  }

  void exclude_undo(std::size_t cid, Undo&& u) {
    const Cell& c = lay_.cells[cid];
    cur_ = u.cur;
    est_ = std::move(u.est);
    R_[c.sort].pop_back();
    --row_cov_[row_key(c)];
    --col_cov_[col_key(c)];
    bits_[cid] = -1;
  }

  // Lower bound on any completion; kInf when some row or column can no
  // longer be covered.
  double lower_bound() const {
    double lb = cur_;
    for (std::size_t s = 0; s < lay_.offset.size(); ++s) {
      for (std::size_t l = 0; l < lay_.rows[s]; ++l) {
        if (row_cov_[lay_.offset[s] + l]) continue;
        double m = kInf;
        for (std::size_t r = 0; r < lay_.cols[s]; ++r) {
          const std::size_t id = lay_.id(s, l, r);
          if (bits_[id] == -1) m = std::min(m, est_[id]);
        }
        lb = std::max(lb, m);
        if (lb == kInf) return kInf;
      }
      for (std::size_t r = 0; r < lay_.cols[s]; ++r) {
        if (col_cov_[lay_.offset[s] + r]) continue;
        double m = kInf;
        for (std::size_t l = 0; l < lay_.rows[s]; ++l) {
          const std::size_t id = lay_.id(s, l, r);
          if (bits_[id] == -1) m = std::min(m, est_[id]);
        }
        lb = std::max(lb, m);
        if (lb == kInf) return kInf;
      }
    }
    return lb;
  }

  // Compares the decided prefix [0, upto) with the incumbent; -1, 0, 1.
  int prefix_cmp(std::size_t upto) const {
    for (std::size_t i = 0; i < upto; ++i) {
      const signed char b = bits_[i] == 1 ? 1 : 0;
      if (b != inc_[i]) return b < inc_[i] ? -1 : 1;
    }
    return 0;
  }

  bool worth(double lb, std::size_t idx) const {
    if (lb > best_) return false;
    if (lb == best_ && have_inc_ && prefix_cmp(idx) > 0) return false;
    return true;
  }

  void leaf() {
    std::vector<signed char> b(bits_.size());
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = bits_[i] == 1 ? 1 : 0;
    if (!have_inc_ || cur_ < best_ || (cur_ == best_ && b < inc_)) {
      if (!have_inc_ && cur_ > best_) return;
      set_incumbent(cur_, std::move(b));
      if (first_) stop_ = true;
    }
  }

  void dfs(std::size_t idx) {
    if (stop_) return;
    ++nodes_;
    while (idx < bits_.size() && bits_[idx] != -1) ++idx;
    const double lb = lower_bound();
    if (!worth(lb, idx)) return;
    if (idx == bits_.size()) {
      leaf();
      return;
    }
    // Exclude first: completions are visited in increasing lexicographic order.
    bits_[idx] = 0;
    dfs(idx + 1);
    bits_[idx] = -1;
    if (stop_) return;
    Undo u = include(idx);
    if (worth(cur_, idx)) dfs(idx + 1);
    exclude_undo(idx, std::move(u));
  }

  const Layout& lay_;
  const DistortionEvaluator& ev_;
  std::vector<signed char> fixed_;
  std::vector<double> pair_;
  double base_ = 0.0;

  std::vector<signed char> bits_;
  std::vector<kern::PairList> R_;
  std::vector<int> row_cov_, col_cov_;
  std::vector<double> est_;
  double cur_ = 0.0;

  double best_ = kInf;
  std::vector<signed char> inc_;
  bool have_inc_ = false;
  bool first_ = false;
  bool stop_ = false;
  std::size_t nodes_ = 0;
};

}  // namespace

DistortionEvaluator::DistortionEvaluator(const DistortionSystem& sys, StructurePtr left,
                                         StructurePtr right)
    : left_(std::move(left)), right_(std::move(right)) {
  check_compatible(*left_, *right_);
  for (const auto& g : sys.generators) {
    tl_.push_back(kern::tabulate(g, *left_));
    tr_.push_back(kern::tabulate(g, *right_));
  }
}

double DistortionEvaluator::distortion(const Correlation& c) const {
  std::vector<kern::PairList> pairs(c.relation.size());
  for (std::size_t s = 0; s < c.relation.size(); ++s)
    for (std::size_t i = 0; i < c.relation[s].rows(); ++i)
      for (std::size_t j = 0; j < c.relation[s].cols(); ++j)
        if (c.relation[s](i, j)) pairs[s].emplace_back(i, j);
  return kern::distortion(tl_, tr_, pairs).value;
}

SearchResult rho_exact(const DistortionSystem& sys, StructurePtr m, StructurePtr n,
                       const SearchOptions& opts) {
  check_compatible(*m, *n);
  check_pairs(opts.anchors, *m, *n, "anchor");
  check_pairs(opts.forbidden, *m, *n, "forbidden");
  for (std::size_t s = 0; s < m->sorts.size(); ++s) {
    const std::size_t cells = m->sorts[s].size() * n->sorts[s].size();
    if (cells > opts.max_cells && !opts.force)
      throw SizeGuardError("sort '" + m->sorts[s].name + "' has " + std::to_string(cells) +
                           " cells, above the cap of " + std::to_string(opts.max_cells) +
                           " (use force to override)");
  }
  const Layout lay(*m, *n);
  const DistortionEvaluator ev(sys, m, n);
  BranchAndBound bb(lay, ev, fixed_cells(lay, opts));
  if (opts.cutoff) bb.set_bound(*opts.cutoff);
  bb.set_first_feasible(opts.first_feasible && opts.cutoff.has_value());
  if (opts.seed_incumbent) {
    LocalSearch ls{lay, ev, fixed_cells(lay, opts), std::mt19937_64(opts.seed)};
    if (auto h = ls.run(opts.budget)) {
      if (!opts.cutoff || h->first <= *opts.cutoff) bb.set_incumbent(h->first, h->second);
    }
  }
  if (!(bb.have_incumbent() && opts.first_feasible && opts.cutoff)) bb.run();

  SearchResult res;
  res.exact = true;
  res.nodes = bb.nodes();
  res.truncation = sys.truncation;
  if (bb.have_incumbent()) {
    res.value = bb.best();
    res.witness = lay.to_correlation(bb.incumbent(), m, n, opts.anchors);
  } else {
    res.value = kInf;
  }
  return res;
}

SearchResult rho_heuristic(const DistortionSystem& sys, StructurePtr m, StructurePtr n,
                           std::size_t budget, std::uint64_t seed,
                           const std::vector<AnchorPair>& anchors) {
  check_compatible(*m, *n);
  check_pairs(anchors, *m, *n, "anchor");
  const Layout lay(*m, *n);
  const DistortionEvaluator ev(sys, m, n);
  SearchOptions o;
  o.anchors = anchors;
  LocalSearch ls{lay, ev, fixed_cells(lay, o), std::mt19937_64(seed)};
  auto h = ls.run(budget);
  SearchResult res;
  res.exact = false;
  res.truncation = sys.truncation;
  res.nodes = ls.evals;
  if (!h) throw InputError("no correlation satisfies the anchors");
  res.value = h->first;
  res.witness = lay.to_correlation(h->second, m, n, anchors);
  return res;
}

SearchResult rho_pointed(const DistortionSystem& sys, StructurePtr m,
                         const std::vector<PointRef>& mbar, StructurePtr n,
                         const std::vector<PointRef>& nbar, SearchOptions opts) {
  if (mbar.size() != nbar.size()) throw InputError("pointed tuples differ in length");
  for (std::size_t i = 0; i < mbar.size(); ++i) {
    if (mbar[i].sort != nbar[i].sort)
      throw InputError("pointed tuples disagree on the sort of entry " + std::to_string(i));
    opts.anchors.push_back({mbar[i].sort, mbar[i].point, nbar[i].point});
  }
  return rho_exact(sys, std::move(m), std::move(n), opts);
}

// ---------------------------------------------------------------- stratified

namespace {

struct Reduct {
  std::vector<std::size_t> sorts;  // structure sort index per level sort
  std::vector<std::size_t> preds;  // structure predicate index per level predicate
};

Reduct reduct(const Signature& level, const MetricStructure& s) {
  Reduct r;
  for (const auto& name : level.sorts) {
    auto i = s.find_sort(name);
    if (!i) throw InputError("structure lacks sort '" + name + "' of the language");
    r.sorts.push_back(*i);
  }
  for (const auto& p : level.predicates) {
    auto i = s.find_predicate(p.name);
    if (!i) throw InputError("structure lacks predicate '" + p.name + "' of the language");
    r.preds.push_back(*i);
  }
  return r;
}

void require_discrete(const MetricStructure& s) {
  auto is01 = [](double v) { return std::abs(v) <= kTol || std::abs(v - 1.0) <= kTol; };
  for (const auto& so : s.sorts)
    for (std::size_t i = 0; i < so.size(); ++i)
      for (std::size_t j = 0; j < so.size(); ++j)
        if (!is01(so.metric[i][j])) throw InputError("structure is not discrete (metric)");
  for (const auto& p : s.predicates)
    for (double v : p.values)
      if (!is01(v)) throw InputError("structure is not discrete (predicate '" + p.name + "')");
}

}  // namespace

bool reducts_isomorphic(const Signature& level, const MetricStructure& m,
                        const MetricStructure& n) {
  const Reduct rm = reduct(level, m), rn = reduct(level, n);
  for (std::size_t k = 0; k < rm.sorts.size(); ++k)
    if (m.sorts[rm.sorts[k]].size() != n.sorts[rn.sorts[k]].size()) return false;
  // Global point list over the level's sorts.
  std::vector<std::pair<std::size_t, std::size_t>> pts;  // (level sort, point)
  std::map<std::size_t, std::size_t> sort_pos;           // structure sort in m -> level sort
  for (std::size_t k = 0; k < rm.sorts.size(); ++k) {
    sort_pos[rm.sorts[k]] = k;
    for (std::size_t p = 0; p < m.sorts[rm.sorts[k]].size(); ++p) pts.emplace_back(k, p);
  }
  std::vector<std::vector<long>> image(rm.sorts.size());
  std::vector<std::vector<bool>> used(rm.sorts.size());
  for (std::size_t k = 0; k < rm.sorts.size(); ++k) {
    image[k].assign(m.sorts[rm.sorts[k]].size(), -1);
    used[k].assign(n.sorts[rn.sorts[k]].size(), false);
  }
  // Checks every predicate tuple whose entries are all mapped.
  auto consistent = [&]() {
    for (std::size_t q = 0; q < rm.preds.size(); ++q) {
      const auto& pm = m.predicates[rm.preds[q]];
      const auto& pn = n.predicates[rn.preds[q]];
      if (pm.arity != pn.arity) return false;
      std::vector<std::size_t> ks(pm.arity), dims(pm.arity);
      for (std::size_t a = 0; a < pm.arity; ++a) {
        auto it = sort_pos.find(*m.find_sort(pm.arg_sorts[a]));
        if (it == sort_pos.end()) return false;
        ks[a] = it->second;
        dims[a] = image[ks[a]].size();
      }
      std::size_t cells = 1;
      for (auto d : dims) cells *= d;
      std::vector<std::size_t> t(pm.arity), u(pm.arity);
      for (std::size_t idx = 0; idx < cells; ++idx) {
        std::size_t r = idx;
        bool mapped = true;
        for (std::size_t a = pm.arity; a-- > 0;) {
          t[a] = r % dims[a];
          r /= dims[a];
          if (image[ks[a]][t[a]] < 0) mapped = false;
          else u[a] = static_cast<std::size_t>(image[ks[a]][t[a]]);
        }
        if (!mapped) continue;
        if (std::abs(m.predicate_value(rm.preds[q], t) - n.predicate_value(rn.preds[q], u)) > kTol)
          return false;
      }
    }
    return true;
  };
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == pts.size()) return true;
    const auto [k, p] = pts[i];
    for (std::size_t q = 0; q < used[k].size(); ++q) {
      if (used[k][q]) continue;
      image[k][p] = static_cast<long>(q);
      used[k][q] = true;
      if (consistent() && go(i + 1)) return true;
      used[k][q] = false;
      image[k][p] = -1;
    }
    return false;
  };
  return go(0);
}

double rho_stratified(const std::vector<Signature>& levels, const MetricStructure& m,
                      const MetricStructure& n) {
  require_discrete(m);
  require_discrete(n);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!reducts_isomorphic(levels[i], m, n))
      return i == 0 ? 2.0 : std::ldexp(1.0, -static_cast<int>(i - 1));
  }
  return 0.0;
}

}  // namespace aiso
