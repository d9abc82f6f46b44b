#include "aiso/mstruct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aiso {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

bool is_total_surjective(const BoolMatrix& m, std::optional<std::size_t>& bad_row,
                         std::optional<std::size_t>& bad_col) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    bool any = false;
    for (std::size_t j = 0; j < m.cols() && !any; ++j) any = m(i, j);
    if (!any) {
      bad_row = i;
      return false;
    }
  }
  for (std::size_t j = 0; j < m.cols(); ++j) {
    bool any = false;
    for (std::size_t i = 0; i < m.rows() && !any; ++i) any = m(i, j);
    if (!any) {
      bad_col = j;
      return false;
    }
  }
  return true;
}

void check_shapes(const Correlation& c) {
  if (!c.left || !c.right) throw InputError("correlation: missing structure");
  if (c.left->sorts.size() != c.right->sorts.size())
    throw InputError("correlation: structures have different numbers of sorts");
  if (c.relation.size() != c.left->sorts.size())
    throw InputError("correlation: expected " + std::to_string(c.left->sorts.size()) +
                     " relation matrices, got " + std::to_string(c.relation.size()));
  for (std::size_t s = 0; s < c.relation.size(); ++s) {
    const auto& m = c.relation[s];
    if (m.rows() != c.left->sorts[s].size() || m.cols() != c.right->sorts[s].size())
      throw InputError("correlation: matrix for sort '" + c.left->sorts[s].name + "' is " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                       std::to_string(c.left->sorts[s].size()) + "x" +
                       std::to_string(c.right->sorts[s].size()));
  }
  for (const auto& a : c.anchors) {
    if (a.sort >= c.relation.size() || a.left >= c.relation[a.sort].rows() ||
        a.right >= c.relation[a.sort].cols())
      throw InputError("correlation: anchor out of range");
  }
}

}  // namespace

std::optional<std::size_t> Signature::find_sort(const std::string& name) const {
  for (std::size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i] == name) return i;
  return std::nullopt;
}

const PredicateDecl* Signature::find_predicate(const std::string& name) const {
  for (const auto& p : predicates)
    if (p.name == name) return &p;
  return nullptr;
}

Signature Signature::metric_only(std::vector<std::string> sort_names) {
  Signature sig;
  sig.diameter_bounds.assign(sort_names.size(), 1.0);
  sig.sorts = std::move(sort_names);
  return sig;
}

std::optional<std::size_t> MetricStructure::find_sort(const std::string& name) const {
  for (std::size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> MetricStructure::find_predicate(const std::string& name) const {
  for (std::size_t i = 0; i < predicates.size(); ++i)
    if (predicates[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> MetricStructure::find_point(std::size_t sort,
                                                       const std::string& label) const {
  const auto& pts = sorts.at(sort).points;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i] == label) return i;
  return std::nullopt;
}

double MetricStructure::predicate_value(std::size_t pred,
                                        std::span<const std::size_t> args) const {
  const auto& p = predicates[pred];
  std::size_t idx = 0;
  for (std::size_t i = 0; i < p.arity; ++i) {
    const auto s = *find_sort(p.arg_sorts[i]);
    idx = idx * sorts[s].size() + args[i];
  }
  return p.values[idx];
}

std::size_t MetricStructure::total_points() const {
  std::size_t n = 0;
  for (const auto& s : sorts) n += s.size();
  return n;
}

Signature MetricStructure::signature() const {
  Signature sig;
  for (const auto& s : sorts) {
    sig.sorts.push_back(s.name);
    sig.diameter_bounds.push_back(s.diameter_bound);
  }
  for (const auto& p : predicates) {
    PredicateDecl d;
    d.name = p.name;
    for (const auto& a : p.arg_sorts) {
      auto s = find_sort(a);
      if (!s) throw InputError("predicate '" + p.name + "' references unknown sort '" + a + "'");
      d.arg_sorts.push_back(*s);
    }
    d.range_lo = p.range_lo;
    d.range_hi = p.range_hi;
    d.lipschitz = p.lipschitz;
    sig.predicates.push_back(std::move(d));
  }
  return sig;
}

std::vector<Violation> validate_structure(const MetricStructure& s) {
  std::vector<Violation> out;
  auto add = [&](std::string where, std::vector<std::size_t> tuple, std::string msg) {
    out.push_back({std::move(where), std::move(tuple), std::move(msg)});
  };

  std::vector<bool> sort_ok(s.sorts.size(), true);
  for (std::size_t si = 0; si < s.sorts.size(); ++si) {
    const auto& so = s.sorts[si];
    const std::size_t n = so.size();
    for (std::size_t sj = 0; sj < si; ++sj)
      if (s.sorts[sj].name == so.name) add(so.name, {}, "duplicate sort name");
    if (n == 0) {
      add(so.name, {}, "sort has no points");
      sort_ok[si] = false;
      continue;
    }
    if (!(so.diameter_bound >= 0.0) || !std::isfinite(so.diameter_bound))
      add(so.name, {}, "diameter_bound must be a finite nonnegative real");
    bool shape = so.metric.size() == n;
    for (std::size_t i = 0; shape && i < n; ++i) shape = so.metric[i].size() == n;
    if (!shape) {
      add(so.name, {}, "metric must be " + std::to_string(n) + "x" + std::to_string(n));
      sort_ok[si] = false;
      continue;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (so.points[i] == so.points[j]) add(so.name, {j, i}, "duplicate point label");
    const auto& d = so.metric;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double v = d[i][j];
        if (!std::isfinite(v)) {
          add(so.name, {i, j}, "non-finite distance");
          sort_ok[si] = false;
          continue;
        }
        if (i == j) {
          if (std::abs(v) > kTol) add(so.name, {i, j}, "d(x,x) = " + fmt(v) + " != 0");
          continue;
        }
        if (v < -kTol) add(so.name, {i, j}, "negative distance " + fmt(v));
        if (v <= kTol) add(so.name, {i, j}, "d = " + fmt(v) + " between distinct points");
        if (j > i && std::abs(v - d[j][i]) > kTol)
          add(so.name, {i, j}, "asymmetric: d(i,j) = " + fmt(v) + " != d(j,i) = " + fmt(d[j][i]));
        if (v > so.diameter_bound + kTol)
          add(so.name, {i, j}, "d = " + fmt(v) + " > diameter_bound " + fmt(so.diameter_bound));
      }
    }
    if (!sort_ok[si]) continue;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          if (a == c || a == b || b == c) continue;
          if (d[a][c] > d[a][b] + d[b][c] + kTol)
            add(so.name, {a, b, c},
                "triangle: d(a,c) = " + fmt(d[a][c]) + " > d(a,b) + d(b,c) = " +
                    fmt(d[a][b] + d[b][c]));
        }
  }

  for (std::size_t pi = 0; pi < s.predicates.size(); ++pi) {
    const auto& p = s.predicates[pi];
    for (std::size_t pj = 0; pj < pi; ++pj)
      if (s.predicates[pj].name == p.name) add(p.name, {}, "duplicate predicate name");
    if (p.arity == 0) {
      add(p.name, {}, "arity must be positive");
      continue;
    }
    if (p.arg_sorts.size() != p.arity) {
      add(p.name, {}, "arg_sorts has " + std::to_string(p.arg_sorts.size()) +
                          " entries, arity is " + std::to_string(p.arity));
      continue;
    }
    std::vector<std::size_t> sidx;
    bool bad = false;
    for (const auto& a : p.arg_sorts) {
      auto f = s.find_sort(a);
      if (!f) {
        add(p.name, {}, "unknown argument sort '" + a + "'");
        bad = true;
      } else {
        sidx.push_back(*f);
        if (!sort_ok[*f]) bad = true;
      }
    }
    if (bad) continue;
    std::size_t cells = 1;
    for (auto si : sidx) cells *= s.sorts[si].size();
    if (p.values.size() != cells) {
      add(p.name, {}, "table has " + std::to_string(p.values.size()) + " entries, expected " +
                          std::to_string(cells));
      continue;
    }
    if (p.lipschitz.size() != p.arity) {
      add(p.name, {}, "lipschitz has " + std::to_string(p.lipschitz.size()) +
                          " entries, arity is " + std::to_string(p.arity));
      continue;
    }
    if (!(p.range_lo <= p.range_hi)) add(p.name, {}, "empty range");
    for (std::size_t i = 0; i < p.arity; ++i)
      if (!(p.lipschitz[i] >= 0.0)) add(p.name, {}, "negative lipschitz bound");

    std::vector<std::size_t> dims;
    for (auto si : sidx) dims.push_back(s.sorts[si].size());
    std::vector<std::size_t> stride(p.arity, 1);
    for (std::size_t i = p.arity; i-- > 1;) stride[i - 1] = stride[i] * dims[i];
    auto decode = [&](std::size_t idx) {
      std::vector<std::size_t> t(p.arity);
      for (std::size_t i = 0; i < p.arity; ++i) t[i] = (idx / stride[i]) % dims[i];
      return t;
    };
    for (std::size_t idx = 0; idx < cells; ++idx) {
      const double v = p.values[idx];
      if (!std::isfinite(v)) {
        add(p.name, decode(idx), "non-finite value");
        continue;
      }
      if (v < p.range_lo - kTol || v > p.range_hi + kTol)
        add(p.name, decode(idx),
            "value " + fmt(v) + " outside range [" + fmt(p.range_lo) + "," + fmt(p.range_hi) + "]");
    }
    for (std::size_t idx = 0; idx < cells; ++idx) {
      const auto t = decode(idx);
      for (std::size_t i = 0; i < p.arity; ++i) {
        const auto& d = s.sorts[sidx[i]].metric;
        for (std::size_t y = t[i] + 1; y < dims[i]; ++y) {
          const std::size_t jdx = idx + (y - t[i]) * stride[i];
          const double lhs = std::abs(p.values[idx] - p.values[jdx]);
          const double rhs = p.lipschitz[i] * d[t[i]][y];
          if (lhs > rhs + kTol) {
            auto tt = t;
            tt.push_back(y);
            add(p.name, tt,
                "lipschitz at argument " + std::to_string(i) + ": |P - P'| = " + fmt(lhs) +
                    " > L*d = " + fmt(rhs));
          }
        }
      }
    }
  }

  for (const auto& [name, ref] : s.constants) {
    if (ref.sort >= s.sorts.size() || ref.point >= s.sorts[ref.sort].size())
      add(name, {ref.sort, ref.point}, "constant references a missing point");
  }
  return out;
}

void require_valid(const MetricStructure& s) {
  auto v = validate_structure(s);
  if (!v.empty())
    throw InputError("invalid structure: " + v.front().where + ": " + v.front().message);
}

std::size_t BoolMatrix::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

BoolMatrix BoolMatrix::identity(std::size_t n) {
  BoolMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BoolMatrix BoolMatrix::transposed() const {
  BoolMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j)) t.set(j, i);
  return t;
}

Correlation Correlation::identity(StructurePtr s) {
  Correlation c;
  c.left = s;
  c.right = s;
  for (const auto& so : s->sorts) c.relation.push_back(BoolMatrix::identity(so.size()));
  return c;
}

Correlation Correlation::all(StructurePtr left, StructurePtr right) {
  Correlation c = empty(std::move(left), std::move(right));
  for (std::size_t s = 0; s < c.relation.size(); ++s)
    c.relation[s] = BoolMatrix(c.relation[s].rows(), c.relation[s].cols(), true);
  return c;
}

Correlation Correlation::empty(StructurePtr left, StructurePtr right) {
  if (left->sorts.size() != right->sorts.size())
    throw InputError("correlation: structures have different numbers of sorts");
  Correlation c;
  c.left = left;
  c.right = right;
  for (std::size_t s = 0; s < left->sorts.size(); ++s)
    c.relation.emplace_back(left->sorts[s].size(), right->sorts[s].size());
  return c;
}

bool Correlation::lex_less(const Correlation& o) const {
  for (std::size_t s = 0; s < relation.size() && s < o.relation.size(); ++s) {
    if (relation[s] < o.relation[s]) return true;
    if (o.relation[s] < relation[s]) return false;
  }
  return relation.size() < o.relation.size();
}

CorrelationCheck is_correlation(const Correlation& c) {
  check_shapes(c);
  CorrelationCheck r;
  for (std::size_t s = 0; s < c.relation.size(); ++s) {
    std::optional<std::size_t> row, col;
    if (!is_total_surjective(c.relation[s], row, col)) {
      r.ok = false;
      r.sort = s;
      r.row = row;
      r.column = col;
      r.reason = row ? "row " + std::to_string(*row) + " of sort '" + c.left->sorts[s].name +
                           "' has no related point (not total)"
                     : "column " + std::to_string(*col) + " of sort '" + c.left->sorts[s].name +
                           "' has no related point (not surjective)";
      return r;
    }
  }
  for (const auto& a : c.anchors) {
    if (!c.relation[a.sort](a.left, a.right)) {
      r.ok = false;
      r.sort = a.sort;
      r.row = a.left;
      r.column = a.right;
      r.reason = "anchored pair (" + std::to_string(a.left) + "," + std::to_string(a.right) +
                 ") is not in the relation";
      return r;
    }
  }
  return r;
}

bool operator==(const Sort& a, const Sort& b) {
  return a.name == b.name && a.points == b.points && a.metric == b.metric &&
         a.diameter_bound == b.diameter_bound;
}

bool operator==(const Predicate& a, const Predicate& b) {
  return a.name == b.name && a.arity == b.arity && a.arg_sorts == b.arg_sorts &&
         a.values == b.values && a.range_lo == b.range_lo && a.range_hi == b.range_hi &&
         a.lipschitz == b.lipschitz;
}

bool same_structure(const MetricStructure& a, const MetricStructure& b) {
  if (&a == &b) return true;
  return a.sorts == b.sorts && a.predicates == b.predicates && a.constants == b.constants;
}

Correlation inverse(const Correlation& c) {
  check_shapes(c);
  Correlation r;
  r.left = c.right;
  r.right = c.left;
  for (const auto& m : c.relation) r.relation.push_back(m.transposed());
  for (const auto& a : c.anchors) r.anchors.push_back({a.sort, a.right, a.left});
  return r;
}

Correlation compose(const Correlation& c1, const Correlation& c2) {
  check_shapes(c1);
  check_shapes(c2);
  if (!same_structure(*c1.right, *c2.left))
    throw InputError("compose: middle structures differ");
  Correlation r = Correlation::empty(c1.left, c2.right);
  for (std::size_t s = 0; s < r.relation.size(); ++s) {
    const auto& a = c1.relation[s];
    const auto& b = c2.relation[s];
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (!a(i, k)) continue;
        for (std::size_t j = 0; j < b.cols(); ++j)
          if (b(k, j)) r.relation[s].set(i, j);
      }
  }
  for (const auto& x : c1.anchors)
    for (const auto& y : c2.anchors)
      if (x.sort == y.sort && x.right == y.left) {
        AnchorPair p{x.sort, x.left, y.right};
        if (std::find(r.anchors.begin(), r.anchors.end(), p) == r.anchors.end())
          r.anchors.push_back(p);
      }
  return r;
}

Correlation thicken(const Correlation& c, double delta) {
  if (!(delta >= 0.0)) throw InputError("thicken: delta must be nonnegative");
  check_shapes(c);
  Correlation r = c;
  for (std::size_t s = 0; s < c.relation.size(); ++s) {
    const auto& m = c.relation[s];
    const auto& dl = c.left->sorts[s].metric;
    const auto& dr = c.right->sorts[s].metric;
    for (std::size_t a = 0; a < m.rows(); ++a)
      for (std::size_t b = 0; b < m.cols(); ++b) {
        if (r.relation[s](a, b)) continue;
        bool hit = false;
        for (std::size_t x = 0; x < m.rows() && !hit; ++x) {
          if (dl[a][x] > delta) continue;
          for (std::size_t y = 0; y < m.cols() && !hit; ++y)
            hit = m(x, y) && dr[b][y] <= delta;
        }
        if (hit) r.relation[s].set(a, b);
      }
  }
  return r;
}

}  // namespace aiso
