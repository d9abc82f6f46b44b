#include "aiso/distsys.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aiso/kernels.hpp"

namespace aiso {

bool DistortionSystem::add(Formula f) {
  for (const auto& g : generators)
    if (equal(g, f)) return false;
  generators.push_back(std::move(f));
  return true;
}

DistortionResult distortion(const DistortionSystem& sys, const Correlation& c) {
  if (!c.left || !c.right) throw InputError("distortion: correlation has no structures");
  if (c.relation.size() != c.left->sorts.size() ||
      c.left->sorts.size() != c.right->sorts.size())
    throw InputError("distortion: correlation does not match its structures");
  for (std::size_t s = 0; s < c.left->sorts.size(); ++s)
    if (c.left->sorts[s].name != c.right->sorts[s].name)
      throw InputError("distortion: sort names differ between structures");
  std::vector<kern::Table> tl, tr;
  for (const auto& g : sys.generators) {
    tl.push_back(kern::tabulate(g, *c.left));
    tr.push_back(kern::tabulate(g, *c.right));
  }
  std::vector<kern::PairList> pairs(c.relation.size());
  for (std::size_t s = 0; s < c.relation.size(); ++s)
    for (std::size_t i = 0; i < c.relation[s].rows(); ++i)
      for (std::size_t j = 0; j < c.relation[s].cols(); ++j)
        if (c.relation[s](i, j)) pairs[s].emplace_back(i, j);
  const auto r = kern::distortion(tl, tr, pairs);
  DistortionResult out;
  out.value = r.value;
  if (r.generator != kern::npos) {
    DistortionWitness w;
    w.generator = r.generator;
    const auto& t = tl[r.generator];
    for (std::size_t i = 0; i < t.arity(); ++i)
      w.tuple.push_back({t.vars[i], t.sorts[i], r.tuple[i].first, r.tuple[i].second});
    out.witness = std::move(w);
  }
  return out;
}

double fghk_weight(std::size_t i, double range_lo, double range_hi) {
  const double r = 1.0 + std::max(std::abs(range_lo), std::abs(range_hi));
  return std::ldexp(1.0, -static_cast<int>(i)) / r;
}

std::vector<Formula> atomic_formulas(const Signature& sig) {
  std::vector<Formula> out;
  for (const auto& p : sig.predicates) {
    std::vector<std::size_t> xs(p.arg_sorts.size());
    std::iota(xs.begin(), xs.end(), 0);
    out.push_back(fm::pred(sig, p.name, xs));
  }
  for (const auto& s : sig.sorts) out.push_back(fm::dist(sig, s, 0, 1));
  return out;
}

Formula chi_atomic(const Signature& sig, const Formula& atomic) {
  // Free x0..x{k-1}; bound copies x{k}..x{2k-1}.
  const std::size_t k = atomic->free.size();
  std::map<std::size_t, std::size_t> shift;
  for (const auto& [i, s] : atomic->free) shift[i] = i + k;
  Formula body = rename(atomic, shift);
  Formula gap;
  for (const auto& [i, s] : atomic->free) {
    auto d = fm::dist(sig, s, i, i + k);
    gap = gap ? fm::max(gap, d) : d;
  }
  Formula f = gap ? fm::add(body, gap) : body;
  for (auto it = atomic->free.rbegin(); it != atomic->free.rend(); ++it)
    f = fm::inf(it->first + k, it->second, f);
  return f;
}

namespace {

double trunc_or(const std::map<std::string, double>& t, const std::string& key, double def) {
  auto it = t.find(key);
  return it == t.end() ? def : it->second;
}

std::size_t positive_int(double v, const std::string& key) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e6)
    throw InputError("truncation '" + key + "' must be a positive integer");
  return static_cast<std::size_t>(v);
}

bool starts_with(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

}  // namespace

DistortionSystem builtin(const std::string& name, const Signature& sig,
                         const std::map<std::string, double>& truncation) {
  DistortionSystem sys;
  sys.name = name;
  if (sig.sorts.empty()) throw InputError("builtin '" + name + "': signature has no sorts");
  auto gh = [&] {
    for (const auto& s : sig.sorts) sys.add(fm::scale(0.5, fm::dist(sig, s, 0, 1)));
  };
  if (name == "gh") {
    gh();
  } else if (name == "lip") {
    const auto r_max = positive_int(trunc_or(truncation, "r_max", 4), "r_max");
    sys.truncation["r_max"] = static_cast<double>(r_max);
    for (std::size_t r = 1; r <= r_max; ++r)
      for (const auto& s : sig.sorts)
        sys.add(fm::cliplog(fm::dist(sig, s, 0, 1), -static_cast<double>(r),
                            static_cast<double>(r)));
  } else if (name == "iu") {
    const auto n_max = positive_int(trunc_or(truncation, "n_max", 16), "n_max");
    sys.truncation["n_max"] = static_cast<double>(n_max);
    const auto* u = sig.find_predicate("U");
    if (!u || u->arg_sorts.size() != 1)
      throw InputError("builtin 'iu' needs a unary predicate U");
    if (u->range_lo < -kTol || u->range_hi > 1.0 + kTol || u->lipschitz.empty() ||
        u->lipschitz[0] > 1.0 + kTol)
      throw InputError("builtin 'iu' needs U to be [0,1]-valued and 1-Lipschitz");
    gh();
    for (std::size_t n = 1; n <= n_max; ++n)
      sys.add(fm::scale(static_cast<double>(n), fm::pred(sig, "U", {0})));
  } else if (name == "fghk") {
    auto atoms = atomic_formulas(sig);
    sys.truncation["atomics"] = static_cast<double>(atoms.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      sys.add(fm::scale(fghk_weight(i, atoms[i]->range_lo, atoms[i]->range_hi), atoms[i]));
    }
  } else if (name == "eghk") {
    for (const auto& a : atomic_formulas(sig)) sys.add(chi_atomic(sig, a));
  } else if (name == "kadets" || name == "bm") {
    const char* p1 = name == "kadets" ? "kad" : "phi_";
    const char* p2 = name == "kadets" ? "kad" : "psi_";
    for (const auto& p : sig.predicates) {
      if (!starts_with(p.name, p1) && !starts_with(p.name, p2)) continue;
      std::vector<std::size_t> xs(p.arg_sorts.size());
      std::iota(xs.begin(), xs.end(), 0);
      sys.add(fm::pred(sig, p.name, xs));
    }
    if (sys.generators.empty())
      throw InputError("builtin '" + name + "': signature has no tabulated " +
                       (name == "kadets" ? "norm" : "Banach-Mazur") + " predicates");
    for (const auto& [k, v] : truncation) sys.truncation[k] = v;
  } else {
    throw InputError("unknown distortion system '" + name + "'");
  }
  return sys;
}

// ---------------------------------------------------------------- atomic completeness

namespace {

struct Instance {
  std::size_t formula;
  std::vector<std::size_t> positions;  // tuple position bound to each variable
};

// All sort-respecting maps from the formula's variables into tuple positions.
void instances(const kern::Table& t, const std::vector<std::size_t>& pattern, std::size_t f,
               std::vector<Instance>& out) {
  const std::size_t a = t.arity();
  std::vector<std::vector<std::size_t>> options(a);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t p = 0; p < pattern.size(); ++p)
      if (pattern[p] == t.sorts[i]) options[i].push_back(p);
  for (const auto& o : options)
    if (o.empty()) return;
  std::vector<std::size_t> idx(a, 0);
  while (true) {
    Instance in{f, {}};
    for (std::size_t i = 0; i < a; ++i) in.positions.push_back(options[i][idx[i]]);
    out.push_back(std::move(in));
    std::size_t k = a;
    while (k > 0) {
      --k;
      if (++idx[k] < options[k].size()) break;
      idx[k] = 0;
      if (k == 0) return;
    }
    if (a == 0) return;
  }
}

double value_at(const kern::Table& t, const Instance& in, const std::vector<std::size_t>& pts) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < in.positions.size(); ++i) idx += pts[in.positions[i]] * t.strides[i];
  return t.values[idx];
}

}  // namespace

CompletenessResult check_atomic_completeness(const DistortionSystem& sys, const MetricStructure& s,
                                             std::size_t max_len) {
  const auto sig = s.signature();
  const auto atoms = atomic_formulas(sig);
  std::size_t max_arity = 0;
  for (const auto& a : atoms) max_arity = std::max(max_arity, a->free.size());
  const std::size_t len = max_len ? max_len : 2 * max_arity;

  std::vector<kern::Table> gt, at;
  for (const auto& g : sys.generators) gt.push_back(kern::tabulate(g, s));
  for (const auto& a : atoms) at.push_back(kern::tabulate(a, s));

  std::vector<PointRef> points;
  for (std::size_t si = 0; si < s.sorts.size(); ++si)
    for (std::size_t p = 0; p < s.sorts[si].size(); ++p) points.push_back({si, p});
  double total = std::pow(static_cast<double>(points.size()), static_cast<double>(len));
  if (total > 2e5) throw InputError("atomic completeness check: too many tuples");

  // Bucket tuples by sort pattern.
  std::map<std::vector<std::size_t>, std::vector<std::vector<std::size_t>>> buckets;
  const std::size_t count = static_cast<std::size_t>(total);
  for (std::size_t n = 0; n < count; ++n) {
    std::size_t r = n;
    std::vector<std::size_t> pattern(len), pts(len);
    for (std::size_t i = len; i-- > 0;) {
      const auto& pr = points[r % points.size()];
      r /= points.size();
      pattern[i] = pr.sort;
      pts[i] = pr.point;
    }
    buckets[pattern].push_back(std::move(pts));
  }

  CompletenessResult res;
  for (const auto& [pattern, tuples] : buckets) {
    std::vector<Instance> gi, ai;
    for (std::size_t g = 0; g < gt.size(); ++g) instances(gt[g], pattern, g, gi);
    for (std::size_t a = 0; a < at.size(); ++a) instances(at[a], pattern, a, ai);
    const std::size_t m = tuples.size();
    std::vector<std::vector<double>> gp(m), ap(m);
    kern::parallel_for(m, [&](std::size_t t) {
      for (const auto& in : gi) gp[t].push_back(value_at(gt[in.formula], in, tuples[t]));
      for (const auto& in : ai) ap[t].push_back(value_at(at[in.formula], in, tuples[t]));
    });
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return gp[x] < gp[y]; });
    for (std::size_t i = 0; i < m; ++i) {
      const auto& x = order[i];
      for (std::size_t j = i + 1; j < m; ++j) {
        const auto& y = order[j];
        if (!gp[x].empty() && gp[y][0] - gp[x][0] > kTol) break;
        bool same = true;
        for (std::size_t k = 0; k < gp[x].size() && same; ++k)
          same = std::abs(gp[x][k] - gp[y][k]) <= kTol;
        if (!same) continue;
        for (std::size_t k = 0; k < ap[x].size(); ++k) {
          if (std::abs(ap[x][k] - ap[y][k]) <= kTol) continue;
          res.complete = false;
          const auto lo = std::min(x, y), hi = std::max(x, y);
          for (std::size_t p = 0; p < len; ++p) {
            res.first.push_back({pattern[p], tuples[lo][p]});
            res.second.push_back({pattern[p], tuples[hi][p]});
          }
          const auto& in = ai[k];
          std::string text = print(atoms[in.formula]);
          res.atomic = text + " at positions";
          for (auto p : in.positions) res.atomic += " " + std::to_string(p);
          return res;
        }
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------- functionality

FunctionalityResult functionality_witness_check(const DistortionSystem& sys, const Formula& phi,
                                                double eps, double delta,
                                                const std::vector<const MetricStructure*>& structures) {
  FunctionalityResult r;
  bool member = false;
  for (const auto& g : sys.generators) {
    if (equal(g, phi)) member = true;
    bool binary = !g->free.empty() && g->free.rbegin()->first <= 1;
    if (!member && binary) {
      try {
        member = equal(functionality_witness(g), phi);
      } catch (const InputError&) {
      }
    }
    if (member) break;
  }
  if (!member) {
    r.ok = false;
    r.message = "formula is not a generator of '" + sys.name + "' or the witness of one";
    return r;
  }
  if (phi->free.size() != 2 || !phi->free.count(0) || !phi->free.count(1) ||
      phi->free.at(0) != phi->free.at(1)) {
    r.ok = false;
    r.message = "formula must be binary in x0, x1 of one sort";
    return r;
  }
  const std::string sort = phi->free.at(0);
  for (std::size_t k = 0; k < structures.size(); ++k) {
    const auto& s = *structures[k];
    auto si = s.find_sort(sort);
    if (!si) throw InputError("structure has no sort '" + sort + "'");
    const auto t = kern::tabulate(phi, s, kern::Exec::Serial);
    const std::size_t n = s.sorts[*si].size();
    for (std::size_t a = 0; a < n; ++a) {
      const double v = t.values[a * n + a];
      if (std::abs(v) > kTol) {
        r = {false, "phi(a,a) = " + std::to_string(v) + " != 0", k, *si, a, a};
        return r;
      }
    }
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (t.values[a * n + b] < eps && !(s.dist(*si, a, b) < delta)) {
          r = {false,
               "phi(a,b) = " + std::to_string(t.values[a * n + b]) + " < eps but d(a,b) = " +
                   std::to_string(s.dist(*si, a, b)) + " >= delta",
               k, *si, a, b};
          return r;
        }
      }
  }
  return r;
}

}  // namespace aiso
