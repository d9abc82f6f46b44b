#include "aiso/backforth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aiso/kernels.hpp"

namespace aiso {

std::vector<PointRef> global_points(const MetricStructure& s) {
  std::vector<PointRef> out;
  for (std::size_t si = 0; si < s.sorts.size(); ++si)
    for (std::size_t p = 0; p < s.sorts[si].size(); ++p) out.push_back({si, p});
  return out;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CompiledGen {
  kern::Table left, right;
  std::vector<double> lip;  // per variable, in table order
};

// An Omega-respecting placement of a generator's variables into tuple positions.
struct Placement {
  std::size_t gen;
  std::vector<std::size_t> pos;
};

class Game {
 public:
  Game(const DistortionSystem& sys, const WeakModulus& omega, const MetricStructure& m,
       const MetricStructure& n)
      : omega_(omega), pm_(global_points(m)), pn_(global_points(n)) {
    validate_modulus(omega);
    if (m.sorts.size() != n.sorts.size())
      throw InputError("structures have different numbers of sorts");
    for (std::size_t s = 0; s < m.sorts.size(); ++s)
      if (m.sorts[s].name != n.sorts[s].name) throw InputError("sort names differ");
    for (const auto& g : sys.generators) {
      if (!respects_modulus(g, omega)) continue;
      CompiledGen c{kern::tabulate(g, m), kern::tabulate(g, n), {}};
      const auto mod = infer_modulus(g);
      for (auto v : c.left.vars) c.lip.push_back(mod.lipschitz.at(v));
      gens_.push_back(std::move(c));
    }
  }

  std::size_t left_points() const { return pm_.size(); }
  std::size_t right_points() const { return pn_.size(); }
  std::size_t base() const { return pm_.size() * pn_.size(); }
  const std::vector<PointRef>& pm() const { return pm_; }
  const std::vector<PointRef>& pn() const { return pn_; }

  std::vector<Placement> placements(std::size_t len) const {
    std::vector<Placement> out;
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      const auto& vars = gens_[g].left.vars;
      const std::size_t a = vars.size();
      if (a > len) continue;
      std::vector<std::size_t> pos(a);
      // Order-preserving injections with pos[t] >= vars[t].
      auto rec = [&](auto&& self, std::size_t t, std::size_t from) -> void {
        if (t == a) {
          out.push_back({g, pos});
          return;
        }
        for (std::size_t p = std::max(from, vars[t]); p + (a - t) <= len; ++p) {
          if (gens_[g].lip[t] > omega_.weight(p) + kTol) continue;
          pos[t] = p;
          self(self, t + 1, p + 1);
        }
      };
      rec(rec, 0, 0);
    }
    return out;
  }

  // r0 on global point tuples; NaN when the tuples are not sort-consistent.
  double r0(const std::vector<Placement>& pl, const std::vector<std::size_t>& mt,
            const std::vector<std::size_t>& nt) const {
    for (std::size_t i = 0; i < mt.size(); ++i)
      if (pm_[mt[i]].sort != pn_[nt[i]].sort) return kNaN;
    double best = 0.0;
    for (const auto& p : pl) {
      const auto& c = gens_[p.gen];
      std::size_t il = 0, ir = 0;
      bool ok = true;
      for (std::size_t t = 0; t < p.pos.size(); ++t) {
        const auto& a = pm_[mt[p.pos[t]]];
        const auto& b = pn_[nt[p.pos[t]]];
        if (a.sort != c.left.sorts[t]) {
          ok = false;
          break;
        }
        il += a.point * c.left.strides[t];
        ir += b.point * c.right.strides[t];
      }
      if (ok) best = std::max(best, std::abs(c.left.values[il] - c.right.values[ir]));
    }
    return best;
  }

  std::size_t code(const std::vector<std::size_t>& mt, const std::vector<std::size_t>& nt) const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < mt.size(); ++i) c = c * base() + mt[i] * pn_.size() + nt[i];
    return c;
  }

  void decode(std::size_t len, std::size_t code, std::vector<std::size_t>& mt,
              std::vector<std::size_t>& nt) const {
    mt.assign(len, 0);
    nt.assign(len, 0);
    for (std::size_t i = len; i-- > 0;) {
      const std::size_t pr = code % base();
      code /= base();
      mt[i] = pr / pn_.size();
      nt[i] = pr % pn_.size();
    }
  }

  std::vector<double> r0_level(std::size_t len) const {
    const auto pl = placements(len);
    std::size_t count = 1;
    for (std::size_t i = 0; i < len; ++i) count *= base();
    std::vector<double> out(count);
    kern::parallel_for(count, [&](std::size_t c) {
      std::vector<std::size_t> mt, nt;
      decode(len, c, mt, nt);
      out[c] = r0(pl, mt, nt);
    });
    return out;
  }

  // One successor step: values for length len from values at length len+1.
  std::vector<double> step(std::size_t len, const std::vector<double>& next) const {
    std::size_t count = 1;
    for (std::size_t i = 0; i < len; ++i) count *= base();
    std::vector<double> out(count);
    const std::size_t P = pn_.size();
    kern::parallel_for(count, [&](std::size_t c) {
      std::vector<std::size_t> mt, nt;
      decode(len, c, mt, nt);
      for (std::size_t i = 0; i < len; ++i)
        if (pm_[mt[i]].sort != pn_[nt[i]].sort) {
          out[c] = kNaN;
          return;
        }
      const std::size_t b0 = c * base();
      double forth = 0.0, back = 0.0;
      for (std::size_t a = 0; a < pm_.size(); ++a) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < P; ++b)
          if (pm_[a].sort == pn_[b].sort) m = std::min(m, next[b0 + a * P + b]);
        forth = std::max(forth, m);
      }
      for (std::size_t b = 0; b < P; ++b) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < pm_.size(); ++a)
          if (pm_[a].sort == pn_[b].sort) m = std::min(m, next[b0 + a * P + b]);
        back = std::max(back, m);
      }
      out[c] = std::max(forth, back);
    });
    return out;
  }

  void guard(std::size_t k) const {
    const double cells = std::pow(static_cast<double>(base()), static_cast<double>(k));
    if (cells > 4e6)
      throw InputError("back-and-forth table with " + std::to_string(static_cast<long long>(cells)) +
                       " entries at depth " + std::to_string(k) + " is too large");
  }

 private:
  WeakModulus omega_;
  std::vector<PointRef> pm_, pn_;
  std::vector<CompiledGen> gens_;
};

std::vector<std::size_t> to_global(const MetricStructure& s, const std::vector<PointRef>& t) {
  std::vector<std::size_t> off(s.sorts.size() + 1, 0);
  for (std::size_t i = 0; i < s.sorts.size(); ++i) off[i + 1] = off[i] + s.sorts[i].size();
  std::vector<std::size_t> out;
  for (const auto& p : t) {
    if (p.sort >= s.sorts.size() || p.point >= s.sorts[p.sort].size())
      throw InputError("tuple entry out of range");
    out.push_back(off[p.sort] + p.point);
  }
  return out;
}

bool same_values(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) && std::isnan(b[i])) continue;
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

double r0(const DistortionSystem& sys, const WeakModulus& omega, const MetricStructure& m,
          const std::vector<PointRef>& mbar, const MetricStructure& n,
          const std::vector<PointRef>& nbar) {
  if (mbar.size() != nbar.size()) throw InputError("r0: tuples differ in length");
  for (std::size_t i = 0; i < mbar.size(); ++i)
    if (mbar[i].sort != nbar[i].sort)
      throw InputError("r0: entry " + std::to_string(i) + " differs in sort");
  Game g(sys, omega, m, n);
  return g.r0(g.placements(mbar.size()), to_global(m, mbar), to_global(n, nbar));
}

double r_finite(const DistortionSystem& sys, const WeakModulus& omega, const MetricStructure& m,
                const MetricStructure& n, std::size_t rounds, std::size_t depth_cap) {
  if (rounds > depth_cap)
    throw InputError("rounds " + std::to_string(rounds) + " exceeds the depth cap " +
                     std::to_string(depth_cap));
  Game g(sys, omega, m, n);
  g.guard(rounds);
  auto level = g.r0_level(rounds);
  for (std::size_t len = rounds; len-- > 0;) level = g.step(len, level);
  return level[0];
}

BafTable r_infty_capped(const DistortionSystem& sys, const WeakModulus& omega,
                        const MetricStructure& m, const MetricStructure& n, std::size_t k) {
  Game g(sys, omega, m, n);
  g.guard(k);
  BafTable t;
  t.k = k;
  t.omega = omega;
  t.truncation = sys.truncation;
  t.left_points = g.left_points();
  t.right_points = g.right_points();
  std::vector<std::vector<double>> lvl(k + 1);
  for (std::size_t len = 0; len <= k; ++len) lvl[len] = g.r0_level(len);
  t.levels.push_back(lvl);
  // The fixed point is reached within k steps; the extra step confirms it.
  for (std::size_t alpha = 0; alpha <= k + 1; ++alpha) {
    std::vector<std::vector<double>> next(k + 1);
    next[k] = lvl[k];
    for (std::size_t len = 0; len < k; ++len) next[len] = g.step(len, lvl[len + 1]);
    bool same = true;
    for (std::size_t len = 0; len <= k && same; ++len) same = same_values(lvl[len], next[len]);
    if (same) {
      t.stabilization = alpha;
      return t;
    }
    lvl = std::move(next);
    t.levels.push_back(lvl);
  }
  t.stabilization = t.levels.size() - 1;
  return t;
}

std::size_t scott_rank_capped(const BafTable& t) { return t.stabilization; }

std::size_t BafTable::code(const std::vector<std::size_t>& mbar,
                           const std::vector<std::size_t>& nbar) const {
  const std::size_t base = left_points * right_points;
  std::size_t c = 0;
  for (std::size_t i = 0; i < mbar.size(); ++i) c = c * base + mbar[i] * right_points + nbar[i];
  return c;
}

void BafTable::decode(std::size_t len, std::size_t c, std::vector<std::size_t>& mbar,
                      std::vector<std::size_t>& nbar) const {
  const std::size_t base = left_points * right_points;
  mbar.assign(len, 0);
  nbar.assign(len, 0);
  for (std::size_t i = len; i-- > 0;) {
    const std::size_t pr = c % base;
    c /= base;
    mbar[i] = pr / right_points;
    nbar[i] = pr % right_points;
  }
}

double BafTable::value(std::size_t alpha, const std::vector<std::size_t>& mbar,
                       const std::vector<std::size_t>& nbar) const {
  if (mbar.size() != nbar.size() || mbar.size() > k) throw InputError("bad tuple length");
  const auto& lv = levels.at(std::min(alpha, levels.size() - 1));
  return lv[mbar.size()][code(mbar, nbar)];
}

}  // namespace aiso
