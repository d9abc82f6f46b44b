#include "aiso/embound.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <optional>
#include <cmath>
#include <limits>
#include <random>

namespace aiso {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using EMat = Eigen::MatrixXcd;
using EVec = Eigen::VectorXcd;

double theta(double x) { return x / (1.0 + x); }

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string scalar_name(cplx s) {
  if (s.imag() == 0.0) return num(s.real());
  if (s.real() == 0.0) return s.imag() == 1.0 ? "i" : num(s.imag()) + "i";
  return num(s.real()) + (s.imag() < 0 ? "" : "+") + num(s.imag()) + "i";
}

double raw_norm(NormKind k, const std::vector<double>& w, const Vec& v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]) * (w.empty() ? 1.0 : w[i]);
    switch (k) {
      case NormKind::L1: acc += a; break;
      case NormKind::L2: acc += a * a; break;
      case NormKind::Linf: acc = std::max(acc, a); break;
    }
  }
  return k == NormKind::L2 ? std::sqrt(acc) : acc;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec o(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) o[i] = a[i] - b[i];
  return o;
}

Vec lin(cplx s, const Vec& a, cplx t, const Vec& b) {
  Vec o(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) o[i] = s * a[i] + t * b[i];
  return o;
}

EMat to_eigen(const Mat& a) {
  const std::size_t n = a.size();
  EMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw InputError("matrix must be square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a[i][j];
  }
  return m;
}

Mat from_eigen(const EMat& m) {
  Mat a(m.rows(), std::vector<cplx>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  return a;
}

Vec apply(const Mat& a, const Vec& x) {
  Vec y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

// Embounded distance between two vectors (no infinity involved).
double emb_dist(const SampledBanach& b, const Vec& x, const Vec& y) {
  return theta(b.norm_of(sub(x, y))) / (1.0 + std::min(b.norm_of(x), b.norm_of(y)));
}

// Per-argument sup of |dP| / d over arguments differing in one position.
std::vector<double> empirical_lipschitz(const Predicate& p, const Sort& s) {
  const std::size_t n = s.size();
  std::vector<double> out(p.arity, 0.0);
  std::size_t stride = 1;
  for (std::size_t i = p.arity; i-- > 0;) {
    for (std::size_t c = 0; c < p.values.size(); ++c) {
      const std::size_t xi = (c / stride) % n;
      for (std::size_t y = xi + 1; y < n; ++y) {
        const double d = s.metric[xi][y];
        if (d <= 0) continue;
        const double dv = std::abs(p.values[c + (y - xi) * stride] - p.values[c]);
        out[i] = std::max(out[i], dv / d);
      }
    }
    stride *= n;
  }
  for (auto& l : out) l *= 1.0 + 1e-12;
  return out;
}

Predicate tabulate_pred(const std::string& name, std::size_t arity, const std::string& sort,
                        const Sort& s, double lo, double hi,
                        const std::function<double(const std::vector<std::size_t>&)>& f) {
  Predicate p;
  p.name = name;
  p.arity = arity;
  p.arg_sorts.assign(arity, sort);
  p.range_lo = lo;
  p.range_hi = hi;
  std::size_t total = 1;
  for (std::size_t i = 0; i < arity; ++i) total *= s.size();
  p.values.resize(total);
  std::vector<std::size_t> args(arity);
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t r = c;
    for (std::size_t i = arity; i-- > 0;) {
      args[i] = r % s.size();
      r /= s.size();
    }
    p.values[c] = f(args);
  }
  p.lipschitz = empirical_lipschitz(p, s);
  return p;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

double SampledBanach::norm_of(const Vec& v) const { return raw_norm(norm, weights, v); }

std::string norm_name(NormKind k, bool weighted) {
  std::string s = k == NormKind::L1 ? "l1" : k == NormKind::L2 ? "l2" : "linf";
  return weighted ? "weighted_" + s : s;
}

NormKind parse_norm(const std::string& s) {
  std::string t = s.rfind("weighted_", 0) == 0 ? s.substr(9) : s;
  if (t == "l1") return NormKind::L1;
  if (t == "l2") return NormKind::L2;
  if (t == "linf") return NormKind::Linf;
  throw InputError("unknown norm '" + s + "'");
}

std::vector<std::string> validate_banach(const SampledBanach& b) {
  std::vector<std::string> out;
  if (b.dim == 0) out.push_back("dimension must be positive");
  if (!(b.radius_cap > 0)) out.push_back("radius_cap must be positive");
  if (!b.weights.empty()) {
    if (b.weights.size() != b.dim) out.push_back("weights must have one entry per coordinate");
    for (double w : b.weights)
      if (!(w > 0) || !std::isfinite(w)) out.push_back("weights must be positive");
  }
  if (!out.empty()) return out;
  bool zero = false;
  for (std::size_t i = 0; i < b.samples.size(); ++i) {
    const auto& v = b.samples[i];
    const std::string at = "sample " + std::to_string(i);
    if (v.size() != b.dim) {
      out.push_back(at + " has dimension " + std::to_string(v.size()));
      continue;
    }
    bool fin = true, z = true;
    for (auto c : v) {
      fin = fin && std::isfinite(c.real()) && std::isfinite(c.imag());
      if (b.field == Field::Real && c.imag() != 0.0) out.push_back(at + " is not real");
      z = z && c == cplx(0.0);
    }
    if (!fin) {
      out.push_back(at + " is not finite");
      continue;
    }
    zero = zero || z;
    if (b.norm_of(v) > b.radius_cap + kTol) out.push_back(at + " exceeds radius_cap");
  }
  if (!zero) out.push_back("the zero vector is missing");
  if (!out.empty()) return out;
  std::vector<cplx> lambdas{-1.0, 2.0, 0.5};
  if (b.field == Field::Complex) lambdas.push_back({0.0, 1.0});
  for (std::size_t i = 0; i < b.samples.size(); ++i) {
    const auto& x = b.samples[i];
    const double nx = b.norm_of(x);
    for (auto l : lambdas)
      if (std::abs(b.norm_of(lin(l, x, 0.0, x)) - std::abs(l) * nx) > kTol * (1 + nx))
        out.push_back("homogeneity fails at sample " + std::to_string(i));
    for (std::size_t j = 0; j < b.samples.size(); ++j) {
      const auto& y = b.samples[j];
      if (b.norm_of(lin(1.0, x, 1.0, y)) > nx + b.norm_of(y) + kTol)
        out.push_back("triangle inequality fails at samples " + std::to_string(i) + ", " +
                      std::to_string(j));
    }
  }
  return out;
}

double bm_phi(double r, double max_norm, double combo_norm) {
  const double cut = max_norm <= 0 ? 1.0 : clamp01(r - std::log(max_norm) / (r * r));
  const double c = 2.0 - 1.0 / r;
  const double main = combo_norm <= 0 ? -r : std::clamp(c * std::log(combo_norm), -r, r);
  return cut * main;
}

MetricStructure embound(const SampledBanach& b, const std::vector<cplx>& scalars,
                        const BmParams& bm) {
  if (auto v = validate_banach(b); !v.empty()) throw InputError("Banach sample: " + v.front());
  std::vector<cplx> sc = scalars;
  for (auto s : sc)
    if (b.field == Field::Real && s.imag() != 0.0)
      throw InputError("scalar " + scalar_name(s) + " is outside the real field");
  if (b.field == Field::Complex && std::find(sc.begin(), sc.end(), cplx(0, 1)) == sc.end())
    sc.push_back({0.0, 1.0});
  for (double r : bm.r_values)
    if (!(r > 0)) throw InputError("r values must be positive");
  for (auto s : bm.s_values)
    if (b.field == Field::Real && s.imag() != 0.0)
      throw InputError("scalar " + scalar_name(s) + " is outside the real field");

  const std::size_t n = b.samples.size();
  const std::size_t inf = n;
  std::vector<double> nrm(n);
  for (std::size_t i = 0; i < n; ++i) nrm[i] = b.norm_of(b.samples[i]);
  std::size_t zero = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (nrm[i] == 0.0) {
      zero = i;
      break;
    }

  MetricStructure m;
  Sort s;
  s.name = "V";
  for (std::size_t i = 0; i < n; ++i) s.points.push_back("v" + std::to_string(i));
  s.points.push_back("inf");
  s.metric.assign(n + 1, std::vector<double>(n + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s.metric[i][j] = emb_dist(b, b.samples[i], b.samples[j]);
    s.metric[i][inf] = s.metric[inf][i] = 1.0 / (1.0 + nrm[i]);
  }
  s.diameter_bound = 1.0;
  m.sorts.push_back(s);
  m.constants["zero"] = {0, zero};
  m.constants["inf"] = {0, inf};

  auto vec = [&](std::size_t i) -> const Vec& { return b.samples[i]; };
  auto any_inf = [&](const std::vector<std::size_t>& a) {
    return std::any_of(a.begin(), a.end(), [&](std::size_t x) { return x == inf; });
  };
  auto maxn = [&](const std::vector<std::size_t>& a) {
    double r = 0.0;
    for (auto x : a) r = std::max(r, nrm[x]);
    return r;
  };

  m.predicates.push_back(tabulate_pred("P", 3, "V", s, 0.0, 1.0, [&](const auto& a) {
    if (any_inf(a)) return 0.0;
    return theta(b.norm_of(sub(lin(1.0, vec(a[0]), 1.0, vec(a[1])), vec(a[2])))) / (1.0 + maxn(a));
  }));
  for (auto r : sc)
    m.predicates.push_back(
        tabulate_pred("S_" + scalar_name(r), 2, "V", s, 0.0, 1.0, [&](const auto& a) {
          if (any_inf(a)) return 0.0;
          return theta(b.norm_of(lin(r, vec(a[0]), -1.0, vec(a[1])))) / (1.0 + maxn(a));
        }));

  // phi_r(x,y,z) and the variants with some arguments replaced by zero.
  static const char* kPhiMasks[] = {"xyz", "xy0", "x0z", "0yz", "x00", "0y0", "00z"};
  for (double r : bm.r_values) {
    for (const char* mask : kPhiMasks) {
      std::vector<std::size_t> slots;
      for (std::size_t i = 0; i < 3; ++i)
        if (mask[i] != '0') slots.push_back(i);
      m.predicates.push_back(tabulate_pred(
          "phi_r" + num(r) + "_" + mask, slots.size(), "V", s, -r, r, [&](const auto& a) {
            if (any_inf(a)) return 0.0;
            std::vector<std::size_t> full(3, zero);
            for (std::size_t t = 0; t < slots.size(); ++t) full[slots[t]] = a[t];
            const double combo =
                b.norm_of(sub(lin(1.0, vec(full[0]), 1.0, vec(full[1])), vec(full[2])));
            return bm_phi(r, maxn(full), combo);
          }));
    }
    static const char* kPsiMasks[] = {"xy", "x0", "0y"};
    for (std::size_t si = 0; si < bm.s_values.size(); ++si) {
      const cplx sv = bm.s_values[si];
      for (const char* mask : kPsiMasks) {
        std::vector<std::size_t> slots;
        for (std::size_t i = 0; i < 2; ++i)
          if (mask[i] != '0') slots.push_back(i);
        m.predicates.push_back(tabulate_pred(
            "psi_r" + num(r) + "_s" + std::to_string(si) + "_" + mask, slots.size(), "V", s, -r, r,
            [&](const auto& a) {
              if (any_inf(a)) return 0.0;
              std::vector<std::size_t> full(2, zero);
              for (std::size_t t = 0; t < slots.size(); ++t) full[slots[t]] = a[t];
              return bm_phi(r, maxn(full), b.norm_of(lin(sv, vec(full[0]), -1.0, vec(full[1]))));
            }));
      }
    }
  }
  return m;
}

DistortionSystem bm_generators(const Signature& sig, const BmParams& bm) {
  for (double r : bm.r_values)
    if (!(r > 0)) throw InputError("r values must be positive");
  auto sys = builtin("bm", sig);
  double rmax = 0.0;
  for (double r : bm.r_values) rmax = std::max(rmax, r);
  sys.truncation["r_max"] = rmax;
  sys.truncation["s_count"] = static_cast<double>(bm.s_values.size());
  return sys;
}

SampledBanach radial_grid(std::size_t dim, Field field, NormKind norm, std::size_t directions,
                          int j_max, double radius_cap) {
  if (dim == 0 || directions == 0 || j_max < 0) throw InputError("bad radial grid parameters");
  SampledBanach b;
  b.dim = dim;
  b.field = field;
  b.norm = norm;
  b.samples.push_back(Vec(dim, 0.0));
  const double pi = std::acos(-1.0);
  double top = 0.0;
  for (std::size_t k = 0; k < directions; ++k) {
    Vec u(dim, 0.0);
    const double t = 2 * pi * static_cast<double>(k) / static_cast<double>(directions);
    u[0] = std::cos(t);
    if (dim > 1) u[1] = std::sin(t);
    for (auto& c : u)
      if (std::abs(c) < 1e-15) c = 0.0;
    const double nu = b.norm_of(u);
    for (int j = -j_max; j <= j_max; ++j) {
      const double sc = std::exp(j / 2.0) / nu;
      Vec v(dim);
      for (std::size_t i = 0; i < dim; ++i) v[i] = u[i] * sc;
      top = std::max(top, b.norm_of(v));
      b.samples.push_back(v);
    }
  }
  b.radius_cap = radius_cap > 0 ? radius_cap : top * (1 + 1e-12);
  return b;
}

SampledBanach apply_map(const SampledBanach& b, const Mat& a, NormKind target_norm,
                        std::vector<double> target_weights) {
  if (a.size() != b.dim) throw InputError("matrix size does not match the dimension");
  SampledBanach o;
  o.dim = b.dim;
  o.field = b.field;
  o.norm = target_norm;
  o.weights = std::move(target_weights);
  double top = 0.0;
  for (const auto& x : b.samples) {
    o.samples.push_back(apply(a, x));
    top = std::max(top, o.norm_of(o.samples.back()));
  }
  o.radius_cap = std::max(top * (1 + 1e-12), 1e-12);
  return o;
}

Mat inverse(const Mat& a) {
  const EMat m = to_eigen(a);
  Eigen::FullPivLU<EMat> lu(m);
  if (m.rows() == 0 || !lu.isInvertible()) throw InputError("matrix is singular");
  return from_eigen(lu.inverse());
}

LinearCorrelation linear_map_correlation(const SampledBanach& b1, StructurePtr m1,
                                         const SampledBanach& b2, StructurePtr m2, const Mat& a) {
  inverse(a);
  if (a.size() != b1.dim || b1.dim != b2.dim) throw InputError("matrix size does not match");
  const std::size_t n1 = b1.samples.size(), n2 = b2.samples.size();
  if (m1->sorts.size() != 1 || m1->sorts[0].size() != n1 + 1 || m2->sorts.size() != 1 ||
      m2->sorts[0].size() != n2 + 1)
    throw InputError("structures are not the emboundments of the given samples");
  std::vector<Vec> img;
  for (const auto& x : b1.samples) img.push_back(apply(a, x));
  LinearCorrelation out{Correlation::empty(m1, m2), 0.0};
  auto& rel = out.correlation.relation[0];
  for (std::size_t i = 0; i < n1; ++i) {
    std::size_t best = 0;
    double bd = kInf;
    for (std::size_t j = 0; j < n2; ++j) {
      const double d = emb_dist(b2, img[i], b2.samples[j]);
      if (d < bd) bd = d, best = j;
    }
    rel.set(i, best);
    out.residual = std::max(out.residual, bd);
  }
  for (std::size_t j = 0; j < n2; ++j) {
    std::size_t best = 0;
    double bd = kInf;
    for (std::size_t i = 0; i < n1; ++i) {
      const double d = emb_dist(b2, img[i], b2.samples[j]);
      if (d < bd) bd = d, best = i;
    }
    rel.set(best, j);
    out.residual = std::max(out.residual, bd);
  }
  rel.set(n1, n2);
  return out;
}

double operator_norm(const Mat& a, const SampledBanach& from, const SampledBanach& to) {
  EMat m = to_eigen(a);
  const auto n = m.rows();
  if (static_cast<std::size_t>(n) != from.dim || from.dim != to.dim)
    throw InputError("matrix size does not match the dimension");
  // Fold the weights in: |x|_w = |W x|, so the map becomes W_to A W_from^-1.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!to.weights.empty()) m(i, j) *= to.weights[i];
      if (!from.weights.empty()) m(i, j) /= from.weights[j];
    }
  auto tnorm = [&](const EVec& v) {
    Vec w(v.data(), v.data() + v.size());
    return raw_norm(to.norm, {}, w);
  };
  const bool real = from.field == Field::Real;
  double best = 0.0;
  if (from.norm == NormKind::L1) {
    for (Eigen::Index j = 0; j < n; ++j) best = std::max(best, tnorm(m.col(j)));
    return best;
  }
  if (from.norm == NormKind::L2 && to.norm == NormKind::L2) {
    Eigen::JacobiSVD<EMat> svd(m);
    return svd.singularValues()(0);
  }
  if (from.norm == NormKind::L2 && to.norm == NormKind::Linf) {
    for (Eigen::Index i = 0; i < n; ++i) best = std::max(best, m.row(i).norm());
    return best;
  }
  // Remaining real cases attain the sup at sign vectors (for 2 -> 1 via the
  // adjoint, which maps linf to l2).
  if (real && n <= 20) {
    const bool dual = from.norm == NormKind::L2;
    const EMat& op = m;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      EVec s(n);
      for (Eigen::Index i = 0; i < n; ++i) s(i) = (mask >> i) & 1 ? -1.0 : 1.0;
      best = std::max(best, dual ? (op.adjoint() * s).norm() : tnorm(op * s));
    }
    return best;
  }
  // Complex fallback: random search over the unit sphere of the domain.
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200000; ++t) {
    EVec x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = cplx(g(rng), real ? 0.0 : g(rng));
    if (from.norm == NormKind::Linf)
      for (Eigen::Index i = 0; i < n; ++i) x(i) /= std::abs(x(i));
    Vec xv(x.data(), x.data() + n);
    const double nx = raw_norm(from.norm, {}, xv);
    if (nx > 0) best = std::max(best, tnorm(m * x) / nx);
  }
  return best;
}

Rebalanced rebalance(const Mat& a, const SampledBanach& from, const SampledBanach& to) {
  const Mat ai = inverse(a);
  const double na = operator_norm(a, from, to);
  const double ni = operator_norm(ai, to, from);
  Rebalanced r;
  r.factor = std::sqrt(ni / na);
  r.map = a;
  for (auto& row : r.map)
    for (auto& c : row) c *= r.factor;
  r.norm = na * r.factor;
  r.inv_norm = ni / r.factor;
  return r;
}

double generator_modulus(const DistortionSystem& sys) {
  double best = 0.0;
  for (const auto& g : sys.generators) {
    double s = 0.0;
    for (const auto& [v, l] : infer_modulus(g).lipschitz) s += l;
    best = std::max(best, s);
  }
  return best;
}

ForwardCheck check_bm_forward(const SampledBanach& b1, StructurePtr m1, const SampledBanach& b2,
                              StructurePtr m2, const DistortionSystem& sys, double eps,
                              double slack) {
  const std::size_t n1 = b1.samples.size(), n2 = b2.samples.size();
  const std::size_t z1 = m1->constants.at("zero").point, z2 = m2->constants.at("zero").point;
  const std::size_t i1 = n1, i2 = n2;
  ForwardCheck out;
  std::vector<AnchorPair> bad;
  for (std::size_t a = 0; a <= n1; ++a)
    for (std::size_t b = 0; b <= n2; ++b) {
      bool ok;
      if (a == i1 || b == i2) ok = a == i1 && b == i2;
      else if (a == z1 || b == z2) ok = a == z1 && b == z2;
      else
        ok = 2 * std::abs(std::log(b1.norm_of(b1.samples[a]) / b2.norm_of(b2.samples[b]))) <=
             eps + slack;
      if (!ok) bad.push_back({0, a, b});
    }
  out.bad_cells = bad.size();
  out.searches = bad.size();
  // Independent anchored searches; the report names the first offending cell.
  std::vector<std::optional<double>> hit(bad.size());
  std::vector<std::string> err(bad.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < static_cast<long long>(bad.size()); ++i) {
    SearchOptions o;
    o.anchors = {bad[i]};
    o.cutoff = eps;
    o.first_feasible = true;
    o.seed_incumbent = false;
    try {
      const auto r = rho_exact(sys, m1, m2, o);
      if (r.witness) hit[i] = r.value;
    } catch (const std::exception& e) {
      err[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < bad.size(); ++i) {
    if (!err[i].empty()) throw InputError(err[i]);
    if (hit[i]) {
      out.ok = false;
      out.message = "correlation with distortion " + num(*hit[i]) + " <= " + num(eps) + " relates " +
                    m1->sorts[0].points[bad[i].left] + " and " + m2->sorts[0].points[bad[i].right];
      return out;
    }
  }
  return out;
}

MetricStructure kadets_structure(const SampledBanach& b,
                                 const std::vector<std::vector<double>>& coeffs) {
  if (auto v = validate_banach(b); !v.empty()) throw InputError("Banach sample: " + v.front());
  MetricStructure m;
  Sort s;
  s.name = "V";
  const std::size_t n = b.samples.size();
  double top = 0.0, diam = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s.points.push_back("v" + std::to_string(i));
    top = std::max(top, b.norm_of(b.samples[i]));
  }
  s.metric.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      s.metric[i][j] = b.norm_of(sub(b.samples[i], b.samples[j]));
      diam = std::max(diam, s.metric[i][j]);
    }
  s.diameter_bound = std::max(diam, 1e-12);
  m.sorts.push_back(s);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const auto& lam = coeffs[j];
    if (lam.empty()) throw InputError("empty coefficient vector");
    double l1 = 0.0;
    for (double l : lam) l1 += std::abs(l);
    if (l1 > 1 + kTol) throw InputError("coefficient vector with absolute sum above 1");
    Predicate p;
    p.name = "kad" + std::to_string(j);
    p.arity = lam.size();
    p.arg_sorts.assign(lam.size(), "V");
    p.range_lo = 0.0;
    p.range_hi = l1 * top;
    for (double l : lam) p.lipschitz.push_back(std::abs(l));
    std::size_t total = 1;
    for (std::size_t i = 0; i < lam.size(); ++i) total *= n;
    p.values.resize(total);
    for (std::size_t c = 0; c < total; ++c) {
      Vec acc(b.dim, 0.0);
      std::size_t r = c;
      for (std::size_t i = lam.size(); i-- > 0;) {
        const auto& x = b.samples[r % n];
        r /= n;
        for (std::size_t k = 0; k < b.dim; ++k) acc[k] += lam[i] * x[k];
      }
      p.values[c] = b.norm_of(acc);
    }
    m.predicates.push_back(std::move(p));
  }
  const std::size_t zero = [&] {
    for (std::size_t i = 0; i < n; ++i)
      if (b.norm_of(b.samples[i]) == 0.0) return i;
    return std::size_t{0};
  }();
  m.constants["zero"] = {0, zero};
  return m;
}

std::vector<std::vector<double>> kadets_coefficients(std::size_t k, std::size_t max_len) {
  if (max_len == 0 || max_len > 2) throw InputError("coefficient vectors of length 1 or 2 only");
  std::vector<std::vector<double>> out{{1.0}};
  if (max_len < 2) return out;
  const double den = std::ldexp(1.0, static_cast<int>(k));
  const auto steps = static_cast<std::size_t>(den);
  for (std::size_t m = 1; m < steps; ++m) {
    const double a = static_cast<double>(m) / den;
    out.push_back({a, 1.0 - a});
    out.push_back({a, a - 1.0});
  }
  return out;
}

}  // namespace aiso
