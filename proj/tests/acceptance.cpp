// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "aiso/backforth.hpp"
#include "aiso/corrsearch.hpp"
#include "aiso/distsys.hpp"
#include "aiso/embound.hpp"
#include "aiso/io.hpp"
#include "aiso/kernels.hpp"
#include "aiso/scenarios.hpp"
#include "support.hpp"

using namespace aiso;
using test::share;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome scenario(const std::vector<ScenarioLine>& lines) {
  Outcome o;
  std::size_t passed = 0;
  for (const auto& l : lines) {
    if (l.ok) ++passed;
    else o.fail(l.check + ": " + l.record.dump());
  }
  if (o.ok) o.detail = std::to_string(passed) + " checks";
  else o.detail = std::to_string(passed) + "/" + std::to_string(lines.size()) + " checks; first failure " + o.detail;
  return o;
}

Outcome gh_closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  std::size_t n = 0;
  for (int i = 1; i <= 8; ++i)
    for (int j = 1; j <= 8; ++j) {
      const double a = 0.25 * i, b = 0.25 * j;
      auto m = share(test::two_point(a)), p = share(test::two_point(b));
      const double v = rho_exact(builtin("gh", m->signature()), m, p).value;
      ++n;
      if (std::abs(v - 0.5 * std::abs(a - b)) > 1e-9)
        o.fail("2pt(" + fmt(a) + ") vs 2pt(" + fmt(b) + ") gave " + fmt(v));
    }
  std::mt19937_64 rng(101);
  for (int t = 0; t < 40; ++t) {
    auto s = share(test::random_structure(rng, 1 + t % 5, false));
    auto pt = share(test::one_point(s->sorts[0].diameter_bound));
    double diam = 0.0;
    for (const auto& r : s->sorts[0].metric)
      for (double d : r) diam = std::max(diam, d);
    const auto sys = builtin("gh", s->signature());
    const double v = rho_exact(sys, pt, s).value;
    ++n;
    if (std::abs(v - 0.5 * diam) > 1e-9) o.fail("point vs " + std::to_string(s->sorts[0].size()) + " points gave " + fmt(v));
    if (std::abs(v - test::brute_rho(sys, pt, s)) > 1e-9) o.fail("oracle mismatch");
  }
  const double secs = seconds_since(t0);
  if (secs >= 1.0) o.fail("took " + fmt(secs) + " s");
  if (o.ok) o.detail = std::to_string(n) + " instances in " + fmt(secs) + " s";
  return o;
}

// Per builtin, a generator of structures sharing one signature.
struct Family {
  std::string system;
  std::function<StructurePtr(std::mt19937_64&)> make;
};

std::vector<Family> families() {
  auto plane = [](std::mt19937_64& rng, std::size_t count) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SampledBanach b;
    b.norm = static_cast<NormKind>(rng() % 3);
    b.radius_cap = 3.0;
    b.samples.push_back({0.0, 0.0});
    while (b.samples.size() < count) b.samples.push_back({u(rng), u(rng)});
    return b;
  };
  const auto kc = kadets_coefficients(2, 2);
  std::vector<Family> out;
  for (const char* s : {"gh", "lip", "iu", "fghk", "eghk"})
    out.push_back({s, [](std::mt19937_64& rng) { return share(test::random_structure(rng, 1 + rng() % 4)); }});
  out.push_back({"kadets", [=](std::mt19937_64& rng) { return share(kadets_structure(plane(rng, 1 + rng() % 4), kc)); }});
  out.push_back({"bm", [=](std::mt19937_64& rng) {
                   return share(embound(plane(rng, 1 + rng() % 3), {1.0, -1.0}, BmParams{{1, 2}, {1.0, -1.0}}));
                 }});
  return out;
}

Outcome pseudo_metric() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  std::mt19937_64 rng(202);
  std::size_t n = 0;
  for (const auto& f : families())
    for (int t = 0; t < 50; ++t) {
      auto a = f.make(rng), b = f.make(rng), c = f.make(rng);
      const auto sys = builtin(f.system, a->signature(), {{"n_max", 4}});
      const double ab = rho_exact(sys, a, b).value, ba = rho_exact(sys, b, a).value;
      const double bc = rho_exact(sys, b, c).value, ac = rho_exact(sys, a, c).value;
      ++n;
      if (ab != ba) o.fail(f.system + ": asymmetric " + fmt(ab) + " vs " + fmt(ba));
      if (ac > ab + bc + 1e-9) o.fail(f.system + ": triangle " + fmt(ac) + " > " + fmt(ab) + " + " + fmt(bc));
    }
  const double secs = seconds_since(t0);
  if (secs >= 60.0) o.fail("took " + fmt(secs) + " s");
  if (o.ok) o.detail = std::to_string(n) + " triples over 7 systems in " + fmt(secs) + " s";
  return o;
}

Outcome quantifier_safety() {
  Outcome o;
  std::mt19937_64 rng(303);
  const char* names[] = {"gh", "iu", "fghk", "lip", "eghk"};
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    auto a = share(test::random_structure(rng, 2 + t % 3));
    auto b = share(test::random_structure(rng, 2 + (t / 3) % 3));
    auto sys = builtin(names[t % 5], a->signature(), {{"n_max", 3}});
    Correlation c = Correlation::all(a, b);
    for (std::size_t i = 0; i < a->sorts[0].size(); ++i)
      for (std::size_t j = 0; j < b->sorts[0].size(); ++j)
        if (rng() % 3 == 0) c.relation[0].set(i, j, false);
    if (!is_correlation(c).ok) c = Correlation::all(a, b);
    const double before = distortion(sys, c).value;
    auto ext = sys;
    for (const auto& g : sys.generators) {
      for (const auto& [v, s] : g->free) {
        ext.add(fm::sup(v, s, g));
        ext.add(fm::inf(v, s, g));
      }
      ext.add(fm::max(g, sys.generators[0]));
      ext.add(fm::min(g, sys.generators.back()));
    }
    worst = std::max(worst, std::abs(distortion(ext, c).value - before));
  }
  if (worst > 1e-9) o.fail("distortion moved by " + fmt(worst));
  else o.detail = "100 trials, max change " + fmt(worst);
  return o;
}

Outcome back_and_forth() {
  Outcome o;
  std::mt19937_64 rng(404);
  const auto w = WeakModulus::ones();
  std::size_t n = 0;
  for (int t = 0; t < 30; ++t) {
    auto m = share(test::random_structure(rng, 1 + t % 3));
    auto p = share(test::random_structure(rng, 1 + (t / 3) % 3));
    const char* names[] = {"gh", "fghk", "iu"};
    const auto sys = builtin(names[t % 3], m->signature(), {{"n_max", 3}});
    double prev = 0.0;
    for (std::size_t k = 0; k <= 3; ++k) {
      const double r = r_finite(sys, w, *m, *p, k);
      if (r + 1e-12 < prev) o.fail("r_" + std::to_string(k) + " decreased");
      prev = r;
    }
    const double cap = r_infty_capped(sys, w, *m, *p, 3).empty_value();
    const double rho = rho_exact(sys, m, p).value;
    if (cap > rho + 1e-9) o.fail("r_inf " + fmt(cap) + " > rho " + fmt(rho));
    ++n;
  }
  auto one = share(test::one_point()), two = share(test::two_point(2));
  const auto gh = builtin("gh", one->signature());
  const double r1 = r_finite(gh, w, *one, *two, 1), r2 = r_finite(gh, w, *one, *two, 2);
  if (r1 != 0.0 || r2 != 1.0) o.fail("1pt/2pt: r1 = " + fmt(r1) + ", r2 = " + fmt(r2));
  if (o.ok) o.detail = std::to_string(n) + " pairs; 1pt/2pt r1 = 0, r2 = 1";
  return o;
}

Outcome timed(const std::function<Outcome()>& f, double limit) {
  const auto t0 = std::chrono::steady_clock::now();
  auto o = f();
  const double secs = seconds_since(t0);
  if (limit > 0 && secs >= limit) o.fail("took " + fmt(secs) + " s");
  o.detail += " in " + fmt(secs) + " s";
  return o;
}

Outcome modulus_soundness() {
  Outcome o;
  std::mt19937_64 rng(808);
  double worst = -1.0;
  for (int t = 0; t < 1000; ++t) {
    const auto m = test::random_structure(rng, 2 + t % 4);
    test::FormulaGen gen(m.signature(), rng);
    auto f = gen(1 + t % 4);
    const auto mod = infer_modulus(f);
    std::uniform_int_distribution<std::size_t> pt(0, m.sorts[0].size() - 1);
    Assignment a, b;
    for (const auto& [v, s] : f->free) a[v] = {0, pt(rng)}, b[v] = {0, pt(rng)};
    double bound = 0.0;
    for (const auto& [v, l] : mod.lipschitz) bound += l * m.dist(0, a[v].point, b[v].point);
    const double gap = std::abs(evaluate(f, m, a) - evaluate(f, m, b)) - bound;
    worst = std::max(worst, gap);
    if (gap > 1e-9) o.fail(print(f));
  }
  if (o.ok) o.detail = "1000 trials, max excess " + fmt(worst);
  return o;
}

Outcome determinism() {
  Outcome o;
  std::vector<StructurePtr> corpus;
  for (const auto& e : std::filesystem::directory_iterator(DATA_DIR)) {
    try {
      auto m = load_structure(e.path().string());
      if (validate_structure(m).empty() && m.predicates.empty()) corpus.push_back(share(std::move(m)));
    } catch (const InputError&) {
    }
  }
  std::mt19937_64 rng(1010);
  std::vector<StructurePtr> clouds;
  for (int t = 0; t < 6; ++t) clouds.push_back(share(test::random_structure(rng, 2 + t % 3)));
  std::size_t n = 0;
  auto compare = [&](const DistortionSystem& sys, StructurePtr a, StructurePtr b) {
    std::vector<std::string> runs;
    for (int threads : {1, 4}) {
      kern::set_threads(threads);
      const auto r = rho_exact(sys, a, b);
      const auto t = r_infty_capped(sys, WeakModulus::ones(), *a, *b, 2);
      Json j = {{"value", r.value}, {"nodes", r.nodes}, {"stab", t.stabilization}};
      j["witness"] = r.witness ? correlation_to_json(*r.witness) : Json(nullptr);
      for (const auto& lv : t.levels)
        for (const auto& row : lv)
          for (double v : row) j["table"].push_back(std::isnan(v) ? Json("nan") : Json(v));
      runs.push_back(j.dump());
    }
    kern::set_threads(0);
    ++n;
    if (runs[0] != runs[1]) o.fail("thread counts disagree");
  };
  for (const auto& a : corpus)
    for (const auto& b : corpus) compare(builtin("gh", a->signature()), a, b);
  for (std::size_t i = 0; i + 1 < clouds.size(); ++i)
    for (const char* s : {"gh", "fghk", "iu"})
      compare(builtin(s, clouds[i]->signature(), {{"n_max", 3}}), clouds[i], clouds[i + 1]);
  if (o.ok) o.detail = std::to_string(n) + " pairs identical at 1 and 4 threads";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "GH closed forms", gh_closed_forms},
      {2, "pseudo-metric suite", pseudo_metric},
      {3, "quantifier safety", quantifier_safety},
      {4, "back-and-forth", back_and_forth},
      {5, "Banach-Mazur backward", [] { return timed([] { return scenario(bm_backward_scenario()); }, 30.0); }},
      {6, "Banach-Mazur forward", [] { return timed([] { return scenario(bm_forward_scenario()); }, 0.0); }},
      {7, "IU pathology", [] { return scenario(iu_scenario()); }},
      {8, "modulus soundness", modulus_soundness},
      {9, "fGHK", [] { return scenario(fghk_scenario()); }},
      {10, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.ok) ++failed;
    std::printf("%s %d %s: %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
