// Command-line front end: validation, evaluation, distances, back-and-forth
// tables, emboundments and the demo scenarios.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "aiso/backforth.hpp"
#include "aiso/corrsearch.hpp"
#include "aiso/distsys.hpp"
#include "aiso/embound.hpp"
#include "aiso/formula.hpp"
#include "aiso/io.hpp"
#include "aiso/kernels.hpp"
#include "aiso/scenarios.hpp"

using namespace aiso;

namespace {

enum Exit { kOk = 0, kViolation = 1, kIo = 2 };

struct Output {
  std::string format = "json";
  std::string path;
  std::ofstream file;

  std::ostream& os() { return file.is_open() ? static_cast<std::ostream&>(file) : std::cout; }

  void emit(const Json& rec) {
    if (format == "json") {
      os() << rec.dump() << "\n";
      return;
    }
    for (const auto& [k, v] : rec.items()) os() << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    os() << "\n";
  }
};

// Finite doubles only; JSON has no infinity.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(v > 0 ? "inf" : "-inf"); }

struct SystemOpts {
  std::string name = "gh";
  std::string file;
  std::vector<std::string> trunc;
};

std::map<std::string, double> parse_trunc(const std::vector<std::string>& kv) {
  std::map<std::string, double> t;
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw IoError("truncation must be key=value, got '" + s + "'");
    try {
      t[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    } catch (const std::exception&) {
      throw IoError("bad truncation value in '" + s + "'");
    }
  }
  return t;
}

DistortionSystem make_system(const SystemOpts& o, const Signature& sig) {
  if (!o.file.empty()) {
    auto j = read_json(o.file);
    if (!o.trunc.empty())
      for (const auto& [k, v] : parse_trunc(o.trunc)) j["truncation"][k] = v;
    return system_from_json(j, sig);
  }
  return builtin(o.name, sig, parse_trunc(o.trunc));
}

StructurePtr load_valid(const std::string& path) {
  auto m = load_structure(path);
  require_valid(m);
  return std::make_shared<const MetricStructure>(std::move(m));
}

std::vector<AnchorPair> parse_pairs(const MetricStructure& m, const MetricStructure& n,
                                    const std::vector<std::string>& specs) {
  std::vector<AnchorPair> out;
  for (const auto& s : specs) {
    // sort:left:right, or left:right for single-sort structures.
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() == 2) parts.insert(parts.begin(), m.sorts.at(0).name);
    if (parts.size() != 3) throw IoError("pairs are sort:left:right, got '" + s + "'");
    const auto si = resolve_sort(m, parts[0]);
    auto point = [&](const MetricStructure& x, const std::string& p) -> std::size_t {
      if (auto i = x.find_point(si, p)) return *i;
      try {
        std::size_t used = 0;
        const auto v = std::stoul(p, &used);
        if (used == p.size()) return resolve_point(x, si, Json(v));
      } catch (const std::logic_error&) {
      }
      throw IoError("unknown point '" + p + "'");
    };
    out.push_back({si, point(m, parts[1]), point(n, parts[2])});
  }
  return out;
}

Json witness_json(const DistortionSystem& sys, const MetricStructure& m, const MetricStructure& n,
                  const std::optional<DistortionWitness>& w) {
  if (!w) return nullptr;
  Json t = Json::array();
  for (const auto& e : w->tuple)
    t.push_back({{"var", "x" + std::to_string(e.var)},
                 {"sort", m.sorts[e.sort].name},
                 {"left", m.sorts[e.sort].points[e.left]},
                 {"right", n.sorts[e.sort].points[e.right]}});
  return {{"generator", w->generator}, {"formula", print(sys.generators[w->generator])}, {"tuple", t}};
}

Json trunc_json(const std::map<std::string, double>& t) {
  Json j = Json::object();
  for (const auto& [k, v] : t) j[k] = v;
  return j;
}

std::vector<std::string> labels(const std::vector<PointRef>& pts, const std::vector<std::size_t>& idx,
                                const MetricStructure& s) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(s.sorts[pts[i].sort].name + "." + s.sorts[pts[i].sort].points[pts[i].point]);
  return out;
}

WeakModulus make_omega(const std::vector<double>& w, bool shift) {
  WeakModulus o{w.empty() ? std::vector<double>{1.0} : w, shift || w.empty()};
  validate_modulus(o);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate isomorphism of finite metric structures"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  Output out;
  app.add_option("--threads", threads, "worker threads (0: hardware count)")->capture_default_str();
  app.add_option("--format", out.format, "json (line-delimited records) or human")
      ->check(CLI::IsMember({"json", "human"}))
      ->capture_default_str();
  app.add_option("-o,--output", out.path, "write records to this file");

  SystemOpts sysopt;
  auto add_system = [&](CLI::App* c) {
    c->add_option("--system", sysopt.name, "builtin: gh, lip, iu, fghk, eghk, kadets, bm")->capture_default_str();
    c->add_option("--system-file", sysopt.file, "system file (overrides --system)");
    c->add_option("--trunc", sysopt.trunc, "truncation override key=value (repeatable)");
  };

  std::string path, left, right, corr, formula;
  std::vector<std::string> assigns, anchors, forbidden;

  auto* validate = app.add_subcommand("validate", "check structure invariants");
  validate->add_option("path", path, "structure file")->required();

  auto* eval = app.add_subcommand("eval", "evaluate a formula");
  eval->add_option("--structure", path, "structure file")->required();
  eval->add_option("--formula", formula, "formula in the s-expression syntax")->required();
  eval->add_option("--assign", assigns, "x<i>=point (repeatable)");

  auto* dis = app.add_subcommand("dis", "distortion of a correlation");
  dis->add_option("--left", left)->required();
  dis->add_option("--right", right)->required();
  dis->add_option("--correlation", corr)->required();
  add_system(dis);

  bool heuristic = false, force = false, first_feasible = false;
  std::size_t budget = 400, max_cells = 36;
  std::uint64_t seed = 1;
  std::optional<double> cutoff;
  auto* rho = app.add_subcommand("rho", "distance: infimum of distortion over correlations");
  rho->add_option("--left", left)->required();
  rho->add_option("--right", right)->required();
  add_system(rho);
  rho->add_flag("--heuristic", heuristic, "local search upper bound instead of exact search");
  rho->add_option("--budget", budget, "local-search evaluations")->capture_default_str();
  rho->add_option("--seed", seed, "local-search seed")->capture_default_str();
  rho->add_option("--anchor", anchors, "required pair sort:left:right (repeatable)");
  rho->add_option("--forbid", forbidden, "excluded pair sort:left:right (repeatable)");
  rho->add_option("--cutoff", cutoff, "only accept correlations with distortion <= cutoff");
  rho->add_flag("--first-feasible", first_feasible, "with --cutoff: stop at the first accepted correlation");
  rho->add_option("--max-cells", max_cells, "size guard: cells per sort")->capture_default_str();
  rho->add_flag("--force", force, "ignore the size guard");

  std::optional<std::size_t> rounds;
  bool fixpoint = false, dump = false, shift = false;
  std::size_t k = 3;
  std::vector<double> omega;
  auto* baf = app.add_subcommand("baf", "back-and-forth pseudo-metrics");
  baf->add_option("--left", left)->required();
  baf->add_option("--right", right)->required();
  add_system(baf);
  auto* r_opt = baf->add_option("--rounds", rounds, "finite number of rounds");
  auto* f_opt = baf->add_flag("--fixpoint", fixpoint, "iterate to the capped fixed point");
  r_opt->excludes(f_opt);
  baf->add_option("--k", k, "depth cap (tuple length)")->capture_default_str();
  baf->add_option("--omega", omega, "weak modulus weights")->delimiter(',');
  baf->add_flag("--shift-increasing", shift, "declare the weights nondecreasing");
  baf->add_flag("--dump", dump, "emit every table row");

  auto* scott = app.add_subcommand("scott", "capped Scott rank of a pair");
  scott->add_option("--left", left)->required();
  scott->add_option("--right", right, "defaults to --left");
  add_system(scott);
  scott->add_option("--k", k, "depth cap")->capture_default_str();
  scott->add_option("--omega", omega, "weak modulus weights")->delimiter(',');
  scott->add_flag("--shift-increasing", shift);

  std::string banach, target, map, struct_out;
  std::vector<double> scalars{1.0, -1.0};
  auto* emb = app.add_subcommand("embound", "emboundment of a sampled normed space");
  emb->add_option("--banach", banach, "normed-space sample file")->required();
  emb->add_option("--scalars", scalars, "real scalars for S_r")->delimiter(',')->capture_default_str();
  emb->add_option("--structure-out", struct_out, "write the embounded structure here");
  emb->add_option("--target", target, "second normed-space sample for --map");
  emb->add_option("--map", map, "row-major matrix file A; reports dis_BM of its correlation");

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "run a demo scenario");
  demo->add_option("name", demo_name, "bm, iu or fghk")->required()->check(CLI::IsMember({"bm", "iu", "fghk"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kIo;
  }

  try {
    if (!out.path.empty()) {
      out.file.open(out.path);
      if (!out.file) throw IoError("cannot write '" + out.path + "'");
    }
    kern::set_threads(threads);

    if (*validate) {
      const auto m = load_structure(path);
      const auto v = validate_structure(m);
      Json vs = Json::array();
      for (const auto& x : v) vs.push_back({{"where", x.where}, {"tuple", x.tuple}, {"message", x.message}});
      out.emit({{"command", "validate"}, {"path", path}, {"valid", v.empty()}, {"violations", vs}});
      return v.empty() ? kOk : kViolation;
    }

    if (*eval) {
      const auto m = load_valid(path);
      const auto f = parse(formula, m->signature());
      Assignment a;
      for (const auto& s : assigns) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || s[0] != 'x') throw IoError("assignments are x<i>=point, got '" + s + "'");
        const std::size_t var = std::stoul(s.substr(1, eq - 1));
        auto it = f->free.find(var);
        if (it == f->free.end()) throw IoError("x" + std::to_string(var) + " is not free in the formula");
        const auto si = *m->find_sort(it->second);
        const auto label = s.substr(eq + 1);
        auto p = m->find_point(si, label);
        if (!p) throw IoError("unknown point '" + label + "'");
        a[var] = {si, *p};
      }
      const double v = evaluate(f, *m, a);
      const auto mod = infer_modulus(f);
      Json lip = Json::object();
      for (const auto& [i, l] : mod.lipschitz) lip["x" + std::to_string(i)] = l;
      out.emit({{"command", "eval"},
                {"formula", print(f)},
                {"value", num(v)},
                {"lipschitz", lip},
                {"range", {num(mod.range_lo), num(mod.range_hi)}}});
      return kOk;
    }

    if (*dis) {
      const auto m = load_valid(left), n = load_valid(right);
      const auto sys = make_system(sysopt, m->signature());
      const auto c = correlation_from_json(read_json(corr), m, n);
      const auto chk = is_correlation(c);
      if (!chk.ok) {
        out.emit({{"command", "dis"}, {"error", "not a correlation: " + chk.reason}});
        return kViolation;
      }
      const auto r = distortion(sys, c);
      out.emit({{"command", "dis"},
                {"system", sys.name},
                {"value", num(r.value)},
                {"witness", witness_json(sys, *m, *n, r.witness)},
                {"truncation", trunc_json(sys.truncation)}});
      return kOk;
    }

    if (*rho) {
      const auto m = load_valid(left), n = load_valid(right);
      const auto sys = make_system(sysopt, m->signature());
      const auto anc = parse_pairs(*m, *n, anchors);
      SearchResult r;
      if (heuristic) {
        r = rho_heuristic(sys, m, n, budget, seed, anc);
      } else {
        SearchOptions o;
        o.anchors = anc;
        o.forbidden = parse_pairs(*m, *n, forbidden);
        o.cutoff = cutoff;
        o.first_feasible = first_feasible;
        o.force = force;
        o.max_cells = max_cells;
        o.seed = seed;
        o.budget = budget;
        r = rho_exact(sys, m, n, o);
      }
      out.emit({{"command", "rho"},
                {"system", sys.name},
                {"mode", heuristic ? "heuristic" : "exact"},
                {"value", num(r.value)},
                {"exact", r.exact},
                {"nodes", r.nodes},
                {"witness", r.witness ? correlation_to_json(*r.witness) : Json(nullptr)},
                {"truncation", trunc_json(r.truncation)}});
      return kOk;
    }

    if (*baf || *scott) {
      const auto m = load_valid(left);
      const auto n = right.empty() ? m : load_valid(right);
      const auto sys = make_system(sysopt, m->signature());
      const auto w = make_omega(omega, shift);
      Json wj = {{"weights", w.weights}, {"shift_increasing", w.shift_increasing}};
      if (*baf && rounds) {
        const double v = r_finite(sys, w, *m, *n, *rounds, std::max<std::size_t>(k, 4));
        out.emit({{"command", "baf"},
                  {"system", sys.name},
                  {"rounds", *rounds},
                  {"value", num(v)},
                  {"omega", wj},
                  {"truncation", trunc_json(sys.truncation)}});
        return kOk;
      }
      if (*baf && !fixpoint) throw IoError("baf needs --rounds or --fixpoint");
      const auto t = r_infty_capped(sys, w, *m, *n, k);
      if (*scott) {
        out.emit({{"command", "scott"},
                  {"system", sys.name},
                  {"k", k},
                  {"scott_rank", scott_rank_capped(t)},
                  {"empty_value", num(t.empty_value())},
                  {"omega", wj},
                  {"truncation", trunc_json(sys.truncation)}});
        return kOk;
      }
      if (dump) {
        const auto pm = global_points(*m), pn = global_points(*n);
        for (std::size_t alpha = 0; alpha < t.levels.size(); ++alpha)
          for (std::size_t len = 0; len < t.levels[alpha].size(); ++len)
            for (std::size_t c = 0; c < t.levels[alpha][len].size(); ++c) {
              const double v = t.levels[alpha][len][c];
              if (std::isnan(v)) continue;
              std::vector<std::size_t> a, b;
              t.decode(len, c, a, b);
              out.emit({{"alpha", alpha}, {"left", labels(pm, a, *m)}, {"right", labels(pn, b, *n)}, {"value", v}});
            }
      }
      out.emit({{"command", "baf"},
                {"system", sys.name},
                {"k", k},
                {"empty_value", num(t.empty_value())},
                {"stabilization", t.stabilization},
                {"omega", wj},
                {"truncation", trunc_json(sys.truncation)}});
      return kOk;
    }

    if (*emb) {
      const auto b = banach_from_json(read_json(banach));
      if (auto v = validate_banach(b); !v.empty()) {
        out.emit({{"command", "embound"}, {"valid", false}, {"violations", v}});
        return kViolation;
      }
      std::vector<cplx> sc(scalars.begin(), scalars.end());
      auto m = std::make_shared<const MetricStructure>(embound(b, sc));
      const auto sys = bm_generators(m->signature());
      if (!struct_out.empty()) {
        std::ofstream f(struct_out);
        if (!f) throw IoError("cannot write '" + struct_out + "'");
        f << structure_to_json(*m).dump() << "\n";
      }
      Json rec = {{"command", "embound"},
                  {"points", m->sorts[0].size()},
                  {"predicates", m->predicates.size()},
                  {"generators", sys.generators.size()},
                  {"modulus", generator_modulus(sys)},
                  {"truncation", trunc_json(sys.truncation)}};
      if (!map.empty()) {
        if (target.empty()) throw IoError("--map needs --target");
        const auto b2 = banach_from_json(read_json(target));
        const auto a = matrix_from_json(read_json(map));
        auto n = std::make_shared<const MetricStructure>(embound(b2, sc));
        const auto lc = linear_map_correlation(b, m, b2, n, a);
        const auto r = distortion(sys, lc.correlation);
        rec["map_norm"] = operator_norm(a, b, b2);
        rec["map_inv_norm"] = operator_norm(inverse(a), b2, b);
        rec["dis"] = num(r.value);
        rec["residual"] = lc.residual;
      }
      out.emit(rec);
      return kOk;
    }

    if (*demo) {
      std::vector<ScenarioLine> lines;
      if (demo_name == "bm") {
        lines = bm_backward_scenario();
        for (auto& l : bm_forward_scenario()) lines.push_back(std::move(l));
      } else if (demo_name == "iu") {
        lines = iu_scenario();
      } else {
        lines = fghk_scenario();
      }
      bool ok = true;
      for (const auto& l : lines) {
        ok = ok && l.ok;
        Json rec = {{"demo", demo_name}, {"check", l.check}, {"result", l.ok ? "PASS" : "FAIL"}};
        for (const auto& [key, v] : l.record.items()) rec[key] = v;
        out.emit(rec);
      }
      return ok ? kOk : kViolation;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kOk;
}
