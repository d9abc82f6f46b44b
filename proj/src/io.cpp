#include "aiso/io.hpp"

#include <fstream>
#include <sstream>

#include "aiso/formula.hpp"

namespace aiso {

namespace {

template <class T>
T get(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) throw IoError(std::string(what) + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string(what) + ": bad '" + key + "': " + e.what());
  }
}

void flatten(const Json& v, std::size_t depth, std::vector<double>& out) {
  if (depth == 0) {
    if (!v.is_number()) throw IoError("predicate values must be numbers");
    out.push_back(v.get<double>());
    return;
  }
  if (!v.is_array()) throw IoError("predicate values nest less deeply than the arity");
  for (const auto& e : v) flatten(e, depth - 1, out);
}

Json nest(const std::vector<double>& v, std::size_t n, std::size_t arity, std::size_t& at) {
  if (arity == 0) return v.at(at++);
  Json a = Json::array();
  for (std::size_t i = 0; i < n; ++i) a.push_back(nest(v, n, arity - 1, at));
  return a;
}

cplx scalar(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw IoError("expected a number or an [re, im] pair");
}

}  // namespace

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::size_t resolve_sort(const MetricStructure& s, const Json& p) {
  if (p.is_number_unsigned()) {
    const auto i = p.get<std::size_t>();
    if (i >= s.sorts.size()) throw IoError("sort index out of range");
    return i;
  }
  if (p.is_string())
    if (auto i = s.find_sort(p.get<std::string>())) return *i;
  throw IoError("unknown sort " + p.dump());
}

std::size_t resolve_point(const MetricStructure& s, std::size_t sort, const Json& p) {
  if (p.is_number_unsigned()) {
    const auto i = p.get<std::size_t>();
    if (i >= s.sorts.at(sort).size()) throw IoError("point index out of range");
    return i;
  }
  if (p.is_string())
    if (auto i = s.find_point(sort, p.get<std::string>())) return *i;
  throw IoError("unknown point " + p.dump() + " in sort " + s.sorts.at(sort).name);
}

MetricStructure structure_from_json(const Json& j) {
  if (!j.is_object()) throw IoError("structure: expected an object");
  MetricStructure m;
  for (const auto& js : get<Json>(j, "sorts", "structure")) {
    Sort s;
    s.name = get<std::string>(js, "name", "sort");
    for (const auto& p : get<Json>(js, "points", "sort"))
      s.points.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    s.metric = get<std::vector<std::vector<double>>>(js, "metric", "sort");
    s.diameter_bound = get<double>(js, "diameter_bound", "sort");
    m.sorts.push_back(std::move(s));
  }
  if (j.contains("predicates"))
    for (const auto& jp : j.at("predicates")) {
      Predicate p;
      p.name = get<std::string>(jp, "name", "predicate");
      p.arity = get<std::size_t>(jp, "arity", "predicate");
      p.arg_sorts = get<std::vector<std::string>>(jp, "arg_sorts", "predicate");
      flatten(get<Json>(jp, "values", "predicate"), p.arity, p.values);
      const auto range = get<std::vector<double>>(jp, "range", "predicate");
      if (range.size() != 2) throw IoError("predicate range must be [a, b]");
      p.range_lo = range[0];
      p.range_hi = range[1];
      p.lipschitz = get<std::vector<double>>(jp, "lipschitz", "predicate");
      m.predicates.push_back(std::move(p));
    }
  if (j.contains("constants"))
    for (const auto& [name, v] : j.at("constants").items()) {
      if (!v.is_array() || v.size() != 2) throw IoError("constant '" + name + "' must be [sort, point]");
      const auto s = resolve_sort(m, v[0]);
      m.constants[name] = {s, resolve_point(m, s, v[1])};
    }
  return m;
}

Json structure_to_json(const MetricStructure& m) {
  Json j;
  j["sorts"] = Json::array();
  for (const auto& s : m.sorts)
    j["sorts"].push_back(
        {{"name", s.name}, {"points", s.points}, {"metric", s.metric}, {"diameter_bound", s.diameter_bound}});
  j["predicates"] = Json::array();
  for (const auto& p : m.predicates) {
    const std::size_t n = p.arity == 0 ? 1 : m.sorts.at(*m.find_sort(p.arg_sorts[0])).size();
    std::size_t at = 0;
    Json vals;
    // Mixed-sort tables are stored flat per position in point-index order.
    bool uniform = true;
    for (const auto& a : p.arg_sorts) uniform = uniform && a == p.arg_sorts[0];
    if (uniform) {
      vals = nest(p.values, n, p.arity, at);
    } else {
      std::vector<std::size_t> dims;
      for (const auto& a : p.arg_sorts) dims.push_back(m.sorts.at(*m.find_sort(a)).size());
      auto rec = [&](auto&& self, std::size_t d) -> Json {
        if (d == dims.size()) return p.values.at(at++);
        Json arr = Json::array();
        for (std::size_t i = 0; i < dims[d]; ++i) arr.push_back(self(self, d + 1));
        return arr;
      };
      vals = rec(rec, 0);
    }
    j["predicates"].push_back({{"name", p.name},
                               {"arity", p.arity},
                               {"arg_sorts", p.arg_sorts},
                               {"values", vals},
                               {"range", {p.range_lo, p.range_hi}},
                               {"lipschitz", p.lipschitz}});
  }
  j["constants"] = Json::object();
  for (const auto& [name, pr] : m.constants)
    j["constants"][name] = {m.sorts[pr.sort].name, m.sorts[pr.sort].points[pr.point]};
  return j;
}

MetricStructure load_structure(const std::string& path) { return structure_from_json(read_json(path)); }

Correlation correlation_from_json(const Json& j, StructurePtr left, StructurePtr right) {
  Correlation c = Correlation::empty(left, right);
  const auto rel = get<Json>(j, "relation", "correlation");
  if (!rel.is_object()) throw IoError("correlation: 'relation' must map sort names to matrices");
  for (const auto& [name, mat] : rel.items()) {
    const auto s = left->find_sort(name);
    if (!s) throw IoError("correlation: unknown sort '" + name + "'");
    auto& bm = c.relation[*s];
    if (!mat.is_array() || mat.size() != bm.rows())
      throw IoError("correlation: matrix for '" + name + "' has the wrong number of rows");
    for (std::size_t a = 0; a < bm.rows(); ++a) {
      if (!mat[a].is_array() || mat[a].size() != bm.cols())
        throw IoError("correlation: row " + std::to_string(a) + " of '" + name + "' has the wrong length");
      for (std::size_t b = 0; b < bm.cols(); ++b) {
        const auto& v = mat[a][b];
        if (v.is_boolean()) bm.set(a, b, v.get<bool>());
        else if (v.is_number()) bm.set(a, b, v.get<double>() != 0.0);
        else throw IoError("correlation: entries must be 0/1");
      }
    }
  }
  if (j.contains("anchors"))
    for (const auto& a : j.at("anchors")) {
      if (!a.is_array() || a.size() != 3) throw IoError("anchors are [sort, left, right]");
      const auto s = resolve_sort(*left, a[0]);
      c.anchors.push_back({s, resolve_point(*left, s, a[1]), resolve_point(*right, s, a[2])});
    }
  return c;
}

Json correlation_to_json(const Correlation& c) {
  Json j;
  j["relation"] = Json::object();
  for (std::size_t s = 0; s < c.relation.size(); ++s) {
    const auto& bm = c.relation[s];
    Json mat = Json::array();
    for (std::size_t a = 0; a < bm.rows(); ++a) {
      Json row = Json::array();
      for (std::size_t b = 0; b < bm.cols(); ++b) row.push_back(bm(a, b) ? 1 : 0);
      mat.push_back(row);
    }
    j["relation"][c.left->sorts[s].name] = mat;
  }
  if (!c.anchors.empty()) {
    j["anchors"] = Json::array();
    for (const auto& a : c.anchors)
      j["anchors"].push_back({c.left->sorts[a.sort].name, c.left->sorts[a.sort].points[a.left],
                              c.right->sorts[a.sort].points[a.right]});
  }
  return j;
}

DistortionSystem system_from_json(const Json& j, const Signature& sig) {
  if (!j.is_object()) throw IoError("system: expected an object");
  std::map<std::string, double> trunc;
  if (j.contains("truncation")) trunc = get<std::map<std::string, double>>(j, "truncation", "system");
  DistortionSystem sys;
  if (j.contains("builtin") && !j.at("builtin").is_null())
    sys = builtin(get<std::string>(j, "builtin", "system"), sig, trunc);
  else
    sys.truncation = trunc;
  if (j.contains("name")) sys.name = get<std::string>(j, "name", "system");
  if (j.contains("generators"))
    for (const auto& g : get<std::vector<std::string>>(j, "generators", "system")) sys.add(parse(g, sig));
  if (sys.generators.empty()) throw IoError("system has no generators");
  return sys;
}

SampledBanach banach_from_json(const Json& j) {
  SampledBanach b;
  b.dim = get<std::size_t>(j, "dim", "banach");
  const auto field = get<std::string>(j, "field", "banach");
  if (field == "real") b.field = Field::Real;
  else if (field == "complex") b.field = Field::Complex;
  else throw IoError("banach: field must be 'real' or 'complex'");
  const auto norm = get<std::string>(j, "norm", "banach");
  try {
    b.norm = parse_norm(norm);
  } catch (const InputError& e) {
    throw IoError(std::string("banach: ") + e.what());
  }
  if (j.contains("weights")) b.weights = get<std::vector<double>>(j, "weights", "banach");
  if (norm.rfind("weighted_", 0) == 0 && b.weights.empty())
    throw IoError("banach: weighted norms need 'weights'");
  for (const auto& s : get<Json>(j, "samples", "banach")) {
    if (!s.is_array()) throw IoError("banach: samples must be arrays");
    Vec v;
    for (const auto& e : s) v.push_back(scalar(e));
    b.samples.push_back(std::move(v));
  }
  b.radius_cap = get<double>(j, "radius_cap", "banach");
  return b;
}

Mat matrix_from_json(const Json& j) {
  if (!j.is_array()) throw IoError("matrix must be an array of rows");
  Mat a;
  for (const auto& row : j) {
    if (!row.is_array()) throw IoError("matrix rows must be arrays");
    std::vector<cplx> r;
    for (const auto& e : row) r.push_back(scalar(e));
    a.push_back(std::move(r));
  }
  return a;
}

}  // namespace aiso
