#include "aiso/formula.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

namespace aiso {

namespace {

std::string num(double v) {
  std::array<char, 64> buf{};
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), p);
}

void merge_free(std::map<std::size_t, std::string>& into,
                const std::map<std::size_t, std::string>& from) {
  for (const auto& [i, s] : from) {
    auto [it, inserted] = into.emplace(i, s);
    if (!inserted && it->second != s)
      throw InputError("sort mismatch for x" + std::to_string(i) + ": '" + it->second +
                       "' vs '" + s + "'");
  }
}

// Recomputes the free-variable map of a node from its children.
Formula finish(Node n) {
  n.free.clear();
  switch (n.op) {
    case Op::Dist:
    case Op::Pred:
      for (const auto& v : n.vars) merge_free(n.free, {{v.index, v.sort}});
      break;
    case Op::Sup:
    case Op::Inf: {
      auto inner = n.args.at(0)->free;
      auto it = inner.find(n.vars.at(0).index);
      if (it != inner.end()) {
        if (it->second != n.vars[0].sort)
          throw InputError("sort mismatch for bound x" + std::to_string(it->first) + ": '" +
                           it->second + "' vs '" + n.vars[0].sort + "'");
        inner.erase(it);
      }
      n.free = std::move(inner);
      break;
    }
    default:
      for (const auto& a : n.args) merge_free(n.free, a->free);
  }
  return std::make_shared<const Node>(std::move(n));
}

Node unary(Op op, Formula f) {
  Node n;
  n.op = op;
  n.args = {std::move(f)};
  return n;
}

Node binary(Op op, Formula a, Formula b) {
  Node n;
  n.op = op;
  n.args = {std::move(a), std::move(b)};
  return n;
}

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Dist: return "d";
    case Op::Pred: return "pred";
    case Op::Neg: return "neg";
    case Op::Scale: return "scale";
    case Op::Add: return "add";
    case Op::Max: return "max";
    case Op::Min: return "min";
    case Op::AbsDiff: return "absdiff";
    case Op::Clamp: return "clamp";
    case Op::ClipLog: return "cliplog";
    case Op::Sup: return "sup";
    case Op::Inf: return "inf";
  }
  return "?";
}

double connective_lipschitz(Op op, double c, double lo) {
  switch (op) {
    case Op::Neg:
    case Op::Max:
    case Op::Min:
    case Op::Clamp: return 1.0;
    case Op::Add:
    case Op::AbsDiff: return 2.0;
    case Op::Scale: return std::abs(c);
    case Op::ClipLog: return std::exp(-lo);
    default: return 0.0;
  }
}

bool equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->c != b->c || a->lo != b->lo || a->hi != b->hi || a->name != b->name ||
      a->vars != b->vars || a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return true;
}

namespace fm {

Formula constant(double c) {
  if (!std::isfinite(c)) throw InputError("constant must be finite");
  Node n;
  n.op = Op::Const;
  n.c = c;
  return finish(std::move(n));
}

Formula dist(const Signature& sig, const std::string& sort, std::size_t x, std::size_t y) {
  auto s = sig.find_sort(sort);
  if (!s) throw InputError("unknown sort '" + sort + "'");
  Node n;
  n.op = Op::Dist;
  n.vars = {{x, sort}, {y, sort}};
  n.range_lo = 0.0;
  n.range_hi = *s < sig.diameter_bounds.size() ? sig.diameter_bounds[*s] : 1.0;
  return finish(std::move(n));
}

Formula pred(const Signature& sig, const std::string& name, std::vector<std::size_t> xs) {
  const auto* d = sig.find_predicate(name);
  if (!d) throw InputError("unknown predicate '" + name + "'");
  if (xs.size() != d->arg_sorts.size())
    throw InputError("predicate '" + name + "' takes " + std::to_string(d->arg_sorts.size()) +
                     " arguments, got " + std::to_string(xs.size()));
  Node n;
  n.op = Op::Pred;
  n.name = name;
  for (std::size_t i = 0; i < xs.size(); ++i) n.vars.push_back({xs[i], sig.sorts[d->arg_sorts[i]]});
  n.lip = d->lipschitz;
  n.lip.resize(xs.size(), 0.0);
  n.range_lo = d->range_lo;
  n.range_hi = d->range_hi;
  return finish(std::move(n));
}

Formula neg(Formula f) { return finish(unary(Op::Neg, std::move(f))); }

Formula scale(double c, Formula f) {
  if (!std::isfinite(c)) throw InputError("scale coefficient must be finite");
  Node n = unary(Op::Scale, std::move(f));
  n.c = c;
  return finish(std::move(n));
}

Formula add(Formula a, Formula b) { return finish(binary(Op::Add, std::move(a), std::move(b))); }
Formula max(Formula a, Formula b) { return finish(binary(Op::Max, std::move(a), std::move(b))); }
Formula min(Formula a, Formula b) { return finish(binary(Op::Min, std::move(a), std::move(b))); }
Formula absdiff(Formula a, Formula b) {
  return finish(binary(Op::AbsDiff, std::move(a), std::move(b)));
}

Formula clamp(Formula f, double lo, double hi) {
  if (!(lo <= hi)) throw InputError("clamp bounds must satisfy lo <= hi");
  Node n = unary(Op::Clamp, std::move(f));
  n.lo = lo;
  n.hi = hi;
  return finish(std::move(n));
}

Formula cliplog(Formula f, double lo, double hi) {
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw InputError("cliplog bounds must be finite with lo <= hi");
  Node n = unary(Op::ClipLog, std::move(f));
  n.lo = lo;
  n.hi = hi;
  return finish(std::move(n));
}

Formula sup(std::size_t var, const std::string& sort, Formula f) {
  Node n = unary(Op::Sup, std::move(f));
  n.vars = {{var, sort}};
  return finish(std::move(n));
}

Formula inf(std::size_t var, const std::string& sort, Formula f) {
  Node n = unary(Op::Inf, std::move(f));
  n.vars = {{var, sort}};
  return finish(std::move(n));
}

}  // namespace fm

// ---------------------------------------------------------------- parsing

namespace {

struct Token {
  enum Kind { LParen, RParen, Atom, End } kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (i_ >= s_.size()) return {Token::End, "", i_};
    const std::size_t start = i_;
    if (s_[i_] == '(') return {Token::LParen, "(", i_++};
    if (s_[i_] == ')') return {Token::RParen, ")", i_++};
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
           s_[i_] != ')')
      ++i_;
    return {Token::Atom, s_.substr(start, i_ - start), start};
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig) : lex_(text), sig_(sig) { advance(); }

  Formula parse_top() {
    auto f = formula();
    if (tok_.kind != Token::End) throw ParseError("trailing input '" + tok_.text + "'", tok_.pos);
    return f;
  }

 private:
  void advance() { tok_ = lex_.next(); }

  Token expect_atom(const char* what) {
    if (tok_.kind != Token::Atom) throw ParseError(std::string("expected ") + what, tok_.pos);
    Token t = tok_;
    advance();
    return t;
  }

  void expect_rparen() {
    if (tok_.kind != Token::RParen) throw ParseError("expected ')'", tok_.pos);
    advance();
  }

  double real() {
    Token t = expect_atom("a real number");
    double v = 0.0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    if (*b == '+') ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || !std::isfinite(v))
      throw ParseError("invalid real '" + t.text + "'", t.pos);
    return v;
  }

  static bool parse_var_index(const std::string& s, std::size_t& out) {
    if (s.size() < 2 || s[0] != 'x') return false;
    auto [p, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
  }

  std::size_t var() {
    Token t = expect_atom("a variable");
    std::size_t idx = 0;
    if (!parse_var_index(t.text, idx)) throw ParseError("invalid variable '" + t.text + "'", t.pos);
    return idx;
  }

  template <class F>
  auto guard(std::size_t pos, F&& f) {
    try {
      return f();
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(e.what(), pos);
    }
  }

  Formula formula() {
    if (tok_.kind != Token::LParen) throw ParseError("expected '('", tok_.pos);
    const std::size_t open = tok_.pos;
    advance();
    Token head = expect_atom("an operator");
    const std::string& op = head.text;
    Formula out;
    if (op == "const") {
      double c = real();
      out = fm::constant(c);
    } else if (op == "d") {
      Token sort = expect_atom("a sort name");
      std::size_t x = var();
      std::size_t y = var();
      out = guard(sort.pos, [&] { return fm::dist(sig_, sort.text, x, y); });
    } else if (op == "pred") {
      Token name = expect_atom("a predicate name");
      std::vector<std::size_t> xs;
      while (tok_.kind == Token::Atom) xs.push_back(var());
      out = guard(name.pos, [&] { return fm::pred(sig_, name.text, xs); });
    } else if (op == "neg") {
      auto f = formula();
      out = fm::neg(f);
    } else if (op == "scale") {
      double c = real();
      auto f = formula();
      out = fm::scale(c, f);
    } else if (op == "add" || op == "max" || op == "min" || op == "absdiff") {
      auto a = formula();
      auto b = formula();
      out = guard(open, [&] {
        if (op == "add") return fm::add(a, b);
        if (op == "max") return fm::max(a, b);
        if (op == "min") return fm::min(a, b);
        return fm::absdiff(a, b);
      });
    } else if (op == "clamp" || op == "cliplog") {
      bool is_log = op == "cliplog";
      Formula f;
      // (clamp (log F) a b) is accepted as a spelling of (cliplog F a b).
      if (!is_log && tok_.kind == Token::LParen) {
        Lexer probe = lex_;
        Token t = probe.next();
        if (t.kind == Token::Atom && t.text == "log") {
          advance();
          advance();
          f = formula();
          expect_rparen();
          is_log = true;
        }
      }
      if (!f) f = formula();
      double lo = real();
      double hi = real();
      out = guard(open, [&] { return is_log ? fm::cliplog(f, lo, hi) : fm::clamp(f, lo, hi); });
    } else if (op == "sup" || op == "inf") {
      Token v = expect_atom("a bound variable");
      std::string name = v.text;
      std::string sort;
      if (auto colon = name.find(':'); colon != std::string::npos) {
        sort = name.substr(colon + 1);
        name = name.substr(0, colon);
        if (!sig_.find_sort(sort)) throw ParseError("unknown sort '" + sort + "'", v.pos);
      }
      std::size_t idx = 0;
      if (!parse_var_index(name, idx)) throw ParseError("invalid variable '" + name + "'", v.pos);
      auto body = formula();
      if (sort.empty()) {
        auto it = body->free.find(idx);
        if (it != body->free.end())
          sort = it->second;
        else if (sig_.sorts.size() == 1)
          sort = sig_.sorts[0];
        else
          throw ParseError("cannot infer the sort of bound variable " + name, v.pos);
      }
      out = guard(v.pos, [&] {
        return op == "sup" ? fm::sup(idx, sort, body) : fm::inf(idx, sort, body);
      });
    } else if (op == "log") {
      throw ParseError("log is only available clamped: use (cliplog F lo hi)", head.pos);
    } else {
      throw ParseError("unknown connective '" + op + "'", head.pos);
    }
    expect_rparen();
    return out;
  }

  Lexer lex_;
  const Signature& sig_;
  Token tok_{Token::End, "", 0};
};

void print_to(const Node& n, std::string& out) {
  auto var = [](const Var& v) { return "x" + std::to_string(v.index); };
  out += '(';
  out += op_name(n.op);
  switch (n.op) {
    case Op::Const: out += ' ' + num(n.c); break;
    case Op::Dist: out += ' ' + n.vars[0].sort + ' ' + var(n.vars[0]) + ' ' + var(n.vars[1]); break;
    case Op::Pred:
      out += ' ' + n.name;
      for (const auto& v : n.vars) out += ' ' + var(v);
      break;
    case Op::Scale:
      out += ' ' + num(n.c) + ' ';
      print_to(*n.args[0], out);
      break;
    case Op::Clamp:
    case Op::ClipLog:
      out += ' ';
      print_to(*n.args[0], out);
      out += ' ' + num(n.lo) + ' ' + num(n.hi);
      break;
    case Op::Sup:
    case Op::Inf:
      out += ' ' + var(n.vars[0]) + ':' + n.vars[0].sort + ' ';
      print_to(*n.args[0], out);
      break;
    default:
      for (const auto& a : n.args) {
        out += ' ';
        print_to(*a, out);
      }
  }
  out += ')';
}

}  // namespace

Formula parse(const std::string& text, const Signature& sig) {
  return Parser(text, sig).parse_top();
}

std::string print(const Formula& f) {
  std::string out;
  print_to(*f, out);
  return out;
}

// ---------------------------------------------------------------- evaluation

namespace {

double cliplog_value(double x, double lo, double hi) {
  if (!(x > 0.0)) return lo;
  return std::clamp(std::log(x), lo, hi);
}

std::size_t max_var(const Node& n) {
  std::size_t m = 0;
  for (const auto& v : n.vars) m = std::max(m, v.index + 1);
  for (const auto& a : n.args) m = std::max(m, max_var(*a));
  return m;
}

}  // namespace

BoundFormula::BoundFormula(const Formula& f, const MetricStructure& s) : s_(&s) {
  root_ = compile(*f);
  env_size_ = max_var(*f);
}

BoundFormula::CNode BoundFormula::compile(const Node& n) {
  CNode c{n.op, n.c, n.lo, n.hi, 0, 0, {}, {}, {}};
  auto sort_of = [&](const std::string& name) {
    auto si = s_->find_sort(name);
    if (!si) throw InputError("structure has no sort '" + name + "'");
    return *si;
  };
  for (const auto& v : n.vars) c.vars.push_back(v.index);
  switch (n.op) {
    case Op::Dist: c.sort = sort_of(n.vars[0].sort); break;
    case Op::Sup:
    case Op::Inf: c.sort = sort_of(n.vars[0].sort); break;
    case Op::Pred: {
      auto pi = s_->find_predicate(n.name);
      if (!pi) throw InputError("structure has no predicate '" + n.name + "'");
      const auto& p = s_->predicates[*pi];
      if (p.arity != n.vars.size())
        throw InputError("predicate '" + n.name + "' has arity " + std::to_string(p.arity));
      c.pred = *pi;
      c.strides.assign(p.arity, 1);
      for (std::size_t i = 0; i < p.arity; ++i)
        if (p.arg_sorts[i] != n.vars[i].sort)
          throw InputError("predicate '" + n.name + "' argument " + std::to_string(i) +
                           " has sort '" + p.arg_sorts[i] + "'");
      for (std::size_t i = p.arity; i-- > 1;)
        c.strides[i - 1] = c.strides[i] * s_->sorts[sort_of(p.arg_sorts[i])].size();
      break;
    }
    default: break;
  }
  for (const auto& a : n.args) c.args.push_back(compile(*a));
  return c;
}

double BoundFormula::eval(const CNode& n, std::vector<std::size_t>& env) const {
  switch (n.op) {
    case Op::Const: return n.c;
    case Op::Dist: return s_->sorts[n.sort].metric[env[n.vars[0]]][env[n.vars[1]]];
    case Op::Pred: {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < n.vars.size(); ++i) idx += env[n.vars[i]] * n.strides[i];
      return s_->predicates[n.pred].values[idx];
    }
    case Op::Neg: return -eval(n.args[0], env);
    case Op::Scale: return n.c * eval(n.args[0], env);
    case Op::Add: return eval(n.args[0], env) + eval(n.args[1], env);
    case Op::Max: return std::max(eval(n.args[0], env), eval(n.args[1], env));
    case Op::Min: return std::min(eval(n.args[0], env), eval(n.args[1], env));
    case Op::AbsDiff: return std::abs(eval(n.args[0], env) - eval(n.args[1], env));
    case Op::Clamp: return std::clamp(eval(n.args[0], env), n.lo, n.hi);
    case Op::ClipLog: return cliplog_value(eval(n.args[0], env), n.lo, n.hi);
    case Op::Sup:
    case Op::Inf: {
      const std::size_t v = n.vars[0];
      const std::size_t saved = env[v];
      const std::size_t count = s_->sorts[n.sort].size();
      const bool is_sup = n.op == Op::Sup;
      double best = is_sup ? -std::numeric_limits<double>::infinity()
                           : std::numeric_limits<double>::infinity();
      for (std::size_t p = 0; p < count; ++p) {
        env[v] = p;
        const double x = eval(n.args[0], env);
        best = is_sup ? std::max(best, x) : std::min(best, x);
      }
      env[v] = saved;
      return best;
    }
  }
  return 0.0;
}

double BoundFormula::operator()(std::vector<std::size_t>& env) const {
  if (env.size() < env_size_) env.resize(env_size_, 0);
  return eval(root_, env);
}

double evaluate(const Formula& f, const MetricStructure& s, const Assignment& a) {
  BoundFormula b(f, s);
  std::vector<std::size_t> env(b.env_size(), 0);
  for (const auto& [idx, sort] : f->free) {
    auto it = a.find(idx);
    if (it == a.end()) throw InputError("unassigned free variable x" + std::to_string(idx));
    auto si = s.find_sort(sort);
    if (!si) throw InputError("structure has no sort '" + sort + "'");
    if (it->second.sort != *si)
      throw InputError("x" + std::to_string(idx) + " has sort '" + sort +
                       "' but is assigned a point of another sort");
    if (it->second.point >= s.sorts[*si].size())
      throw InputError("x" + std::to_string(idx) + " assigned a point out of range");
    env[idx] = it->second.point;
  }
  return b(env);
}

// ---------------------------------------------------------------- modulus

namespace {

ModulusBound modulus(const Node& n) {
  ModulusBound m;
  auto add_into = [](std::map<std::size_t, double>& into, const std::map<std::size_t, double>& a,
                     double k = 1.0) {
    for (const auto& [i, l] : a) into[i] += k * l;
  };
  auto max_into = [](std::map<std::size_t, double>& into, const std::map<std::size_t, double>& a) {
    for (const auto& [i, l] : a) into[i] = std::max(into[i], l);
  };
  switch (n.op) {
    case Op::Const:
      m.range_lo = m.range_hi = n.c;
      return m;
    case Op::Dist:
      if (n.vars[0].index != n.vars[1].index) {
        m.lipschitz[n.vars[0].index] = 1.0;
        m.lipschitz[n.vars[1].index] = 1.0;
        m.range_hi = n.range_hi;
      }
      return m;
    case Op::Pred:
      for (std::size_t i = 0; i < n.vars.size(); ++i) m.lipschitz[n.vars[i].index] += n.lip[i];
      m.range_lo = n.range_lo;
      m.range_hi = n.range_hi;
      return m;
    default: break;
  }
  std::vector<ModulusBound> a;
  for (const auto& x : n.args) a.push_back(modulus(*x));
  switch (n.op) {
    case Op::Neg:
      m.lipschitz = a[0].lipschitz;
      m.range_lo = -a[0].range_hi;
      m.range_hi = -a[0].range_lo;
      break;
    case Op::Scale:
      add_into(m.lipschitz, a[0].lipschitz, std::abs(n.c));
      m.range_lo = std::min(n.c * a[0].range_lo, n.c * a[0].range_hi);
      m.range_hi = std::max(n.c * a[0].range_lo, n.c * a[0].range_hi);
      break;
    case Op::Add:
      add_into(m.lipschitz, a[0].lipschitz);
      add_into(m.lipschitz, a[1].lipschitz);
      m.range_lo = a[0].range_lo + a[1].range_lo;
      m.range_hi = a[0].range_hi + a[1].range_hi;
      break;
    case Op::AbsDiff:
      add_into(m.lipschitz, a[0].lipschitz);
      add_into(m.lipschitz, a[1].lipschitz);
      m.range_lo = std::max({0.0, a[0].range_lo - a[1].range_hi, a[1].range_lo - a[0].range_hi});
      m.range_hi = std::max(a[0].range_hi - a[1].range_lo, a[1].range_hi - a[0].range_lo);
      break;
    case Op::Max:
    case Op::Min:
      max_into(m.lipschitz, a[0].lipschitz);
      max_into(m.lipschitz, a[1].lipschitz);
      if (n.op == Op::Max) {
        m.range_lo = std::max(a[0].range_lo, a[1].range_lo);
        m.range_hi = std::max(a[0].range_hi, a[1].range_hi);
      } else {
        m.range_lo = std::min(a[0].range_lo, a[1].range_lo);
        m.range_hi = std::min(a[0].range_hi, a[1].range_hi);
      }
      break;
    case Op::Clamp: {
      m.range_lo = std::clamp(a[0].range_lo, n.lo, n.hi);
      m.range_hi = std::clamp(a[0].range_hi, n.lo, n.hi);
      const bool constant = a[0].range_hi <= n.lo || a[0].range_lo >= n.hi;
      if (!constant) m.lipschitz = a[0].lipschitz;
      break;
    }
    case Op::ClipLog: {
      m.range_lo = cliplog_value(a[0].range_lo, n.lo, n.hi);
      m.range_hi = cliplog_value(a[0].range_hi, n.lo, n.hi);
      const double knee = std::exp(n.lo);
      const bool constant = a[0].range_hi <= knee || a[0].range_lo >= std::exp(n.hi);
      if (!constant) add_into(m.lipschitz, a[0].lipschitz, 1.0 / std::max(knee, a[0].range_lo));
      break;
    }
    case Op::Sup:
    case Op::Inf:
      m = a[0];
      m.lipschitz.erase(n.vars[0].index);
      break;
    default: break;
  }
  return m;
}

}  // namespace

ModulusBound infer_modulus(const Formula& f) {
  auto m = modulus(*f);
  for (auto it = m.lipschitz.begin(); it != m.lipschitz.end();) {
    if (!f->free.count(it->first))
      it = m.lipschitz.erase(it);
    else
      ++it;
  }
  for (const auto& [i, s] : f->free) m.lipschitz.emplace(i, 0.0);
  return m;
}

double WeakModulus::weight(std::size_t i) const {
  if (weights.empty()) return 0.0;
  return i < weights.size() ? weights[i] : weights.back();
}

void validate_modulus(const WeakModulus& w) {
  if (w.weights.empty()) throw InputError("weak modulus needs at least one weight");
  for (std::size_t i = 0; i < w.weights.size(); ++i) {
    if (!(w.weights[i] >= 0.0)) throw InputError("weak modulus weights must be nonnegative");
    if (w.shift_increasing && i > 0 && w.weights[i] < w.weights[i - 1])
      throw InputError("shift-increasing weak modulus must have nondecreasing weights");
  }
}

bool respects_modulus(const Formula& f, const WeakModulus& omega) {
  const auto m = infer_modulus(f);
  for (const auto& [i, l] : m.lipschitz)
    if (l > omega.weight(i) + kTol) return false;
  return true;
}

// ---------------------------------------------------------------- renaming

namespace {

Formula rename_rec(const Formula& f, const std::map<std::size_t, std::size_t>& mapping,
                   std::set<std::size_t>& bound) {
  if (f->free.empty()) return f;
  Node n = *f;
  auto target = [&](std::size_t i) {
    if (bound.count(i)) return i;
    auto it = mapping.find(i);
    if (it == mapping.end()) return i;
    if (bound.count(it->second))
      throw InputError("renaming x" + std::to_string(i) + " to x" + std::to_string(it->second) +
                       " would be captured by a quantifier");
    return it->second;
  };
  if (n.op == Op::Dist || n.op == Op::Pred) {
    for (auto& v : n.vars) v.index = target(v.index);
    return finish(std::move(n));
  }
  if (n.op == Op::Sup || n.op == Op::Inf) {
    const std::size_t b = n.vars[0].index;
    const bool fresh = bound.insert(b).second;
    n.args[0] = rename_rec(n.args[0], mapping, bound);
    if (fresh) bound.erase(b);
    return finish(std::move(n));
  }
  for (auto& a : n.args) a = rename_rec(a, mapping, bound);
  return finish(std::move(n));
}

}  // namespace

Formula rename(const Formula& f, const std::map<std::size_t, std::size_t>& mapping) {
  std::set<std::size_t> bound;
  return rename_rec(f, mapping, bound);
}

Formula functionality_witness(const Formula& phi) {
  for (const auto& [i, s] : phi->free)
    if (i > 1) throw InputError("functionality witness needs a formula in x0, x1");
  auto a = phi->free.find(0);
  auto b = phi->free.find(1);
  if (a != phi->free.end() && b != phi->free.end() && a->second != b->second)
    throw InputError("functionality witness needs x0 and x1 of the same sort");
  return fm::scale(0.5, fm::absdiff(phi, rename(phi, {{1, 0}})));
}

}  // namespace aiso
