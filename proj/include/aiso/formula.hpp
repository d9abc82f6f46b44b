#pragma once

// Continuous-logic formulas: s-expression syntax, evaluation on finite
// structures, and a syntactic Lipschitz-modulus calculus.

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "aiso/mstruct.hpp"

namespace aiso {

class ParseError : public InputError {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : InputError("parse error at offset " + std::to_string(pos) + ": " + msg), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

enum class Op { Const, Dist, Pred, Neg, Scale, Add, Max, Min, AbsDiff, Clamp, ClipLog, Sup, Inf };

struct Var {
  std::size_t index = 0;
  std::string sort;
  bool operator==(const Var&) const = default;
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Const;
  double c = 0.0;   // Const value, Scale coefficient
  double lo = 0.0;  // Clamp / ClipLog bounds
  double hi = 0.0;
  std::string name;        // predicate name
  std::vector<Var> vars;   // Dist: 2, Pred: arity, Sup/Inf: the bound variable
  std::vector<Formula> args;

  // Declared metadata copied from the signature when the node is built.
  std::vector<double> lip;  // Pred: per-argument bounds
  double range_lo = 0.0;    // Pred range; Dist: [0, diameter]
  double range_hi = 0.0;

  std::map<std::size_t, std::string> free;  // free variable index -> sort
};

bool equal(const Formula& a, const Formula& b);

// Builders. Each checks sort consistency of the free variables.
namespace fm {
Formula constant(double c);
Formula dist(const Signature& sig, const std::string& sort, std::size_t x, std::size_t y);
Formula pred(const Signature& sig, const std::string& name, std::vector<std::size_t> xs);
Formula neg(Formula f);
Formula scale(double c, Formula f);
Formula add(Formula a, Formula b);
Formula max(Formula a, Formula b);
Formula min(Formula a, Formula b);
Formula absdiff(Formula a, Formula b);
Formula clamp(Formula f, double lo, double hi);
Formula cliplog(Formula f, double lo, double hi);
Formula sup(std::size_t var, const std::string& sort, Formula f);
Formula inf(std::size_t var, const std::string& sort, Formula f);
}  // namespace fm

Formula parse(const std::string& text, const Signature& sig);
std::string print(const Formula& f);

using Assignment = std::map<std::size_t, PointRef>;

// Throws InputError on an unassigned free variable or a sort mismatch.
double evaluate(const Formula& f, const MetricStructure& s, const Assignment& a);

// A formula resolved against one structure for repeated evaluation. The
// environment is indexed by variable index and holds point indices.
class BoundFormula {
 public:
  BoundFormula(const Formula& f, const MetricStructure& s);
  double operator()(std::vector<std::size_t>& env) const;
  std::size_t env_size() const { return env_size_; }

 private:
  struct CNode {
    Op op;
    double c, lo, hi;
    std::size_t sort = 0;
    std::size_t pred = 0;
    std::vector<std::size_t> vars;
    std::vector<std::size_t> strides;
    std::vector<CNode> args;
  };
  CNode compile(const Node& n);
  double eval(const CNode& n, std::vector<std::size_t>& env) const;

  const MetricStructure* s_;
  CNode root_;
  std::size_t env_size_ = 0;
};

struct ModulusBound {
  std::map<std::size_t, double> lipschitz;  // free variable index -> L_i
  double range_lo = 0.0;
  double range_hi = 0.0;
};

ModulusBound infer_modulus(const Formula& f);

struct WeakModulus {
  std::vector<double> weights;  // w_i; indices past the end use the last weight
  bool shift_increasing = false;

  double weight(std::size_t i) const;
  static WeakModulus ones() { return {{1.0}, true}; }
};

// Throws InputError when weights are empty, negative, or decrease while the
// shift_increasing flag is set.
void validate_modulus(const WeakModulus& w);

bool respects_modulus(const Formula& f, const WeakModulus& omega);

// Renames free variables only; bound variables are left alone.
Formula rename(const Formula& f, const std::map<std::size_t, std::size_t>& mapping);

// 1/2 |phi(x0,x1) - phi(x0,x0)| for a formula phi with free variables x0, x1.
Formula functionality_witness(const Formula& phi);

// Lipschitz constant of each catalog connective in the max metric on its
// arguments; Scale and ClipLog depend on parameters.
double connective_lipschitz(Op op, double c = 1.0, double lo = 0.0);

const char* op_name(Op op);

}  // namespace aiso
