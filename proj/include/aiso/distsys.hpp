#pragma once

// Distortion systems given by finite generator lists, and the named families.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aiso/formula.hpp"
#include "aiso/mstruct.hpp"

namespace aiso {

struct DistortionSystem {
  std::string name;
  std::vector<Formula> generators;
  std::map<std::string, double> truncation;

  // Appends unless an AST-equal generator is already present.
  bool add(Formula f);
};

struct TupleEntry {
  std::size_t var = 0;
  std::size_t sort = 0;
  std::size_t left = 0;
  std::size_t right = 0;
};

struct DistortionWitness {
  std::size_t generator = 0;
  std::vector<TupleEntry> tuple;
};

struct DistortionResult {
  double value = 0.0;
  std::optional<DistortionWitness> witness;
};

DistortionResult distortion(const DistortionSystem& sys, const Correlation& c);

// Recognized names: gh, lip, iu, fghk, eghk, kadets, bm. Truncation keys:
// r_max (lip, default 4), n_max (iu, default 16). Throws InputError for an
// unknown name or an incompatible signature.
DistortionSystem builtin(const std::string& name, const Signature& sig,
                         const std::map<std::string, double>& truncation = {});

// Weight 2^-i / r_i given to the i-th atomic formula by the fghk family.
double fghk_weight(std::size_t i, double range_lo, double range_hi);

// The eGHK building block inf_y phi(y) + d(x, y) for an atomic phi, with the
// tuple distance taken as the max over coordinates.
Formula chi_atomic(const Signature& sig, const Formula& atomic);

// Atomic formulas of a signature: predicates in declaration order, then d per sort.
std::vector<Formula> atomic_formulas(const Signature& sig);

struct CompletenessResult {
  bool complete = true;
  std::vector<PointRef> first;   // two tuples with equal generator profiles
  std::vector<PointRef> second;  // but different atomic profiles
  std::string atomic;            // the atomic instance that tells them apart
};

// Finite proxy for atomic completeness: compares generator and atomic value
// profiles of all tuples of length max_len (default 2 * max atomic arity)
// under every sort-respecting substitution of tuple positions.
CompletenessResult check_atomic_completeness(const DistortionSystem& sys, const MetricStructure& s,
                                             std::size_t max_len = 0);

struct FunctionalityResult {
  bool ok = true;
  std::string message;
  std::size_t structure = 0;
  std::size_t sort = 0;
  std::size_t a = 0;
  std::size_t b = 0;
};

// phi must be a binary generator of sys or the functionality witness of one.
FunctionalityResult functionality_witness_check(const DistortionSystem& sys, const Formula& phi,
                                                double eps, double delta,
                                                const std::vector<const MetricStructure*>& structures);

}  // namespace aiso
