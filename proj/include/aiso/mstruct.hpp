#pragma once

// Finite multi-sorted metric structures and correlations between them.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aiso {

// Absolute tolerance used for every real comparison in validation.
inline constexpr double kTol = 1e-9;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Sort {
  std::string name;
  std::vector<std::string> points;
  std::vector<std::vector<double>> metric;  // row-major, |points| x |points|
  double diameter_bound = 1.0;

  std::size_t size() const { return points.size(); }
};

struct Predicate {
  std::string name;
  std::size_t arity = 0;
  std::vector<std::string> arg_sorts;
  // Dense row-major table; the last argument varies fastest.
  std::vector<double> values;
  double range_lo = 0.0;
  double range_hi = 1.0;
  std::vector<double> lipschitz;  // one bound per argument position
};

struct PointRef {
  std::size_t sort = 0;
  std::size_t point = 0;
  auto operator<=>(const PointRef&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::vector<std::size_t> arg_sorts;
  double range_lo = 0.0;
  double range_hi = 1.0;
  std::vector<double> lipschitz;
};

// Sorts and predicate symbols, without interpretations. Formulas are parsed
// and built against a signature.
struct Signature {
  std::vector<std::string> sorts;
  std::vector<double> diameter_bounds;
  std::vector<PredicateDecl> predicates;

  std::optional<std::size_t> find_sort(const std::string& name) const;
  const PredicateDecl* find_predicate(const std::string& name) const;

  // A signature with the given sorts (diameter bound 1) and no predicates.
  static Signature metric_only(std::vector<std::string> sort_names);
};

class MetricStructure {
 public:
  std::vector<Sort> sorts;
  std::vector<Predicate> predicates;
  std::map<std::string, PointRef> constants;

  std::optional<std::size_t> find_sort(const std::string& name) const;
  std::optional<std::size_t> find_predicate(const std::string& name) const;
  std::optional<std::size_t> find_point(std::size_t sort, const std::string& label) const;

  double dist(std::size_t sort, std::size_t a, std::size_t b) const {
    return sorts[sort].metric[a][b];
  }
  // Table lookup; args are point indices in the predicate's argument sorts.
  double predicate_value(std::size_t pred, std::span<const std::size_t> args) const;

  std::size_t total_points() const;
  Signature signature() const;
};

using StructurePtr = std::shared_ptr<const MetricStructure>;

struct Violation {
  std::string where;              // sort / predicate / constant name
  std::vector<std::size_t> tuple; // witnessing point indices
  std::string message;            // the violated inequality
};

// Empty iff every structural invariant holds. Malformed shapes are reported
// as violations rather than thrown.
std::vector<Violation> validate_structure(const MetricStructure& s);

// Throws InputError listing the first violation, if any.
void require_valid(const MetricStructure& s);

// Dense boolean matrix, row-major.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(std::size_t rows, std::size_t cols, bool fill = false)
      : rows_(rows), cols_(cols), bits_(rows * cols, fill ? 1 : 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool operator()(std::size_t i, std::size_t j) const { return bits_[i * cols_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v = true) { bits_[i * cols_ + j] = v ? 1 : 0; }
  std::size_t count() const;

  static BoolMatrix identity(std::size_t n);
  BoolMatrix transposed() const;

  bool operator==(const BoolMatrix&) const = default;
  // Lexicographic order on the row-major bit string with 0 < 1.
  bool operator<(const BoolMatrix& o) const { return bits_ < o.bits_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<unsigned char> bits_;
};

// A required pair (m_i, n_i) inside a correlation.
struct AnchorPair {
  std::size_t sort = 0;
  std::size_t left = 0;
  std::size_t right = 0;
  auto operator<=>(const AnchorPair&) const = default;
};

struct Correlation {
  StructurePtr left;
  StructurePtr right;
  std::vector<BoolMatrix> relation;  // one matrix per sort
  std::vector<AnchorPair> anchors;

  static Correlation identity(StructurePtr s);
  static Correlation all(StructurePtr left, StructurePtr right);
  static Correlation empty(StructurePtr left, StructurePtr right);

  // Lexicographic comparison of the concatenated per-sort matrices.
  bool lex_less(const Correlation& o) const;
};

struct CorrelationCheck {
  bool ok = true;
  std::string reason;        // empty when ok
  std::size_t sort = 0;
  std::optional<std::size_t> row;
  std::optional<std::size_t> column;
};

// Totality, surjectivity and anchors, sort by sort. Throws InputError when the
// matrix shapes do not match the structures.
CorrelationCheck is_correlation(const Correlation& c);

// Same structure (pointer identity or equal content).
bool same_structure(const MetricStructure& a, const MetricStructure& b);

Correlation inverse(const Correlation& c);
// Relational product c2 ∘ c1 (first c1, then c2).
Correlation compose(const Correlation& c1, const Correlation& c2);
// (a,b) kept iff some (c,d) in c has d(a,c) <= delta and d(b,d) <= delta.
Correlation thicken(const Correlation& c, double delta);

bool operator==(const Sort& a, const Sort& b);
bool operator==(const Predicate& a, const Predicate& b);

}  // namespace aiso
