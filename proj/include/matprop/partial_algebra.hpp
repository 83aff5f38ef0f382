#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "matprop/matrix.hpp"
#include "matprop/term.hpp"

namespace matprop {

/// Carrier elements are dense indices 0..carrier_size-1. In pointed algebras the
/// basepoint (interpretation of the constant 0) is element 0 unless stated otherwise.
using Element = std::uint32_t;

/// One operation symbol p_i per matrix (arity = left width), plus the constant 0 when pointed.
struct Signature {
  std::vector<std::size_t> arities;
  bool pointed = false;

  static Signature of(const MatrixSet& s);
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Partial map Element^arity -> Element.
///
/// Small domains are stored densely; larger ones fall back to a hash map. Tuples are
/// keyed in base carrier_size with the first argument most significant, so iteration
/// visits defined tuples in lexicographic order (dense storage only).
class OperationTable {
public:
  OperationTable(std::size_t arity, std::size_t carrier_size);

  std::size_t arity() const { return arity_; }
  std::size_t carrier_size() const { return carrier_; }

  std::optional<Element> lookup(std::span<const Element> args) const;
  void define(std::span<const Element> args, Element value);
  void erase(std::span<const Element> args);
  std::size_t defined_count() const { return defined_; }

  struct Instance {
    std::vector<Element> args;
    Element value;
    friend bool operator==(const Instance&, const Instance&) = default;
  };
  /// Defined instances in lexicographic tuple order.
  std::vector<Instance> instances() const;

private:
  std::uint64_t key(std::span<const Element> args) const;
  std::vector<Element> unkey(std::uint64_t key) const;

  static constexpr std::uint32_t kUndefined = 0xFFFFFFFFu;

  std::size_t arity_;
  std::size_t carrier_;
  std::size_t defined_ = 0;
  bool dense_;
  std::vector<std::uint32_t> dense_values_;
  std::unordered_map<std::uint64_t, Element> sparse_values_;
};

class FinitePartialAlgebra {
public:
  FinitePartialAlgebra(std::size_t carrier_size, std::optional<Element> basepoint,
                       std::vector<OperationTable> tables);

  /// One element, every operation defined on its unique tuple.
  static FinitePartialAlgebra terminal(const Signature& sig);

  std::size_t carrier_size() const { return carrier_; }
  std::optional<Element> basepoint() const { return basepoint_; }
  bool pointed() const { return basepoint_.has_value(); }
  std::size_t op_count() const { return tables_.size(); }
  const OperationTable& table(std::size_t op) const { return tables_.at(op); }
  Signature signature() const;

  /// Copy with one instance of `op` made undefined.
  FinitePartialAlgebra without(std::size_t op, std::span<const Element> args) const;

private:
  std::size_t carrier_;
  std::optional<Element> basepoint_;
  std::vector<OperationTable> tables_;
};

/// Outcome of a traced evaluation: a value, or the first undefined subterm met in
/// left-to-right strict evaluation together with its argument-position path.
struct EvalResult {
  std::optional<Element> value;
  std::optional<Term> undefined_at;
  std::vector<std::size_t> undefined_path;
};

/// y_j is bound to env[j-1]. Undefinedness is an in-band result; arity mismatches,
/// unbound variables, Zero in a non-pointed algebra and out-of-range elements throw.
std::optional<Element> eval_term(const FinitePartialAlgebra& a, const Term& t, std::span<const Element> env);
EvalResult eval_term_traced(const FinitePartialAlgebra& a, const Term& t, std::span<const Element> env);

/// lhs =e rhs over y_1..y_var_count: both sides defined and equal under every assignment.
bool satisfies_existence_eq(const FinitePartialAlgebra& a, const Term& lhs, const Term& rhs,
                            std::size_t var_count);

/// Term p_op(row's left entries) and the right entry as terms (x_i -> y_i, * -> 0).
std::pair<Term, Term> row_equation(const ExtendedMatrix& m, std::size_t op, std::size_t row);

/// Every row equation of every member of `s` holds in `a`.
bool satisfies_matrix_set(const FinitePartialAlgebra& a, const MatrixSet& s);

/// A single definition demanded by a matrix row under an assignment of its variables.
struct ForcedDemand {
  std::size_t matrix = 0;
  std::size_t row = 0;
  std::vector<Element> assignment;  // assignment[i-1] is the image of x_i
  Element value = 0;
};

struct ForcedConflict {
  std::size_t op = 0;
  std::vector<Element> args;
  ForcedDemand first;
  ForcedDemand second;
};

struct ForcedInstance {
  std::size_t op = 0;
  std::vector<Element> args;
  Element value = 0;
  friend bool operator==(const ForcedInstance&, const ForcedInstance&) = default;
};

struct ForcedResult {
  std::vector<ForcedInstance> instances;  // first-demand order, deduplicated
  std::optional<ForcedConflict> conflict;

  bool consistent() const { return !conflict.has_value(); }
};

/// Enumerates matrix -> row -> assignment (x1 slowest) and records p_i(f(left)) = f(right).
/// Star maps to `basepoint`, which must be present exactly when `s` is pointed.
ForcedResult forced_instances(const MatrixSet& s, std::size_t carrier_size, std::optional<Element> basepoint);

/// Free partial algebra over a carrier of the given size (basepoint 0 when pointed):
/// exactly the forced instances, or the terminal algebra when they conflict.
FinitePartialAlgebra free_algebra(const MatrixSet& s, std::size_t carrier_size);

/// Componentwise product. Element (a, b) is a * |B| + b.
FinitePartialAlgebra product(const FinitePartialAlgebra& a, const FinitePartialAlgebra& b);

/// n-fold product; tuple (a_1..a_n) is encoded in base |A| with a_1 most significant.
FinitePartialAlgebra power(const FinitePartialAlgebra& a, std::size_t n);

/// `members` has one flag per carrier element.
bool is_closed_subset(const FinitePartialAlgebra& b, const std::vector<bool>& members);
bool is_closed_subset(const FinitePartialAlgebra& b, std::span<const Element> subset);

/// Restriction of `b` to a subset; returns the algebra and the inclusion map (sorted subset).
struct InducedSubalgebra {
  FinitePartialAlgebra algebra;
  std::vector<Element> inclusion;
};
InducedSubalgebra induced_subalgebra(const FinitePartialAlgebra& b, std::span<const Element> subset);

struct HomomorphismCheck {
  bool is_hom = false;
  bool is_closed = false;
};

/// `f[a]` is the image of element a.
HomomorphismCheck is_closed_homomorphism(std::span<const Element> f, const FinitePartialAlgebra& a,
                                         const FinitePartialAlgebra& b);

/// Human-readable listing of the tables, one instance per line.
std::string describe(const FinitePartialAlgebra& a);

}  // namespace matprop
