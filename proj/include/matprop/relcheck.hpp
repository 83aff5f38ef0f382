#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "matprop/matrix.hpp"
#include "matprop/partial_algebra.hpp"

namespace matprop {

struct FinitePointedSet {
  std::size_t carrier_size = 0;
  std::optional<Element> basepoint;

  bool pointed() const { return basepoint.has_value(); }
  friend bool operator==(const FinitePointedSet&, const FinitePointedSet&) = default;
};

/// R subset of X_1 x ... x X_n, stored as a membership bitmap over the product
/// (mixed radix, first component most significant).
class FiniteRelation {
public:
  explicit FiniteRelation(std::vector<FinitePointedSet> components);

  std::size_t arity() const { return components_.size(); }
  const std::vector<FinitePointedSet>& components() const { return components_; }
  std::size_t space_size() const { return member_.size(); }

  bool contains(std::span<const Element> tuple) const { return member_[encode(tuple)]; }
  void insert(std::span<const Element> tuple) { member_[encode(tuple)] = true; }
  void erase(std::span<const Element> tuple) { member_[encode(tuple)] = false; }
  bool contains_code(std::size_t code) const { return member_[code]; }
  void set_code(std::size_t code, bool in) { member_[code] = in; }

  std::size_t size() const;
  /// Members in lexicographic order.
  std::vector<std::vector<Element>> tuples() const;

  std::size_t encode(std::span<const Element> tuple) const;
  std::vector<Element> decode(std::size_t code) const;

  /// Every component equals the first one.
  bool homogeneous() const;

private:
  std::vector<FinitePointedSet> components_;
  std::vector<bool> member_;
};

/// "carriers: c1 .. cn [pointed]" followed by one tuple per line; '#' starts a comment.
/// Pointed components use basepoint 0.
FiniteRelation parse_relation(std::string_view text);
std::string format_relation(const FiniteRelation& r);

/// For every map f from M's variables into X (Star to the basepoint): if the image of
/// every left column lies in R, so does the image of the right column.
bool is_M_closed_relation(const ExtendedMatrix& m, const FiniteRelation& r);

/// Same condition with an independent map f_i : vars -> X_i for each row i.
bool is_strictly_M_closed_relation(const ExtendedMatrix& m, const FiniteRelation& r);

/// (a,b'), (a',b'), (a',b) in R imply (a,b) in R.
bool is_difunctional(const FiniteRelation& r);

enum class SubsetFilter : std::uint8_t {
  Closed,      // closed sub-partial algebras of A^n only
  Subalgebra,  // every subset (containing the basepoint when pointed)
};

struct SubsetScan {
  bool all_closed = true;
  std::size_t subsets_checked = 0;
  /// First failing subset and the member of S it fails.
  std::optional<FiniteRelation> counterexample;
  std::size_t failing_matrix = 0;
};

/// Enumerates subsets T of the carrier of A^n passing `filter` and checks that each is
/// M-closed as an n-ary relation on A's carrier for every M in S. A must satisfy S and S
/// must be non-trivial. More than `cap` subsets raises ResourceError.
SubsetScan closed_subsets_are_S_closed(const MatrixSet& s, const FinitePartialAlgebra& a, std::size_t n,
                                       std::uint64_t cap = 1u << 20, SubsetFilter filter = SubsetFilter::Closed);

}  // namespace matprop
