#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "matprop/matrix.hpp"

namespace matprop {

/// Where a tableau column comes from.
struct Provenance {
  enum class Kind : std::uint8_t { OriginalLeft, StarColumn, Derived };

  Kind kind = Kind::OriginalLeft;
  std::size_t left_index = 0;        // OriginalLeft: 0-based left column of N
  std::size_t matrix = 0;            // Derived: index into S
  std::vector<std::size_t> parents;  // Derived: tableau indices, one per left column of S[matrix]

  static Provenance original(std::size_t j) { return {Kind::OriginalLeft, j, 0, {}}; }
  static Provenance star() { return {Kind::StarColumn, 0, 0, {}}; }
  static Provenance derived(std::size_t matrix, std::vector<std::size_t> parents) {
    return {Kind::Derived, 0, matrix, std::move(parents)};
  }
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct TableauEntry {
  Column column;
  Provenance provenance;
};

/// Ordered, duplicate-free columns: N's left columns, then the all-Star column (pointed),
/// then derived columns in discovery order.
class DerivationTableau {
public:
  std::size_t size() const { return entries_.size(); }
  const TableauEntry& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::optional<std::size_t> find(const Column& c) const;
  bool contains(const Column& c) const { return find(c).has_value(); }

  /// Appends unless the column is already present; returns the column's index either way.
  std::size_t add(Column c, Provenance p);

private:
  std::vector<TableauEntry> entries_;
  std::map<Column, std::size_t> index_;
};

struct SaturationOptions {
  /// Keep going after N's right column appears (computes the whole closure).
  bool full_saturation = false;
  /// Candidate blocks examined per worklist step before a ResourceError is raised.
  std::uint64_t max_candidates = 10'000'000;
};

enum class Verdict : std::uint8_t { Holds, DoesNotHold };
enum class Degenerate : std::uint8_t { None, TrivialS, AntiTrivialN, MZeroCase };

std::string to_string(Verdict v);
std::string to_string(Degenerate d);

struct DecisionReport {
  Verdict verdict = Verdict::DoesNotHold;
  bool pointed = false;
  DerivationTableau tableau;
  Degenerate degenerate = Degenerate::None;
  /// Holds: the members of S used to derive N's right column. Otherwise every member
  /// cited by some derived column.
  std::vector<std::size_t> used_matrices;

  bool holds() const { return verdict == Verdict::Holds; }
};

/// A matrix is trivial iff its forced definitions conflict on a two-element carrier.
bool is_trivial_matrix(const ExtendedMatrix& m);
bool is_trivial_set(const MatrixSet& s);

/// Column saturation of N's left columns under row-wise interpretations of members of S.
/// S must be non-trivial and share N's pointedness.
DerivationTableau saturate(const MatrixSet& s, const ExtendedMatrix& n, const SaturationOptions& options = {});

/// Decides S => N, including the degenerate branches for trivial S and m = 0.
DecisionReport decide(const MatrixSet& s, const ExtendedMatrix& n, const SaturationOptions& options = {});

/// Right columns of every row-wise interpretation of `m` (over an alphabet with `var_count`
/// variables, plus `*` when pointed) whose left columns are exactly `parents`, sorted.
std::vector<Column> derivable_columns(const ExtendedMatrix& m, std::span<const Column> parents, bool pointed,
                                      std::uint32_t var_count);

/// Checks the structural invariants of a tableau for S => N and that every derived column
/// is a genuine one-step consequence of its cited parents. Returns an error description.
std::optional<std::string> validate_tableau(const DerivationTableau& t, const MatrixSet& s, const ExtendedMatrix& n);

/// Tableau length bound: (k+1)^n pointed, k^n otherwise (saturating).
std::uint64_t column_space_size(const ExtendedMatrix& n);

}  // namespace matprop
