#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace matprop {

/// One entry of an extended matrix: the distinguished point `*` or a variable x_i (i >= 1).
class Entry {
public:
  constexpr Entry() = default;

  static constexpr Entry star() { return Entry(0); }
  static constexpr Entry var(std::uint32_t index) { return Entry(index); }

  constexpr bool is_star() const { return code_ == 0; }
  constexpr bool is_var() const { return code_ != 0; }
  /// Variable index (1-based). Zero for `*`.
  constexpr std::uint32_t index() const { return code_; }
  /// Dense code: 0 for `*`, i for x_i. Used as an alphabet position.
  constexpr std::uint32_t code() const { return code_; }

  friend constexpr bool operator==(Entry, Entry) = default;
  friend constexpr auto operator<=>(Entry, Entry) = default;

private:
  constexpr explicit Entry(std::uint32_t code) : code_(code) {}
  std::uint32_t code_ = 0;
};

using Column = std::vector<Entry>;

std::string to_string(Entry e);
std::string to_string(const Column& c);

/// An n x (m+1) matrix over {*, x1, ..., xk}. The last column is the right column.
///
/// Instances are always validated and carry dense variable numbering: every index in
/// 1..k occurs, k being the largest one.
class ExtendedMatrix {
public:
  /// Validates `grid` and compresses variable indices to 1..k keeping their relative order.
  /// A Star entry requires `pointed`.
  static ExtendedMatrix make(std::vector<std::vector<Entry>> grid, bool pointed);

  std::size_t rows() const { return grid_.size(); }
  std::size_t left_width() const { return grid_.front().size() - 1; }
  std::uint32_t var_count() const { return var_count_; }
  bool pointed() const { return pointed_; }

  Entry at(std::size_t row, std::size_t col) const { return grid_[row][col]; }
  std::span<const Entry> row(std::size_t r) const { return grid_[r]; }
  std::span<const Entry> left(std::size_t r) const {
    return std::span<const Entry>(grid_[r]).first(left_width());
  }
  Entry right(std::size_t r) const { return grid_[r].back(); }

  /// Column j (0-based); j == left_width() is the right column.
  Column column(std::size_t j) const;
  Column right_column() const { return column(left_width()); }

  bool has_star() const;

  /// Same grid, flagged pointed.
  ExtendedMatrix as_pointed() const;

  const std::vector<std::vector<Entry>>& grid() const { return grid_; }

  friend bool operator==(const ExtendedMatrix&, const ExtendedMatrix&) = default;

private:
  ExtendedMatrix() = default;

  std::vector<std::vector<Entry>> grid_;
  std::uint32_t var_count_ = 0;
  bool pointed_ = false;
};

/// Ordered matrices sharing one pointedness flag. Position i names the operation symbol p_i.
class MatrixSet {
public:
  explicit MatrixSet(bool pointed) : pointed_(pointed) {}
  /// Pointedness is taken from the members; they must agree. Throws on an empty list.
  explicit MatrixSet(std::vector<ExtendedMatrix> members);
  MatrixSet(std::vector<ExtendedMatrix> members, bool pointed);

  bool pointed() const { return pointed_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const ExtendedMatrix& operator[](std::size_t i) const { return members_[i]; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  const std::vector<ExtendedMatrix>& members() const { return members_; }

private:
  std::vector<ExtendedMatrix> members_;
  bool pointed_;
};

/// Parses `[e e ... | e ; ...]`. `pointed_mode`: nullopt infers from Star presence,
/// true forces pointed, false rejects Star entries.
ExtendedMatrix parse_matrix(std::string_view text, std::optional<bool> pointed_mode = std::nullopt);

/// Canonical text form; parse_matrix(format_matrix(M), M.pointed()) == M.
std::string format_matrix(const ExtendedMatrix& m);

/// Names accepted by builtin_matrix.
const std::vector<std::string>& builtin_names();
bool is_builtin(std::string_view name);
ExtendedMatrix builtin_matrix(std::string_view name);

/// Right column is all Star (pointed only) or equal to some left column.
bool is_anti_trivial(const ExtendedMatrix& m);

}  // namespace matprop
