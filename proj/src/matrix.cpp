#include "matprop/matrix.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <utility>

#include "matprop/error.hpp"

namespace matprop {

std::string to_string(Entry e) {
  return e.is_star() ? std::string("*") : "x" + std::to_string(e.index());
}

std::string to_string(const Column& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ",";
    out += to_string(c[i]);
  }
  return out + ")";
}

ExtendedMatrix ExtendedMatrix::make(std::vector<std::vector<Entry>> grid, bool pointed) {
  if (grid.empty()) throw PreconditionError("matrix has no rows");
  const std::size_t width = grid.front().size();
  if (width == 0) throw PreconditionError("matrix row has no right entry");

  std::vector<std::uint32_t> used;
  for (const auto& row : grid) {
    if (row.size() != width) throw PreconditionError("ragged matrix rows");
    for (Entry e : row) {
      if (e.is_star()) {
        if (!pointed) throw PreconditionError("'*' entry in a non-pointed matrix");
      } else {
        used.push_back(e.index());
      }
    }
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());

  for (auto& row : grid)
    for (Entry& e : row)
      if (e.is_var()) {
        auto pos = std::lower_bound(used.begin(), used.end(), e.index()) - used.begin();
        e = Entry::var(static_cast<std::uint32_t>(pos + 1));
      }

  ExtendedMatrix m;
  m.grid_ = std::move(grid);
  m.var_count_ = static_cast<std::uint32_t>(used.size());
  m.pointed_ = pointed;
  return m;
}

Column ExtendedMatrix::column(std::size_t j) const {
  Column c;
  c.reserve(rows());
  for (const auto& row : grid_) c.push_back(row[j]);
  return c;
}

bool ExtendedMatrix::has_star() const {
  for (const auto& row : grid_)
    for (Entry e : row)
      if (e.is_star()) return true;
  return false;
}

ExtendedMatrix ExtendedMatrix::as_pointed() const {
  ExtendedMatrix m = *this;
  m.pointed_ = true;
  return m;
}

MatrixSet::MatrixSet(std::vector<ExtendedMatrix> members) : pointed_(false) {
  if (members.empty()) throw PreconditionError("cannot infer pointedness of an empty matrix set");
  pointed_ = members.front().pointed();
  for (const auto& m : members)
    if (m.pointed() != pointed_) throw PreconditionError("matrix set mixes pointed and non-pointed matrices");
  members_ = std::move(members);
}

MatrixSet::MatrixSet(std::vector<ExtendedMatrix> members, bool pointed) : pointed_(pointed) {
  for (const auto& m : members)
    if (m.pointed() != pointed_) throw PreconditionError("matrix set mixes pointed and non-pointed matrices");
  members_ = std::move(members);
}

namespace {

class MatrixParser {
public:
  explicit MatrixParser(std::string_view text) : text_(text) {}

  std::pair<std::vector<std::vector<Entry>>, bool> run() {
    expect('[');
    std::vector<std::vector<Entry>> grid;
    bool saw_star = false;
    for (;;) {
      std::vector<Entry> row;
      bool bar = false;
      for (;;) {
        skip_ws();
        char c = peek();
        if (c == '|') {
          if (bar) fail("second '|' in row");
          bar = true;
          ++pos_;
          row.push_back(entry(saw_star));
          break;
        }
        if (c == '*' || c == 'x') {
          row.push_back(entry(saw_star));
          continue;
        }
        if (c == ';' || c == ']') fail("row is missing '|'");
        fail(c == '\0' ? "unexpected end of input" : std::string("unexpected character '") + c + "'");
      }
      grid.push_back(std::move(row));
      skip_ws();
      char c = peek();
      if (c == ';') {
        ++pos_;
        continue;
      }
      if (c == ']') {
        ++pos_;
        break;
      }
      fail("expected ';' or ']'");
    }
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after ']'");
    return {std::move(grid), saw_star};
  }

  std::size_t pos() const { return pos_; }

private:
  Entry entry(bool& saw_star) {
    skip_ws();
    char c = peek();
    if (c == '*') {
      ++pos_;
      saw_star = true;
      return Entry::star();
    }
    if (c != 'x') fail("expected '*' or 'x<digits>'");
    ++pos_;
    std::size_t start = pos_;
    std::uint64_t value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (value > 1'000'000) fail("variable index too large");
      ++pos_;
    }
    if (pos_ == start) fail("expected digits after 'x'");
    if (value == 0) {
      pos_ = start;
      fail("variable indices start at 1");
    }
    return Entry::var(static_cast<std::uint32_t>(value));
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ExtendedMatrix parse_matrix(std::string_view text, std::optional<bool> pointed_mode) {
  MatrixParser parser(text);
  auto [grid, saw_star] = parser.run();
  const std::size_t width = grid.front().size();
  for (std::size_t r = 0; r < grid.size(); ++r)
    if (grid[r].size() != width)
      throw ParseError("ragged rows: row " + std::to_string(r + 1) + " has " +
                           std::to_string(grid[r].size()) + " entries, expected " + std::to_string(width),
                       0);
  if (pointed_mode == false && saw_star) throw ParseError("'*' entry in non-pointed mode", 0);
  bool pointed = pointed_mode.value_or(saw_star);
  return ExtendedMatrix::make(std::move(grid), pointed);
}

std::string format_matrix(const ExtendedMatrix& m) {
  std::string out = "[";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (r) out += " ; ";
    for (Entry e : m.left(r)) out += to_string(e) + " ";
    out += "| " + to_string(m.right(r));
  }
  return out + "]";
}

namespace {

const std::map<std::string, std::string, std::less<>>& builtin_table() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"mal", "[x1 x2 x2 | x1 ; x2 x2 x1 | x1]"},
      {"maj", "[x1 x1 x2 | x1 ; x1 x2 x1 | x1 ; x2 x1 x1 | x1]"},
      {"ari", "[x1 x2 x2 | x1 ; x2 x2 x1 | x1 ; x1 x2 x1 | x1]"},
      {"uni", "[x1 * | x1 ; * x1 | x1]"},
      {"struni", "[x1 * * | x1 ; x2 x2 x1 | x1]"},
      {"struni2", "[x1 x1 * | x1 ; * * x1 | x1 ; x1 * x1 | *]"},
      {"sub", "[x1 * | x1 ; x1 x1 | *]"},
      {"p3", "[x1 x1 x1 | x1 ; x1 x1 * | * ; * x1 x1 | *]"},
      {"q4", "[x1 * * * | x1 ; x1 x1 x2 x2 | * ; x1 x2 x1 x2 | *]"},
      {"edge3", "[x2 x2 x1 x1 | x1 ; x2 x1 x2 x1 | x1 ; x1 x1 x1 x2 | x1]"},
      {"cube3", "[x1 x1 x1 x2 x2 | x1 ; x1 x2 x2 x1 x1 | x1 ; x2 x1 x2 x1 x2 | x1]"},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"mal",     "maj", "ari", "uni",   "struni", "struni2",
                                                 "sub",     "p3",  "q4",  "edge3", "cube3"};
  return names;
}

bool is_builtin(std::string_view name) { return builtin_table().find(name) != builtin_table().end(); }

ExtendedMatrix builtin_matrix(std::string_view name) {
  auto it = builtin_table().find(name);
  if (it == builtin_table().end()) throw PreconditionError("unknown builtin matrix '" + std::string(name) + "'");
  return parse_matrix(it->second);
}

bool is_anti_trivial(const ExtendedMatrix& m) {
  Column right = m.right_column();
  if (m.pointed() && std::all_of(right.begin(), right.end(), [](Entry e) { return e.is_star(); })) return true;
  for (std::size_t j = 0; j < m.left_width(); ++j)
    if (m.column(j) == right) return true;
  return false;
}

}  // namespace matprop
