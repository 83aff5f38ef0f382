#include "matprop/relcheck.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "matprop/decide.hpp"
#include "matprop/error.hpp"

namespace matprop {

FiniteRelation::FiniteRelation(std::vector<FinitePointedSet> components) : components_(std::move(components)) {
  if (components_.empty()) throw PreconditionError("relations need at least one component");
  std::size_t space = 1;
  for (const auto& c : components_) {
    if (c.carrier_size == 0) throw PreconditionError("empty component carrier");
    if (c.basepoint && *c.basepoint >= c.carrier_size) throw PreconditionError("basepoint out of range");
    if (space > (std::size_t{1} << 28) / c.carrier_size) throw ResourceError("relation space too large");
    space *= c.carrier_size;
  }
  member_.assign(space, false);
}

std::size_t FiniteRelation::encode(std::span<const Element> tuple) const {
  if (tuple.size() != components_.size()) throw PreconditionError("tuple arity differs from the relation arity");
  std::size_t code = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] >= components_[i].carrier_size) throw PreconditionError("tuple element out of range");
    code = code * components_[i].carrier_size + tuple[i];
  }
  return code;
}

std::vector<Element> FiniteRelation::decode(std::size_t code) const {
  std::vector<Element> t(components_.size());
  for (std::size_t i = components_.size(); i-- > 0;) {
    t[i] = static_cast<Element>(code % components_[i].carrier_size);
    code /= components_[i].carrier_size;
  }
  return t;
}

std::size_t FiniteRelation::size() const { return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), true)); }

std::vector<std::vector<Element>> FiniteRelation::tuples() const {
  std::vector<std::vector<Element>> out;
  for (std::size_t c = 0; c < member_.size(); ++c)
    if (member_[c]) out.push_back(decode(c));
  return out;
}

bool FiniteRelation::homogeneous() const {
  return std::all_of(components_.begin(), components_.end(), [&](const auto& c) { return c == components_[0]; });
}

FiniteRelation parse_relation(std::string_view text) {
  std::optional<FiniteRelation> rel;
  std::size_t offset = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::istringstream in{std::string(line)};
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    auto number = [&](const std::string& w) -> std::size_t {
      if (w.empty() || !std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
          w.size() > 9)
        throw ParseError("expected a non-negative integer, got '" + w + "'", offset);
      return std::stoul(w);
    };
    if (!words.empty()) {
      if (!rel) {
        if (words[0] != "carriers:") throw ParseError("relation file must start with 'carriers:'", offset);
        bool pointed = words.back() == "pointed";
        std::size_t last = pointed ? words.size() - 1 : words.size();
        if (last < 2) throw ParseError("no carriers given", offset);
        std::vector<FinitePointedSet> comps;
        for (std::size_t i = 1; i < last; ++i) {
          std::size_t c = number(words[i]);
          if (c == 0) throw ParseError("carrier sizes must be positive", offset);
          comps.push_back({c, pointed ? std::optional<Element>(0) : std::nullopt});
        }
        rel.emplace(std::move(comps));
      } else {
        if (words.size() != rel->arity())
          throw ParseError("tuple has " + std::to_string(words.size()) + " entries, expected " + std::to_string(rel->arity()),
                           offset);
        std::vector<Element> t;
        for (std::size_t i = 0; i < words.size(); ++i) {
          std::size_t v = number(words[i]);
          if (v >= rel->components()[i].carrier_size) throw ParseError("element " + words[i] + " out of range", offset);
          t.push_back(static_cast<Element>(v));
        }
        rel->insert(t);
      }
    }
    offset = end + 1;
  }
  if (!rel) throw ParseError("missing 'carriers:' line", 0);
  return std::move(*rel);
}

std::string format_relation(const FiniteRelation& r) {
  std::string out = "carriers:";
  for (const auto& c : r.components()) out += " " + std::to_string(c.carrier_size);
  if (r.components()[0].pointed()) out += " pointed";
  out += "\n";
  for (const auto& t : r.tuples()) {
    for (std::size_t i = 0; i < t.size(); ++i) out += (i ? " " : "") + std::to_string(t[i]);
    out += "\n";
  }
  return out;
}

namespace {

void check_arity(const ExtendedMatrix& m, const FiniteRelation& r) {
  if (r.arity() != m.rows())
    throw PreconditionError("relation arity " + std::to_string(r.arity()) + " differs from the matrix row count " +
                            std::to_string(m.rows()));
  if (m.has_star())
    for (const auto& c : r.components())
      if (!c.pointed()) throw PreconditionError("matrix uses '*' but the relation is not pointed");
}

// Advances a mixed-radix counter; false once it wraps.
bool next_digits(std::vector<Element>& digits, std::span<const std::size_t> radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

// Checks closedness given a per-row assignment: f[r][v-1] is the image of x_v in row r.
bool block_ok(const ExtendedMatrix& m, const FiniteRelation& r, const std::vector<std::vector<Element>>& f,
              std::vector<Element>& tuple) {
  auto image = [&](std::size_t row, Entry e) -> Element {
    return e.is_star() ? *r.components()[row].basepoint : f[row][e.index() - 1];
  };
  for (std::size_t j = 0; j < m.left_width(); ++j) {
    for (std::size_t row = 0; row < m.rows(); ++row) tuple[row] = image(row, m.at(row, j));
    if (!r.contains(tuple)) return true;
  }
  for (std::size_t row = 0; row < m.rows(); ++row) tuple[row] = image(row, m.right(row));
  return r.contains(tuple);
}

}  // namespace

bool is_M_closed_relation(const ExtendedMatrix& m, const FiniteRelation& r) {
  check_arity(m, r);
  if (!r.homogeneous()) throw PreconditionError("plain closedness needs equal component sets");
  const std::size_t k = m.var_count();
  std::vector<std::size_t> radix(k, r.components()[0].carrier_size);
  std::vector<Element> f(k, 0);
  std::vector<std::vector<Element>> rows(m.rows());
  std::vector<Element> tuple(m.rows());
  do {
    for (auto& row : rows) row = f;
    if (!block_ok(m, r, rows, tuple)) return false;
  } while (next_digits(f, radix));
  return true;
}

bool is_strictly_M_closed_relation(const ExtendedMatrix& m, const FiniteRelation& r) {
  check_arity(m, r);
  const std::size_t k = m.var_count();
  std::vector<std::size_t> radix;
  for (std::size_t row = 0; row < m.rows(); ++row)
    for (std::size_t v = 0; v < k; ++v) radix.push_back(r.components()[row].carrier_size);
  std::vector<Element> digits(radix.size(), 0);
  std::vector<std::vector<Element>> rows(m.rows(), std::vector<Element>(k));
  std::vector<Element> tuple(m.rows());
  do {
    for (std::size_t row = 0; row < m.rows(); ++row)
      std::copy_n(digits.begin() + static_cast<std::ptrdiff_t>(row * k), k, rows[row].begin());
    if (!block_ok(m, r, rows, tuple)) return false;
  } while (next_digits(digits, radix));
  return true;
}

bool is_difunctional(const FiniteRelation& r) {
  if (r.arity() != 2) throw PreconditionError("difunctionality needs a binary relation");
  const Element na = static_cast<Element>(r.components()[0].carrier_size);
  const Element nb = static_cast<Element>(r.components()[1].carrier_size);
  auto in = [&](Element a, Element b) { return r.contains(std::vector<Element>{a, b}); };
  for (Element a = 0; a < na; ++a)
    for (Element a2 = 0; a2 < na; ++a2)
      for (Element b = 0; b < nb; ++b)
        for (Element b2 = 0; b2 < nb; ++b2)
          if (in(a, b2) && in(a2, b2) && in(a2, b) && !in(a, b)) return false;
  return true;
}

SubsetScan closed_subsets_are_S_closed(const MatrixSet& s, const FinitePartialAlgebra& a, std::size_t n,
                                       std::uint64_t cap, SubsetFilter filter) {
  if (n == 0) throw PreconditionError("relation arity must be positive");
  if (is_trivial_set(s)) throw PreconditionError("the matrix set is trivial");
  if (!satisfies_matrix_set(a, s)) throw PreconditionError("the algebra does not satisfy the matrix set");
  for (const auto& m : s)
    if (m.rows() != n) throw PreconditionError("every matrix must have n rows");

  FinitePartialAlgebra p = power(a, n);
  const std::size_t space = p.carrier_size();
  if (space >= 63 || (std::uint64_t{1} << space) > cap)
    throw ResourceError("2^" + std::to_string(space) + " subsets exceed the cap of " + std::to_string(cap));

  std::vector<FinitePointedSet> comps(n, FinitePointedSet{a.carrier_size(), a.basepoint()});
  SubsetScan scan;
  std::vector<bool> members(space);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << space); ++mask) {
    for (std::size_t e = 0; e < space; ++e) members[e] = (mask >> e) & 1u;
    if (filter == SubsetFilter::Closed) {
      if (!is_closed_subset(p, members)) continue;
    } else if (p.pointed() && !members[*p.basepoint()]) {
      continue;
    }
    ++scan.subsets_checked;
    // The power's element codes coincide with the relation's tuple codes.
    FiniteRelation r(comps);
    for (std::size_t e = 0; e < space; ++e) r.set_code(e, members[e]);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!is_M_closed_relation(s[i], r)) {
        scan.all_closed = false;
        scan.counterexample = std::move(r);
        scan.failing_matrix = i;
        return scan;
      }
  }
  return scan;
}

}  // namespace matprop
