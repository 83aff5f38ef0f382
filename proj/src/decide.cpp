#include "matprop/decide.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "matprop/error.hpp"
#include "matprop/partial_algebra.hpp"

namespace matprop {

std::string to_string(Verdict v) { return v == Verdict::Holds ? "holds" : "does not hold"; }

std::string to_string(Degenerate d) {
  switch (d) {
    case Degenerate::None:
      return "none";
    case Degenerate::TrivialS:
      return "trivial_S";
    case Degenerate::AntiTrivialN:
      return "anti_trivial_N";
    case Degenerate::MZeroCase:
      return "m_zero_case";
  }
  return "none";
}

std::optional<std::size_t> DerivationTableau::find(const Column& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t DerivationTableau::add(Column c, Provenance p) {
  auto [it, fresh] = index_.emplace(c, entries_.size());
  if (!fresh) return it->second;
  entries_.push_back({std::move(c), std::move(p)});
  return entries_.size() - 1;
}

bool is_trivial_matrix(const ExtendedMatrix& m) {
  MatrixSet single(std::vector<ExtendedMatrix>{m});
  std::optional<Element> bp = m.pointed() ? std::optional<Element>(0) : std::nullopt;
  return !forced_instances(single, 2, bp).consistent();
}

bool is_trivial_set(const MatrixSet& s) {
  return std::any_of(s.begin(), s.end(), [](const ExtendedMatrix& m) { return is_trivial_matrix(m); });
}

std::uint64_t column_space_size(const ExtendedMatrix& n) {
  std::uint64_t base = n.var_count() + (n.pointed() ? 1 : 0);
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < n.rows(); ++i) {
    if (base != 0 && size > std::numeric_limits<std::uint64_t>::max() / base)
      return std::numeric_limits<std::uint64_t>::max();
    size *= base;
  }
  return size;
}

namespace {

// Set of small integer codes: a bit vector when the code space is small, a hash set otherwise.
class CodeSet {
public:
  explicit CodeSet(std::uint64_t space) : dense_(space <= (1u << 24)) {
    if (dense_) bits_.assign(static_cast<std::size_t>(space), false);
  }
  void insert(std::uint64_t c) {
    if (dense_)
      bits_[static_cast<std::size_t>(c)] = true;
    else
      sparse_.insert(c);
  }
  bool contains(std::uint64_t c) const { return dense_ ? bits_[static_cast<std::size_t>(c)] : sparse_.count(c) > 0; }

private:
  bool dense_;
  std::vector<bool> bits_;
  std::unordered_set<std::uint64_t> sparse_;
};

std::uint64_t checked_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > (std::numeric_limits<std::uint64_t>::max() >> 1) / base)
      throw ResourceError("code space too large");
    r *= base;
  }
  return r;
}

// Row vectors f(rho) for every row rho of a matrix and every (pointed) map f from its
// variables into the target alphabet, indexed for prefix pruning. Alphabet codes are
// Entry codes: 0 is '*', i is x_i.
class Interpretations {
public:
  Interpretations(const ExtendedMatrix& m, bool pointed, std::uint32_t target_vars)
      : arity_(m.left_width()), base_(target_vars + 1) {
    for (std::size_t j = 0; j <= arity_; ++j) prefixes_.emplace_back(checked_pow(base_, j));

    std::vector<std::uint32_t> targets;
    if (pointed) targets.push_back(0);
    for (std::uint32_t i = 1; i <= target_vars; ++i) targets.push_back(i);

    const std::size_t vars = m.var_count();
    if (vars > 0 && targets.empty()) return;
    std::vector<std::size_t> choice(vars, 0);
    std::map<std::uint64_t, std::set<std::uint32_t>> rights;
    for (;;) {
      auto image = [&](Entry e) -> std::uint32_t { return e.is_star() ? 0 : targets[choice[e.index() - 1]]; };
      for (std::size_t r = 0; r < m.rows(); ++r) {
        std::uint64_t code = 0;
        auto left = m.left(r);
        for (std::size_t j = 0; j < arity_; ++j) {
          code = code * base_ + image(left[j]);
          prefixes_[j + 1].insert(code);
        }
        rights[code].insert(image(m.right(r)));
      }
      std::size_t i = vars;
      bool done = true;
      while (i > 0) {
        --i;
        if (++choice[i] < targets.size()) {
          done = false;
          break;
        }
        choice[i] = 0;
      }
      if (done) break;
    }
    for (auto& [code, set] : rights) rights_.emplace(code, std::vector<std::uint32_t>(set.begin(), set.end()));
  }

  std::size_t arity() const { return arity_; }
  std::uint64_t base() const { return base_; }
  bool prefix_ok(std::size_t length, std::uint64_t code) const { return prefixes_[length].contains(code); }
  const std::vector<std::uint32_t>* rights(std::uint64_t left_code) const {
    auto it = rights_.find(left_code);
    return it == rights_.end() ? nullptr : &it->second;
  }

private:
  std::size_t arity_;
  std::uint64_t base_;
  std::vector<CodeSet> prefixes_;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> rights_;
};

class Saturator {
public:
  Saturator(const MatrixSet& s, const ExtendedMatrix& n, const SaturationOptions& options)
      : s_(s), n_(n), options_(options), rows_(n.rows()), base_(n.var_count() + 1) {
    for (const auto& m : s) interps_.emplace_back(m, n.pointed(), n.var_count());
    bound_ = column_space_size(n);
    target_ = encode(n.right_column());
  }

  DerivationTableau run() {
    for (std::size_t j = 0; j < n_.left_width(); ++j) push(n_.column(j), Provenance::original(j));
    if (n_.pointed()) push(Column(rows_, Entry::star()), Provenance::star());
    if (done()) return std::move(tableau_);

    // Nullary members do not depend on any column; they fire once up front.
    for (std::size_t mi = 0; mi < s_.size() && !done(); ++mi)
      if (interps_[mi].arity() == 0) {
        candidates_ = 0;
        emit(mi, {}, {});
      }

    for (std::size_t focus = 0; focus < codes_.size() && !done(); ++focus) {
      candidates_ = 0;
      for (std::size_t mi = 0; mi < s_.size() && !done(); ++mi) {
        const std::size_t arity = interps_[mi].arity();
        if (arity == 0) continue;
        // The focus column first occurs at position `first`; earlier positions use older
        // columns only, so each tuple is examined in exactly one step.
        for (std::size_t first = 0; first < arity && !done(); ++first) {
          std::vector<std::size_t> chosen;
          std::vector<std::vector<std::uint64_t>> prefix(arity + 1, std::vector<std::uint64_t>(rows_, 0));
          extend(mi, focus, first, 0, chosen, prefix);
        }
      }
    }
    return std::move(tableau_);
  }

private:
  std::uint64_t encode(const Column& c) const {
    std::uint64_t code = 0;
    for (Entry e : c) code = code * base_ + e.code();
    return code;
  }

  bool done() const { return !options_.full_saturation && present_.count(target_) > 0; }

  void push(Column c, Provenance p) {
    std::uint64_t code = encode(c);
    if (!present_.insert(code).second) return;
    std::vector<std::uint32_t> per_row;
    for (Entry e : c) per_row.push_back(e.code());
    codes_.push_back(std::move(per_row));
    tableau_.add(std::move(c), std::move(p));
    if (tableau_.size() > bound_) throw std::logic_error("tableau exceeds the column-space bound");
  }

  void extend(std::size_t mi, std::size_t focus, std::size_t first, std::size_t pos, std::vector<std::size_t>& chosen,
              std::vector<std::vector<std::uint64_t>>& prefix) {
    const Interpretations& in = interps_[mi];
    if (pos == in.arity()) {
      emit(mi, chosen, prefix[pos]);
      return;
    }
    std::size_t lo = 0, hi = 0;  // candidate tableau indices [lo, hi)
    if (pos < first) {
      hi = focus;
    } else if (pos == first) {
      lo = focus;
      hi = focus + 1;
    } else {
      hi = focus + 1;
    }
    for (std::size_t c = lo; c < hi && !done(); ++c) {
      bool ok = true;
      for (std::size_t r = 0; r < rows_; ++r) {
        std::uint64_t code = prefix[pos][r] * in.base() + codes_[c][r];
        if (!in.prefix_ok(pos + 1, code)) {
          ok = false;
          break;
        }
        prefix[pos + 1][r] = code;
      }
      if (!ok) continue;
      chosen.push_back(c);
      extend(mi, focus, first, pos + 1, chosen, prefix);
      chosen.pop_back();
    }
  }

  // All right columns for a complete block of left columns, in lexicographic order.
  void emit(std::size_t mi, const std::vector<std::size_t>& parents, const std::vector<std::uint64_t>& left_codes) {
    const Interpretations& in = interps_[mi];
    std::vector<const std::vector<std::uint32_t>*> options(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      options[r] = in.rights(left_codes.empty() ? 0 : left_codes[r]);
      if (!options[r]) return;
    }
    std::vector<std::size_t> pick(rows_, 0);
    for (;;) {
      if (++candidates_ > options_.max_candidates)
        throw ResourceError("saturation exceeded " + std::to_string(options_.max_candidates) +
                            " candidate blocks in one step");
      Column c;
      c.reserve(rows_);
      for (std::size_t r = 0; r < rows_; ++r) {
        std::uint32_t code = (*options[r])[pick[r]];
        c.push_back(code == 0 ? Entry::star() : Entry::var(code));
      }
      if (!present_.count(encode(c))) {
        push(std::move(c), Provenance::derived(mi, parents));
        if (done()) return;
      }
      std::size_t r = rows_;
      bool wrapped = true;
      while (r > 0) {
        --r;
        if (++pick[r] < options[r]->size()) {
          wrapped = false;
          break;
        }
        pick[r] = 0;
      }
      if (wrapped) return;
    }
  }

  const MatrixSet& s_;
  const ExtendedMatrix& n_;
  SaturationOptions options_;
  std::size_t rows_;
  std::uint64_t base_;
  std::uint64_t bound_ = 0;
  std::uint64_t target_ = 0;
  std::uint64_t candidates_ = 0;
  std::vector<Interpretations> interps_;
  DerivationTableau tableau_;
  std::vector<std::vector<std::uint32_t>> codes_;
  std::unordered_set<std::uint64_t> present_;
};

DerivationTableau seed_tableau(const ExtendedMatrix& n) {
  DerivationTableau t;
  for (std::size_t j = 0; j < n.left_width(); ++j) t.add(n.column(j), Provenance::original(j));
  if (n.pointed()) t.add(Column(n.rows(), Entry::star()), Provenance::star());
  return t;
}

}  // namespace

DerivationTableau saturate(const MatrixSet& s, const ExtendedMatrix& n, const SaturationOptions& options) {
  if (s.pointed() != n.pointed()) throw PreconditionError("pointedness mismatch between matrix set and conclusion");
  if (is_trivial_set(s)) throw PreconditionError("saturation requires a non-trivial matrix set");
  return Saturator(s, n, options).run();
}

DecisionReport decide(const MatrixSet& s, const ExtendedMatrix& n, const SaturationOptions& options) {
  if (s.pointed() != n.pointed()) throw PreconditionError("pointedness mismatch between matrix set and conclusion");
  DecisionReport report;
  report.pointed = n.pointed();

  if (!n.pointed() && n.left_width() == 0) {
    bool nullary = std::any_of(s.begin(), s.end(), [](const ExtendedMatrix& m) { return m.left_width() == 0; });
    report.verdict = nullary ? Verdict::Holds : Verdict::DoesNotHold;
    report.degenerate = Degenerate::MZeroCase;
    report.tableau = seed_tableau(n);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i].left_width() == 0) {
        report.used_matrices.push_back(i);
        break;
      }
    return report;
  }
  if (is_trivial_set(s)) {
    report.verdict = Verdict::Holds;
    report.degenerate = Degenerate::TrivialS;
    report.tableau = seed_tableau(n);
    return report;
  }

  report.tableau = saturate(s, n, options);
  auto target = report.tableau.find(n.right_column());
  report.verdict = target ? Verdict::Holds : Verdict::DoesNotHold;
  if (is_anti_trivial(n)) report.degenerate = Degenerate::AntiTrivialN;

  std::set<std::size_t> used;
  if (target) {
    std::vector<std::size_t> stack{*target};
    std::set<std::size_t> visited;
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      if (!visited.insert(i).second) continue;
      const Provenance& p = report.tableau[i].provenance;
      if (p.kind != Provenance::Kind::Derived) continue;
      used.insert(p.matrix);
      stack.insert(stack.end(), p.parents.begin(), p.parents.end());
    }
  } else {
    for (const auto& e : report.tableau)
      if (e.provenance.kind == Provenance::Kind::Derived) used.insert(e.provenance.matrix);
  }
  report.used_matrices.assign(used.begin(), used.end());
  return report;
}

std::vector<Column> derivable_columns(const ExtendedMatrix& m, std::span<const Column> parents, bool pointed,
                                      std::uint32_t var_count) {
  if (parents.size() != m.left_width()) throw PreconditionError("parent count differs from the matrix arity");
  if (parents.empty()) throw PreconditionError("derivable_columns needs at least one parent column");
  const std::size_t n = parents.front().size();
  Interpretations in(m, pointed, var_count);
  std::vector<const std::vector<std::uint32_t>*> options;
  for (std::size_t r = 0; r < n; ++r) {
    std::uint64_t code = 0;
    for (const Column& p : parents) code = code * in.base() + p.at(r).code();
    auto* opts = in.rights(code);
    if (!opts) return {};
    options.push_back(opts);
  }
  std::vector<Column> out;
  std::vector<std::size_t> pick(n, 0);
  for (;;) {
    Column c;
    for (std::size_t r = 0; r < n; ++r) {
      std::uint32_t code = (*options[r])[pick[r]];
      c.push_back(code == 0 ? Entry::star() : Entry::var(code));
    }
    out.push_back(std::move(c));
    std::size_t r = n;
    bool wrapped = true;
    while (r > 0) {
      --r;
      if (++pick[r] < options[r]->size()) {
        wrapped = false;
        break;
      }
      pick[r] = 0;
    }
    if (wrapped) break;
  }
  return out;
}

std::optional<std::string> validate_tableau(const DerivationTableau& t, const MatrixSet& s, const ExtendedMatrix& n) {
  // repeated left columns (or one equal to the star column) keep only their first entry
  const DerivationTableau seed = seed_tableau(n);
  std::set<Column> seen;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const TableauEntry& e = t[i];
    if (e.column.size() != n.rows()) return "column " + std::to_string(i) + " has the wrong length";
    if (!seen.insert(e.column).second) return "column " + std::to_string(i) + " is a duplicate";
    const Provenance& p = e.provenance;
    if (i < seed.size()) {
      if (p != seed[i].provenance || e.column != seed[i].column)
        return "entry " + std::to_string(i) + " differs from the seed column " + to_string(seed[i].column);
      continue;
    }
    if (p.kind != Provenance::Kind::Derived) return "entry " + std::to_string(i) + " after the seed is not derived";
    if (p.matrix >= s.size()) return "entry " + std::to_string(i) + " cites an unknown matrix";
    const ExtendedMatrix& mat = s[p.matrix];
    if (p.parents.size() != mat.left_width()) return "entry " + std::to_string(i) + " has the wrong parent count";
    std::vector<Column> parents;
    for (std::size_t q : p.parents) {
      if (q >= i) return "entry " + std::to_string(i) + " cites a later column";
      parents.push_back(t[q].column);
    }
    bool derivable = false;
    if (parents.empty()) {
      // nullary member: each row independently picks an image of some right entry
      Interpretations in(mat, n.pointed(), n.var_count());
      const auto* opts = in.rights(0);
      derivable = opts && std::all_of(e.column.begin(), e.column.end(), [&](Entry x) {
                    return std::binary_search(opts->begin(), opts->end(), x.code());
                  });
    } else {
      auto options = derivable_columns(mat, parents, n.pointed(), n.var_count());
      derivable = std::find(options.begin(), options.end(), e.column) != options.end();
    }
    if (!derivable)
      return "entry " + std::to_string(i) + " is not derivable from its parents";
  }
  if (t.size() < seed.size()) return "tableau is missing seed columns";
  return std::nullopt;
}

}  // namespace matprop
