#include "matprop/certify.hpp"

#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "matprop/error.hpp"
#include "matprop/partial_algebra.hpp"

namespace matprop {

std::string to_string(CertificateSource s) {
  switch (s) {
    case CertificateSource::Extracted:
      return "extracted";
    case CertificateSource::UserSupplied:
      return "user_supplied";
    case CertificateSource::Searched:
      return "searched";
  }
  return "extracted";
}

std::string to_string(CheckOutcome::Reason r) {
  switch (r) {
    case CheckOutcome::Reason::None:
      return "none";
    case CheckOutcome::Reason::Undefined:
      return "undefined";
    case CheckOutcome::Reason::WrongValue:
      return "wrong_value";
  }
  return "none";
}

std::optional<Certificate> extract_term(const DerivationTableau& tableau, const MatrixSet& s,
                                        const ExtendedMatrix& n) {
  auto target = tableau.find(n.right_column());
  if (!target) return std::nullopt;

  std::vector<std::optional<Term>> q(tableau.size());
  std::function<Term(std::size_t)> term_of = [&](std::size_t i) -> Term {
    if (q[i]) return *q[i];
    const Provenance& p = tableau[i].provenance;
    Term t = Term::zero();
    switch (p.kind) {
      case Provenance::Kind::OriginalLeft:
        if (p.left_index >= n.left_width()) throw PreconditionError("provenance cites a missing left column");
        t = Term::var(static_cast<std::uint32_t>(p.left_index + 1));
        break;
      case Provenance::Kind::StarColumn:
        if (!n.pointed()) throw PreconditionError("star column in a non-pointed tableau");
        break;
      case Provenance::Kind::Derived: {
        if (p.matrix >= s.size()) throw PreconditionError("provenance cites an unknown matrix");
        if (p.parents.size() != s[p.matrix].left_width())
          throw PreconditionError("provenance parent count differs from the matrix arity");
        std::vector<Term> args;
        for (std::size_t parent : p.parents) {
          if (parent >= i) throw PreconditionError("provenance cites a later column");
          args.push_back(term_of(parent));
        }
        t = Term::app(static_cast<std::uint32_t>(p.matrix), std::move(args));
        break;
      }
    }
    q[i] = t;
    return t;
  };
  return Certificate{term_of(*target), CertificateSource::Extracted};
}

std::optional<Certificate> extract_term(const DecisionReport& report, const MatrixSet& s,
                                        const ExtendedMatrix& n) {
  if (!report.holds()) return std::nullopt;
  switch (report.degenerate) {
    case Degenerate::TrivialS:
      return Certificate{n.pointed() ? Term::zero() : Term::var(1), CertificateSource::Extracted};
    case Degenerate::MZeroCase:
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i].left_width() == 0) return Certificate{Term::app(static_cast<std::uint32_t>(i), {}), CertificateSource::Extracted};
      return std::nullopt;
    default:
      return extract_term(report.tableau, s, n);
  }
}

namespace {

// The free algebra of S on N's variables, with each row of N as an environment and its
// right entry as the expected value.
struct RowModel {
  FinitePartialAlgebra algebra;
  std::vector<std::vector<Element>> envs;
  std::vector<Element> expected;
};

Element element_of(Entry e, bool pointed) {
  if (e.is_star()) return 0;
  return pointed ? e.index() : e.index() - 1;
}

Entry entry_of(Element v, bool pointed) {
  if (pointed) return v == 0 ? Entry::star() : Entry::var(v);
  return Entry::var(v + 1);
}

RowModel row_model(const MatrixSet& s, const ExtendedMatrix& n, std::size_t carrier) {
  RowModel model{free_algebra(s, carrier), {}, {}};
  for (std::size_t r = 0; r < n.rows(); ++r) {
    std::vector<Element> env;
    for (Entry e : n.left(r)) env.push_back(element_of(e, n.pointed()));
    if (carrier == 1) std::fill(env.begin(), env.end(), 0);
    model.envs.push_back(std::move(env));
    model.expected.push_back(carrier == 1 ? 0 : element_of(n.right(r), n.pointed()));
  }
  return model;
}

void check_shape(const MatrixSet& s, const ExtendedMatrix& n, const Term& t) {
  if (s.pointed() != n.pointed()) throw PreconditionError("pointedness mismatch between matrix set and conclusion");
  if (t.max_var() > n.left_width())
    throw PreconditionError("term uses y" + std::to_string(t.max_var()) + " but the conclusion has only " +
                            std::to_string(n.left_width()) + " left columns");
  if (!n.pointed() && t.contains_zero()) throw PreconditionError("constant 0 in non-pointed mode");
}

}  // namespace

CheckOutcome check_certificate(const MatrixSet& s, const ExtendedMatrix& n, const Term& t) {
  check_shape(s, n, t);
  const bool trivial = is_trivial_set(s);
  CheckOutcome out;
  std::size_t carrier = n.var_count() + (n.pointed() ? 1 : 0);
  if (trivial) {
    out.degenerate = true;
    // Models of a trivial S have at most one element; except for non-pointed nullary
    // conclusions every term is then a certificate.
    if (n.pointed() || n.left_width() > 0) {
      RowModel probe = row_model(s, n, 1);
      for (const auto& env : probe.envs) eval_term(probe.algebra, t, env);  // type check only
      return out;
    }
    carrier = 1;
  }
  RowModel model = row_model(s, n, carrier);
  for (std::size_t r = 0; r < n.rows(); ++r) {
    EvalResult res = eval_term_traced(model.algebra, t, model.envs[r]);
    if (!res.value) {
      out.status = CheckOutcome::Status::Invalid;
      out.reason = CheckOutcome::Reason::Undefined;
      out.row = r + 1;
      out.undefined_at = res.undefined_at;
      out.path = res.undefined_path;
      return out;
    }
    if (*res.value != model.expected[r]) {
      out.status = CheckOutcome::Status::Invalid;
      out.reason = CheckOutcome::Reason::WrongValue;
      out.row = r + 1;
      out.got = entry_of(*res.value, n.pointed());
      out.expected = n.right(r);
      return out;
    }
  }
  return out;
}

namespace {

struct VectorHash {
  std::size_t operator()(const std::vector<Element>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (Element e : v) h = (h ^ e) * 1099511628211ull;
    return h;
  }
};

class TermSearch {
public:
  TermSearch(const MatrixSet& s, const ExtendedMatrix& n, const SearchOptions& options, RowModel model)
      : s_(s), n_(n), options_(options), model_(std::move(model)) {}

  std::optional<Term> run() {
    by_size_.resize(options_.max_nodes + 1);
    // size 1: variables, then 0, then nullary operations
    for (std::uint32_t j = 1; j <= n_.left_width(); ++j) {
      std::vector<Element> values;
      for (const auto& env : model_.envs) values.push_back(env[j - 1]);
      if (offer(Term::var(j), std::move(values), 1)) return found_;
    }
    if (n_.pointed() && offer(Term::zero(), std::vector<Element>(n_.rows(), 0), 1)) return found_;
    for (std::size_t op = 0; op < s_.size(); ++op)
      if (s_[op].left_width() == 0) {
        auto v = model_.algebra.table(op).lookup({});
        if (v && offer(Term::app(static_cast<std::uint32_t>(op), {}), std::vector<Element>(n_.rows(), *v), 1))
          return found_;
      }

    for (std::size_t size = 2; size <= options_.max_nodes; ++size) {
      std::uint64_t built = 0;
      for (std::size_t op = 0; op < s_.size(); ++op) {
        const std::size_t arity = s_[op].left_width();
        if (arity == 0 || arity > size - 1) continue;
        std::vector<std::size_t> sizes(arity, 1);
        sizes.back() = size - arity;
        for (;;) {
          if (combine(op, sizes, size, built)) return found_;
          if (!next_composition(sizes)) break;
        }
      }
    }
    return std::nullopt;
  }

private:
  // Next composition of the same total (all parts >= 1) in lexicographic order.
  static bool next_composition(std::vector<std::size_t>& sizes) {
    const std::size_t k = sizes.size();
    std::size_t total = 0;
    for (std::size_t x : sizes) total += x;
    std::size_t tail = sizes[k - 1];
    for (std::size_t i = k - 1; i-- > 0;) {
      // parts i+1..k-1 sum to `tail`; they can give one unit to part i
      if (tail > k - 1 - i) {
        ++sizes[i];
        std::size_t head = 0;
        for (std::size_t j = 0; j <= i; ++j) head += sizes[j];
        for (std::size_t j = i + 1; j + 1 < k; ++j) {
          sizes[j] = 1;
          ++head;
        }
        sizes[k - 1] = total - head;
        return true;
      }
      tail += sizes[i];
    }
    return false;
  }

  bool combine(std::size_t op, const std::vector<std::size_t>& sizes, std::size_t size, std::uint64_t& built) {
    const std::size_t arity = sizes.size();
    for (std::size_t sz : sizes)
      if (by_size_[sz].empty()) return false;
    std::vector<std::size_t> pick(arity, 0);
    const OperationTable& table = model_.algebra.table(op);
    std::vector<Element> args(arity);
    for (;;) {
      if (++built > options_.max_candidates) throw ResourceError("term search exceeded its candidate cap");
      std::vector<Element> values;
      values.reserve(n_.rows());
      bool defined = true;
      for (std::size_t r = 0; r < n_.rows() && defined; ++r) {
        for (std::size_t a = 0; a < arity; ++a) args[a] = reps_[by_size_[sizes[a]][pick[a]]].values[r];
        auto v = table.lookup(args);
        if (v)
          values.push_back(*v);
        else
          defined = false;
      }
      if (defined && !seen_.count(values)) {
        std::vector<Term> children;
        for (std::size_t a = 0; a < arity; ++a) children.push_back(reps_[by_size_[sizes[a]][pick[a]]].term);
        if (offer(Term::app(static_cast<std::uint32_t>(op), std::move(children)), std::move(values), size)) return true;
      }
      std::size_t a = arity;
      bool wrapped = true;
      while (a > 0) {
        --a;
        if (++pick[a] < by_size_[sizes[a]].size()) {
          wrapped = false;
          break;
        }
        pick[a] = 0;
      }
      if (wrapped) return false;
    }
  }

  bool offer(Term t, std::vector<Element> values, std::size_t size) {
    if (!seen_.insert(values).second) return false;
    bool hit = values == model_.expected;
    reps_.push_back({t, std::move(values)});
    by_size_[size].push_back(reps_.size() - 1);
    if (hit) found_ = t;
    return hit;
  }

  struct Rep {
    Term term;
    std::vector<Element> values;
  };

  const MatrixSet& s_;
  const ExtendedMatrix& n_;
  SearchOptions options_;
  RowModel model_;
  std::vector<Rep> reps_;
  std::vector<std::vector<std::size_t>> by_size_;
  std::unordered_set<std::vector<Element>, VectorHash> seen_;
  std::optional<Term> found_;
};

}  // namespace

std::optional<Certificate> search_term(const MatrixSet& s, const ExtendedMatrix& n, const SearchOptions& options) {
  if (s.pointed() != n.pointed()) throw PreconditionError("pointedness mismatch between matrix set and conclusion");
  if (options.max_nodes == 0) throw PreconditionError("max_nodes must be at least 1");
  std::size_t carrier = n.var_count() + (n.pointed() ? 1 : 0);
  if (is_trivial_set(s)) {
    if (n.pointed()) return Certificate{Term::zero(), CertificateSource::Searched};
    if (n.left_width() > 0) return Certificate{Term::var(1), CertificateSource::Searched};
    carrier = 1;
  }
  auto t = TermSearch(s, n, options, row_model(s, n, carrier)).run();
  if (!t) return std::nullopt;
  return Certificate{*t, CertificateSource::Searched};
}

}  // namespace matprop
