#include "matprop/partial_algebra.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "matprop/error.hpp"

namespace matprop {

Signature Signature::of(const MatrixSet& s) {
  Signature sig;
  sig.pointed = s.pointed();
  for (const auto& m : s) sig.arities.push_back(m.left_width());
  return sig;
}

namespace {

constexpr std::uint64_t kDenseLimit = 1u << 22;

// carrier^arity, or nullopt if it does not fit in 63 bits.
std::optional<std::uint64_t> domain_size(std::size_t carrier, std::size_t arity) {
  std::uint64_t size = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    if (carrier != 0 && size > (std::numeric_limits<std::uint64_t>::max() >> 1) / carrier) return std::nullopt;
    size *= carrier;
  }
  return size;
}

}  // namespace

OperationTable::OperationTable(std::size_t arity, std::size_t carrier_size) : arity_(arity), carrier_(carrier_size) {
  auto size = domain_size(carrier_size, arity);
  if (!size) throw ResourceError("operation domain too large to index");
  dense_ = *size <= kDenseLimit;
  if (dense_) dense_values_.assign(static_cast<std::size_t>(*size), kUndefined);
}

std::uint64_t OperationTable::key(std::span<const Element> args) const {
  if (args.size() != arity_)
    throw PreconditionError("arity mismatch: expected " + std::to_string(arity_) + " arguments, got " +
                            std::to_string(args.size()));
  std::uint64_t k = 0;
  for (Element a : args) {
    if (a >= carrier_) throw PreconditionError("element " + std::to_string(a) + " outside the carrier");
    k = k * carrier_ + a;
  }
  return k;
}

std::vector<Element> OperationTable::unkey(std::uint64_t k) const {
  std::vector<Element> args(arity_);
  for (std::size_t i = arity_; i-- > 0;) {
    args[i] = static_cast<Element>(k % carrier_);
    k /= carrier_;
  }
  return args;
}

std::optional<Element> OperationTable::lookup(std::span<const Element> args) const {
  std::uint64_t k = key(args);
  if (dense_) {
    std::uint32_t v = dense_values_[static_cast<std::size_t>(k)];
    if (v == kUndefined) return std::nullopt;
    return v;
  }
  auto it = sparse_values_.find(k);
  if (it == sparse_values_.end()) return std::nullopt;
  return it->second;
}

void OperationTable::define(std::span<const Element> args, Element value) {
  if (value >= carrier_) throw PreconditionError("value " + std::to_string(value) + " outside the carrier");
  std::uint64_t k = key(args);
  if (dense_) {
    auto& slot = dense_values_[static_cast<std::size_t>(k)];
    if (slot == kUndefined) ++defined_;
    slot = value;
  } else {
    if (sparse_values_.insert_or_assign(k, value).second) ++defined_;
  }
}

void OperationTable::erase(std::span<const Element> args) {
  std::uint64_t k = key(args);
  if (dense_) {
    auto& slot = dense_values_[static_cast<std::size_t>(k)];
    if (slot != kUndefined) --defined_;
    slot = kUndefined;
  } else {
    defined_ -= sparse_values_.erase(k);
  }
}

std::vector<OperationTable::Instance> OperationTable::instances() const {
  std::vector<Instance> out;
  out.reserve(defined_);
  if (dense_) {
    for (std::size_t k = 0; k < dense_values_.size(); ++k)
      if (dense_values_[k] != kUndefined) out.push_back({unkey(k), dense_values_[k]});
  } else {
    std::vector<std::uint64_t> keys;
    for (const auto& [k, v] : sparse_values_) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (auto k : keys) out.push_back({unkey(k), sparse_values_.at(k)});
  }
  return out;
}

FinitePartialAlgebra::FinitePartialAlgebra(std::size_t carrier_size, std::optional<Element> basepoint,
                                           std::vector<OperationTable> tables)
    : carrier_(carrier_size), basepoint_(basepoint), tables_(std::move(tables)) {
  if (basepoint_ && *basepoint_ >= carrier_) throw PreconditionError("basepoint outside the carrier");
  for (const auto& t : tables_)
    if (t.carrier_size() != carrier_) throw PreconditionError("operation table over a different carrier");
}

FinitePartialAlgebra FinitePartialAlgebra::terminal(const Signature& sig) {
  std::vector<OperationTable> tables;
  for (std::size_t arity : sig.arities) {
    OperationTable t(arity, 1);
    std::vector<Element> zeros(arity, 0);
    t.define(zeros, 0);
    tables.push_back(std::move(t));
  }
  return FinitePartialAlgebra(1, sig.pointed ? std::optional<Element>(0) : std::nullopt, std::move(tables));
}

Signature FinitePartialAlgebra::signature() const {
  Signature sig;
  sig.pointed = pointed();
  for (const auto& t : tables_) sig.arities.push_back(t.arity());
  return sig;
}

FinitePartialAlgebra FinitePartialAlgebra::without(std::size_t op, std::span<const Element> args) const {
  FinitePartialAlgebra copy = *this;
  copy.tables_.at(op).erase(args);
  return copy;
}

namespace {

class Evaluator {
public:
  Evaluator(const FinitePartialAlgebra& a, std::span<const Element> env) : a_(a), env_(env) {
    for (Element e : env)
      if (e >= a.carrier_size()) throw PreconditionError("environment element outside the carrier");
  }

  // Memoized per shared node: a DAG is evaluated in time linear in its distinct nodes.
  const EvalResult& eval(const Term& t) {
    if (auto it = memo_.find(t.id()); it != memo_.end()) return it->second;
    EvalResult r;
    switch (t.kind()) {
      case Term::Kind::Var:
        if (t.index() > env_.size()) throw PreconditionError("unbound variable y" + std::to_string(t.index()));
        r.value = env_[t.index() - 1];
        break;
      case Term::Kind::Zero:
        if (!a_.pointed()) throw PreconditionError("constant 0 in a non-pointed algebra");
        r.value = *a_.basepoint();
        break;
      case Term::Kind::App: {
        if (t.index() >= a_.op_count()) throw PreconditionError("unknown operation p" + std::to_string(t.index()));
        const OperationTable& table = a_.table(t.index());
        if (table.arity() != t.args().size())
          throw PreconditionError("p" + std::to_string(t.index()) + " applied to " +
                                  std::to_string(t.args().size()) + " arguments, arity is " +
                                  std::to_string(table.arity()));
        std::vector<Element> values;
        values.reserve(t.args().size());
        bool ok = true;
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          const EvalResult& sub = eval(t.args()[i]);
          if (!sub.value) {
            r.undefined_at = sub.undefined_at;
            r.undefined_path.push_back(i);
            r.undefined_path.insert(r.undefined_path.end(), sub.undefined_path.begin(), sub.undefined_path.end());
            ok = false;
            break;
          }
          values.push_back(*sub.value);
        }
        if (ok) {
          r.value = table.lookup(values);
          if (!r.value) r.undefined_at = t;
        }
      }
    }
    return memo_.emplace(t.id(), std::move(r)).first->second;
  }

private:
  const FinitePartialAlgebra& a_;
  std::span<const Element> env_;
  std::unordered_map<const void*, EvalResult> memo_;
};

// Calls f(assignment) for every assignment of `vars` variables into the carrier, first
// variable slowest. Returns false early if f returns false.
template <class F>
bool for_each_assignment(std::size_t vars, std::size_t carrier, F&& f) {
  std::vector<Element> env(vars, 0);
  if (vars > 0 && carrier == 0) return true;
  for (;;) {
    if (!f(std::span<const Element>(env))) return false;
    std::size_t i = vars;
    while (i > 0) {
      --i;
      if (++env[i] < carrier) break;
      env[i] = 0;
      if (i == 0) return true;
    }
    if (vars == 0) return true;
  }
}

}  // namespace

std::optional<Element> eval_term(const FinitePartialAlgebra& a, const Term& t, std::span<const Element> env) {
  return Evaluator(a, env).eval(t).value;
}

EvalResult eval_term_traced(const FinitePartialAlgebra& a, const Term& t, std::span<const Element> env) {
  return Evaluator(a, env).eval(t);
}

bool satisfies_existence_eq(const FinitePartialAlgebra& a, const Term& lhs, const Term& rhs,
                            std::size_t var_count) {
  if (lhs.max_var() > var_count || rhs.max_var() > var_count)
    throw PreconditionError("equation uses variables beyond the declared set");
  return for_each_assignment(var_count, a.carrier_size(), [&](std::span<const Element> env) {
    Evaluator ev(a, env);
    auto l = ev.eval(lhs).value;
    if (!l) return false;
    auto r = ev.eval(rhs).value;
    return r && *l == *r;
  });
}

std::pair<Term, Term> row_equation(const ExtendedMatrix& m, std::size_t op, std::size_t row) {
  auto as_term = [](Entry e) { return e.is_star() ? Term::zero() : Term::var(e.index()); };
  std::vector<Term> args;
  for (Entry e : m.left(row)) args.push_back(as_term(e));
  return {Term::app(static_cast<std::uint32_t>(op), std::move(args)), as_term(m.right(row))};
}

bool satisfies_matrix_set(const FinitePartialAlgebra& a, const MatrixSet& s) {
  if (a.pointed() != s.pointed()) throw PreconditionError("pointedness mismatch between algebra and matrix set");
  if (a.signature() != Signature::of(s)) throw PreconditionError("algebra signature does not match the matrix set");
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t r = 0; r < s[i].rows(); ++r) {
      auto [lhs, rhs] = row_equation(s[i], i, r);
      if (!satisfies_existence_eq(a, lhs, rhs, s[i].var_count())) return false;
    }
  return true;
}

ForcedResult forced_instances(const MatrixSet& s, std::size_t carrier_size, std::optional<Element> basepoint) {
  if (s.pointed() != basepoint.has_value())
    throw PreconditionError("basepoint must be given exactly for pointed matrix sets");
  if (basepoint && *basepoint >= carrier_size) throw PreconditionError("basepoint outside the carrier");

  ForcedResult result;
  struct Key {
    std::size_t op;
    std::vector<Element> args;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = k.op * 0x9E3779B97F4A7C15ull;
      for (Element e : k.args) h = (h ^ e) * 0x100000001B3ull;
      return h;
    }
  };
  std::unordered_map<Key, ForcedDemand, KeyHash> seen;  // first demand per key

  for (std::size_t i = 0; i < s.size(); ++i) {
    const ExtendedMatrix& m = s[i];
    for (std::size_t r = 0; r < m.rows(); ++r) {
      bool consistent = for_each_assignment(m.var_count(), carrier_size, [&](std::span<const Element> env) {
        auto image = [&](Entry e) { return e.is_star() ? *basepoint : env[e.index() - 1]; };
        Key key{i, {}};
        for (Entry e : m.left(r)) key.args.push_back(image(e));
        ForcedDemand demand{i, r, std::vector<Element>(env.begin(), env.end()), image(m.right(r))};
        auto it = seen.find(key);
        if (it == seen.end()) {
          result.instances.push_back({i, key.args, demand.value});
          seen.emplace(std::move(key), std::move(demand));
          return true;
        }
        if (it->second.value == demand.value) return true;
        result.conflict = ForcedConflict{i, key.args, it->second, demand};
        return false;
      });
      if (!consistent) {
        result.instances.clear();
        return result;
      }
    }
  }
  return result;
}

FinitePartialAlgebra free_algebra(const MatrixSet& s, std::size_t carrier_size) {
  if (s.pointed() && carrier_size == 0) throw PreconditionError("a pointed carrier needs at least one element");
  Signature sig = Signature::of(s);
  std::optional<Element> bp = s.pointed() ? std::optional<Element>(0) : std::nullopt;
  ForcedResult forced = forced_instances(s, carrier_size, bp);
  if (!forced.consistent()) return FinitePartialAlgebra::terminal(sig);
  std::vector<OperationTable> tables;
  for (std::size_t arity : sig.arities) tables.emplace_back(arity, carrier_size);
  for (const auto& inst : forced.instances) tables[inst.op].define(inst.args, inst.value);
  return FinitePartialAlgebra(carrier_size, bp, std::move(tables));
}

FinitePartialAlgebra product(const FinitePartialAlgebra& a, const FinitePartialAlgebra& b) {
  if (a.signature() != b.signature()) throw PreconditionError("product of algebras with different signatures");
  const std::size_t nb = b.carrier_size();
  const std::size_t carrier = a.carrier_size() * nb;
  std::optional<Element> bp;
  if (a.pointed()) bp = static_cast<Element>(*a.basepoint() * nb + *b.basepoint());
  std::vector<OperationTable> tables;
  for (std::size_t op = 0; op < a.op_count(); ++op) {
    OperationTable t(a.table(op).arity(), carrier);
    auto ia = a.table(op).instances();
    auto ib = b.table(op).instances();
    std::vector<Element> args(t.arity());
    for (const auto& x : ia)
      for (const auto& y : ib) {
        for (std::size_t k = 0; k < args.size(); ++k) args[k] = static_cast<Element>(x.args[k] * nb + y.args[k]);
        t.define(args, static_cast<Element>(x.value * nb + y.value));
      }
    tables.push_back(std::move(t));
  }
  return FinitePartialAlgebra(carrier, bp, std::move(tables));
}

FinitePartialAlgebra power(const FinitePartialAlgebra& a, std::size_t n) {
  if (n == 0) return FinitePartialAlgebra::terminal(a.signature());
  FinitePartialAlgebra result = a;
  for (std::size_t i = 1; i < n; ++i) result = product(result, a);
  return result;
}

bool is_closed_subset(const FinitePartialAlgebra& b, const std::vector<bool>& members) {
  if (members.size() != b.carrier_size()) throw PreconditionError("membership vector does not match the carrier");
  if (b.pointed() && !members[*b.basepoint()]) return false;
  for (std::size_t op = 0; op < b.op_count(); ++op)
    for (const auto& inst : b.table(op).instances()) {
      bool inside = std::all_of(inst.args.begin(), inst.args.end(), [&](Element e) { return members[e]; });
      if (inside && !members[inst.value]) return false;
    }
  return true;
}

namespace {

std::vector<bool> membership(const FinitePartialAlgebra& b, std::span<const Element> subset) {
  std::vector<bool> members(b.carrier_size(), false);
  for (Element e : subset) {
    if (e >= b.carrier_size()) throw PreconditionError("element " + std::to_string(e) + " outside the carrier");
    members[e] = true;
  }
  return members;
}

}  // namespace

bool is_closed_subset(const FinitePartialAlgebra& b, std::span<const Element> subset) {
  return is_closed_subset(b, membership(b, subset));
}

InducedSubalgebra induced_subalgebra(const FinitePartialAlgebra& b, std::span<const Element> subset) {
  std::vector<bool> members = membership(b, subset);
  std::vector<Element> inclusion;
  std::vector<Element> index(b.carrier_size(), 0);
  for (Element e = 0; e < b.carrier_size(); ++e)
    if (members[e]) {
      index[e] = static_cast<Element>(inclusion.size());
      inclusion.push_back(e);
    }
  std::optional<Element> bp;
  if (b.pointed()) {
    if (!members[*b.basepoint()]) throw PreconditionError("pointed subalgebra must contain the basepoint");
    bp = index[*b.basepoint()];
  }
  std::vector<OperationTable> tables;
  for (std::size_t op = 0; op < b.op_count(); ++op) {
    OperationTable t(b.table(op).arity(), inclusion.size());
    for (const auto& inst : b.table(op).instances()) {
      bool inside = std::all_of(inst.args.begin(), inst.args.end(), [&](Element e) { return members[e]; });
      if (!inside || !members[inst.value]) continue;
      std::vector<Element> args;
      for (Element e : inst.args) args.push_back(index[e]);
      t.define(args, index[inst.value]);
    }
    tables.push_back(std::move(t));
  }
  return {FinitePartialAlgebra(inclusion.size(), bp, std::move(tables)), std::move(inclusion)};
}

HomomorphismCheck is_closed_homomorphism(std::span<const Element> f, const FinitePartialAlgebra& a,
                                         const FinitePartialAlgebra& b) {
  if (a.signature() != b.signature()) throw PreconditionError("homomorphism between different signatures");
  if (f.size() != a.carrier_size()) throw PreconditionError("map is not total on the domain");
  for (Element e : f)
    if (e >= b.carrier_size()) throw PreconditionError("map sends an element outside the codomain");

  HomomorphismCheck result;
  if (a.pointed() && f[*a.basepoint()] != *b.basepoint()) return result;
  for (std::size_t op = 0; op < a.op_count(); ++op)
    for (const auto& inst : a.table(op).instances()) {
      std::vector<Element> image;
      for (Element e : inst.args) image.push_back(f[e]);
      auto v = b.table(op).lookup(image);
      if (!v || *v != f[inst.value]) return result;
    }
  result.is_hom = true;

  for (std::size_t op = 0; op < a.op_count(); ++op) {
    const OperationTable& ta = a.table(op);
    bool reflects = for_each_assignment(ta.arity(), a.carrier_size(), [&](std::span<const Element> args) {
      if (ta.lookup(args)) return true;
      std::vector<Element> image;
      for (Element e : args) image.push_back(f[e]);
      return !b.table(op).lookup(image).has_value();
    });
    if (!reflects) return result;
  }
  result.is_closed = true;
  return result;
}

std::string describe(const FinitePartialAlgebra& a) {
  std::ostringstream out;
  out << "carrier: " << a.carrier_size();
  if (a.pointed()) out << " (basepoint " << *a.basepoint() << ")";
  out << "\n";
  for (std::size_t op = 0; op < a.op_count(); ++op) {
    const auto& t = a.table(op);
    out << "p" << op << " (arity " << t.arity() << ", " << t.defined_count() << " defined)\n";
    for (const auto& inst : t.instances()) {
      out << "  p" << op << "(";
      for (std::size_t i = 0; i < inst.args.size(); ++i) out << (i ? "," : "") << inst.args[i];
      out << ") = " << inst.value << "\n";
    }
  }
  return out.str();
}

}  // namespace matprop
