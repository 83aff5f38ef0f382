#include "matprop/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "matprop/error.hpp"

namespace matprop {

Term Term::var(std::uint32_t index) {
  if (index == 0) throw PreconditionError("variable indices start at 1");
  return Term(std::make_shared<const Node>(Node{Kind::Var, index, {}}));
}

Term Term::zero() { return Term(std::make_shared<const Node>(Node{Kind::Zero, 0, {}})); }

Term Term::app(std::uint32_t op, std::vector<Term> args) {
  return Term(std::make_shared<const Node>(Node{Kind::App, op, std::move(args)}));
}

namespace {

// Post-order over distinct nodes; children before parents.
std::vector<Term> topo_order(const Term& root) {
  std::vector<Term> order;
  std::unordered_set<const void*> seen;
  std::vector<std::pair<Term, std::size_t>> stack{{root, 0}};
  seen.insert(root.id());
  while (!stack.empty()) {
    auto& [t, next] = stack.back();
    if (next < t.args().size()) {
      Term child = t.args()[next++];
      if (seen.insert(child.id()).second) stack.emplace_back(child, 0);
    } else {
      order.push_back(t);
      stack.pop_back();
    }
  }
  return order;
}

std::size_t sat_add(std::size_t a, std::size_t b) {
  return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max() : a + b;
}

}  // namespace

std::size_t Term::tree_size() const {
  std::unordered_map<const void*, std::size_t> size;
  for (const Term& t : topo_order(*this)) {
    std::size_t s = 1;
    for (const Term& a : t.args()) s = sat_add(s, size.at(a.id()));
    size[t.id()] = s;
  }
  return size.at(id());
}

std::size_t Term::dag_size() const { return topo_order(*this).size(); }

std::uint32_t Term::max_var() const {
  std::uint32_t best = 0;
  for (const Term& t : topo_order(*this))
    if (t.is_var()) best = std::max(best, t.index());
  return best;
}

bool Term::contains_zero() const {
  for (const Term& t : topo_order(*this))
    if (t.is_zero()) return true;
  return false;
}

bool operator==(const Term& a, const Term& b) {
  std::set<std::pair<const void*, const void*>> equal;
  std::function<bool(const Term&, const Term&)> eq = [&](const Term& x, const Term& y) {
    if (x.id() == y.id()) return true;
    if (equal.count({x.id(), y.id()})) return true;
    if (x.kind() != y.kind() || x.index() != y.index() || x.args().size() != y.args().size()) return false;
    for (std::size_t i = 0; i < x.args().size(); ++i)
      if (!eq(x.args()[i], y.args()[i])) return false;
    equal.insert({x.id(), y.id()});
    return true;
  };
  return eq(a, b);
}

namespace {

void append_expanded(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      out += "y" + std::to_string(t.index());
      return;
    case Term::Kind::Zero:
      out += "0";
      return;
    case Term::Kind::App:
      out += "p" + std::to_string(t.index()) + "(";
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) out += ", ";
        append_expanded(t.args()[i], out);
      }
      out += ")";
  }
}

}  // namespace

std::optional<std::string> format_term(const Term& t, std::size_t max_nodes) {
  if (t.tree_size() > max_nodes) return std::nullopt;
  std::string out;
  append_expanded(t, out);
  return out;
}

std::string format_term_shared(const Term& root) {
  std::vector<Term> order = topo_order(root);
  std::unordered_map<const void*, std::size_t> refs;
  for (const Term& t : order)
    for (const Term& a : t.args()) ++refs[a.id()];

  std::unordered_map<const void*, std::string> name;
  std::string out;
  std::function<std::string(const Term&)> render = [&](const Term& t) -> std::string {
    if (auto it = name.find(t.id()); it != name.end()) return it->second;
    switch (t.kind()) {
      case Term::Kind::Var:
        return "y" + std::to_string(t.index());
      case Term::Kind::Zero:
        return "0";
      case Term::Kind::App:
        break;
    }
    std::string s = "p" + std::to_string(t.index()) + "(";
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) s += ", ";
      s += render(t.args()[i]);
    }
    return s + ")";
  };
  std::size_t next = 0;
  for (const Term& t : order) {
    if (!t.is_app() || t.id() == root.id() || refs[t.id()] < 2) continue;
    std::string binding = "t" + std::to_string(next++);
    out += "let " + binding + " = " + render(t) + "; ";
    name[t.id()] = binding;
  }
  return out + render(root);
}

namespace {

class TermParser {
public:
  TermParser(std::string_view text, bool allow_zero) : text_(text), allow_zero_(allow_zero) {}

  Term run() {
    skip_ws();
    while (keyword("let")) {
      skip_ws();
      std::string binding = identifier();
      skip_ws();
      expect('=');
      Term value = term();
      skip_ws();
      expect(';');
      if (bindings_.count(binding)) fail("duplicate binding '" + binding + "'");
      bindings_.emplace(binding, value);
      skip_ws();
    }
    Term result = term();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return result;
  }

private:
  Term term() {
    skip_ws();
    char c = peek();
    if (c == '0') {
      ++pos_;
      if (!allow_zero_) fail("constant 0 in non-pointed mode");
      return Term::zero();
    }
    if (c == 'y') {
      ++pos_;
      std::uint32_t i = number();
      if (i == 0) fail("variable indices start at 1");
      return Term::var(i);
    }
    if (c == 'p') {
      ++pos_;
      std::uint32_t op = number();
      skip_ws();
      expect('(');
      std::vector<Term> args;
      skip_ws();
      if (peek() == ')') {
        ++pos_;
        return Term::app(op, {});
      }
      for (;;) {
        args.push_back(term());
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
      return Term::app(op, std::move(args));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      std::string id = identifier();
      auto it = bindings_.find(id);
      if (it == bindings_.end()) {
        pos_ = start;
        fail("unknown name '" + id + "'");
      }
      return it->second;
    }
    fail(c == '\0' ? "unexpected end of input" : std::string("unexpected character '") + c + "'");
  }

  std::uint32_t number() {
    std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (v > 1'000'000) fail("index too large");
      ++pos_;
    }
    if (pos_ == start) fail("expected digits");
    return static_cast<std::uint32_t>(v);
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  bool keyword(std::string_view kw) {
    if (text_.substr(pos_, kw.size()) != kw) return false;
    std::size_t after = pos_ + kw.size();
    if (after < text_.size() && !std::isspace(static_cast<unsigned char>(text_[after]))) return false;
    pos_ = after;
    return true;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  std::string_view text_;
  bool allow_zero_;
  std::size_t pos_ = 0;
  std::map<std::string, Term> bindings_;
};

}  // namespace

Term parse_term(std::string_view text, bool allow_zero) { return TermParser(text, allow_zero).run(); }

Term substitute_vars(const Term& root, std::span<const Term> replacements) {
  std::unordered_map<const void*, Term> done;
  for (const Term& t : topo_order(root)) {
    switch (t.kind()) {
      case Term::Kind::Var:
        if (t.index() > replacements.size())
          throw PreconditionError("no replacement for y" + std::to_string(t.index()));
        done.emplace(t.id(), replacements[t.index() - 1]);
        break;
      case Term::Kind::Zero:
        done.emplace(t.id(), t);
        break;
      case Term::Kind::App: {
        std::vector<Term> args;
        for (const Term& a : t.args()) args.push_back(done.at(a.id()));
        done.emplace(t.id(), Term::app(t.index(), std::move(args)));
      }
    }
  }
  return done.at(root.id());
}

Term substitute_ops(const Term& root, std::span<const Term> definitions) {
  std::unordered_map<const void*, Term> done;
  for (const Term& t : topo_order(root)) {
    if (!t.is_app()) {
      done.emplace(t.id(), t);
      continue;
    }
    if (t.index() >= definitions.size())
      throw PreconditionError("no definition for p" + std::to_string(t.index()));
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(done.at(a.id()));
    done.emplace(t.id(), substitute_vars(definitions[t.index()], args));
  }
  return done.at(root.id());
}

}  // namespace matprop
