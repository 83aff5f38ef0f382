#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace matprop {

/// A partial term over y-variables, the constant 0 and operation symbols p_i.
///
/// Terms are immutable DAG nodes shared through reference counting; structurally they
/// behave as trees, but a subterm reused by several parents is stored once.
class Term {
public:
  enum class Kind : std::uint8_t { Var, Zero, App };

  static Term var(std::uint32_t index);  // y_index, index >= 1
  static Term zero();
  static Term app(std::uint32_t op, std::vector<Term> args);

  Kind kind() const { return node_->kind; }
  bool is_var() const { return kind() == Kind::Var; }
  bool is_zero() const { return kind() == Kind::Zero; }
  bool is_app() const { return kind() == Kind::App; }

  /// Variable index for Var, operation index for App.
  std::uint32_t index() const { return node_->index; }
  std::span<const Term> args() const { return node_->args; }

  /// Identity of the shared node; equal ids imply structurally equal terms.
  const void* id() const { return node_.get(); }

  /// Node count of the expanded tree, saturating at SIZE_MAX.
  std::size_t tree_size() const;
  /// Number of distinct shared nodes.
  std::size_t dag_size() const;
  /// Largest variable index occurring (0 if none).
  std::uint32_t max_var() const;
  bool contains_zero() const;

  friend bool operator==(const Term& a, const Term& b);

private:
  struct Node {
    Kind kind;
    std::uint32_t index;
    std::vector<Term> args;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

/// Fully expanded text, e.g. "p0(y2, p0(y3, y1, y2), y3)". Returns nullopt when the
/// expansion would exceed `max_nodes` nodes.
std::optional<std::string> format_term(const Term& t, std::size_t max_nodes = 10'000);

/// Let-shared text: "let t0 = ...; let t1 = p0(t0, y1); t1". Every App node referenced
/// more than once gets a binding. Falls back to the plain form when nothing is shared.
std::string format_term_shared(const Term& t);

/// Parses the plain grammar `y<d> | 0 | p<d>(term, ...)` and the let-shared form.
/// `p<d>()` denotes a nullary operation. `allow_zero = false` rejects the constant.
Term parse_term(std::string_view text, bool allow_zero = true);

/// Replaces each y_j by replacements[j-1].
Term substitute_vars(const Term& t, std::span<const Term> replacements);

/// Replaces each p_i(a_1..a_r) by definitions[i] with y_j := a_j (recursively).
Term substitute_ops(const Term& t, std::span<const Term> definitions);

}  // namespace matprop
