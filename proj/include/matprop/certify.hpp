#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "matprop/decide.hpp"
#include "matprop/matrix.hpp"
#include "matprop/term.hpp"

namespace matprop {

enum class CertificateSource : std::uint8_t { Extracted, UserSupplied, Searched };
std::string to_string(CertificateSource s);

/// An m-ary term over the operations of S (y1..ym, m = N's left width).
struct Certificate {
  Term term;
  CertificateSource source = CertificateSource::Extracted;
};

struct CheckOutcome {
  enum class Status : std::uint8_t { Valid, Invalid };
  enum class Reason : std::uint8_t { None, Undefined, WrongValue };

  Status status = Status::Valid;
  Reason reason = Reason::None;
  std::size_t row = 0;  // 1-based, Invalid only
  // Undefined: first undefined subterm in left-to-right strict evaluation and the
  // argument positions (0-based) leading to it from the root.
  std::optional<Term> undefined_at;
  std::vector<std::size_t> path;
  // WrongValue: the value reached and the row's right entry, as entries of N's alphabet.
  std::optional<Entry> got;
  std::optional<Entry> expected;
  // Set when the verdict follows from a degenerate branch rather than an evaluation.
  bool degenerate = false;

  bool valid() const { return status == Status::Valid; }
};

std::string to_string(CheckOutcome::Reason r);

/// Term of N's right column following the tableau provenance (shared DAG), or nullopt
/// when the right column is absent. Throws on malformed provenance.
std::optional<Certificate> extract_term(const DerivationTableau& tableau, const MatrixSet& s,
                                        const ExtendedMatrix& n);

/// As above but also covers the degenerate branches of a decision: trivial pointed S gives
/// 0, trivial non-pointed S gives y1, the m = 0 case gives a nullary member of S.
std::optional<Certificate> extract_term(const DecisionReport& report, const MatrixSet& s,
                                        const ExtendedMatrix& n);

/// Evaluates `t` in the free algebra of S on N's variables, one row of N at a time.
/// Throws PreconditionError for variables beyond y_m, 0 in non-pointed mode, unknown
/// operations or wrong arities, and pointedness mismatch.
CheckOutcome check_certificate(const MatrixSet& s, const ExtendedMatrix& n, const Term& t);

struct SearchOptions {
  std::size_t max_nodes = 15;
  /// Guards the number of candidate applications built per size class.
  std::uint64_t max_candidates = 50'000'000;
};

/// Smallest certificate by tree size (ties: operation index, then argument sizes, then
/// argument order), or nullopt if none exists within max_nodes. Terms are deduplicated by
/// their value vector over N's rows, which never loses a minimal solution.
std::optional<Certificate> search_term(const MatrixSet& s, const ExtendedMatrix& n, const SearchOptions& options = {});

}  // namespace matprop
