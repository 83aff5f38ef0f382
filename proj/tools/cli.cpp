#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "matprop/certify.hpp"
#include "matprop/decide.hpp"
#include "matprop/error.hpp"
#include "matprop/json.hpp"
#include "matprop/relcheck.hpp"

namespace matprop::cli {

namespace {

struct UsageFailure : Error {
  using Error::Error;
};

struct Flags {
  std::string lhs;
  std::string rhs;
  std::string positional;
  bool pointed = false;
  bool non_pointed = false;
  bool json = false;
  bool tableau = false;
  bool full_saturation = false;
  std::uint64_t max_candidates = SaturationOptions{}.max_candidates;
  std::string term;
  std::size_t carrier = 2;
  std::string relation;
  bool strict = false;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageFailure("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExtendedMatrix load_matrix(const std::string& arg) {
  std::string text = trim(arg);
  if (text.empty()) throw UsageFailure("empty matrix argument");
  if (text[0] == '@') return parse_matrix(trim(read_file(text.substr(1))));
  if (text[0] == '[') return parse_matrix(text);
  if (!is_builtin(text)) throw UsageFailure("unknown builtin matrix '" + text + "'");
  return builtin_matrix(text);
}

// Loads every matrix argument and settles a shared pointedness.
std::vector<ExtendedMatrix> resolve(const std::vector<std::string>& args, const Flags& f) {
  if (f.pointed && f.non_pointed) throw UsageFailure("--pointed and --non-pointed are exclusive");
  std::vector<ExtendedMatrix> ms;
  for (const auto& a : args) ms.push_back(load_matrix(a));
  bool any_pointed = std::any_of(ms.begin(), ms.end(), [](const ExtendedMatrix& m) { return m.pointed(); });
  if (f.non_pointed) {
    if (std::any_of(ms.begin(), ms.end(), [](const ExtendedMatrix& m) { return m.has_star(); }))
      throw UsageFailure("--non-pointed given but a matrix contains '*'");
    if (any_pointed) throw UsageFailure("--non-pointed given but a matrix is pointed");
    return ms;
  }
  if (f.pointed || any_pointed)
    for (auto& m : ms) m = m.as_pointed();
  return ms;
}

struct Problem {
  MatrixSet s;
  ExtendedMatrix n;
};

Problem load_problem(const Flags& f) {
  if (f.lhs.empty()) throw UsageFailure("--lhs is required");
  if (f.rhs.empty()) throw UsageFailure("--rhs is required");
  std::vector<std::string> args = split_matrix_list(f.lhs);
  if (args.empty()) throw UsageFailure("--lhs lists no matrices");
  args.push_back(f.rhs);
  auto ms = resolve(args, f);
  ExtendedMatrix n = ms.back();
  ms.pop_back();
  bool pointed = n.pointed();
  return {MatrixSet(std::move(ms), pointed), n};
}

std::vector<ExtendedMatrix> load_list(const Flags& f) {
  std::vector<std::string> args;
  if (!f.lhs.empty()) args = split_matrix_list(f.lhs);
  for (auto& a : split_matrix_list(f.positional)) args.push_back(a);
  if (args.empty()) throw UsageFailure("no matrix given");
  return resolve(args, f);
}

SaturationOptions saturation_options(const Flags& f) {
  SaturationOptions o;
  o.full_saturation = f.full_saturation;
  o.max_candidates = f.max_candidates;
  return o;
}

std::string provenance_text(const Provenance& p) {
  switch (p.kind) {
    case Provenance::Kind::OriginalLeft:
      return "y" + std::to_string(p.left_index + 1);
    case Provenance::Kind::StarColumn:
      return "0";
    case Provenance::Kind::Derived: {
      std::string s = "p" + std::to_string(p.matrix) + "[";
      for (std::size_t i = 0; i < p.parents.size(); ++i) s += (i ? "," : "") + std::string("c") + std::to_string(p.parents[i] + 1);
      return s + "]";
    }
  }
  return "";
}

void print_tableau(std::ostream& out, const DerivationTableau& t) {
  out << "tableau:\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    out << "  c" << i + 1 << "  " << to_string(t[i].column) << "  " << provenance_text(t[i].provenance) << "\n";
}

void print_report(std::ostream& out, const DecisionReport& r, bool tableau) {
  out << (r.holds() ? "holds" : "does not hold") << "\n";
  out << "mode: " << (r.pointed ? "pointed" : "non-pointed") << "\n";
  if (r.degenerate != Degenerate::None) out << "degenerate: " << to_string(r.degenerate) << "\n";
  out << "columns: " << r.tableau.size() << "\n";
  out << "used matrices:";
  for (auto i : r.used_matrices) out << " p" << i;
  out << "\n";
  if (tableau) print_tableau(out, r.tableau);
}

std::string outcome_text(const CheckOutcome& o) {
  if (o.valid()) return o.degenerate ? "valid (trivial matrix set)" : "valid";
  std::string s = "invalid: row " + std::to_string(o.row) + ", ";
  if (o.reason == CheckOutcome::Reason::Undefined) {
    s += "undefined";
    if (o.undefined_at) s += " at " + format_term_shared(*o.undefined_at);
    if (!o.path.empty()) {
      s += " (path";
      for (auto p : o.path) s += " " + std::to_string(p);
      s += ")";
    }
  } else {
    s += "got " + to_string(*o.got) + ", expected " + to_string(*o.expected);
  }
  return s;
}

std::string conflict_text(const ForcedConflict& c) {
  auto tuple = [](const std::vector<Element>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
  };
  auto demand = [&](const ForcedDemand& d) {
    return std::to_string(d.value) + " (matrix " + std::to_string(d.matrix) + ", row " + std::to_string(d.row + 1) +
           ", x = " + tuple(d.assignment) + ")";
  };
  return "p" + std::to_string(c.op) + tuple(c.args) + " = " + demand(c.first) + " vs " + demand(c.second);
}

nlohmann::json conflict_json(const ForcedConflict& c) {
  auto demand = [](const ForcedDemand& d) {
    return nlohmann::json{{"matrix", d.matrix}, {"row", d.row + 1}, {"assignment", d.assignment}, {"value", d.value}};
  };
  return {{"op", c.op}, {"args", c.args}, {"first", demand(c.first)}, {"second", demand(c.second)}};
}

int cmd_decide(const Flags& f, std::ostream& out, bool with_term) {
  Problem p = load_problem(f);
  DecisionReport r = decide(p.s, p.n, saturation_options(f));
  std::optional<Certificate> cert;
  std::optional<CheckOutcome> outcome;
  if (with_term && r.holds()) {
    cert = extract_term(r, p.s, p.n);
    if (cert) outcome = check_certificate(p.s, p.n, cert->term);
  }
  if (f.json) {
    nlohmann::json j = report_to_json(r);
    if (with_term) {
      if (cert) {
        auto expanded = format_term(cert->term);
        j["term"] = expanded ? nlohmann::json(*expanded) : nlohmann::json(nullptr);
        j["term_shared"] = format_term_shared(cert->term);
        j["term_size"] = cert->term.tree_size();
        j["check"] = outcome_to_json(*outcome);
      } else {
        j["term"] = nullptr;
      }
    }
    out << j.dump(2) << "\n";
  } else {
    print_report(out, r, f.tableau);
    if (cert) {
      auto expanded = format_term(cert->term);
      out << "term: " << (expanded ? *expanded : "(expansion exceeds 10000 nodes)") << "\n";
      out << "shared: " << format_term_shared(cert->term) << "\n";
      out << "check: " << outcome_text(*outcome) << "\n";
    }
  }
  return r.holds() ? Positive : Negative;
}

int cmd_check(const Flags& f, std::ostream& out) {
  if (f.term.empty()) throw UsageFailure("--term is required");
  Problem p = load_problem(f);
  Term t = parse_term(f.term, p.n.pointed());
  CheckOutcome o = check_certificate(p.s, p.n, t);
  if (f.json)
    out << outcome_to_json(o).dump(2) << "\n";
  else
    out << outcome_text(o) << "\n";
  return o.valid() ? Positive : Negative;
}

int cmd_trivial(const Flags& f, std::ostream& out) {
  auto ms = load_list(f);
  bool pointed = ms.front().pointed();
  MatrixSet s(std::move(ms), pointed);
  ForcedResult fr = forced_instances(s, 2, pointed ? std::optional<Element>(0) : std::nullopt);
  bool trivial = !fr.consistent();
  if (f.json) {
    nlohmann::json j = {{"trivial", trivial}, {"mode", pointed ? "pointed" : "non_pointed"}};
    j["conflict"] = fr.conflict ? conflict_json(*fr.conflict) : nlohmann::json(nullptr);
    out << j.dump(2) << "\n";
  } else {
    out << (trivial ? "trivial" : "not trivial") << "\n";
    if (fr.conflict) out << "conflict: " << conflict_text(*fr.conflict) << "\n";
  }
  return trivial ? Positive : Negative;
}

int cmd_antitrivial(const Flags& f, std::ostream& out) {
  auto ms = load_list(f);
  if (ms.size() != 1) throw UsageFailure("antitrivial takes exactly one matrix");
  bool anti = is_anti_trivial(ms.front());
  if (f.json)
    out << nlohmann::json{{"anti_trivial", anti}, {"mode", ms.front().pointed() ? "pointed" : "non_pointed"}}.dump(2)
        << "\n";
  else
    out << (anti ? "anti-trivial" : "not anti-trivial") << "\n";
  return anti ? Positive : Negative;
}

int cmd_free(const Flags& f, std::ostream& out) {
  auto ms = load_list(f);
  bool pointed = ms.front().pointed();
  MatrixSet s(std::move(ms), pointed);
  if (f.carrier == 0 && pointed) throw UsageFailure("pointed carriers need at least one element");
  ForcedResult fr = forced_instances(s, f.carrier, pointed ? std::optional<Element>(0) : std::nullopt);
  FinitePartialAlgebra a = free_algebra(s, f.carrier);
  if (f.json) {
    nlohmann::json j = algebra_to_json(a);
    j["collapsed"] = !fr.consistent();
    j["conflict"] = fr.conflict ? conflict_json(*fr.conflict) : nlohmann::json(nullptr);
    out << j.dump(2) << "\n";
  } else {
    if (fr.conflict) {
      out << "collapsed to the terminal algebra\n";
      out << "conflict: " << conflict_text(*fr.conflict) << "\n";
    }
    out << describe(a);
  }
  return fr.consistent() ? Positive : Negative;
}

int cmd_relcheck(const Flags& f, std::ostream& out) {
  if (f.relation.empty()) throw UsageFailure("--relation is required");
  auto ms = load_list(f);
  if (ms.size() != 1) throw UsageFailure("relcheck takes exactly one matrix");
  FiniteRelation r = parse_relation(read_file(f.relation));
  bool closed = f.strict ? is_strictly_M_closed_relation(ms.front(), r) : is_M_closed_relation(ms.front(), r);
  if (f.json)
    out << nlohmann::json{{"closed", closed}, {"strict", f.strict}, {"tuples", r.size()}}.dump(2) << "\n";
  else
    out << (closed ? "closed" : "not closed") << "\n";
  return closed ? Positive : Negative;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--lhs", f.lhs, "Comma list of matrices (builtin name, [literal] or @file)");
  sub->add_flag("--pointed", f.pointed, "Treat every matrix as pointed");
  sub->add_flag("--non-pointed", f.non_pointed, "Require non-pointed matrices");
  sub->add_flag("--json", f.json, "JSON output");
}

void add_decision(CLI::App* sub, Flags& f) {
  sub->add_option("--rhs", f.rhs, "Conclusion matrix");
  sub->add_flag("--tableau", f.tableau, "Print the derivation tableau");
  sub->add_flag("--full-saturation", f.full_saturation, "Saturate to the fixpoint");
  sub->add_option("--max-candidates", f.max_candidates, "Candidate blocks allowed per saturation step")
      ->check(CLI::PositiveNumber);
}

}  // namespace

std::vector<std::string> split_matrix_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  parts.erase(std::remove(parts.begin(), parts.end(), std::string()), parts.end());
  return parts;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide implications between matrix properties and check partial-term certificates", "matprop"};
  app.require_subcommand(1);
  Flags f;

  auto* decide_cmd = app.add_subcommand("decide", "Decide whether the lhs matrices imply the rhs matrix");
  add_common(decide_cmd, f);
  add_decision(decide_cmd, f);

  auto* term_cmd = app.add_subcommand("term", "Decide and print the extracted certificate");
  add_common(term_cmd, f);
  add_decision(term_cmd, f);

  auto* check_cmd = app.add_subcommand("check", "Check a user-supplied certificate term");
  add_common(check_cmd, f);
  check_cmd->add_option("--rhs", f.rhs, "Conclusion matrix");
  check_cmd->add_option("--term", f.term, "Term over p0.. and y1..ym");

  auto* trivial_cmd = app.add_subcommand("trivial", "Is the matrix set trivial?");
  add_common(trivial_cmd, f);
  trivial_cmd->add_option("matrices", f.positional, "Comma list of matrices");

  auto* anti_cmd = app.add_subcommand("antitrivial", "Is the matrix anti-trivial?");
  add_common(anti_cmd, f);
  anti_cmd->add_option("matrices", f.positional, "Comma list of matrices");

  auto* free_cmd = app.add_subcommand("free", "Print the free partial algebra on a finite carrier");
  add_common(free_cmd, f);
  free_cmd->add_option("--carrier", f.carrier, "Carrier size (default 2)");
  free_cmd->add_option("matrices", f.positional, "Comma list of matrices");

  auto* rel_cmd = app.add_subcommand("relcheck", "Check whether a finite relation is M-closed");
  add_common(rel_cmd, f);
  rel_cmd->add_option("--relation", f.relation, "Relation file");
  rel_cmd->add_flag("--strict", f.strict, "Use independent per-row interpretations");
  rel_cmd->add_option("matrices", f.positional, "Comma list of matrices");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Positive;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return Positive;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return UsageError;
  }

  try {
    if (decide_cmd->parsed()) return cmd_decide(f, out, false);
    if (term_cmd->parsed()) return cmd_decide(f, out, true);
    if (check_cmd->parsed()) return cmd_check(f, out);
    if (trivial_cmd->parsed()) return cmd_trivial(f, out);
    if (anti_cmd->parsed()) return cmd_antitrivial(f, out);
    if (free_cmd->parsed()) return cmd_free(f, out);
    if (rel_cmd->parsed()) return cmd_relcheck(f, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return ParseFailure;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return ResourceExceeded;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return UsageError;
  }
  err << "error: no subcommand\n";
  return UsageError;
}

}  // namespace matprop::cli
