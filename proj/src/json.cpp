#include "matprop/json.hpp"

#include "matprop/error.hpp"

namespace matprop {

using nlohmann::json;

Entry entry_from_string(const std::string& s) {
  if (s == "*") return Entry::star();
  if (s.size() >= 2 && s[0] == 'x' && s.find_first_not_of("0123456789", 1) == std::string::npos && s.size() < 10) {
    auto i = static_cast<std::uint32_t>(std::stoul(s.substr(1)));
    if (i > 0) return Entry::var(i);
  }
  throw ParseError("bad entry '" + s + "'", 0);
}

namespace {

json provenance_to_json(const Provenance& p) {
  switch (p.kind) {
    case Provenance::Kind::OriginalLeft:
      return {{"kind", "original"}, {"left_index", p.left_index + 1}};
    case Provenance::Kind::StarColumn:
      return {{"kind", "star"}};
    case Provenance::Kind::Derived: {
      json parents = json::array();
      for (auto q : p.parents) parents.push_back(q + 1);
      return {{"kind", "derived"}, {"matrix", p.matrix}, {"parents", parents}};
    }
  }
  return {};
}

Provenance provenance_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "original") return Provenance::original(j.at("left_index").get<std::size_t>() - 1);
  if (kind == "star") return Provenance::star();
  if (kind == "derived") {
    std::vector<std::size_t> parents;
    for (const auto& q : j.at("parents")) parents.push_back(q.get<std::size_t>() - 1);
    return Provenance::derived(j.at("matrix").get<std::size_t>(), std::move(parents));
  }
  throw ParseError("unknown provenance kind '" + kind + "'", 0);
}

Degenerate degenerate_from_string(const std::string& s) {
  for (auto d : {Degenerate::None, Degenerate::TrivialS, Degenerate::AntiTrivialN, Degenerate::MZeroCase})
    if (to_string(d) == s) return d;
  throw ParseError("unknown degenerate tag '" + s + "'", 0);
}

}  // namespace

json report_to_json(const DecisionReport& report) {
  json columns = json::array();
  for (const auto& e : report.tableau) {
    json entries = json::array();
    for (Entry x : e.column) entries.push_back(to_string(x));
    columns.push_back({{"entries", entries}, {"provenance", provenance_to_json(e.provenance)}});
  }
  return {{"verdict", report.holds() ? "holds" : "does_not_hold"},
          {"mode", report.pointed ? "pointed" : "non_pointed"},
          {"degenerate", to_string(report.degenerate)},
          {"columns", columns},
          {"used_matrices", report.used_matrices}};
}

DecisionReport report_from_json(const json& j) {
  DecisionReport r;
  const std::string verdict = j.at("verdict").get<std::string>();
  if (verdict != "holds" && verdict != "does_not_hold") throw ParseError("unknown verdict '" + verdict + "'", 0);
  r.verdict = verdict == "holds" ? Verdict::Holds : Verdict::DoesNotHold;
  const std::string mode = j.at("mode").get<std::string>();
  if (mode != "pointed" && mode != "non_pointed") throw ParseError("unknown mode '" + mode + "'", 0);
  r.pointed = mode == "pointed";
  r.degenerate = degenerate_from_string(j.at("degenerate").get<std::string>());
  for (const auto& c : j.at("columns")) {
    Column col;
    for (const auto& e : c.at("entries")) col.push_back(entry_from_string(e.get<std::string>()));
    r.tableau.add(std::move(col), provenance_from_json(c.at("provenance")));
  }
  r.used_matrices = j.at("used_matrices").get<std::vector<std::size_t>>();
  return r;
}

json outcome_to_json(const CheckOutcome& o) {
  json j = {{"status", o.valid() ? "valid" : "invalid"},
            {"row", o.valid() ? json(nullptr) : json(o.row)},
            {"reason", o.valid() ? json(nullptr) : json(to_string(o.reason))},
            {"path", o.path},
            {"degenerate", o.degenerate}};
  if (o.undefined_at) j["subterm"] = format_term_shared(*o.undefined_at);
  if (o.got) j["got"] = to_string(*o.got);
  if (o.expected) j["expected"] = to_string(*o.expected);
  return j;
}

CheckOutcome outcome_from_json(const json& j) {
  CheckOutcome o;
  const std::string status = j.at("status").get<std::string>();
  if (status != "valid" && status != "invalid") throw ParseError("unknown status '" + status + "'", 0);
  o.status = status == "valid" ? CheckOutcome::Status::Valid : CheckOutcome::Status::Invalid;
  if (!o.valid()) {
    o.row = j.at("row").get<std::size_t>();
    const std::string reason = j.at("reason").get<std::string>();
    if (reason == "undefined")
      o.reason = CheckOutcome::Reason::Undefined;
    else if (reason == "wrong_value")
      o.reason = CheckOutcome::Reason::WrongValue;
    else
      throw ParseError("unknown reason '" + reason + "'", 0);
  }
  o.path = j.value("path", std::vector<std::size_t>{});
  o.degenerate = j.value("degenerate", false);
  if (j.contains("subterm")) o.undefined_at = parse_term(j.at("subterm").get<std::string>());
  if (j.contains("got")) o.got = entry_from_string(j.at("got").get<std::string>());
  if (j.contains("expected")) o.expected = entry_from_string(j.at("expected").get<std::string>());
  return o;
}

json algebra_to_json(const FinitePartialAlgebra& a) {
  json ops = json::array();
  for (std::size_t op = 0; op < a.op_count(); ++op) {
    json instances = json::array();
    for (const auto& inst : a.table(op).instances()) instances.push_back({{"args", inst.args}, {"value", inst.value}});
    ops.push_back({{"op", "p" + std::to_string(op)}, {"arity", a.table(op).arity()}, {"instances", instances}});
  }
  return {{"carrier_size", a.carrier_size()},
          {"basepoint", a.basepoint() ? json(*a.basepoint()) : json(nullptr)},
          {"operations", ops}};
}

}  // namespace matprop
