#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "matprop/error.hpp"
#include "matprop/json.hpp"

using namespace matprop;
using nlohmann::json;

namespace {

MatrixSet single(const char* name) { return MatrixSet(std::vector<ExtendedMatrix>{builtin_matrix(name)}); }

void same_report(const DecisionReport& a, const DecisionReport& b) {
  CHECK(a.verdict == b.verdict);
  CHECK(a.pointed == b.pointed);
  CHECK(a.degenerate == b.degenerate);
  CHECK(a.used_matrices == b.used_matrices);
  REQUIRE(a.tableau.size() == b.tableau.size());
  for (std::size_t i = 0; i < a.tableau.size(); ++i) {
    CHECK(a.tableau[i].column == b.tableau[i].column);
    CHECK(a.tableau[i].provenance == b.tableau[i].provenance);
  }
}

}  // namespace

TEST_CASE("report shape for ari => maj") {
  auto r = decide(single("ari"), builtin_matrix("maj"));
  json j = report_to_json(r);
  CHECK(j["verdict"] == "holds");
  CHECK(j["mode"] == "non_pointed");
  CHECK(j["degenerate"] == "none");
  CHECK(j["used_matrices"] == json::array({0}));
  REQUIRE(j["columns"].size() == r.tableau.size());
  CHECK(j["columns"][0]["entries"] == json::array({"x1", "x1", "x2"}));
  CHECK(j["columns"][0]["provenance"] == json{{"kind", "original"}, {"left_index", 1}});
  // c4 = p0[c3, c1, c2]
  CHECK(j["columns"][3]["entries"] == json::array({"x2", "x2", "x1"}));
  CHECK(j["columns"][3]["provenance"] == json{{"kind", "derived"}, {"matrix", 0}, {"parents", {3, 1, 2}}});
}

TEST_CASE("reports round-trip") {
  for (const auto& a : builtin_names())
    for (const auto& b : builtin_names()) {
      auto n = builtin_matrix(b);
      auto m = builtin_matrix(a);
      if (m.pointed() != n.pointed()) {
        m = m.as_pointed();
        n = n.as_pointed();
      }
      CAPTURE(a);
      CAPTURE(b);
      auto r = decide(MatrixSet(std::vector<ExtendedMatrix>{m}), n);
      json j = report_to_json(r);
      same_report(report_from_json(json::parse(j.dump())), r);
    }
  auto star = report_to_json(decide(single("sub"), builtin_matrix("p3")));
  CHECK(star["mode"] == "pointed");
  CHECK(star["columns"][3]["provenance"] == json{{"kind", "star"}});
  auto triv = decide(MatrixSet(std::vector<ExtendedMatrix>{parse_matrix("[x1 | x2]")}), builtin_matrix("mal"));
  CHECK(report_to_json(triv)["degenerate"] == "trivial_S");
  same_report(report_from_json(report_to_json(triv)), triv);
}

TEST_CASE("bad report json") {
  json j = report_to_json(decide(single("mal"), builtin_matrix("mal")));
  json bad = j;
  bad["verdict"] = "maybe";
  CHECK_THROWS_AS(report_from_json(bad), ParseError);
  bad = j;
  bad["columns"][0]["entries"][0] = "y1";
  CHECK_THROWS_AS(report_from_json(bad), ParseError);
  bad = j;
  bad["columns"][0]["provenance"]["kind"] = "guess";
  CHECK_THROWS_AS(report_from_json(bad), ParseError);
  bad = j;
  bad.erase("mode");
  CHECK_THROWS(report_from_json(bad));
}

TEST_CASE("outcomes round-trip") {
  auto sub = single("sub");
  auto invalid = check_certificate(sub, builtin_matrix("q4"), parse_term("p0(p0(y1,y2), p0(y3,y4))"));
  json j = outcome_to_json(invalid);
  CHECK(j["status"] == "invalid");
  CHECK(j["row"] == 3);
  CHECK(j["reason"] == "undefined");
  CHECK(j["subterm"] == "p0(y1, y2)");
  CHECK(j["path"] == json::array({0}));
  auto back = outcome_from_json(json::parse(j.dump()));
  CHECK(back.status == invalid.status);
  CHECK(back.row == 3);
  CHECK(back.reason == invalid.reason);
  CHECK(back.undefined_at == invalid.undefined_at);
  CHECK(back.path == invalid.path);

  auto wrong = check_certificate(single("maj"), builtin_matrix("maj"), parse_term("y2"));
  j = outcome_to_json(wrong);
  CHECK(j["reason"] == "wrong_value");
  CHECK(j["got"] == "x2");
  CHECK(j["expected"] == "x1");
  back = outcome_from_json(j);
  CHECK(back.got == wrong.got);
  CHECK(back.expected == wrong.expected);

  auto ok = check_certificate(single("ari"), builtin_matrix("maj"), parse_term("p0(y2, p0(y3,y1,y2), y3)"));
  j = outcome_to_json(ok);
  CHECK(j["status"] == "valid");
  CHECK(j["row"].is_null());
  CHECK(outcome_from_json(j).valid());
}

TEST_CASE("entries") {
  CHECK(entry_from_string("*") == Entry::star());
  CHECK(entry_from_string("x12") == Entry::var(12));
  CHECK_THROWS_AS(entry_from_string("x"), ParseError);
  CHECK_THROWS_AS(entry_from_string("x0"), ParseError);
  CHECK_THROWS_AS(entry_from_string("y1"), ParseError);
}

TEST_CASE("algebra dump") {
  json j = algebra_to_json(free_algebra(single("sub"), 2));
  CHECK(j["carrier_size"] == 2);
  CHECK(j["basepoint"] == 0);
  REQUIRE(j["operations"].size() == 1);
  CHECK(j["operations"][0]["arity"] == 2);
  CHECK(j["operations"][0]["instances"].size() == 3);
  CHECK(j["operations"][0]["instances"][1] == json{{"args", {1, 0}}, {"value", 1}});
  CHECK(algebra_to_json(free_algebra(single("mal"), 2))["basepoint"].is_null());
}
