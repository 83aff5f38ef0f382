#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "matprop/error.hpp"
#include "matprop/term.hpp"

using namespace matprop;

TEST_CASE("construction and queries") {
  Term y1 = Term::var(1), y3 = Term::var(3);
  Term t = Term::app(0, {y1, Term::app(1, {y3, Term::zero()})});
  CHECK(t.is_app());
  CHECK(t.index() == 0);
  CHECK(t.args().size() == 2);
  CHECK(t.tree_size() == 5);
  CHECK(t.max_var() == 3);
  CHECK(t.contains_zero());
  CHECK_FALSE(y1.contains_zero());
  CHECK_THROWS_AS(Term::var(0), PreconditionError);
}

TEST_CASE("sharing keeps the DAG small") {
  Term t = Term::var(1);
  for (int i = 0; i < 70; ++i) t = Term::app(0, {t, t});
  CHECK(t.dag_size() == 71);
  CHECK(t.tree_size() == SIZE_MAX);  // saturates
  CHECK_FALSE(format_term(t).has_value());
  std::string shared = format_term_shared(t);
  CHECK(shared.find("let t0 = p0(y1, y1);") == 0);
  CHECK(parse_term(shared) == t);
}

TEST_CASE("printing") {
  Term t = parse_term("p0(y2, p0(y3,y1,y2), y3)");
  CHECK(*format_term(t) == "p0(y2, p0(y3, y1, y2), y3)");
  CHECK(format_term_shared(t) == "p0(y2, p0(y3, y1, y2), y3)");
  CHECK(*format_term(parse_term("0")) == "0");
  CHECK(*format_term(parse_term("p2()")) == "p2()");
}

TEST_CASE("parsing") {
  CHECK(parse_term(" p0 ( y1 ,0 ) ") == Term::app(0, {Term::var(1), Term::zero()}));
  CHECK(parse_term("let a = p0(y1, y2); p1(a, a)") == parse_term("p1(p0(y1, y2), p0(y1, y2))"));
  CHECK_THROWS_AS(parse_term("p0(y1,"), ParseError);
  CHECK_THROWS_AS(parse_term("q0(y1)"), ParseError);
  CHECK_THROWS_AS(parse_term("y0"), ParseError);
  CHECK_THROWS_AS(parse_term("p0(y1) y2"), ParseError);
  CHECK_THROWS_AS(parse_term("0", false), ParseError);
  CHECK_THROWS_AS(parse_term("let a = y1; b"), ParseError);
  CHECK_THROWS_AS(parse_term("let a = y1; let a = y2; a"), ParseError);
}

TEST_CASE("structural equality ignores sharing") {
  Term a = Term::app(0, {Term::var(1), Term::var(2)});
  Term shared = Term::app(1, {a, a});
  Term copied = Term::app(1, {Term::app(0, {Term::var(1), Term::var(2)}), Term::app(0, {Term::var(1), Term::var(2)})});
  CHECK(shared == copied);
  CHECK_FALSE(shared == Term::app(1, {a, Term::var(1)}));
  CHECK_FALSE(Term::var(1) == Term::var(2));
  CHECK_FALSE(Term::app(0, {}) == Term::app(1, {}));
}

TEST_CASE("substitution") {
  Term t = parse_term("p0(y1, p0(y2, y1))");
  Term r = substitute_vars(t, std::vector<Term>{parse_term("y2"), parse_term("0")});
  CHECK(r == parse_term("p0(y2, p0(0, y2))"));
  CHECK_THROWS_AS(substitute_vars(t, std::vector<Term>{parse_term("y2")}), PreconditionError);

  // p0 := p1(y2, y1)
  Term s = substitute_ops(t, std::vector<Term>{parse_term("p1(y2, y1)")});
  CHECK(s == parse_term("p1(p1(y1, y2), y1)"));
  CHECK_THROWS_AS(substitute_ops(parse_term("p3(y1)"), std::vector<Term>{parse_term("y1")}), PreconditionError);
}
