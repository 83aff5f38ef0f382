#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "matprop/error.hpp"
#include "matprop/matrix.hpp"

using namespace matprop;

TEST_CASE("parse mal") {
  auto m = parse_matrix("[x1 x2 x2 | x1 ; x2 x2 x1 | x1]");
  CHECK(m.rows() == 2);
  CHECK(m.left_width() == 3);
  CHECK(m.var_count() == 2);
  CHECK_FALSE(m.pointed());
  CHECK(m.right_column() == Column{Entry::var(1), Entry::var(1)});
  CHECK(m.column(2) == Column{Entry::var(2), Entry::var(1)});
}

TEST_CASE("parse smallest and sub") {
  auto id = parse_matrix("[x1 | x1]");
  CHECK(id.rows() == 1);
  CHECK(id.left_width() == 1);
  CHECK(id.var_count() == 1);

  auto sub = parse_matrix("[x1 * | x1 ; x1 x1 | *]");
  CHECK(sub.pointed());
  CHECK(sub.var_count() == 1);
  CHECK(sub.has_star());
  CHECK(sub == builtin_matrix("sub"));
}

TEST_CASE("whitespace is free between tokens") {
  CHECK(parse_matrix("[x1|x1]") == parse_matrix("  [ x1   |\tx1 ]\n"));
  CHECK(parse_matrix("[x1 x2|x1;x2 x2|x2]") == parse_matrix("[x1 x2 | x1 ; x2 x2 | x2]"));
}

TEST_CASE("renumbering compresses indices and keeps their order") {
  auto m = parse_matrix("[x3 x7 | x3 ; x7 x7 | x7]");
  CHECK(m.var_count() == 2);
  CHECK(format_matrix(m) == "[x1 x2 | x1 ; x2 x2 | x2]");
  // edge3 starts with x2 and must stay as printed
  auto e = builtin_matrix("edge3");
  CHECK(format_matrix(e) == "[x2 x2 x1 x1 | x1 ; x2 x1 x2 x1 | x1 ; x1 x1 x1 x2 | x1]");
  // renumbering never moves stars
  auto p = parse_matrix("[x5 * | x5 ; x5 x5 | *]");
  CHECK(p == builtin_matrix("sub"));
}

TEST_CASE("pointed mode forcing") {
  auto mal = parse_matrix("[x1 x2 x2 | x1 ; x2 x2 x1 | x1]", true);
  CHECK(mal.pointed());
  CHECK_FALSE(mal.has_star());
  CHECK(mal == builtin_matrix("mal").as_pointed());
  CHECK_THROWS_AS(parse_matrix("[x1 * | x1]", false), ParseError);
  CHECK_NOTHROW(parse_matrix("[x1 x1 | x1]", false));
}

TEST_CASE("m = 0 is accepted") {
  auto m = parse_matrix("[| x1]");
  CHECK(m.left_width() == 0);
  CHECK(m.rows() == 1);
  CHECK(format_matrix(m) == "[| x1]");
  CHECK(parse_matrix(format_matrix(m)) == m);
}

TEST_CASE("syntax errors report a position") {
  auto position_of = [](const char* text) -> std::size_t {
    try {
      parse_matrix(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    FAIL("no error for " << text);
    return 0;
  };
  CHECK(position_of("x1 | x1]") == 0);
  CHECK(position_of("[x1 x1 x1]") > 0);
  CHECK(position_of("[x0 | x1]") > 0);
  CHECK(position_of("[x1 | x1] trailing") > 0);
  CHECK(position_of("[x1 | x1 x2]") > 0);
  CHECK(position_of("[]") > 0);
  CHECK(position_of("[x1 | y1]") > 0);
}

TEST_CASE("ragged rows are rejected") {
  CHECK_THROWS_AS(parse_matrix("[x1 x2 | x1 ; x1 | x1]"), ParseError);
  CHECK_THROWS_AS(ExtendedMatrix::make({{Entry::var(1), Entry::var(1)}, {Entry::var(1)}}, false), PreconditionError);
  CHECK_THROWS_AS(ExtendedMatrix::make({}, false), PreconditionError);
  CHECK_THROWS_AS(ExtendedMatrix::make({{Entry::star(), Entry::var(1)}}, false), PreconditionError);
}

TEST_CASE("format round-trips") {
  CHECK(format_matrix(parse_matrix("[x1|x1]")) == "[x1 | x1]");
  CHECK(format_matrix(builtin_matrix("sub")) == "[x1 * | x1 ; x1 x1 | *]");
  CHECK(format_matrix(builtin_matrix("maj")) == "[x1 x1 x2 | x1 ; x1 x2 x1 | x1 ; x2 x1 x1 | x1]");
  for (const auto& name : builtin_names()) {
    auto m = builtin_matrix(name);
    CAPTURE(name);
    CHECK(parse_matrix(format_matrix(m), m.pointed()) == m);
  }
}

TEST_CASE("builtins as printed") {
  CHECK(format_matrix(builtin_matrix("ari")) == "[x1 x2 x2 | x1 ; x2 x2 x1 | x1 ; x1 x2 x1 | x1]");
  CHECK(format_matrix(builtin_matrix("q4")) == "[x1 * * * | x1 ; x1 x1 x2 x2 | * ; x1 x2 x1 x2 | *]");
  CHECK(format_matrix(builtin_matrix("uni")) == "[x1 * | x1 ; * x1 | x1]");
  CHECK(format_matrix(builtin_matrix("struni")) == "[x1 * * | x1 ; x2 x2 x1 | x1]");
  CHECK(format_matrix(builtin_matrix("struni2")) == "[x1 x1 * | x1 ; * * x1 | x1 ; x1 * x1 | *]");
  CHECK(format_matrix(builtin_matrix("p3")) == "[x1 x1 x1 | x1 ; x1 x1 * | * ; * x1 x1 | *]");
  CHECK(format_matrix(builtin_matrix("cube3")) ==
        "[x1 x1 x1 x2 x2 | x1 ; x1 x2 x2 x1 x1 | x1 ; x2 x1 x2 x1 x2 | x1]");
  CHECK(builtin_matrix("q4").pointed());
  CHECK_FALSE(builtin_matrix("maj").pointed());
  CHECK(builtin_names().size() == 11);
  CHECK_THROWS_AS(builtin_matrix("nope"), PreconditionError);
  CHECK_FALSE(is_builtin("nope"));
}

TEST_CASE("anti-triviality") {
  CHECK(is_anti_trivial(parse_matrix("[x1 x2 | x1]")));
  CHECK(is_anti_trivial(parse_matrix("[x1 | *]")));
  CHECK(is_anti_trivial(parse_matrix("[x1 x2 | * ; x2 x1 | *]")));
  CHECK(is_anti_trivial(parse_matrix("[x1 x2 | x2 ; x2 x1 | x1]")));
  CHECK_FALSE(is_anti_trivial(parse_matrix("[x1 x2 | x2 ; x2 x1 | x2]")));
  for (const auto& name : builtin_names()) {
    CAPTURE(name);
    CHECK_FALSE(is_anti_trivial(builtin_matrix(name)));
  }
}

TEST_CASE("matrix sets share pointedness") {
  CHECK_THROWS_AS(MatrixSet(std::vector<ExtendedMatrix>{}), PreconditionError);
  CHECK_THROWS_AS(MatrixSet(std::vector<ExtendedMatrix>{builtin_matrix("mal"), builtin_matrix("sub")}),
                  PreconditionError);
  MatrixSet s(std::vector<ExtendedMatrix>{builtin_matrix("mal").as_pointed(), builtin_matrix("sub")});
  CHECK(s.pointed());
  CHECK(s.size() == 2);
  MatrixSet empty(false);
  CHECK(empty.empty());
}

TEST_CASE("entry and column text") {
  CHECK(to_string(Entry::star()) == "*");
  CHECK(to_string(Entry::var(12)) == "x12");
  CHECK(to_string(Column{Entry::var(1), Entry::star()}) == "(x1,*)");
}
