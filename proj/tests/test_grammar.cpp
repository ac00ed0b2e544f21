#include <doctest.h>

#include "helpers.hpp"

using namespace scp;
using testing::kG2;
using testing::sym;

TEST_CASE("the reference grammar loads with three nonterminals and three terminals") {
  Grammar g = load_grammar(kG2);
  CHECK(g.nonterminal_count() == 3);
  CHECK(g.terminal_count() == 3);
  CHECK(g.productions().size() == 6);
  REQUIRE(g.roots().size() == 1);
  CHECK(g.name(g.roots()[0]) == "S");
  CHECK(g.render(g.production(0)) == "S -> A1 b");
  CHECK(g.is_terminal(sym(g, "a")));
  CHECK_FALSE(g.is_terminal(sym(g, "A2")));
}

TEST_CASE("symbol and production ids follow declaration order") {
  Grammar g = load_grammar(kG2);
  CHECK(g.name(0) == "S");
  CHECK(g.name(1) == "A1");
  CHECK(g.name(2) == "b");
  CHECK(g.productions_of(sym(g, "A1")) == std::vector<ProductionId>{2, 3});
}

TEST_CASE("empty bodies are epsilon productions") {
  Grammar g = load_grammar("%root S\nS -> a B ;\nB -> ;\n");
  CHECK(g.production(1).rhs.empty());
  CHECK(g.production(1).lhs == sym(g, "B"));
}

TEST_CASE("productions may span lines and use comments") {
  Grammar g = load_grammar("# demo\n%root S\nS -> a\n   | b  # second\n   ;\n");
  CHECK(g.productions().size() == 2);
}

TEST_CASE("validation errors") {
  SUBCASE("undeclared symbol with an explicit terminal set") {
    try {
      load_grammar("%root S\n%terminal a\nS -> a X ;\n");
      FAIL("expected an error");
    } catch (const GrammarError& e) {
      CHECK(std::string(e.what()).find("undeclared symbol") != std::string::npos);
      CHECK(e.line() == 3);
      CHECK(e.column() == 8);
    }
  }
  SUBCASE("root without productions") {
    CHECK_THROWS_WITH_AS(load_grammar("%root T\nS -> a ;\n"), doctest::Contains("undeclared symbol"), GrammarError);
  }
  SUBCASE("terminal used as lhs") {
    CHECK_THROWS_WITH_AS(load_grammar("%root S\n%terminal a\nS -> a ;\na -> S ;\n"),
                         doctest::Contains("terminal used as lhs"), GrammarError);
  }
  SUBCASE("no root") {
    CHECK_THROWS_WITH_AS(load_grammar("S -> a ;\n"), doctest::Contains("no root declared"), GrammarError);
  }
  SUBCASE("missing semicolon") {
    CHECK_THROWS_WITH_AS(load_grammar("%root S\nS -> a\n"), doctest::Contains("missing ';'"), GrammarError);
  }
  SUBCASE("missing arrow reports its position") {
    try {
      load_grammar("%root S\nS a ;\n");
      FAIL("expected an error");
    } catch (const GrammarError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 3);
    }
  }
}

TEST_CASE("to_text round-trips") {
  Grammar g = load_grammar("%root S\nS -> A b | ;\nA -> a | A a ;\n");
  Grammar h = load_grammar(g.to_text());
  CHECK(h.to_text() == g.to_text());
  CHECK(h.productions().size() == g.productions().size());
  for (std::size_t i = 0; i < g.productions().size(); ++i) CHECK(h.render(h.production(i)) == g.render(g.production(i)));
}

TEST_CASE("unreachable nonterminals are reported") {
  Grammar g = load_grammar("%root S\nS -> a ;\nX -> a ;\n");
  auto u = g.unreachable_nonterminals();
  REQUIRE(u.size() == 1);
  CHECK(g.name(u[0]) == "X");
}
