#include <doctest.h>

#include "helpers.hpp"
#include "scp/oracle.hpp"

using namespace scp;
using testing::kG2;

namespace {

bool recognize(const char* grammar, const char* text) {
  return earley_recognize(load_grammar(grammar), tokenize_plain(text, {}, true));
}

TreeCount count(const char* grammar, const char* text) {
  return earley_count_trees(load_grammar(grammar), tokenize_plain(text, {}, true), 10000);
}

}  // namespace

TEST_CASE("earley recognition") {
  CHECK(recognize(kG2, "a a a b"));
  CHECK_FALSE(recognize(kG2, "a a b b"));
  CHECK(recognize("%root S\nS -> | a S ;\n", ""));
  CHECK(recognize("%root S\nS -> A A a ;\nA -> | B ;\nB -> A ;\n", "a"));
  CHECK_FALSE(recognize(kG2, ""));
}

TEST_CASE("earley scans lattice items of any category and span") {
  Grammar g = load_grammar("%root S\nS -> NP V ;\nNP -> ADJ N ;\n");
  auto l = load_lattice("%points 4\n0 2 \"New York\" NP\n0 1 \"New\" ADJ\n1 2 \"York\" N\n2 3 \"sleeps\" V\n");
  CHECK(earley_recognize(g, l));
  CHECK(earley_count_trees(g, l, 100) == TreeCount::finite(2));
}

TEST_CASE("earley tree counts") {
  CHECK(count("%root S\nS -> S S | a ;\n", "a a a a") == TreeCount::finite(5));
  CHECK(count(kG2, "a a a b") == TreeCount::finite(1));
  CHECK(count("%root S\nS -> S | a ;\n", "a") == TreeCount::infinite());
  CHECK(count(kG2, "a b b") == TreeCount::finite(0));
  CHECK(earley_count_trees(load_grammar("%root S\nS -> S S | a ;\n"), tokenize_plain("a a a a", {}, true), 4) ==
        TreeCount::capped());
}

TEST_CASE("earley enumeration") {
  auto trees = earley_enumerate_trees(load_grammar("%root S\nS -> S S | a ;\n"), tokenize_plain("a a a", {}, true), 10);
  CHECK(trees.size() == 2);
  CHECK(earley_enumerate_trees(load_grammar(kG2), tokenize_plain("a a a b", {}, true), 0).empty());
}

TEST_CASE("random cases are reproducible and within limits") {
  RandomLimits lim;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto a = random_case(seed, lim);
    auto b = random_case(seed, lim);
    CHECK(a.grammar.to_text() == b.grammar.to_text());
    CHECK(a.input == b.input);
    CHECK(a.grammar.nonterminal_count() <= 8);
    CHECK(a.grammar.productions().size() <= 20);
    for (const auto& p : a.grammar.productions()) CHECK(p.rhs.size() <= 4);
    CHECK(a.input.last() <= 12);
    std::map<std::size_t, int> fan;
    for (const auto& it : a.input.items()) ++fan[it.fbp];
    for (auto [k, v] : fan) CHECK(v <= 3);
  }
  lim.epsilon_probability = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed)
    for (const auto& p : random_case(seed, lim).grammar.productions()) CHECK_FALSE(p.rhs.empty());
}

TEST_CASE("generator health") {
  int yes = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    auto rc = random_case(seed);
    yes += earley_recognize(rc.grammar, rc.input);
  }
  CHECK(yes >= 50);
  CHECK(500 - yes >= 50);
}

TEST_CASE("earley agrees with exhaustive derivation search") {
  RandomLimits lim;
  lim.max_nonterminals = 2;
  lim.max_terminals = 2;
  lim.max_productions = 6;
  lim.max_rhs = 3;
  lim.max_input = 5;
  lim.epsilon_probability = 0.25;
  int positive = 0;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    auto rc = random_case(seed, lim);
    int n = static_cast<int>(rc.input.last());
    int depth = static_cast<int>(rc.grammar.nonterminal_count()) * (n + 1) * (n + 1) + 2;
    bool e = earley_recognize(rc.grammar, rc.input);
    positive += e;
    CAPTURE(seed);
    CHECK(e == derivation_search(rc.grammar, rc.input, depth));
  }
  CHECK(positive > 40);
}
