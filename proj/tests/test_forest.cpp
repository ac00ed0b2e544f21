#include <doctest.h>

#include "helpers.hpp"
#include "scp/oracle.hpp"

using namespace scp;
using testing::kG2;
using testing::Session;

namespace {

const char* kCatalan = "%root S\nS -> S S | a ;\n";

// Checks productions, spans and that leaves read one lattice path.
bool valid_tree(const Chart& c, const Tree& t, std::size_t& pos) {
  const auto& g = c.grammar();
  if (t.lexical) {
    const auto& item = c.input().items()[t.lexical_item];
    if (g.name(t.symbol) != item.preterminal || item.fbp != pos || t.fbp != pos || t.lbp != item.lbp) return false;
    pos = item.lbp;
    return true;
  }
  const auto& p = g.production(t.production);
  if (p.lhs != t.symbol || p.rhs.size() != t.children.size()) return false;
  std::size_t start = pos;
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (t.children[i].symbol != p.rhs[i]) return false;
    if (!valid_tree(c, t.children[i], pos)) return false;
  }
  if (t.fbp == kNoPosition) return pos == start;
  return t.fbp == start && t.lbp == pos;
}

}  // namespace

TEST_CASE("reference example has exactly one tree") {
  Session s(kG2, "a a a b");
  Forest f = s.forest();
  CHECK(f.count_trees(10000) == TreeCount::finite(1));
  auto trees = f.enumerate_trees(10);
  REQUIRE(trees.size() == 1);
  CHECK(f.render(trees[0]) == "S(A1(a, A1(a, A1(a))), b)");
  CHECK(f.useless_node_count() == 0);
}

TEST_CASE("binary bracketings follow the Catalan numbers") {
  Session four(kCatalan, "a a a a");
  CHECK(four.forest().count_trees(10000) == TreeCount::finite(5));
  CHECK(four.forest().enumerate_trees(100).size() == 5);
  Session three(kCatalan, "a a a");
  auto trees = three.forest().enumerate_trees(10);
  REQUIRE(trees.size() == 2);
  std::set<std::string> shapes{three.forest().render(trees[0]), three.forest().render(trees[1])};
  CHECK(shapes == std::set<std::string>{"S(S(a), S(S(a), S(a)))", "S(S(S(a), S(a)), S(a))"});
  CHECK(three.forest().enumerate_trees(0).empty());
}

TEST_CASE("unit cycles give infinitely many trees") {
  Session s("%root S\nS -> S | a ;\n", "a");
  CHECK(s.acc.grammatical);
  CHECK(s.forest().count_trees(10000) == TreeCount::infinite());
  // Enumeration never revisits a node on its own path.
  auto trees = s.forest().enumerate_trees(10);
  REQUIRE(trees.size() == 1);
  CHECK(s.forest().render(trees[0]) == "S(a)");
}

TEST_CASE("counts above the cap are reported as capped") {
  std::string text;
  for (int i = 0; i < 12; ++i) text += "a ";
  Session s(kCatalan, text);
  CHECK(s.forest().count_trees(58786) == TreeCount::finite(58786));  // C11
  CHECK(s.forest().count_trees(58785) == TreeCount::capped());
}

TEST_CASE("reachability") {
  Session bad(kG2, "a a b b");
  CHECK(bad.acc.roots.empty());
  auto r = bad.forest().reachable_nodes();
  CHECK(std::count(r.begin(), r.end(), true) == 0);

  Session side("%root S\nS -> a ;\nX -> a ;\n", "a");
  CHECK(side.acc.grammatical);
  for (const auto& n : side.chart.nodes()) CHECK(side.chart.grammar().name(n.symbol) != "X");
  CHECK(side.forest().useless_node_count() == 0);
}

TEST_CASE("forest dump") {
  Session s(kG2, "a a a b");
  std::string d = s.forest().dump();
  CHECK(d.find("node 0 a [0,1]\n") != std::string::npos);
  CHECK(d.find("node 7 S [0,4]\nanalysis 0 6 3\n") != std::string::npos);
  Session e("%root S\nS -> a B ;\nB -> ;\n", "a");
  CHECK(e.forest().dump().find("node 1 B [eps]\nanalysis 1\n") != std::string::npos);
}

TEST_CASE("counting and enumeration agree and trees are well formed") {
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    auto rc = random_case(seed);
    Session s(compile(rc.grammar), rc.input);
    Forest f = s.forest();
    auto count = f.count_trees(200);
    auto trees = f.enumerate_trees(200);
    CAPTURE(seed);
    if (count.kind == TreeCount::Kind::finite) CHECK(trees.size() == count.value);
    for (const auto& t : trees) {
      std::size_t pos = 0;
      CHECK(valid_tree(s.chart, t, pos));
      CHECK(pos == s.input.last());
    }
  }
}
