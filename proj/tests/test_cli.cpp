#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "helpers.hpp"

using namespace scp;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "scp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return "/tmp/scp_cli_test_" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kGrammar = std::string(SCP_DATA_DIR) + "/g2.g";

}  // namespace

TEST_CASE("compile writes tables and dumps relations") {
  auto out = temp_path("g2.scp");
  auto r = run({"compile", kGrammar, "-o", out, "--dump-relations"});
  CHECK(r.code == 0);
  CHECK(r.out.find("LA(b) = {A1, a}") != std::string::npos);
  auto first = slurp(out);
  CHECK(first.rfind("SCPC1", 0) == 0);
  CHECK(run({"compile", kGrammar, "-o", out}).code == 0);
  CHECK(slurp(out) == first);
}

TEST_CASE("compile errors") {
  auto bad = temp_path("noroot.g");
  std::ofstream(bad) << "S -> a ;\n";
  auto r = run({"compile", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("no root declared") != std::string::npos);
  CHECK(run({"compile", temp_path("missing.g")}).code == 2);
}

TEST_CASE("parse from compiled tables") {
  auto tables = temp_path("g2b.scp");
  REQUIRE(run({"compile", kGrammar, "-o", tables}).code == 0);
  auto r = run({"parse", "-g", tables, "a a a b", "--count-trees"});
  CHECK(r.code == 0);
  CHECK(r.out.find("trees: 1\n") != std::string::npos);
  CHECK(run({"parse", "-g", tables, "a a b b"}).code == 1);
  CHECK(run({"parse", "-g", temp_path("nothing.scp"), "a"}).code == 2);
}

TEST_CASE("parse options") {
  SUBCASE("stats") {
    auto kv = run({"parse", "-g", kGrammar, "a a a b", "--stats"});
    CHECK(kv.out.find("events_created=") != std::string::npos);
    auto json = run({"parse", "-g", kGrammar, "a a a b", "--stats", "json"});
    CHECK(json.out.find("\"events_created\":") != std::string::npos);
    CHECK(run({"parse", "-g", kGrammar, "a a a b", "--stats", "xml"}).code == 2);
  }
  SUBCASE("forest and trace") {
    auto path = temp_path("forest.txt");
    auto r = run({"parse", "-g", kGrammar, "a a a b", "--forest", path, "--trace"});
    CHECK(r.code == 0);
    CHECK(slurp(path).find("node 7 S [0,4]") != std::string::npos);
    CHECK(r.out.find("create e12 S -> A1 . b . @ [3,4]") != std::string::npos);
  }
  SUBCASE("earley engine") {
    auto r = run({"parse", "-g", kGrammar, "a a a c", "--engine", "earley", "--count-trees"});
    CHECK(r.code == 0);
    CHECK(r.out == "grammatical\ntrees: 1\n");
    CHECK(run({"parse", "-g", kGrammar, "a c", "--engine", "cyk"}).code == 2);
  }
  SUBCASE("lexicon and lattice") {
    auto g = temp_path("np.g");
    std::ofstream(g) << "%root S\nS -> NP V ;\nNP -> ADJ N ;\n";
    auto lex = temp_path("np.lex");
    std::ofstream(lex) << "new ADJ\nyork N\nsleeps V\n";
    CHECK(run({"parse", "-g", g, "new york sleeps", "--lexicon", lex}).code == 0);
    auto lat = temp_path("np.lat");
    std::ofstream(lat) << "%points 4\n0 2 \"New York\" NP\n0 1 \"New\" ADJ\n1 2 \"York\" N\n2 3 \"sleeps\" V\n";
    auto r = run({"parse", "-g", g, "--lattice", lat, "--count-trees"});
    CHECK(r.code == 0);
    CHECK(r.out.find("trees: 2") != std::string::npos);
    CHECK(run({"parse", "-g", g, "new york", "--lexicon", temp_path("none.lex")}).code == 2);
    CHECK(run({"parse", "-g", g, "flies"}).code == 2);
  }
  SUBCASE("random cases by seed") {
    auto scp = run({"parse", "--seed", "17"});
    auto earley = run({"parse", "--seed", "17", "--engine", "earley"});
    CHECK(scp.code == earley.code);
    CHECK(run({"parse", "--seed", "17", "--print-case"}).out.find("%root N0") != std::string::npos);
  }
  SUBCASE("step limit") {
    auto r = run({"parse", "-g", kGrammar, "a a a a b", "--max-steps", "2"});
    CHECK(r.code == 2);
    CHECK(r.err.find("step limit") != std::string::npos);
  }
  SUBCASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"parse", "a"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
  }
}

TEST_CASE("bench") {
  auto csv = temp_path("bench.csv");
  auto r = run({"bench", "--suite", "recursive", "--csv", csv, "--schedule", "8,16,32"});
  CHECK(r.code == 0);
  auto text = slurp(csv);
  CHECK(text.rfind("suite,W,events_created,events_deleted,events_run,fusions,nodes,links,T\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(r.out.find("PCC") != std::string::npos);
  CHECK(run({"bench", "--suite", "bogus"}).code == 2);
  auto all = run({"bench", "--suite", "all", "--schedule", "8,16"});
  CHECK(all.out.find("nonlocal,16,") != std::string::npos);
}
