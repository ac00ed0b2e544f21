#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "scp/bench.hpp"

using namespace scp;

TEST_CASE("exact linear data fits perfectly") {
  std::vector<double> x, y;
  for (auto w : default_schedule()) {
    double v = static_cast<double>(w) * std::log(static_cast<double>(w));
    x.push_back(v);
    y.push_back(100 * v);
  }
  Fit f = least_squares(x, y);
  CHECK(f.b == doctest::Approx(100));
  CHECK(f.a == doctest::Approx(0).epsilon(1e-6));
  CHECK(f.pcc == doctest::Approx(1.0));
}

TEST_CASE("fit recovers known linear models") {
  struct Model {
    double a, b;
  };
  for (Model m : {Model{-5.183, 219e-7}, Model{-17.82, 352e-7}, Model{0.0001, 46e-13}, Model{0.0002, 38e-12}}) {
    std::vector<double> x, y;
    for (double w = 1000; w <= 20000; w += 1000) {
      x.push_back(w * std::log(w));
      y.push_back(m.a + m.b * x.back());
    }
    Fit f = least_squares(x, y);
    CHECK(f.a == doctest::Approx(m.a).epsilon(1e-6));
    CHECK(f.b == doctest::Approx(m.b).epsilon(1e-6));
    CHECK(f.pcc == doctest::Approx(1.0));
  }
}

TEST_CASE("fit input checks") {
  CHECK_THROWS(least_squares({1}, {2}));
  CHECK_THROWS(least_squares({1, 2}, {2}));
  Fit flat = least_squares({1, 2, 3}, {5, 5, 5});
  CHECK(flat.b == 0);
  CHECK(flat.pcc == 0);
}

TEST_CASE("suite inputs have exactly W words and parse") {
  for (const auto& s : suite_names()) {
    auto cg = compile(load_grammar(suite_grammar_text(s)));
    CHECK(cg.warnings.empty());
    Parser parser(cg);
    for (std::size_t w : {8, 16, 64}) {
      auto in = suite_input(s, w);
      CHECK(in.last() == w);
      Chart c = parse(parser, in);
      CAPTURE(s);
      CAPTURE(w);
      CHECK(c.accept().grammatical);
    }
  }
  CHECK_THROWS(suite_grammar_text("nope"));
  CHECK_THROWS(suite_input("local", 7));
}

TEST_CASE("bench rows and csv") {
  auto report = run_bench("recursive", {8, 16, 32}, 1);
  REQUIRE(report.rows.size() == 3);
  for (const auto& r : report.rows) {
    CHECK(r.grammatical);
    CHECK(r.useless_nodes == 0);
    CHECK(r.events_deleted + r.events_run <= r.events_created + r.fusions);
  }
  CHECK(csv_header() == "suite,W,events_created,events_deleted,events_run,fusions,nodes,links,T");
  auto row = csv_row(report.rows[0]);
  CHECK(row.rfind("recursive,8,", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == 8);
  // Counters are reproducible; only T varies.
  auto again = run_bench("recursive", {8, 16, 32}, 1);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(again.rows[i].events_created == report.rows[i].events_created);
    CHECK(again.rows[i].links == report.rows[i].links);
  }
  CHECK(format_fit(report).find("PCC") != std::string::npos);
}
