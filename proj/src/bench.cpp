#include "scp/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "scp/forest.hpp"

namespace scp {

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("least_squares needs two or more points");
  double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  Fit f;
  f.b = sxx == 0 ? 0 : sxy / sxx;
  f.a = my - f.b * mx;
  f.pcc = sxx == 0 || syy == 0 ? 0 : sxy / std::sqrt(sxx * syy);
  return f;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"recursive", "local", "nonlocal"};
  return names;
}

bool is_suite(const std::string& name) {
  for (const auto& s : suite_names())
    if (s == name) return true;
  return false;
}

std::string suite_grammar_text(const std::string& suite) {
  if (suite == "recursive")
    return "%root S\n"
           "S -> A1 b | A2 c ;\n"
           "A1 -> a | a A1 ;\n"
           "A2 -> a | a A2 ;\n";
  if (suite == "local")
    // Determiner and noun must agree in class; phrases chain to the right.
    return "%root S\n"
           "S -> P | P S ;\n"
           "P -> D1 N1 | D2 N2 | D3 N3 ;\n"
           "D1 -> d1 ;\nD2 -> d2 ;\nD3 -> d3 ;\n"
           "N1 -> n1 ;\nN2 -> n2 ;\nN3 -> n3 ;\n";
  if (suite == "nonlocal")
    // Nested a ... b matching; the X and d rules look plausible locally but
    // never complete on these inputs.
    return "%root S\n"
           "S -> a S b | c c | a S d | X e ;\n"
           "X -> a X | a ;\n";
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

InputLattice suite_input(const std::string& suite, std::size_t W) {
  std::vector<std::string> words;
  if (suite == "recursive") {
    if (W < 1) throw std::invalid_argument("recursive suite needs W >= 1");
    words.assign(W - 1, "a");
    words.push_back("b");
  } else if (suite == "local") {
    if (W % 2) throw std::invalid_argument("local suite needs an even W");
    for (std::size_t i = 0; i < W / 2; ++i) {
      std::string k = std::to_string(i % 3 + 1);
      words.push_back("d" + k);
      words.push_back("n" + k);
    }
  } else if (suite == "nonlocal") {
    if (W < 2 || W % 2) throw std::invalid_argument("nonlocal suite needs an even W >= 2");
    std::size_t k = W / 2 - 1;
    words.assign(k, "a");
    words.push_back("c");
    words.push_back("c");
    words.insert(words.end(), k, "b");
  } else {
    throw std::invalid_argument("unknown suite '" + suite + "'");
  }
  std::vector<LexicalItem> items;
  for (std::size_t i = 0; i < words.size(); ++i) items.push_back({words[i], words[i], i, i + 1});
  return InputLattice(words.size() + 1, std::move(items));
}

std::vector<std::size_t> default_schedule() {
  std::vector<std::size_t> out;
  for (std::size_t w = 8; w <= 1024; w *= 2) out.push_back(w);
  return out;
}

BenchRecord measure(const std::string& suite, const Parser& parser, std::size_t W, int repetitions) {
  auto input = suite_input(suite, W);
  BenchRecord r;
  r.suite = suite;
  r.W = W;
  double total = 0;
  for (int rep = 0; rep < std::max(1, repetitions); ++rep) {
    auto t0 = std::chrono::steady_clock::now();
    Chart chart = parse(parser, input);
    auto t1 = std::chrono::steady_clock::now();
    total += std::chrono::duration<double>(t1 - t0).count();
    if (rep == 0) {
      const Stats& s = chart.stats();
      r.events_created = s.events_created;
      r.events_deleted = s.events_deleted;
      r.events_run = s.events_run;
      r.fusions = s.fusions;
      r.nodes = chart.nodes().size();
      r.links = s.links;
      auto acc = chart.accept();
      r.grammatical = acc.grammatical;
      r.useless_nodes = Forest(chart, acc.roots).useless_node_count();
    }
  }
  r.T = total / std::max(1, repetitions);
  return r;
}

BenchReport run_bench(const std::string& suite, const std::vector<std::size_t>& schedule, int repetitions) {
  auto cg = compile(load_grammar(suite_grammar_text(suite)));
  Parser parser(cg);
  BenchReport report;
  std::vector<double> x, e, epw;
  for (std::size_t W : schedule) {
    report.rows.push_back(measure(suite, parser, W, repetitions));
    double w = static_cast<double>(W);
    x.push_back(w * std::log(w));
    e.push_back(static_cast<double>(report.rows.back().events_created));
    epw.push_back(e.back() / w);
  }
  if (x.size() >= 2) {
    report.events = least_squares(x, e);
    report.events_per_word = least_squares(x, epw);
  }
  return report;
}

std::string csv_header() { return "suite,W,events_created,events_deleted,events_run,fusions,nodes,links,T"; }

std::string csv_row(const BenchRecord& r) {
  char t[32];
  std::snprintf(t, sizeof t, "%.6f", r.T);
  return r.suite + "," + std::to_string(r.W) + "," + std::to_string(r.events_created) + "," +
         std::to_string(r.events_deleted) + "," + std::to_string(r.events_run) + "," + std::to_string(r.fusions) +
         "," + std::to_string(r.nodes) + "," + std::to_string(r.links) + "," + t;
}

std::string format_fit(const BenchReport& report) {
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof buf, "E = %.6g + %.6g*(W log W)   PCC = %.6f\n", report.events.a, report.events.b,
                report.events.pcc);
  out += buf;
  std::snprintf(buf, sizeof buf, "E/W = %.6g + %.6g*(W log W)   PCC = %.6f\n", report.events_per_word.a,
                report.events_per_word.b, report.events_per_word.pcc);
  out += buf;
  return out;
}

}  // namespace scp
