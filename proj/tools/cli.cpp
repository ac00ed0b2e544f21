#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "scp/bench.hpp"
#include "scp/forest.hpp"
#include "scp/oracle.hpp"

namespace scp {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

CompiledGrammar load_compiled(const std::string& path) {
  std::string text = read_file(path);
  if (looks_compiled(text)) return deserialize(text);
  return compile(load_grammar(text));
}

struct ParseArgs {
  std::string grammar;
  std::string input;
  std::string lexicon;
  std::string lattice;
  bool trace = false;
  std::string forest;
  std::string stats;
  bool count_trees = false;
  std::string engine = "scp";
  std::uint64_t max_steps = 0;
  std::int64_t seed = -1;
  bool print_case = false;
};

int cmd_parse(const ParseArgs& a, CLI::App& sub, std::ostream& out, std::ostream& err) {
  std::optional<CompiledGrammar> cg;
  std::optional<InputLattice> input;
  if (a.seed >= 0) {
    auto rc = random_case(static_cast<std::uint64_t>(a.seed));
    if (a.print_case) out << rc.grammar.to_text() << save_lattice(rc.input);
    cg = compile(std::move(rc.grammar));
    input = std::move(rc.input);
  } else {
    if (a.grammar.empty()) throw UsageError("parse needs -g GRAMMAR or --seed N");
    cg = load_compiled(a.grammar);
    if (!a.lattice.empty()) {
      if (sub.count("input")) throw UsageError("give either an input string or --lattice, not both");
      input = load_lattice(read_file(a.lattice));
    } else {
      Lexicon lex;
      if (!a.lexicon.empty()) lex = load_lexicon(read_file(a.lexicon));
      input = tokenize_plain(a.input, lex, a.lexicon.empty());
    }
  }
  for (const auto& w : cg->warnings) err << "warning: " << w << '\n';

  std::string stats_format = a.stats.empty() ? "kv" : a.stats;
  if (stats_format != "kv" && stats_format != "json") throw UsageError("--stats takes 'kv' or 'json'");

  if (a.engine == "earley") {
    if (a.trace || !a.forest.empty() || sub.count("--stats"))
      err << "warning: --trace, --forest and --stats apply to the scp engine only\n";
    bool ok = earley_recognize(cg->grammar, *input);
    out << (ok ? "grammatical" : "not grammatical") << '\n';
    if (a.count_trees) out << "trees: " << to_string(earley_count_trees(cg->grammar, *input, 1000000)) << '\n';
    return ok ? 0 : 1;
  }
  if (a.engine != "scp") throw UsageError("unknown engine '" + a.engine + "'");

  for (const auto& item : input->items())
    if (cg->grammar.find(item.preterminal) < 0)
      throw UsageError("token '" + item.unit + "' maps to unknown symbol '" + item.preterminal + "'");

  Parser parser(*cg);
  ParseOptions opts;
  opts.max_steps = a.max_steps;
  if (a.trace) {
    opts.trace = &out;
    const char* color = std::getenv("SCP_TRACE_COLOR");
    opts.trace_color = color && std::string(color) == "1";
  }
  Chart chart = parse(parser, *input, opts);
  Acceptance acc = chart.accept();
  out << (acc.grammatical ? "grammatical" : "not grammatical") << '\n';
  Forest forest(chart, acc.roots);
  if (a.count_trees) out << "trees: " << to_string(forest.count_trees(1000000)) << '\n';
  if (!a.forest.empty()) write_file(a.forest, forest.dump(), out);
  if (sub.count("--stats")) out << format_stats(chart.stats(), stats_format == "json");
  return acc.grammatical ? 0 : 1;
}

int cmd_compile(const std::string& path, const std::string& output, bool dump, std::ostream& out,
                std::ostream& err) {
  CompiledGrammar cg = compile(load_grammar(read_file(path)));
  for (const auto& w : cg.warnings) err << "warning: " << w << '\n';
  if (!output.empty()) write_file(output, serialize(cg), out);
  if (dump) out << dump_relations(cg);
  if (output.empty() && !dump) out << serialize(cg);
  return 0;
}

int cmd_bench(const std::string& suite, const std::string& csv, std::vector<std::size_t> schedule, int reps,
              std::ostream& out) {
  std::vector<std::string> suites;
  if (suite == "all")
    suites = suite_names();
  else if (is_suite(suite))
    suites = {suite};
  else
    throw UsageError("unknown suite '" + suite + "'");
  if (schedule.empty()) schedule = default_schedule();

  std::string table = csv_header() + "\n";
  std::string fits;
  for (const auto& s : suites) {
    BenchReport report = run_bench(s, schedule, reps);
    for (const auto& r : report.rows) table += csv_row(r) + "\n";
    fits += s + ":\n" + format_fit(report);
  }
  if (csv.empty())
    out << table;
  else
    write_file(csv, table, out);
  out << fits;
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bidirectional constraint-propagation parser"};
  app.require_subcommand(1);

  std::string compile_in, compile_out;
  bool dump = false;
  auto* compile_cmd = app.add_subcommand("compile", "Compile a grammar into lookup tables");
  compile_cmd->add_option("grammar", compile_in, "Grammar file")->required();
  compile_cmd->add_option("-o,--output", compile_out, "Write the compiled tables here");
  compile_cmd->add_flag("--dump-relations", dump, "Print the relation tables");

  ParseArgs pa;
  auto* parse_cmd = app.add_subcommand("parse", "Parse an input string or lattice");
  parse_cmd->add_option("-g,--grammar", pa.grammar, "Grammar file or compiled tables");
  parse_cmd->add_option("input", pa.input, "Whitespace separated tokens");
  parse_cmd->add_option("--lexicon", pa.lexicon, "Lexicon file mapping tokens to categories");
  parse_cmd->add_option("--lattice", pa.lattice, "Lattice file");
  parse_cmd->add_flag("--trace", pa.trace, "Log every chart operation");
  parse_cmd->add_option("--forest", pa.forest, "Write the forest dump here ('-' for stdout)");
  parse_cmd->add_option("--stats", pa.stats, "Print counters as kv or json")->expected(0, 1);
  parse_cmd->add_flag("--count-trees", pa.count_trees, "Print the number of trees");
  parse_cmd->add_option("--engine", pa.engine, "scp or earley");
  parse_cmd->add_option("--max-steps", pa.max_steps, "Abort after this many cycle steps");
  parse_cmd->add_option("--seed", pa.seed, "Parse the random case generated from this seed");
  parse_cmd->add_flag("--print-case", pa.print_case, "With --seed, print the generated case");

  std::string suite = "recursive", csv;
  std::vector<std::size_t> schedule;
  int reps = 1;
  auto* bench_cmd = app.add_subcommand("bench", "Measure event counts over input lengths");
  bench_cmd->add_option("--suite", suite, "recursive, local, nonlocal or all");
  bench_cmd->add_option("--csv", csv, "Write CSV rows here");
  bench_cmd->add_option("--schedule", schedule, "Input lengths")->delimiter(',');
  bench_cmd->add_option("--repetitions", reps, "Timed parses per length")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*compile_cmd) return cmd_compile(compile_in, compile_out, dump, out, err);
    if (*parse_cmd) return cmd_parse(pa, *parse_cmd, out, err);
    if (*bench_cmd) return cmd_bench(suite, csv, schedule, reps, out);
  } catch (const GrammarError& e) {
    err << "grammar error";
    if (e.line()) err << " at " << e.line() << ':' << e.column();
    err << ": " << e.what() << '\n';
    return 2;
  } catch (const StepLimitExceeded& e) {
    err << "error: " << e.what();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace scp
