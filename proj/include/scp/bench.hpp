// Benchmark suites, per-length measurements and the least-squares fit of
// event counts against W log W.

#pragma once

#include <string>
#include <vector>

#include "scp/engine.hpp"

namespace scp {

struct BenchRecord {
  std::string suite;
  std::size_t W = 0;
  std::uint64_t events_created = 0;
  std::uint64_t events_deleted = 0;
  std::uint64_t events_run = 0;
  std::uint64_t fusions = 0;
  std::uint64_t nodes = 0;
  std::uint64_t links = 0;
  double T = 0;  // mean wall seconds per parse, informative only
  // Not part of the CSV.
  bool grammatical = false;
  std::size_t useless_nodes = 0;
};

struct Fit {
  double a = 0;  // intercept
  double b = 0;  // slope
  double pcc = 0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y);

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
std::string suite_grammar_text(const std::string& suite);
// The suite's input with exactly W words.
InputLattice suite_input(const std::string& suite, std::size_t W);
std::vector<std::size_t> default_schedule();  // 8, 16, ..., 1024

BenchRecord measure(const std::string& suite, const Parser& parser, std::size_t W, int repetitions);

struct BenchReport {
  std::vector<BenchRecord> rows;
  Fit events;           // events_created ~ W log W
  Fit events_per_word;  // events_created / W ~ W log W
};

BenchReport run_bench(const std::string& suite, const std::vector<std::size_t>& schedule, int repetitions);

std::string csv_header();
std::string csv_row(const BenchRecord& r);
std::string format_fit(const BenchReport& report);

}  // namespace scp
