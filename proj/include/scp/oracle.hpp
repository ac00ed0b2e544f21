// Reference recognizer and tree counter (plain Earley over lattices), plus a
// seeded generator of random grammars and inputs for differential testing.
// Nothing here depends on the relations tables or the engine.

#pragma once

#include <cstdint>
#include <vector>

#include "scp/forest.hpp"
#include "scp/grammar.hpp"
#include "scp/lattice.hpp"

namespace scp {

bool earley_recognize(const Grammar& g, const InputLattice& input);

// Same counting rules as Forest::count_trees.
TreeCount earley_count_trees(const Grammar& g, const InputLattice& input, std::uint64_t cap);

// Up to `limit` trees; cycle-safe along each tree's ancestor path.
std::vector<Tree> earley_enumerate_trees(const Grammar& g, const InputLattice& input, std::size_t limit);

// Depth-bounded exhaustive top-down search: does some root derive a full
// path of the lattice? Meant for tiny grammars and inputs only.
bool derivation_search(const Grammar& g, const InputLattice& input, int max_depth);

struct RandomLimits {
  int max_nonterminals = 8;
  int max_terminals = 4;
  int max_productions = 20;
  int max_rhs = 4;
  double epsilon_probability = 0.15;
  int max_input = 12;
  int max_fanout = 3;
};

struct RandomCase {
  Grammar grammar;
  InputLattice input;
};

RandomCase random_case(std::uint64_t seed, const RandomLimits& limits = {});

}  // namespace scp
