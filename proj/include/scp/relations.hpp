// Grammar relations and coverage tables: nullability, left/right partial
// derivability, adjacency, boundary predicates, and the per-occurrence
// coverage entries that trigger parse events.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scp/bitset.hpp"
#include "scp/grammar.hpp"

namespace scp {

// Per-symbol relation table: row[a] is the set attached to symbol a.
using Relation = std::vector<Bitset>;

// Coverage class of one rhs occurrence: C = closed (everything on that side
// is nullable, possibly empty), O = open (some non-nullable symbol on that
// side). Left letter describes the prefix, right letter the suffix.
enum class CoverageClass { CC, CO, OC, OO };

const char* to_string(CoverageClass k);

struct CoverageEntry {
  ProductionId production = 0;
  std::uint32_t position = 0;  // index of the anchor occurrence in rhs
  CoverageClass klass = CoverageClass::CC;
  std::uint32_t pre_skip_left = 0;   // |prefix| when the prefix is nullable
  std::uint32_t pre_skip_right = 0;  // |suffix| when the suffix is nullable

  friend bool operator==(const CoverageEntry&, const CoverageEntry&) = default;
};

// A primary adjacency pair: `left` can sit immediately before `right` inside
// some production body, separated only by nullable symbols.
struct AdjacentPair {
  SymbolId left;
  SymbolId right;
  friend auto operator<=>(const AdjacentPair&, const AdjacentPair&) = default;
};

struct Adjacency {
  Relation la;
  Relation ra;
};

struct Boundaries {
  Bitset lm;
  Bitset rm;
};

Bitset compute_nullable(const Grammar& g);

// E(rhs[from..to)) for a nullable set.
bool nullable_span(const Bitset& nullable, const std::vector<SymbolId>& rhs, std::size_t from,
                   std::size_t to);

Relation compute_lpd(const Grammar& g, const Bitset& nullable);
Relation compute_rpd(const Grammar& g, const Bitset& nullable);
std::vector<AdjacentPair> compute_primary_adjacency(const Grammar& g, const Bitset& nullable);
Adjacency compute_adjacency(const Grammar& g, const Bitset& nullable, const Relation& lpd,
                            const Relation& rpd);
Boundaries compute_boundaries(const Grammar& g, const Relation& lpd, const Relation& rpd);
std::vector<std::vector<CoverageEntry>> build_coverage(const Grammar& g, const Bitset& nullable);

// One step of a left-corner witness chain: `parent -> ... child ...` where
// everything before `child` in the body is nullable.
struct WitnessStep {
  ProductionId production;
  std::uint32_t position;
};

// Witness chain showing `ancestor` in lpd[symbol] (or rpd when right=true):
// productions linking symbol upward to ancestor. Empty if symbol == ancestor
// or the relation does not hold.
std::vector<WitnessStep> witness_chain(const Grammar& g, const Bitset& nullable, SymbolId symbol,
                                       SymbolId ancestor, bool right);

struct CompiledGrammar {
  Grammar grammar;
  Bitset nullable;
  Relation lpd;
  Relation rpd;
  Relation la;
  Relation ra;
  Bitset lm;
  Bitset rm;
  std::vector<std::vector<CoverageEntry>> coverage;
  // For each nullable symbol, the productions whose whole body is nullable;
  // these become the analyses of the symbol's canonical epsilon node.
  std::vector<std::vector<ProductionId>> epsilon_analyses;
  std::vector<std::string> warnings;

  bool is_nullable(SymbolId s) const { return nullable.test(s); }
};

CompiledGrammar compile(Grammar g);

// Textual table dump with magic header `SCPC1`. Byte-identical for identical
// grammars.
std::string serialize(const CompiledGrammar& cg);
CompiledGrammar deserialize(std::string_view text);
bool looks_compiled(std::string_view text);

// Human-readable dump for `compile --dump-relations`.
std::string dump_relations(const CompiledGrammar& cg);

}  // namespace scp
