// Queries over the shared packed forest left in a completed chart.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scp/engine.hpp"

namespace scp {

struct TreeCount {
  enum class Kind { finite, capped, infinite };
  Kind kind = Kind::finite;
  std::uint64_t value = 0;  // meaningful for finite only

  static TreeCount finite(std::uint64_t v) { return {Kind::finite, v}; }
  static TreeCount capped() { return {Kind::capped, 0}; }
  static TreeCount infinite() { return {Kind::infinite, 0}; }
  friend bool operator==(const TreeCount&, const TreeCount&) = default;
};

std::string to_string(const TreeCount& c);

// One concrete derivation. A lexical leaf has no production and refers to
// the lattice item it was read from.
struct Tree {
  SymbolId symbol = 0;
  std::size_t fbp = kNoPosition;
  std::size_t lbp = kNoPosition;
  bool lexical = false;
  ProductionId production = 0;
  std::size_t lexical_item = 0;
  std::vector<Tree> children;

  friend bool operator==(const Tree&, const Tree&) = default;
};

class Forest {
 public:
  Forest(const Chart& chart, std::vector<NodeId> roots);

  const std::vector<NodeId>& roots() const { return roots_; }

  // Derivation trees under all roots. Trees are counted per lexical item of
  // a preterminal node plus, per analysis, the product of child counts.
  TreeCount count_trees(std::uint64_t cap) const;
  TreeCount count_trees(NodeId node, std::uint64_t cap) const;

  // Lexicographic by root, then lexical items, then analysis index. A tree
  // never repeats a node on its own ancestor path.
  std::vector<Tree> enumerate_trees(std::size_t limit) const;

  std::vector<bool> reachable_nodes() const;
  std::size_t useless_node_count() const;

  // S(A1(a, A1(a)), b)
  std::string render(const Tree& t) const;
  std::string dump() const;

 private:
  std::vector<Tree> expand(NodeId n, std::size_t limit, std::vector<bool>& on_path) const;

  const Chart* chart_;
  std::vector<NodeId> roots_;
};

}  // namespace scp
