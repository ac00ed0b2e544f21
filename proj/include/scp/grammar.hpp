// Grammar data model and the line-oriented grammar text format.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scp {

using SymbolId = std::uint32_t;
using ProductionId = std::uint32_t;

enum class SymbolKind { terminal, nonterminal };

struct Symbol {
  SymbolId id = 0;
  std::string name;
  SymbolKind kind = SymbolKind::terminal;
};

struct Production {
  ProductionId id = 0;
  SymbolId lhs = 0;
  std::vector<SymbolId> rhs;  // empty rhs is an epsilon production
};

// Raised for malformed grammar text and invalid grammars. Line and column
// are 1-based; zero means "not tied to a location".
class GrammarError : public std::runtime_error {
 public:
  GrammarError(const std::string& what, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class Grammar {
 public:
  Grammar() = default;

  // Builds and validates a grammar from already-resolved parts. Symbol kinds
  // are recomputed from the productions (nonterminal iff some lhs).
  Grammar(std::vector<std::string> symbol_names,
          std::vector<std::pair<SymbolId, std::vector<SymbolId>>> productions,
          std::vector<SymbolId> roots);

  const std::vector<Symbol>& symbols() const { return symbols_; }
  const std::vector<Production>& productions() const { return productions_; }
  const std::vector<SymbolId>& roots() const { return roots_; }

  std::size_t symbol_count() const { return symbols_.size(); }
  const Symbol& symbol(SymbolId id) const { return symbols_[id]; }
  const Production& production(ProductionId id) const { return productions_[id]; }
  const std::string& name(SymbolId id) const { return symbols_[id].name; }
  bool is_terminal(SymbolId id) const { return symbols_[id].kind == SymbolKind::terminal; }
  bool is_root(SymbolId id) const;

  // Returns -1 when absent.
  std::int64_t find(std::string_view name) const;

  std::size_t terminal_count() const;
  std::size_t nonterminal_count() const;

  // Productions grouped by lhs, in declaration order.
  const std::vector<ProductionId>& productions_of(SymbolId lhs) const { return by_lhs_[lhs]; }

  // Nonterminals not reachable from any root.
  std::vector<SymbolId> unreachable_nonterminals() const;

  // Canonical text rendering; load_grammar(g.to_text()) reproduces g.
  std::string to_text() const;
  std::string render(const Production& p) const;

 private:
  std::vector<Symbol> symbols_;
  std::vector<Production> productions_;
  std::vector<SymbolId> roots_;
  std::vector<std::vector<ProductionId>> by_lhs_;
  std::unordered_map<std::string, SymbolId> index_;
};

// Parses grammar text:
//   %root S            (one or more, required)
//   %terminal a b c    (optional; when present, the complete terminal set)
//   LHS -> X Y | Z ;   (alternatives with |, empty body for epsilon)
//   # comment
Grammar load_grammar(std::string_view text);

}  // namespace scp
