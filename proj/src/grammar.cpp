#include "scp/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace scp {

namespace {

std::string located(const std::string& what, int line, int column) {
  if (line == 0) return what;
  std::ostringstream os;
  os << "line " << line << ", column " << column << ": " << what;
  return os.str();
}

enum class TokKind { ident, arrow, bar, semicolon, directive, newline, end };

struct Token {
  TokKind kind;
  std::string text;
  int line;
  int column;
};

bool is_special(char c) { return c == ';' || c == '|' || c == '#'; }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      out.push_back({TokKind::newline, "\n", line, column});
      advance(1);
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (c == ';') {
      out.push_back({TokKind::semicolon, ";", line, column});
      advance(1);
    } else if (c == '|') {
      out.push_back({TokKind::bar, "|", line, column});
      advance(1);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({TokKind::arrow, "->", line, column});
      advance(2);
    } else {
      int l = line, col = column;
      std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             !is_special(text[i]) && !(text[i] == '-' && i + 1 < text.size() && text[i + 1] == '>'))
        advance(1);
      std::string word(text.substr(start, i - start));
      out.push_back({word[0] == '%' ? TokKind::directive : TokKind::ident, word, l, col});
    }
  }
  out.push_back({TokKind::end, "", line, column});
  return out;
}

}  // namespace

GrammarError::GrammarError(const std::string& what, int line, int column)
    : std::runtime_error(located(what, line, column)), line_(line), column_(column) {}

Grammar::Grammar(std::vector<std::string> symbol_names,
                 std::vector<std::pair<SymbolId, std::vector<SymbolId>>> productions,
                 std::vector<SymbolId> roots) {
  for (SymbolId id = 0; id < symbol_names.size(); ++id) {
    if (!index_.emplace(symbol_names[id], id).second)
      throw GrammarError("duplicate symbol '" + symbol_names[id] + "'");
    symbols_.push_back({id, std::move(symbol_names[id]), SymbolKind::terminal});
  }
  by_lhs_.resize(symbols_.size());
  for (auto& [lhs, rhs] : productions) {
    if (lhs >= symbols_.size()) throw GrammarError("production lhs out of range");
    for (SymbolId s : rhs)
      if (s >= symbols_.size()) throw GrammarError("production rhs out of range");
    auto id = static_cast<ProductionId>(productions_.size());
    symbols_[lhs].kind = SymbolKind::nonterminal;
    by_lhs_[lhs].push_back(id);
    productions_.push_back({id, lhs, std::move(rhs)});
  }
  if (roots.empty()) throw GrammarError("no root declared");
  std::set<SymbolId> seen;
  for (SymbolId r : roots) {
    if (r >= symbols_.size()) throw GrammarError("root out of range");
    if (symbols_[r].kind != SymbolKind::nonterminal)
      throw GrammarError("undeclared symbol '" + symbols_[r].name + "' used as root");
    if (seen.insert(r).second) roots_.push_back(r);
  }
}

bool Grammar::is_root(SymbolId id) const {
  return std::find(roots_.begin(), roots_.end(), id) != roots_.end();
}

std::int64_t Grammar::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::size_t Grammar::terminal_count() const {
  return static_cast<std::size_t>(
      std::count_if(symbols_.begin(), symbols_.end(),
                    [](const Symbol& s) { return s.kind == SymbolKind::terminal; }));
}

std::size_t Grammar::nonterminal_count() const { return symbols_.size() - terminal_count(); }

std::vector<SymbolId> Grammar::unreachable_nonterminals() const {
  std::vector<bool> seen(symbols_.size(), false);
  std::vector<SymbolId> stack(roots_.begin(), roots_.end());
  for (SymbolId r : roots_) seen[r] = true;
  while (!stack.empty()) {
    SymbolId s = stack.back();
    stack.pop_back();
    for (ProductionId p : by_lhs_[s])
      for (SymbolId x : productions_[p].rhs)
        if (!seen[x]) {
          seen[x] = true;
          stack.push_back(x);
        }
  }
  std::vector<SymbolId> out;
  for (const auto& s : symbols_)
    if (s.kind == SymbolKind::nonterminal && !seen[s.id]) out.push_back(s.id);
  return out;
}

std::string Grammar::render(const Production& p) const {
  std::string out = symbols_[p.lhs].name + " ->";
  for (SymbolId s : p.rhs) out += " " + symbols_[s].name;
  return out;
}

std::string Grammar::to_text() const {
  std::ostringstream os;
  for (SymbolId r : roots_) os << "%root " << symbols_[r].name << "\n";
  bool any_terminal = false;
  for (const auto& s : symbols_)
    if (s.kind == SymbolKind::terminal) {
      os << (any_terminal ? " " : "%terminal ") << s.name;
      any_terminal = true;
    }
  if (any_terminal) os << "\n";
  for (const auto& p : productions_) os << render(p) << " ;\n";
  return os.str();
}

Grammar load_grammar(std::string_view text) {
  auto tokens = tokenize(text);
  std::vector<std::string> names;
  std::unordered_map<std::string, SymbolId> ids;
  std::unordered_map<SymbolId, std::pair<int, int>> first_seen;
  auto intern = [&](const Token& t) {
    auto [it, fresh] = ids.emplace(t.text, static_cast<SymbolId>(names.size()));
    if (fresh) {
      names.push_back(t.text);
      first_seen[it->second] = {t.line, t.column};
    }
    return it->second;
  };

  std::vector<std::pair<SymbolId, std::vector<SymbolId>>> productions;
  std::vector<std::pair<SymbolId, Token>> roots;
  std::set<SymbolId> declared_terminals;
  std::set<SymbolId> lhs_set;
  std::vector<std::pair<SymbolId, Token>> rhs_uses;
  bool has_terminal_decl = false;

  std::size_t i = 0;
  auto peek = [&]() -> const Token& { return tokens[i]; };
  auto fail = [&](const std::string& what, const Token& t) -> GrammarError {
    return GrammarError(what, t.line, t.column);
  };

  while (peek().kind != TokKind::end) {
    const Token& t = peek();
    if (t.kind == TokKind::newline) {
      ++i;
      continue;
    }
    if (t.kind == TokKind::directive) {
      bool is_root = t.text == "%root";
      if (!is_root && t.text != "%terminal") throw fail("unknown directive '" + t.text + "'", t);
      if (!is_root) has_terminal_decl = true;
      Token directive = t;
      ++i;
      int count = 0;
      while (peek().kind == TokKind::ident) {
        SymbolId s = intern(peek());
        if (is_root)
          roots.emplace_back(s, peek());
        else
          declared_terminals.insert(s);
        ++count;
        ++i;
      }
      if (peek().kind != TokKind::newline && peek().kind != TokKind::end)
        throw fail("unexpected '" + peek().text + "' in " + directive.text + " line", peek());
      if (count == 0) throw fail(directive.text + " needs at least one symbol", directive);
      continue;
    }
    if (t.kind != TokKind::ident) throw fail("expected production, found '" + t.text + "'", t);
    Token lhs_tok = t;
    SymbolId lhs = intern(t);
    lhs_set.insert(lhs);
    ++i;
    while (peek().kind == TokKind::newline) ++i;
    if (peek().kind != TokKind::arrow) throw fail("expected '->' after '" + lhs_tok.text + "'", peek());
    ++i;
    std::vector<SymbolId> rhs;
    for (;;) {
      const Token& u = peek();
      if (u.kind == TokKind::ident) {
        SymbolId s = intern(u);
        rhs.push_back(s);
        rhs_uses.emplace_back(s, u);
        ++i;
      } else if (u.kind == TokKind::newline) {
        ++i;
      } else if (u.kind == TokKind::bar) {
        productions.emplace_back(lhs, std::move(rhs));
        rhs.clear();
        ++i;
      } else if (u.kind == TokKind::semicolon) {
        productions.emplace_back(lhs, std::move(rhs));
        ++i;
        break;
      } else {
        throw fail(u.kind == TokKind::end ? "missing ';' at end of production"
                                          : "unexpected '" + u.text + "' in production",
                   u);
      }
    }
  }

  for (SymbolId s : declared_terminals)
    if (lhs_set.count(s)) {
      auto [l, c] = first_seen[s];
      throw GrammarError("terminal used as lhs: '" + names[s] + "'", l, c);
    }
  if (has_terminal_decl)
    for (const auto& [s, tok] : rhs_uses)
      if (!lhs_set.count(s) && !declared_terminals.count(s))
        throw fail("undeclared symbol '" + names[s] + "'", tok);
  for (const auto& [s, tok] : roots)
    if (!lhs_set.count(s)) throw fail("undeclared symbol '" + names[s] + "' used as root", tok);
  if (roots.empty()) throw GrammarError("no root declared");

  std::vector<SymbolId> root_ids;
  for (const auto& [s, tok] : roots) root_ids.push_back(s);
  return Grammar(std::move(names), std::move(productions), std::move(root_ids));
}

}  // namespace scp
