#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "scp/engine.hpp"
#include "scp/forest.hpp"
#include "scp/grammar.hpp"
#include "scp/lattice.hpp"
#include "scp/relations.hpp"

namespace testing {

inline const char* kG2 =
    "%root S\n"
    "S -> A1 b | A2 c ;\n"
    "A1 -> a | a A1 ;\n"
    "A2 -> a | a A2 ;\n";

inline scp::SymbolId sym(const scp::Grammar& g, const std::string& name) {
  auto id = g.find(name);
  if (id < 0) throw std::runtime_error("no symbol " + name);
  return static_cast<scp::SymbolId>(id);
}

inline std::set<std::string> names(const scp::Grammar& g, const scp::Bitset& b) {
  std::set<std::string> out;
  for (auto m : b.members()) out.insert(g.name(static_cast<scp::SymbolId>(m)));
  return out;
}

// Everything needed to run one parse; keeps the referenced objects alive.
struct Session {
  scp::CompiledGrammar cg;
  scp::Parser parser;
  scp::InputLattice input;
  scp::Chart chart;
  scp::Acceptance acc;

  Session(const std::string& grammar, const std::string& text, scp::ParseOptions opts = {})
      : Session(scp::compile(scp::load_grammar(grammar)), scp::tokenize_plain(text, {}, true), opts) {}
  Session(scp::CompiledGrammar c, scp::InputLattice in, scp::ParseOptions opts = {})
      : cg(std::move(c)), parser(cg), input(std::move(in)), chart(parser, input, opts) {
    chart.parse_cycle();
    acc = chart.accept();
  }
  scp::Forest forest() const { return scp::Forest(chart, acc.roots); }
};

// Brute-force language of every symbol: strings of terminals of length at
// most `max_len` produced by derivation trees of height at most `height`.
using Language = std::vector<std::set<std::vector<scp::SymbolId>>>;

inline Language bounded_language(const scp::Grammar& g, std::size_t max_len, int height) {
  Language lang(g.symbol_count());
  for (const auto& s : g.symbols())
    if (g.is_terminal(s.id)) lang[s.id].insert({s.id});
  for (int h = 0; h < height; ++h) {
    Language next = lang;
    for (const auto& p : g.productions()) {
      std::set<std::vector<scp::SymbolId>> acc{{}};
      for (auto x : p.rhs) {
        std::set<std::vector<scp::SymbolId>> grown;
        for (const auto& pre : acc)
          for (const auto& w : lang[x]) {
            if (pre.size() + w.size() > max_len) continue;
            auto v = pre;
            v.insert(v.end(), w.begin(), w.end());
            grown.insert(std::move(v));
          }
        acc = std::move(grown);
      }
      next[p.lhs].insert(acc.begin(), acc.end());
    }
    lang = std::move(next);
  }
  return lang;
}

inline std::vector<bool> brute_nullable(const scp::Grammar& g) {
  auto lang = bounded_language(g, 0, static_cast<int>(g.symbol_count()) + 1);
  std::vector<bool> out(g.symbol_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = lang[i].count({}) > 0;
  return out;
}

// Sentential forms reachable from `start` by expanding nonterminals,
// erasing nullable symbols and keeping any contiguous window of at most
// `window` symbols. Windows preserve adjacency and corner facts.
inline std::set<std::vector<scp::SymbolId>> windows_from(const scp::Grammar& g, const std::vector<bool>& nullable,
                                                         scp::SymbolId start, std::size_t window) {
  using Form = std::vector<scp::SymbolId>;
  std::set<Form> seen{{start}};
  std::vector<Form> todo{{start}};
  auto push = [&](Form f) {
    if (f.size() > window) {
      for (std::size_t i = 0; i + window <= f.size(); ++i) {
        Form w(f.begin() + static_cast<long>(i), f.begin() + static_cast<long>(i + window));
        if (seen.insert(w).second) todo.push_back(std::move(w));
      }
      return;
    }
    if (seen.insert(f).second) todo.push_back(std::move(f));
  };
  while (!todo.empty()) {
    Form f = todo.back();
    todo.pop_back();
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (nullable[f[i]]) {
        Form e = f;
        e.erase(e.begin() + static_cast<long>(i));
        push(std::move(e));
      }
      // Dropping an end keeps a contiguous window.
      if (i == 0 || i + 1 == f.size()) {
        Form d = f;
        d.erase(d.begin() + static_cast<long>(i));
        push(std::move(d));
      }
      if (g.is_terminal(f[i])) continue;
      for (auto p : g.productions_of(f[i])) {
        Form x(f.begin(), f.begin() + static_cast<long>(i));
        const auto& rhs = g.production(p).rhs;
        x.insert(x.end(), rhs.begin(), rhs.end());
        x.insert(x.end(), f.begin() + static_cast<long>(i + 1), f.end());
        push(std::move(x));
      }
    }
  }
  return seen;
}

// Left/right corner closure by prefix-only derivation: forms derived from
// `start` whose symbols left of the first position were all erased.
inline std::set<scp::SymbolId> brute_corners(const scp::Grammar& g, const std::vector<bool>& nullable,
                                             scp::SymbolId start, bool right) {
  using Form = std::vector<scp::SymbolId>;
  std::set<scp::SymbolId> out;
  std::set<Form> seen{{start}};
  std::vector<Form> todo{{start}};
  while (!todo.empty()) {
    Form f = todo.back();
    todo.pop_back();
    out.insert(right ? f.back() : f.front());
    std::vector<Form> next;
    // Erase a nullable symbol at the watched end.
    if (f.size() > 1 && nullable[right ? f.back() : f.front()]) {
      Form e = f;
      if (right)
        e.pop_back();
      else
        e.erase(e.begin());
      next.push_back(std::move(e));
    }
    // Expand the watched end; the rest of the form is irrelevant.
    scp::SymbolId x = right ? f.back() : f.front();
    if (!g.is_terminal(x)) {
      for (auto p : g.productions_of(x)) {
        const auto& rhs = g.production(p).rhs;
        if (!rhs.empty()) next.emplace_back(rhs.begin(), rhs.end());
      }
    }
    for (auto& n : next)
      if (seen.insert(n).second) todo.push_back(std::move(n));
  }
  return out;
}

// Compares every compiled relation with the brute-force oracles above.
// Returns an empty string when everything matches.
inline std::string relations_mismatch(const scp::Grammar& g) {
  auto cg = scp::compile(g);
  std::size_t n = g.symbol_count();
  auto nullable = brute_nullable(g);
  std::size_t max_rhs = 1;
  for (const auto& p : g.productions()) max_rhs = std::max(max_rhs, p.rhs.size());
  for (scp::SymbolId a = 0; a < n; ++a)
    if (cg.is_nullable(a) != nullable[a]) return "nullable(" + g.name(a) + ")";
  for (scp::SymbolId gamma = 0; gamma < n; ++gamma) {
    auto lc = brute_corners(g, nullable, gamma, false);
    auto rc = brute_corners(g, nullable, gamma, true);
    for (scp::SymbolId a = 0; a < n; ++a) {
      if (cg.lpd[a].test(gamma) != (lc.count(a) > 0)) return "lpd(" + g.name(a) + ") vs " + g.name(gamma);
      if (cg.rpd[a].test(gamma) != (rc.count(a) > 0)) return "rpd(" + g.name(a) + ") vs " + g.name(gamma);
    }
  }
  std::vector<std::vector<bool>> adjacent(n, std::vector<bool>(n));
  for (scp::SymbolId x = 0; x < n; ++x) {
    if (g.is_terminal(x)) continue;
    for (const auto& f : windows_from(g, nullable, x, max_rhs + 1))
      for (std::size_t i = 0; i + 1 < f.size(); ++i) adjacent[f[i]][f[i + 1]] = true;
  }
  for (scp::SymbolId a = 0; a < n; ++a)
    for (scp::SymbolId b = 0; b < n; ++b) {
      if (cg.la[a].test(b) != adjacent[b][a]) return "la(" + g.name(a) + ") vs " + g.name(b);
      if (cg.ra[a].test(b) != adjacent[a][b]) return "ra(" + g.name(a) + ") vs " + g.name(b);
    }
  std::vector<bool> lm(n), rm(n);
  for (auto r : g.roots()) {
    for (auto a : brute_corners(g, nullable, r, false)) lm[a] = true;
    for (auto a : brute_corners(g, nullable, r, true)) rm[a] = true;
  }
  for (scp::SymbolId a = 0; a < n; ++a) {
    if (cg.lm.test(a) != lm[a]) return "lm(" + g.name(a) + ")";
    if (cg.rm.test(a) != rm[a]) return "rm(" + g.name(a) + ")";
  }
  return {};
}

}  // namespace testing
