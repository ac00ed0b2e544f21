#include "scp/relations.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace scp {

namespace {

// Upward corner edges: child -> (parent production, position).
using CornerEdges = std::vector<std::vector<WitnessStep>>;

CornerEdges corner_edges(const Grammar& g, const Bitset& nullable, bool right) {
  CornerEdges edges(g.symbol_count());
  for (const auto& p : g.productions()) {
    const auto& rhs = p.rhs;
    for (std::size_t k = 0; k < rhs.size(); ++k) {
      auto pos = right ? rhs.size() - 1 - k : k;
      edges[rhs[pos]].push_back({p.id, static_cast<std::uint32_t>(pos)});
      if (!nullable.test(rhs[pos])) break;
    }
  }
  return edges;
}

Relation corner_closure(const Grammar& g, const Bitset& nullable, bool right) {
  auto edges = corner_edges(g, nullable, right);
  std::size_t n = g.symbol_count();
  Relation rel(n, Bitset(n));
  for (SymbolId a = 0; a < n; ++a) {
    std::vector<SymbolId> stack{a};
    rel[a].set(a);
    while (!stack.empty()) {
      SymbolId x = stack.back();
      stack.pop_back();
      for (auto step : edges[x]) {
        SymbolId y = g.production(step.production).lhs;
        if (!rel[a].test(y)) {
          rel[a].set(y);
          stack.push_back(y);
        }
      }
    }
  }
  return rel;
}

Relation invert(const Relation& rel) {
  std::size_t n = rel.size();
  Relation inv(n, Bitset(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (rel[a].test(b)) inv[b].set(a);
  return inv;
}

}  // namespace

const char* to_string(CoverageClass k) {
  switch (k) {
    case CoverageClass::CC: return "CC";
    case CoverageClass::CO: return "CO";
    case CoverageClass::OC: return "OC";
    case CoverageClass::OO: return "OO";
  }
  return "?";
}

Bitset compute_nullable(const Grammar& g) {
  Bitset nullable(g.symbol_count());
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : g.productions()) {
      if (nullable.test(p.lhs)) continue;
      if (std::all_of(p.rhs.begin(), p.rhs.end(), [&](SymbolId s) { return nullable.test(s); })) {
        nullable.set(p.lhs);
        changed = true;
      }
    }
  }
  return nullable;
}

bool nullable_span(const Bitset& nullable, const std::vector<SymbolId>& rhs, std::size_t from,
                   std::size_t to) {
  for (std::size_t i = from; i < to; ++i)
    if (!nullable.test(rhs[i])) return false;
  return true;
}

Relation compute_lpd(const Grammar& g, const Bitset& nullable) {
  return corner_closure(g, nullable, false);
}

Relation compute_rpd(const Grammar& g, const Bitset& nullable) {
  return corner_closure(g, nullable, true);
}

std::vector<AdjacentPair> compute_primary_adjacency(const Grammar& g, const Bitset& nullable) {
  std::set<AdjacentPair> pairs;
  for (const auto& p : g.productions()) {
    const auto& rhs = p.rhs;
    for (std::size_t i = 0; i < rhs.size(); ++i)
      for (std::size_t j = i + 1; j < rhs.size(); ++j) {
        pairs.insert({rhs[i], rhs[j]});
        if (!nullable.test(rhs[j])) break;
      }
  }
  return {pairs.begin(), pairs.end()};
}

Adjacency compute_adjacency(const Grammar& g, const Bitset& nullable, const Relation& lpd,
                            const Relation& rpd) {
  std::size_t n = g.symbol_count();
  auto below_l = invert(lpd);  // below_l[y] = {a : y in lpd[a]}
  auto below_r = invert(rpd);
  Adjacency adj{Relation(n, Bitset(n)), Relation(n, Bitset(n))};
  for (auto [left, right] : compute_primary_adjacency(g, nullable)) {
    // Any alpha left-cornering up to `right` may follow any beta
    // right-cornering up to `left`.
    for (auto alpha : below_l[right].members())
      for (auto beta : below_r[left].members()) {
        adj.la[alpha].set(beta);
        adj.ra[beta].set(alpha);
      }
  }
  return adj;
}

Boundaries compute_boundaries(const Grammar& g, const Relation& lpd, const Relation& rpd) {
  std::size_t n = g.symbol_count();
  Bitset roots(n);
  for (SymbolId r : g.roots()) roots.set(r);
  Boundaries b{Bitset(n), Bitset(n)};
  for (SymbolId a = 0; a < n; ++a) {
    if (lpd[a].intersects(roots)) b.lm.set(a);
    if (rpd[a].intersects(roots)) b.rm.set(a);
  }
  return b;
}

std::vector<std::vector<CoverageEntry>> build_coverage(const Grammar& g, const Bitset& nullable) {
  std::vector<std::vector<CoverageEntry>> coverage(g.symbol_count());
  for (const auto& p : g.productions()) {
    const auto& rhs = p.rhs;
    for (std::size_t pos = 0; pos < rhs.size(); ++pos) {
      bool left_closed = nullable_span(nullable, rhs, 0, pos);
      bool right_closed = nullable_span(nullable, rhs, pos + 1, rhs.size());
      CoverageEntry e;
      e.production = p.id;
      e.position = static_cast<std::uint32_t>(pos);
      e.klass = left_closed ? (right_closed ? CoverageClass::CC : CoverageClass::CO)
                            : (right_closed ? CoverageClass::OC : CoverageClass::OO);
      e.pre_skip_left = left_closed ? static_cast<std::uint32_t>(pos) : 0;
      e.pre_skip_right = right_closed ? static_cast<std::uint32_t>(rhs.size() - pos - 1) : 0;
      coverage[rhs[pos]].push_back(e);
    }
  }
  return coverage;
}

std::vector<WitnessStep> witness_chain(const Grammar& g, const Bitset& nullable, SymbolId symbol,
                                       SymbolId ancestor, bool right) {
  if (symbol == ancestor) return {};
  auto edges = corner_edges(g, nullable, right);
  std::size_t n = g.symbol_count();
  std::vector<bool> seen(n, false);
  std::vector<std::pair<SymbolId, WitnessStep>> via(n);  // predecessor symbol + step
  std::deque<SymbolId> queue{symbol};
  seen[symbol] = true;
  while (!queue.empty()) {
    SymbolId x = queue.front();
    queue.pop_front();
    for (auto step : edges[x]) {
      SymbolId y = g.production(step.production).lhs;
      if (seen[y]) continue;
      seen[y] = true;
      via[y] = {x, step};
      if (y == ancestor) {
        std::vector<WitnessStep> chain;
        for (SymbolId cur = y; cur != symbol; cur = via[cur].first) chain.push_back(via[cur].second);
        std::reverse(chain.begin(), chain.end());
        return chain;
      }
      queue.push_back(y);
    }
  }
  return {};
}

CompiledGrammar compile(Grammar g) {
  CompiledGrammar cg;
  cg.nullable = compute_nullable(g);
  cg.lpd = compute_lpd(g, cg.nullable);
  cg.rpd = compute_rpd(g, cg.nullable);
  auto adj = compute_adjacency(g, cg.nullable, cg.lpd, cg.rpd);
  cg.la = std::move(adj.la);
  cg.ra = std::move(adj.ra);
  auto bounds = compute_boundaries(g, cg.lpd, cg.rpd);
  cg.lm = std::move(bounds.lm);
  cg.rm = std::move(bounds.rm);
  cg.coverage = build_coverage(g, cg.nullable);
  cg.epsilon_analyses.resize(g.symbol_count());
  for (const auto& p : g.productions())
    if (cg.nullable.test(p.lhs) && nullable_span(cg.nullable, p.rhs, 0, p.rhs.size()))
      cg.epsilon_analyses[p.lhs].push_back(p.id);
  for (SymbolId s : g.unreachable_nonterminals())
    cg.warnings.push_back("nonterminal '" + g.name(s) + "' is unreachable from the roots");
  cg.grammar = std::move(g);
  return cg;
}

}  // namespace scp
