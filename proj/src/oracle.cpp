#include "scp/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <tuple>

namespace scp {

namespace {

struct Item {
  ProductionId p;
  std::uint32_t dot;
  std::size_t origin;
  auto operator<=>(const Item&) const = default;
};

using Key = std::tuple<SymbolId, std::size_t, std::size_t>;

class Earley {
 public:
  Earley(const Grammar& g, const InputLattice& in) : g_(g), in_(in) {
    for (const auto& item : in.items()) {
      auto s = g.find(item.preterminal);
      lexsym_.push_back(s);
    }
    run();
  }

  bool accepted() const {
    for (const Item& it : lists_[in_.last()])
      if (it.origin == 0 && it.dot == g_.production(it.p).rhs.size() && g_.is_root(g_.production(it.p).lhs))
        return true;
    return false;
  }

  // Constituent (X, a, b): lexical readings plus analyses split over the
  // chart's complete constituents.
  std::size_t lexical_count(const Key& k) const {
    auto it = lexical_.find(k);
    return it == lexical_.end() ? 0 : it->second.size();
  }
  const std::vector<std::size_t>& lexical_items(const Key& k) const {
    static const std::vector<std::size_t> none;
    auto it = lexical_.find(k);
    return it == lexical_.end() ? none : it->second;
  }

  std::vector<std::pair<ProductionId, std::vector<Key>>> analyses(const Key& k) const {
    std::vector<std::pair<ProductionId, std::vector<Key>>> out;
    auto [x, a, b] = k;
    for (ProductionId p : g_.productions_of(x)) {
      if (!completed_.count({p, a, b})) continue;
      const auto& rhs = g_.production(p).rhs;
      std::vector<Key> acc;
      std::function<void(std::size_t, std::size_t)> split = [&](std::size_t t, std::size_t c) {
        if (t == rhs.size()) {
          if (c == b) out.emplace_back(p, acc);
          return;
        }
        auto it = ends_.find({rhs[t], c});
        if (it == ends_.end()) return;
        for (std::size_t d : it->second) {
          if (d > b) break;
          acc.emplace_back(rhs[t], c, d);
          split(t + 1, d);
          acc.pop_back();
        }
      };
      split(0, a);
    }
    return out;
  }

  std::vector<Key> root_keys() const {
    std::vector<Key> out;
    for (SymbolId r : g_.roots())
      if (exists({r, 0, in_.last()})) out.emplace_back(r, 0, in_.last());
    return out;
  }

  bool exists(const Key& k) const {
    auto it = ends_.find({std::get<0>(k), std::get<1>(k)});
    return it != ends_.end() && it->second.count(std::get<2>(k));
  }

 private:
  void add(std::size_t k, Item it) {
    if (sets_[k].insert(it).second) {
      lists_[k].push_back(it);
      changed_ = true;
    }
  }

  void run() {
    std::size_t n = in_.last();
    sets_.resize(n + 1);
    lists_.resize(n + 1);
    for (SymbolId r : g_.roots())
      for (ProductionId p : g_.productions_of(r)) add(0, {p, 0, 0});
    for (std::size_t k = 0; k <= n; ++k) {
      do {
        changed_ = false;
        for (std::size_t i = 0; i < lists_[k].size(); ++i) {
          Item it = lists_[k][i];
          const auto& prod = g_.production(it.p);
          if (it.dot == prod.rhs.size()) {
            std::vector<Item> waiting(lists_[it.origin].begin(), lists_[it.origin].end());
            for (const Item& w : waiting) {
              const auto& wp = g_.production(w.p);
              if (w.dot < wp.rhs.size() && wp.rhs[w.dot] == prod.lhs) add(k, {w.p, w.dot + 1, w.origin});
            }
          } else {
            SymbolId x = prod.rhs[it.dot];
            for (ProductionId q : g_.productions_of(x)) add(k, {q, 0, k});
          }
        }
      } while (changed_);
      for (std::size_t i = 0; i < lists_[k].size(); ++i) {
        Item it = lists_[k][i];
        const auto& prod = g_.production(it.p);
        if (it.dot == prod.rhs.size()) continue;
        for (std::size_t li = 0; li < in_.items().size(); ++li) {
          const auto& item = in_.items()[li];
          if (item.fbp == k && lexsym_[li] == static_cast<std::int64_t>(prod.rhs[it.dot]))
            add(item.lbp, {it.p, it.dot + 1, it.origin});
        }
      }
    }
    for (std::size_t k = 0; k <= n; ++k)
      for (const Item& it : lists_[k]) {
        const auto& prod = g_.production(it.p);
        if (it.dot != prod.rhs.size()) continue;
        completed_.insert({it.p, it.origin, k});
        ends_[{prod.lhs, it.origin}].insert(k);
      }
    for (std::size_t li = 0; li < in_.items().size(); ++li) {
      if (lexsym_[li] < 0) continue;
      auto s = static_cast<SymbolId>(lexsym_[li]);
      const auto& item = in_.items()[li];
      lexical_[{s, item.fbp, item.lbp}].push_back(li);
      ends_[{s, item.fbp}].insert(item.lbp);
    }
  }

  const Grammar& g_;
  const InputLattice& in_;
  std::vector<std::int64_t> lexsym_;
  std::vector<std::set<Item>> sets_;
  std::vector<std::vector<Item>> lists_;
  bool changed_ = false;
  std::set<std::tuple<ProductionId, std::size_t, std::size_t>> completed_;
  std::map<std::pair<SymbolId, std::size_t>, std::set<std::size_t>> ends_;
  std::map<Key, std::vector<std::size_t>> lexical_;
};

}  // namespace

bool earley_recognize(const Grammar& g, const InputLattice& input) { return Earley(g, input).accepted(); }

TreeCount earley_count_trees(const Grammar& g, const InputLattice& input, std::uint64_t cap) {
  Earley chart(g, input);
  std::uint64_t limit = cap == UINT64_MAX ? cap : cap + 1;
  auto add = [&](std::uint64_t a, std::uint64_t b) { return a + b >= limit || a + b < a ? limit : a + b; };
  auto mul = [&](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
    if (a == 0 || b == 0) return 0;
    return a > limit / b ? limit : std::min(limit, a * b);
  };
  std::map<Key, std::uint64_t> memo;
  std::set<Key> on_stack;
  bool cyclic = false;
  std::function<std::uint64_t(const Key&)> count = [&](const Key& k) -> std::uint64_t {
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    if (on_stack.count(k)) {
      cyclic = true;
      return 0;
    }
    on_stack.insert(k);
    std::uint64_t total = chart.lexical_count(k);
    for (const auto& [p, children] : chart.analyses(k)) {
      std::uint64_t prod = 1;
      for (const Key& c : children) prod = mul(prod, count(c));
      total = add(total, prod);
    }
    on_stack.erase(k);
    memo[k] = total;
    return total;
  };
  std::uint64_t total = 0;
  for (const Key& r : chart.root_keys()) total = add(total, count(r));
  if (cyclic) return TreeCount::infinite();
  if (total > cap) return TreeCount::capped();
  return TreeCount::finite(total);
}

std::vector<Tree> earley_enumerate_trees(const Grammar& g, const InputLattice& input, std::size_t limit) {
  Earley chart(g, input);
  std::set<Key> on_path;
  std::function<std::vector<Tree>(const Key&, std::size_t)> expand = [&](const Key& k, std::size_t lim) {
    std::vector<Tree> out;
    auto [x, a, b] = k;
    for (std::size_t li : chart.lexical_items(k)) {
      if (out.size() >= lim) return out;
      Tree t;
      t.symbol = x;
      t.fbp = a;
      t.lbp = b;
      t.lexical = true;
      t.lexical_item = li;
      out.push_back(t);
    }
    on_path.insert(k);
    for (const auto& [p, children] : chart.analyses(k)) {
      if (out.size() >= lim) break;
      if (std::any_of(children.begin(), children.end(), [&](const Key& c) { return on_path.count(c) > 0; }))
        continue;
      // Partial trees extended one child at a time.
      std::vector<std::vector<Tree>> partial{{}};
      for (const Key& c : children) {
        auto alts = expand(c, lim);
        std::vector<std::vector<Tree>> next;
        for (const auto& pre : partial)
          for (const auto& alt : alts) {
            if (next.size() >= lim) break;
            next.push_back(pre);
            next.back().push_back(alt);
          }
        partial = std::move(next);
      }
      for (auto& kids : partial) {
        if (out.size() >= lim) break;
        Tree t;
        t.symbol = x;
        // Zero-width constituents carry no position, as in the forest.
        t.fbp = a == b ? kNoPosition : a;
        t.lbp = a == b ? kNoPosition : b;
        t.production = p;
        t.children = std::move(kids);
        out.push_back(std::move(t));
      }
    }
    on_path.erase(k);
    return out;
  };
  std::vector<Tree> out;
  for (const Key& r : chart.root_keys()) {
    if (out.size() >= limit) break;
    for (auto& t : expand(r, limit - out.size())) out.push_back(std::move(t));
  }
  return out;
}

bool derivation_search(const Grammar& g, const InputLattice& input, int max_depth) {
  std::vector<std::int64_t> lexsym;
  for (const auto& item : input.items()) lexsym.push_back(g.find(item.preterminal));
  std::map<std::tuple<SymbolId, std::size_t, std::size_t, int>, bool> memo;
  std::function<bool(SymbolId, std::size_t, std::size_t, int)> derives;
  std::function<bool(const std::vector<SymbolId>&, std::size_t, std::size_t, std::size_t, int)> seq;
  derives = [&](SymbolId x, std::size_t i, std::size_t j, int depth) -> bool {
    for (std::size_t li = 0; li < input.items().size(); ++li)
      if (lexsym[li] == static_cast<std::int64_t>(x) && input.items()[li].fbp == i && input.items()[li].lbp == j)
        return true;
    if (depth == 0) return false;
    auto key = std::make_tuple(x, i, j, depth);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = false;
    for (ProductionId p : g.productions_of(x)) {
      if (seq(g.production(p).rhs, 0, i, j, depth - 1)) {
        ok = true;
        break;
      }
    }
    memo[key] = ok;
    return ok;
  };
  seq = [&](const std::vector<SymbolId>& rhs, std::size_t t, std::size_t c, std::size_t j, int depth) -> bool {
    if (t == rhs.size()) return c == j;
    for (std::size_t d = c; d <= j; ++d)
      if (derives(rhs[t], c, d, depth) && seq(rhs, t + 1, d, j, depth)) return true;
    return false;
  };
  for (SymbolId r : g.roots())
    if (derives(r, 0, input.last(), max_depth)) return true;
  return false;
}

RandomCase random_case(std::uint64_t seed, const RandomLimits& limits) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto chance = [&](double p) { return std::bernoulli_distribution(p)(rng); };

  int nn = uniform(1, limits.max_nonterminals);
  int nt = uniform(1, limits.max_terminals);
  std::vector<std::string> names;
  for (int i = 0; i < nn; ++i) names.push_back("N" + std::to_string(i));
  for (int i = 0; i < nt; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  auto term = [&](int i) { return static_cast<SymbolId>(nn + i); };

  int np = uniform(nn, std::max(nn, limits.max_productions));
  std::vector<std::pair<SymbolId, std::vector<SymbolId>>> prods;
  for (int i = 0; i < np; ++i) {
    auto lhs = static_cast<SymbolId>(i < nn ? i : uniform(0, nn - 1));
    std::vector<SymbolId> rhs;
    if (!chance(limits.epsilon_probability)) {
      int len = uniform(1, limits.max_rhs);
      for (int k = 0; k < len; ++k)
        rhs.push_back(chance(0.5) ? term(uniform(0, nt - 1)) : static_cast<SymbolId>(uniform(0, nn - 1)));
    }
    prods.emplace_back(lhs, std::move(rhs));
  }
  Grammar g(names, prods, {0});

  // Half of the inputs come from a random derivation, the rest are noise.
  std::vector<SymbolId> words;
  bool sampled = false;
  if (chance(0.5)) {
    std::vector<SymbolId> form{0};
    for (int steps = 0; steps < 60; ++steps) {
      auto it = std::find_if(form.begin(), form.end(), [&](SymbolId s) { return !g.is_terminal(s); });
      if (it == form.end()) {
        sampled = static_cast<int>(form.size()) <= limits.max_input;
        break;
      }
      const auto& options = g.productions_of(*it);
      const auto& rhs = g.production(options[uniform(0, static_cast<int>(options.size()) - 1)]).rhs;
      auto pos = it - form.begin();
      form.erase(it);
      form.insert(form.begin() + pos, rhs.begin(), rhs.end());
      if (static_cast<int>(form.size()) > 3 * limits.max_input) break;
    }
    if (sampled) words = form;
  }
  if (!sampled) {
    int len = uniform(0, limits.max_input);
    for (int i = 0; i < len; ++i) words.push_back(term(uniform(0, nt - 1)));
  }

  std::vector<LexicalItem> items;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::set<SymbolId> cats{words[i]};
    int fan = uniform(1, limits.max_fanout);
    while (static_cast<int>(cats.size()) < std::min(fan, nt)) cats.insert(term(uniform(0, nt - 1)));
    for (SymbolId c : cats) items.push_back({g.name(words[i]), g.name(c), i, i + 1});
    if (i + 2 <= words.size() && static_cast<int>(cats.size()) < limits.max_fanout && chance(0.1))
      items.push_back({g.name(words[i]), g.name(term(uniform(0, nt - 1))), i, i + 2});
  }
  return {std::move(g), InputLattice(words.size() + 1, std::move(items))};
}

}  // namespace scp
