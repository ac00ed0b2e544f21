#include "scp/forest.hpp"

#include <algorithm>
#include <sstream>

namespace scp {

std::string to_string(const TreeCount& c) {
  switch (c.kind) {
    case TreeCount::Kind::finite: return std::to_string(c.value);
    case TreeCount::Kind::capped: return "capped";
    case TreeCount::Kind::infinite: return "infinite";
  }
  return "?";
}

Forest::Forest(const Chart& chart, std::vector<NodeId> roots) : chart_(&chart), roots_(std::move(roots)) {}

namespace {

struct Counter {
  const std::vector<Node>& nodes;
  std::uint64_t limit;  // cap + 1, saturating
  std::vector<bool> productive;
  std::vector<std::uint8_t> mark;  // 0 new, 1 on stack, 2 done
  std::vector<std::uint64_t> memo;
  bool cyclic = false;

  Counter(const std::vector<Node>& ns, std::uint64_t cap)
      : nodes(ns), limit(cap == UINT64_MAX ? cap : cap + 1), productive(ns.size()), mark(ns.size()),
        memo(ns.size()) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& n : nodes) {
        if (productive[n.id]) continue;
        bool ok = !n.lexical_items.empty();
        for (const auto& a : n.analyses) {
          if (ok) break;
          ok = true;
          for (NodeId c : a.children) ok = ok && productive[c];
        }
        if (ok) productive[n.id] = changed = true;
      }
    }
  }

  bool usable(const Analysis& a) const {
    for (NodeId c : a.children)
      if (!productive[c]) return false;
    return true;
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return a + b >= limit || a + b < a ? limit : a + b; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    if (a == 0 || b == 0) return 0;
    return a > limit / b ? limit : std::min(limit, a * b);
  }

  std::uint64_t count(NodeId id) {
    if (!productive[id]) return 0;
    if (mark[id] == 2) return memo[id];
    if (mark[id] == 1) {
      cyclic = true;
      return 0;
    }
    mark[id] = 1;
    const Node& n = nodes[id];
    std::uint64_t total = n.lexical_items.size();
    for (const auto& a : n.analyses) {
      if (!usable(a)) continue;
      std::uint64_t prod = 1;
      for (NodeId c : a.children) prod = mul(prod, count(c));
      total = add(total, prod);
    }
    mark[id] = 2;
    memo[id] = total;
    return total;
  }
};

}  // namespace

TreeCount Forest::count_trees(NodeId node, std::uint64_t cap) const {
  Counter c(chart_->nodes(), cap);
  auto v = c.count(node);
  if (c.cyclic) return TreeCount::infinite();
  if (v > cap) return TreeCount::capped();
  return TreeCount::finite(v);
}

TreeCount Forest::count_trees(std::uint64_t cap) const {
  Counter c(chart_->nodes(), cap);
  std::uint64_t total = 0;
  for (NodeId r : roots_) total = c.add(total, c.count(r));
  if (c.cyclic) return TreeCount::infinite();
  if (total > cap) return TreeCount::capped();
  return TreeCount::finite(total);
}

std::vector<Tree> Forest::expand(NodeId id, std::size_t limit, std::vector<bool>& on_path) const {
  std::vector<Tree> out;
  const Node& n = chart_->nodes()[id];
  for (std::size_t item : n.lexical_items) {
    if (out.size() >= limit) return out;
    Tree t;
    t.symbol = n.symbol;
    t.fbp = n.fbp;
    t.lbp = n.lbp;
    t.lexical = true;
    t.lexical_item = item;
    out.push_back(std::move(t));
  }
  on_path[id] = true;
  for (const auto& a : n.analyses) {
    if (out.size() >= limit) break;
    bool blocked = false;
    for (NodeId c : a.children) blocked = blocked || on_path[c];
    if (blocked) continue;
    std::vector<std::vector<Tree>> options;
    for (NodeId c : a.children) {
      options.push_back(expand(c, limit, on_path));
      if (options.back().empty()) break;
    }
    if (options.size() != a.children.size() || (!options.empty() && options.back().empty())) continue;
    // Odometer over the children's alternatives, last child fastest.
    std::vector<std::size_t> pick(options.size(), 0);
    bool more = true;
    while (more && out.size() < limit) {
      Tree t;
      t.symbol = n.symbol;
      t.fbp = n.fbp;
      t.lbp = n.lbp;
      t.production = a.production;
      for (std::size_t i = 0; i < options.size(); ++i) t.children.push_back(options[i][pick[i]]);
      out.push_back(std::move(t));
      more = false;
      for (std::size_t i = options.size(); i-- > 0;) {
        if (++pick[i] < options[i].size()) {
          more = true;
          break;
        }
        pick[i] = 0;
      }
    }
  }
  on_path[id] = false;
  return out;
}

std::vector<Tree> Forest::enumerate_trees(std::size_t limit) const {
  std::vector<Tree> out;
  std::vector<bool> on_path(chart_->nodes().size());
  for (NodeId r : roots_) {
    if (out.size() >= limit) break;
    auto more = expand(r, limit - out.size(), on_path);
    for (auto& t : more) out.push_back(std::move(t));
  }
  return out;
}

std::vector<bool> Forest::reachable_nodes() const {
  const auto& nodes = chart_->nodes();
  std::vector<bool> seen(nodes.size());
  std::vector<NodeId> stack(roots_.begin(), roots_.end());
  for (NodeId r : roots_) seen[r] = true;
  while (!stack.empty()) {
    NodeId id = stack.back();
    stack.pop_back();
    for (const auto& a : nodes[id].analyses)
      for (NodeId c : a.children)
        if (!seen[c]) {
          seen[c] = true;
          stack.push_back(c);
        }
  }
  return seen;
}

std::size_t Forest::useless_node_count() const {
  std::size_t n = 0;
  for (bool r : reachable_nodes()) n += !r;
  return n;
}

std::string Forest::render(const Tree& t) const {
  const auto& g = chart_->grammar();
  std::string name = g.name(t.symbol);
  if (t.lexical) {
    if (g.is_terminal(t.symbol)) return name;
    return name + "(\"" + chart_->input().items()[t.lexical_item].unit + "\")";
  }
  std::string out = name + "(";
  for (std::size_t i = 0; i < t.children.size(); ++i) out += (i ? ", " : "") + render(t.children[i]);
  return out + ")";
}

std::string Forest::dump() const {
  const auto& g = chart_->grammar();
  std::ostringstream os;
  for (NodeId r : roots_) os << "root " << r << '\n';
  for (const auto& n : chart_->nodes()) {
    os << "node " << n.id << ' ' << g.name(n.symbol) << ' ';
    if (n.is_epsilon())
      os << "[eps]";
    else
      os << '[' << n.fbp << ',' << n.lbp << ']';
    os << '\n';
    for (std::size_t item : n.lexical_items) os << "lexical " << item << '\n';
    for (const auto& a : n.analyses) {
      os << "analysis " << a.production;
      for (NodeId c : a.children) os << ' ' << c;
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace scp
