#include "scp/engine.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace scp {

namespace {

template <typename T>
void erase_value(std::vector<T>& v, T value) {
  auto it = std::find(v.begin(), v.end(), value);
  if (it != v.end()) v.erase(it);
}

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const char* side_name(Side s) { return s == Side::Left ? "L" : "R"; }

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Run: return "RUN";
    case Status::Derivation: return "DERIVATION";
    case Status::Epsilon: return "EPSILON";
    case Status::Delete: return "DELETE";
  }
  return "?";
}

const char* to_string(LinkKind k) {
  switch (k) {
    case LinkKind::Derivation: return "derivation";
    case LinkKind::Adjacency: return "adjacency";
    case LinkKind::Fusion: return "fusion";
    case LinkKind::Boundary: return "boundary";
  }
  return "?";
}

std::string format_stats(const Stats& s, bool json) {
  std::pair<const char*, std::uint64_t> rows[] = {
      {"events_created", s.events_created},
      {"events_deleted", s.events_deleted},
      {"events_run", s.events_run},
      {"duplicate_events", s.duplicate_events},
      {"epsilon_expansions", s.epsilon_expansions},
      {"fusions", s.fusions},
      {"fusion_new", s.fusion_new},
      {"fusion_mutate_right", s.fusion_mutate_right},
      {"fusion_mutate_left", s.fusion_mutate_left},
      {"fusion_absorb", s.fusion_absorb},
      {"fusion_links", s.fusion_links},
      {"stale_fusions", s.stale_fusions},
      {"links", s.links},
      {"nodes", s.nodes},
      {"epsilon_nodes", s.epsilon_nodes},
      {"packed_analyses", s.packed_analyses},
      {"stale_pops", s.stale_pops},
      {"steps", s.steps},
      {"shadow_checks", s.shadow_checks},
      {"shadow_mismatches", s.shadow_mismatches},
  };
  if (json) {
    nlohmann::ordered_json j;
    for (auto [k, v] : rows) j[k] = v;
    return j.dump() + "\n";
  }
  std::ostringstream os;
  for (auto [k, v] : rows) os << k << '=' << v << '\n';
  return os.str();
}

Status status_by_tables(bool left_closed, bool right_closed, bool left_links, bool right_links,
                        bool left_nullable, bool right_nullable) {
  Status nstatus;
  if (left_closed && right_closed) {
    if (!left_links || !right_links)
      nstatus = Status::Delete;
    else
      nstatus = Status::Run;
  } else if (left_closed) {
    if (!left_links)
      nstatus = Status::Delete;
    else if (right_links)
      nstatus = Status::Derivation;
    else if (right_nullable)
      nstatus = Status::Epsilon;
    else
      nstatus = Status::Delete;
  } else if (right_closed) {
    if (!right_links)
      nstatus = Status::Delete;
    else if (left_links)
      nstatus = Status::Derivation;
    else if (left_nullable)
      nstatus = Status::Epsilon;
    else
      nstatus = Status::Delete;
  } else {
    if (left_links && right_links)
      nstatus = Status::Derivation;
    else if (left_links && right_nullable)
      nstatus = Status::Epsilon;
    else if (right_links && left_nullable)
      nstatus = Status::Epsilon;
    else
      nstatus = Status::Delete;
  }
  return nstatus;
}

Parser::Parser(const CompiledGrammar& compiled) : compiled_(&compiled) {
  const auto& g = compiled.grammar;
  std::size_t n = g.symbol_count();
  for (const auto& p : g.productions()) {
    const auto& rhs = p.rhs;
    auto size = rhs.size();
    std::vector<Bitset> rf(size + 1, Bitset(n)), rp(size + 1, Bitset(n));
    std::vector<Bitset> lf(size + 1, Bitset(n)), lp(size + 1, Bitset(n));
    for (std::size_t dot = 0; dot <= size; ++dot) {
      for (std::size_t j = dot; j < size; ++j) {
        rf[dot].set(rhs[j]);
        if (!compiled.is_nullable(rhs[j])) break;
      }
      for (std::size_t i = dot; i-- > 0;) {
        lf[dot].set(rhs[i]);
        if (!compiled.is_nullable(rhs[i])) break;
      }
      for (SymbolId gamma = 0; gamma < n; ++gamma) {
        if (compiled.lpd[gamma].intersects(rf[dot])) rp[dot].set(gamma);
        if (compiled.rpd[gamma].intersects(lf[dot])) lp[dot].set(gamma);
      }
    }
    right_fill_.push_back(std::move(rf));
    right_prod_.push_back(std::move(rp));
    left_fill_.push_back(std::move(lf));
    left_prod_.push_back(std::move(lp));
  }
}

std::size_t Chart::EventKeyHash::operator()(const EventKey& k) const {
  std::size_t h = k.production;
  h = mix(h, k.leftdot);
  h = mix(h, k.rightdot);
  h = mix(h, k.left);
  h = mix(h, k.right);
  for (auto c : k.children) h = mix(h, c);
  return h;
}

std::size_t Chart::NodeKeyHash::operator()(const std::tuple<SymbolId, std::size_t, std::size_t>& k) const {
  return mix(mix(std::get<0>(k), std::get<1>(k)), std::get<2>(k));
}

Chart::Chart(const Parser& parser, const InputLattice& input, ParseOptions options)
    : parser_(&parser), input_(&input), options_(options) {
  const auto& g = grammar();
  cads_.resize(input.breaking_points());
  for (std::size_t k = 0; k < cads_.size(); ++k) cads_[k].index = k;
  epsilon_nodes_.resize(g.symbol_count());

  std::vector<SymbolId> bound;
  for (const auto& item : input.items()) {
    auto sym = g.find(item.preterminal);
    if (sym < 0)
      throw ParseError("preterminal '" + item.preterminal + "' of item '" + item.unit +
                       "' is not a grammar symbol");
    bound.push_back(static_cast<SymbolId>(sym));
  }
  for (std::size_t i = 0; i < bound.size(); ++i) {
    const auto& item = input.items()[i];
    auto [id, fresh] = add_node(bound[i], item.fbp, item.lbp, std::nullopt);
    if (fresh) nodes_[id].origin = NodeOrigin::lexical;
    nodes_[id].lexical_items.push_back(i);
  }
  settle();
}

void Chart::trace_line(const char* verb, const std::string& rest) const {
  if (!options_.trace) return;
  auto& os = *options_.trace;
  if (options_.trace_color)
    os << "\x1b[1m" << verb << "\x1b[0m " << rest << '\n';
  else
    os << verb << ' ' << rest << '\n';
}

std::string Chart::render(const Event& e) const {
  const auto& p = production_of(e);
  std::string out = grammar().name(p.lhs) + " ->";
  for (std::size_t i = 0; i < p.rhs.size(); ++i) {
    if (i == e.leftdot || i == e.rightdot) out += " .";
    out += " " + grammar().name(p.rhs[i]);
  }
  if (e.rightdot == p.rhs.size()) out += " .";
  out += " @ [" + std::to_string(e.left) + "," + std::to_string(e.right) + "]";
  return out;
}

std::optional<NodeId> Chart::find_node(SymbolId symbol, std::size_t fbp, std::size_t lbp) const {
  auto it = node_index_.find({symbol, fbp, lbp});
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<EventId> Chart::live_events() const {
  std::vector<EventId> out;
  for (const auto& e : events_)
    if (e.live()) out.push_back(e.id);
  return out;
}

Status Chart::compute_status(const Event& e) const {
  bool lc = e.left_closed(), rc = e.right_closed();
  bool hl = !e.left_links.empty(), hr = !e.right_links.empty();
  if (lc && rc) return hl && hr ? Status::Run : Status::Delete;
  if (hl && hr) return Status::Derivation;
  const auto& rhs = production_of(e).rhs;
  bool right_eps = !rc && parser_->compiled().is_nullable(rhs[e.rightdot]);
  bool left_eps = !lc && parser_->compiled().is_nullable(rhs[e.leftdot - 1]);
  // One side is unsupported. An open unsupported side survives only as an
  // epsilon expansion, and only when the other side holds.
  if (hl && right_eps) return Status::Epsilon;
  if (hr && left_eps) return Status::Epsilon;
  return Status::Delete;
}

void Chart::update_status(EventId id) {
  Event& e = events_[id];
  if (!e.live()) return;
  Status s = compute_status(e);
  if (options_.shadow_status) {
    const auto& rhs = production_of(e).rhs;
    bool ln = !e.left_closed() && parser_->compiled().is_nullable(rhs[e.leftdot - 1]);
    bool rn = !e.right_closed() && parser_->compiled().is_nullable(rhs[e.rightdot]);
    ++stats_.shadow_checks;
    if (s != status_by_tables(e.left_closed(), e.right_closed(), !e.left_links.empty(),
                              !e.right_links.empty(), ln, rn))
      ++stats_.shadow_mismatches;
  }
  if (s == e.status && !fresh_[id]) return;
  if (options_.trace)
    trace_line("status", "e" + std::to_string(id) + " " + (fresh_[id] ? "NEW" : to_string(e.status)) +
                             " -> " + to_string(s));
  fresh_[id] = false;
  e.status = s;
  switch (s) {
    case Status::Epsilon: epsilon_queue_.push_back(id); break;
    case Status::Delete: delete_queue_.push_back(id); break;
    case Status::Run: run_queue_.push_back(id); break;
    case Status::Derivation: break;
  }
}

void Chart::touch(EventId id) {
  if (touched_flag_[id]) return;
  touched_flag_[id] = true;
  touched_.push_back(id);
}

void Chart::settle() {
  while (!touched_.empty()) {
    EventId id = touched_.front();
    touched_.pop_front();
    touched_flag_[id] = false;
    update_status(id);
  }
}

void Chart::register_extreme(EventId id, Side side) {
  const Event& e = events_[id];
  if (side == Side::Left) {
    auto& cad = cads_[e.left];
    (e.left_closed() ? cad.closed_left : cad.open_left).push_back(id);
  } else {
    auto& cad = cads_[e.right];
    (e.right_closed() ? cad.closed_right : cad.open_right).push_back(id);
  }
}

void Chart::unregister_extreme(EventId id, Side side) {
  const Event& e = events_[id];
  if (side == Side::Left) {
    auto& cad = cads_[e.left];
    erase_value(e.left_closed() ? cad.closed_left : cad.open_left, id);
  } else {
    auto& cad = cads_[e.right];
    erase_value(e.right_closed() ? cad.closed_right : cad.open_right, id);
  }
}

LinkId Chart::make_link(LinkKind kind, EventId event, Side side, Link::Target target, EventId other_event,
                        Side other_side, NodeId node, std::size_t cad) {
  auto id = static_cast<LinkId>(links_.size());
  links_.push_back({kind, event, side, target, other_event, other_side, node, cad, true});
  auto& mine = side == Side::Left ? events_[event].left_links : events_[event].right_links;
  mine.push_back(id);
  touch(event);
  if (target == Link::Target::Event) {
    auto& theirs = other_side == Side::Left ? events_[other_event].left_links : events_[other_event].right_links;
    theirs.push_back(id);
    touch(other_event);
  }
  ++stats_.links;
  if (kind == LinkKind::Fusion) {
    ++stats_.fusion_links;
    fusion_agenda_.push_back(id);
  }
  if (options_.trace) {
    std::string to = target == Link::Target::Event
                         ? "e" + std::to_string(other_event) + "." + side_name(other_side)
                         : target == Link::Target::Node ? "n" + std::to_string(node) : "boundary";
    trace_line("link", "l" + std::to_string(id) + " " + to_string(kind) + " e" + std::to_string(event) +
                           "." + side_name(side) + " -> " + to + " @ " + std::to_string(cad));
  }
  return id;
}

void Chart::drop_links(EventId id, Side side, bool propagate) {
  auto& list = side == Side::Left ? events_[id].left_links : events_[id].right_links;
  auto dropped = std::move(list);
  list.clear();
  for (LinkId lid : dropped) {
    Link& l = links_[lid];
    if (!l.alive) continue;
    l.alive = false;
    if (l.target != Link::Target::Event) continue;
    bool mine_is_consumer = l.event == id && l.side == side;
    EventId other = mine_is_consumer ? l.other_event : l.event;
    Side other_side = mine_is_consumer ? l.other_side : l.side;
    auto& theirs = other_side == Side::Left ? events_[other].left_links : events_[other].right_links;
    erase_value(theirs, lid);
    if (propagate) touch(other);
  }
}

bool Chart::fusable(const Event& e1, const Event& e2) const {
  if (e1.production != e2.production || e1.right != e2.left) return false;
  if (e1.right_closed() || e2.left_closed() || e1.rightdot > e2.leftdot) return false;
  return nullable_span(parser_->compiled().nullable, production_of(e1).rhs, e1.rightdot, e2.leftdot);
}

NodeId Chart::epsilon_node(SymbolId symbol) {
  if (epsilon_nodes_[symbol]) return *epsilon_nodes_[symbol];
  if (!parser_->compiled().is_nullable(symbol))
    throw std::logic_error("epsilon node requested for non-nullable " + grammar().name(symbol));
  auto id = static_cast<NodeId>(nodes_.size());
  Node n;
  n.id = id;
  n.symbol = symbol;
  n.origin = NodeOrigin::epsilon;
  nodes_.push_back(std::move(n));
  epsilon_nodes_[symbol] = id;
  ++stats_.epsilon_nodes;
  std::vector<Analysis> analyses;
  for (ProductionId p : parser_->compiled().epsilon_analyses[symbol]) {
    Analysis a{p, {}};
    for (SymbolId s : grammar().production(p).rhs) a.children.push_back(epsilon_node(s));
    analyses.push_back(std::move(a));
  }
  nodes_[id].analyses = std::move(analyses);
  trace_line("node", "n" + std::to_string(id) + " " + grammar().name(symbol) + " [eps]");
  return id;
}

std::vector<NodeId> Chart::gap_children(ProductionId p, std::uint32_t from, std::uint32_t to) {
  std::vector<NodeId> out;
  const auto& rhs = grammar().production(p).rhs;
  for (std::uint32_t i = from; i < to; ++i) out.push_back(epsilon_node(rhs[i]));
  return out;
}

std::pair<NodeId, bool> Chart::add_node(SymbolId symbol, std::size_t fbp, std::size_t lbp,
                                        std::optional<Analysis> analysis) {
  auto key = std::make_tuple(symbol, fbp, lbp);
  if (auto it = node_index_.find(key); it != node_index_.end()) {
    Node& n = nodes_[it->second];
    if (analysis && std::find(n.analyses.begin(), n.analyses.end(), *analysis) == n.analyses.end()) {
      if (options_.check_invariants) check_analysis(n, *analysis);
      n.analyses.push_back(std::move(*analysis));
      ++stats_.packed_analyses;
      trace_line("pack", "n" + std::to_string(n.id) + " " + grammar().name(symbol) + " [" +
                             std::to_string(fbp) + "," + std::to_string(lbp) + "]");
    }
    return {n.id, false};
  }
  auto id = static_cast<NodeId>(nodes_.size());
  Node n;
  n.id = id;
  n.symbol = symbol;
  n.fbp = fbp;
  n.lbp = lbp;
  if (analysis) {
    if (options_.check_invariants) check_analysis(n, *analysis);
    n.analyses.push_back(std::move(*analysis));
  }
  nodes_.push_back(std::move(n));
  node_index_.emplace(key, id);
  ++stats_.nodes;
  cads_[fbp].ndri.push_back(id);
  cads_[lbp].ndle.push_back(id);
  trace_line("node", "n" + std::to_string(id) + " " + grammar().name(symbol) + " [" + std::to_string(fbp) +
                         "," + std::to_string(lbp) + "]");
  create_events(id);
  analyze_node(id);
  return {id, true};
}

void Chart::create_events(NodeId nid) {
  SymbolId sym = nodes_[nid].symbol;
  std::size_t left = nodes_[nid].fbp, right = nodes_[nid].lbp;
  for (const CoverageEntry& entry : parser_->compiled().coverage[sym]) {
    const auto& rhs = grammar().production(entry.production).rhs;
    auto q = static_cast<std::uint32_t>(entry.position);
    auto n = static_cast<std::uint32_t>(rhs.size());
    std::vector<std::uint32_t> lefts{q}, rights{q + 1};
    if (entry.pre_skip_left > 0) lefts.insert(lefts.begin(), 0);
    if (entry.pre_skip_right > 0) rights.insert(rights.begin(), n);
    for (auto l : lefts) {
      for (auto r : rights) {
        auto children = gap_children(entry.production, l, q);
        children.push_back(nid);
        auto tail = gap_children(entry.production, q + 1, r);
        children.insert(children.end(), tail.begin(), tail.end());
        create_event(entry.production, l, r, left, right, std::move(children));
      }
    }
  }
}

std::optional<EventId> Chart::create_event(ProductionId p, std::uint32_t leftdot, std::uint32_t rightdot,
                                           std::size_t left, std::size_t right, std::vector<NodeId> children) {
  EventKey key{p, leftdot, rightdot, left, right, children};
  if (!seen_events_.insert(key).second) {
    ++stats_.duplicate_events;
    return std::nullopt;
  }
  auto id = static_cast<EventId>(events_.size());
  Event e;
  e.id = id;
  e.production = p;
  e.leftdot = leftdot;
  e.rightdot = rightdot;
  e.rhs_size = static_cast<std::uint32_t>(grammar().production(p).rhs.size());
  e.left = left;
  e.right = right;
  e.children = std::move(children);
  events_.push_back(std::move(e));
  touched_flag_.push_back(false);
  fresh_.push_back(true);
  ++stats_.events_created;
  if (options_.check_invariants) check_event(events_[id]);
  trace_line("create", "e" + std::to_string(id) + " " + render(events_[id]));
  register_extreme(id, Side::Left);
  register_extreme(id, Side::Right);
  analyze_extreme(id, Side::Left);
  analyze_extreme(id, Side::Right);
  touch(id);
  return id;
}

void Chart::analyze_extreme(EventId id, Side side) {
  const auto& cg = parser_->compiled();
  const Event& e = events_[id];
  SymbolId lhs = lhs_of(e);
  if (side == Side::Right) {
    std::size_t k = e.right;
    const CaD& cad = cads_[k];
    if (!e.right_closed()) {
      const Bitset& producers = parser_->right_producers(e.production, e.rightdot);
      const Bitset& fill = parser_->right_fill(e.production, e.rightdot);
      for (EventId d : cad.closed_left)
        if (d != id && producers.test(lhs_of(events_[d])))
          make_link(LinkKind::Derivation, id, Side::Right, Link::Target::Event, d, Side::Left, 0, k);
      for (NodeId n : cad.ndri)
        if (fill.test(nodes_[n].symbol))
          make_link(LinkKind::Derivation, id, Side::Right, Link::Target::Node, 0, Side::Left, n, k);
      for (EventId f : cad.open_left)
        if (f != id && fusable(e, events_[f]))
          make_link(LinkKind::Fusion, id, Side::Right, Link::Target::Event, f, Side::Left, 0, k);
    } else {
      if (k == last()) {
        if (cg.rm.test(lhs))
          make_link(LinkKind::Boundary, id, Side::Right, Link::Target::Boundary, 0, Side::Left, 0, k);
      } else {
        for (EventId d : cad.closed_left)
          if (cg.ra[lhs].test(lhs_of(events_[d])))
            make_link(LinkKind::Adjacency, id, Side::Right, Link::Target::Event, d, Side::Left, 0, k);
        for (NodeId n : cad.ndri)
          if (cg.ra[lhs].test(nodes_[n].symbol))
            make_link(LinkKind::Adjacency, id, Side::Right, Link::Target::Node, 0, Side::Left, n, k);
      }
      for (EventId c : cad.open_left) {
        const Event& ce = events_[c];
        if (c != id && parser_->left_producers(ce.production, ce.leftdot).test(lhs))
          make_link(LinkKind::Derivation, c, Side::Left, Link::Target::Event, id, Side::Right, 0, k);
      }
    }
  } else {
    std::size_t k = e.left;
    const CaD& cad = cads_[k];
    if (!e.left_closed()) {
      const Bitset& producers = parser_->left_producers(e.production, e.leftdot);
      const Bitset& fill = parser_->left_fill(e.production, e.leftdot);
      for (EventId d : cad.closed_right)
        if (d != id && producers.test(lhs_of(events_[d])))
          make_link(LinkKind::Derivation, id, Side::Left, Link::Target::Event, d, Side::Right, 0, k);
      for (NodeId n : cad.ndle)
        if (fill.test(nodes_[n].symbol))
          make_link(LinkKind::Derivation, id, Side::Left, Link::Target::Node, 0, Side::Right, n, k);
      for (EventId f : cad.open_right)
        if (f != id && fusable(events_[f], e))
          make_link(LinkKind::Fusion, f, Side::Right, Link::Target::Event, id, Side::Left, 0, k);
    } else {
      if (k == 0) {
        if (cg.lm.test(lhs))
          make_link(LinkKind::Boundary, id, Side::Left, Link::Target::Boundary, 0, Side::Right, 0, k);
      } else {
        for (EventId d : cad.closed_right)
          if (cg.la[lhs].test(lhs_of(events_[d])))
            make_link(LinkKind::Adjacency, id, Side::Left, Link::Target::Event, d, Side::Right, 0, k);
        for (NodeId n : cad.ndle)
          if (cg.la[lhs].test(nodes_[n].symbol))
            make_link(LinkKind::Adjacency, id, Side::Left, Link::Target::Node, 0, Side::Right, n, k);
      }
      for (EventId c : cad.open_right) {
        const Event& ce = events_[c];
        if (c != id && parser_->right_producers(ce.production, ce.rightdot).test(lhs))
          make_link(LinkKind::Derivation, c, Side::Right, Link::Target::Event, id, Side::Left, 0, k);
      }
    }
  }
}

void Chart::analyze_node(NodeId nid) {
  const auto& cg = parser_->compiled();
  SymbolId sym = nodes_[nid].symbol;
  std::size_t l = nodes_[nid].fbp, r = nodes_[nid].lbp;
  for (EventId c : cads_[l].open_right) {
    const Event& e = events_[c];
    if (parser_->right_fill(e.production, e.rightdot).test(sym))
      make_link(LinkKind::Derivation, c, Side::Right, Link::Target::Node, 0, Side::Left, nid, l);
  }
  for (EventId c : cads_[l].closed_right)
    if (cg.ra[lhs_of(events_[c])].test(sym))
      make_link(LinkKind::Adjacency, c, Side::Right, Link::Target::Node, 0, Side::Left, nid, l);
  for (EventId c : cads_[r].open_left) {
    const Event& e = events_[c];
    if (parser_->left_fill(e.production, e.leftdot).test(sym))
      make_link(LinkKind::Derivation, c, Side::Left, Link::Target::Node, 0, Side::Right, nid, r);
  }
  for (EventId c : cads_[r].closed_left)
    if (cg.la[lhs_of(events_[c])].test(sym))
      make_link(LinkKind::Adjacency, c, Side::Left, Link::Target::Node, 0, Side::Right, nid, r);
}

void Chart::retire(EventId id, EventState state, bool propagate) {
  unregister_extreme(id, Side::Left);
  unregister_extreme(id, Side::Right);
  events_[id].state = state;
  drop_links(id, Side::Left, propagate);
  drop_links(id, Side::Right, propagate);
}

void Chart::delete_event(EventId id) {
  if (!events_[id].live()) return;
  trace_line("delete", "e" + std::to_string(id) + " " + render(events_[id]));
  ++stats_.events_deleted;
  retire(id, EventState::Deleted, true);
}

NodeId Chart::run_event(EventId id) {
  const Event& e = events_[id];
  trace_line("run", "e" + std::to_string(id) + " " + render(e));
  ++stats_.events_run;
  Analysis a{e.production, e.children};
  SymbolId lhs = lhs_of(e);
  std::size_t l = e.left, r = e.right;
  // The node goes in first so that events relying on this one can be linked
  // to it before this event disappears.
  auto [nid, fresh] = add_node(lhs, l, r, std::move(a));
  (void)fresh;
  retire(id, EventState::Retired, false);
  return nid;
}

bool Chart::move_extreme(EventId id, Side side, std::uint32_t dot, std::size_t cad,
                         std::vector<NodeId> children) {
  const Event& e = events_[id];
  EventKey key{e.production,
               side == Side::Left ? dot : e.leftdot,
               side == Side::Right ? dot : e.rightdot,
               side == Side::Left ? cad : e.left,
               side == Side::Right ? cad : e.right,
               children};
  if (!seen_events_.insert(key).second) {
    ++stats_.duplicate_events;
    delete_event(id);
    return false;
  }
  unregister_extreme(id, side);
  drop_links(id, side, true);
  Event& m = events_[id];
  if (side == Side::Left) {
    m.leftdot = dot;
    m.left = cad;
  } else {
    m.rightdot = dot;
    m.right = cad;
  }
  m.children = std::move(children);
  if (options_.check_invariants) check_event(m);
  trace_line("move", "e" + std::to_string(id) + " " + render(m));
  register_extreme(id, side);
  analyze_extreme(id, side);
  touch(id);
  return true;
}

void Chart::epsilon_expand(EventId id) {
  const Event& e = events_[id];
  const auto& rhs = production_of(e).rhs;
  bool right = !e.right_closed() && !e.left_links.empty() && e.right_links.empty() &&
               parser_->compiled().is_nullable(rhs[e.rightdot]);
  ++stats_.epsilon_expansions;
  trace_line("expand", "e" + std::to_string(id) + (right ? " right" : " left"));
  if (right) {
    auto children = e.children;
    children.push_back(epsilon_node(rhs[e.rightdot]));
    move_extreme(id, Side::Right, e.rightdot + 1, e.right, std::move(children));
  } else {
    std::vector<NodeId> children{epsilon_node(rhs[e.leftdot - 1])};
    children.insert(children.end(), e.children.begin(), e.children.end());
    move_extreme(id, Side::Left, e.leftdot - 1, e.left, std::move(children));
  }
}

void Chart::fuse(LinkId lid) {
  Link l = links_[lid];
  if (!l.alive || !events_[l.event].live() || !events_[l.other_event].live() ||
      !fusable(events_[l.event], events_[l.other_event])) {
    ++stats_.stale_fusions;
    return;
  }
  EventId i1 = l.event, i2 = l.other_event;
  links_[lid].alive = false;
  erase_value(events_[i1].right_links, lid);
  erase_value(events_[i2].left_links, lid);
  touch(i1);
  touch(i2);

  const Event& e1 = events_[i1];
  const Event& e2 = events_[i2];
  // Links to the partner's boundary child are the same evidence as the
  // fusion link itself and do not count as other support.
  auto boundary_child = [&](const Event& e, bool last) -> NodeId {
    std::vector<NodeId> solid;
    for (NodeId c : e.children)
      if (!nodes_[c].is_epsilon()) solid.push_back(c);
    return last ? solid.back() : solid.front();
  };
  auto other_support = [&](const std::vector<LinkId>& ls, NodeId partner_child) {
    return std::any_of(ls.begin(), ls.end(), [&](LinkId x) {
      return !(links_[x].target == Link::Target::Node && links_[x].node == partner_child);
    });
  };
  bool r1 = other_support(e1.right_links, boundary_child(e2, false));
  bool l2 = other_support(e2.left_links, boundary_child(e1, true));
  std::vector<NodeId> children = e1.children;
  auto gap = gap_children(e1.production, e1.rightdot, e2.leftdot);
  children.insert(children.end(), gap.begin(), gap.end());
  children.insert(children.end(), e2.children.begin(), e2.children.end());
  ++stats_.fusions;
  std::string tag = "e" + std::to_string(i1) + " + e" + std::to_string(i2);

  if (r1 && l2) {
    ++stats_.fusion_new;
    trace_line("fuse", tag + " case 6.4.1");
    create_event(e1.production, e1.leftdot, e2.rightdot, e1.left, e2.right, std::move(children));
  } else if (r1) {
    ++stats_.fusion_mutate_right;
    trace_line("fuse", tag + " case 6.4.2");
    move_extreme(i2, Side::Left, e1.leftdot, e1.left, std::move(children));
  } else if (l2) {
    ++stats_.fusion_mutate_left;
    trace_line("fuse", tag + " case 6.4.3");
    move_extreme(i1, Side::Right, e2.rightdot, e2.right, std::move(children));
  } else {
    ++stats_.fusion_absorb;
    trace_line("fuse", tag + " case 6.4.4");
    std::uint32_t dot = e2.rightdot;
    std::size_t cad = e2.right;
    delete_event(i2);
    move_extreme(i1, Side::Right, dot, cad, std::move(children));
  }
}

std::string Chart::dump_state() const {
  std::ostringstream os;
  os << "queues: epsilon=" << epsilon_queue_.size() << " delete=" << delete_queue_.size()
     << " run=" << run_queue_.size() << " fusion=" << fusion_agenda_.size() << '\n';
  os << "nodes=" << nodes_.size() << " events=" << events_.size() << " links=" << links_.size() << '\n';
  std::size_t shown = 0;
  for (const auto& e : events_) {
    if (!e.live()) continue;
    if (++shown > 20) {
      os << "...\n";
      break;
    }
    os << "  e" << e.id << ' ' << render(e) << ' ' << to_string(e.status) << '\n';
  }
  return os.str();
}

bool Chart::step() {
  if (options_.max_steps && stats_.steps >= options_.max_steps)
    throw StepLimitExceeded("step limit " + std::to_string(options_.max_steps) + " exceeded\n" + dump_state());

  auto pop_event = [&](std::deque<EventId>& q, Status wanted) -> std::optional<EventId> {
    while (!q.empty()) {
      EventId id = q.front();
      q.pop_front();
      if (events_[id].live() && events_[id].status == wanted && compute_status(events_[id]) == wanted) return id;
      ++stats_.stale_pops;
      if (events_[id].live()) {
        touch(id);
        settle();
      }
    }
    return std::nullopt;
  };

  bool did = true;
  if (auto id = pop_event(epsilon_queue_, Status::Epsilon)) {
    epsilon_expand(*id);
  } else if (auto id = pop_event(delete_queue_, Status::Delete)) {
    delete_event(*id);
  } else if (auto id = pop_event(run_queue_, Status::Run)) {
    run_event(*id);
  } else if (!fusion_agenda_.empty()) {
    LinkId lid = fusion_agenda_.front();
    fusion_agenda_.pop_front();
    fuse(lid);
  } else {
    did = false;
  }
  if (did) ++stats_.steps;
  settle();
  return did;
}

void Chart::parse_cycle() {
  while (step()) {
  }
  if (options_.check_invariants) verify_invariants();
}

Acceptance Chart::accept() {
  Acceptance a;
  if (last() == 0) {
    for (SymbolId r : grammar().roots())
      if (parser_->compiled().is_nullable(r)) a.roots.push_back(epsilon_node(r));
  } else {
    for (SymbolId r : grammar().roots())
      if (auto n = find_node(r, 0, last())) a.roots.push_back(*n);
  }
  a.grammatical = !a.roots.empty();
  return a;
}

void Chart::check_event(const Event& e) const {
  const auto& rhs = production_of(e).rhs;
  auto fail = [&](const std::string& why) { throw std::logic_error("event e" + std::to_string(e.id) + ": " + why); };
  if (e.leftdot >= e.rightdot || e.rightdot > rhs.size()) fail("bad dots");
  if (e.children.size() != e.rightdot - e.leftdot) fail("children do not match dots");
  std::size_t pos = e.left;
  for (std::size_t i = 0; i < e.children.size(); ++i) {
    const Node& c = nodes_[e.children[i]];
    if (c.symbol != rhs[e.leftdot + i]) fail("child symbol mismatch");
    if (c.is_epsilon()) continue;
    if (c.fbp != pos) fail("children do not tile");
    pos = c.lbp;
  }
  if (pos != e.right) fail("children do not reach the right extreme");
}

void Chart::check_analysis(const Node& n, const Analysis& a) const {
  const auto& p = grammar().production(a.production);
  auto fail = [&](const std::string& why) { throw std::logic_error("node n" + std::to_string(n.id) + ": " + why); };
  if (p.lhs != n.symbol) fail("analysis lhs mismatch");
  if (a.children.size() != p.rhs.size()) fail("analysis arity mismatch");
  std::size_t pos = n.fbp;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    const Node& c = nodes_[a.children[i]];
    if (c.symbol != p.rhs[i]) fail("analysis child symbol mismatch");
    if (c.is_epsilon()) continue;
    if (n.is_epsilon()) fail("epsilon node with a positioned child");
    if (c.fbp != pos) fail("analysis does not tile");
    pos = c.lbp;
  }
  if (!n.is_epsilon() && pos != n.lbp) fail("analysis does not span the node");
}

void Chart::verify_invariants() const {
  auto fail = [](const std::string& why) { throw std::logic_error(why); };
  auto count_in = [](const std::vector<EventId>& v, EventId id) { return std::count(v.begin(), v.end(), id); };
  for (const auto& e : events_) {
    bool live = e.live();
    auto ol = count_in(cads_[e.left].open_left, e.id), cl = count_in(cads_[e.left].closed_left, e.id);
    auto orr = count_in(cads_[e.right].open_right, e.id), cr = count_in(cads_[e.right].closed_right, e.id);
    if (!live) {
      if (ol + cl + orr + cr) fail("dead event e" + std::to_string(e.id) + " still registered");
      if (!e.left_links.empty() || !e.right_links.empty()) fail("dead event e" + std::to_string(e.id) + " has links");
      continue;
    }
    check_event(e);
    if ((e.left_closed() ? cl : ol) != 1 || (e.left_closed() ? ol : cl) != 0)
      fail("left extreme of e" + std::to_string(e.id) + " misregistered");
    if ((e.right_closed() ? cr : orr) != 1 || (e.right_closed() ? orr : cr) != 0)
      fail("right extreme of e" + std::to_string(e.id) + " misregistered");
    for (Side side : {Side::Left, Side::Right}) {
      for (LinkId lid : side == Side::Left ? e.left_links : e.right_links) {
        const Link& l = links_[lid];
        if (!l.alive) fail("dead link l" + std::to_string(lid) + " on e" + std::to_string(e.id));
        bool mine = (l.event == e.id && l.side == side) ||
                    (l.target == Link::Target::Event && l.other_event == e.id && l.other_side == side);
        if (!mine) fail("link l" + std::to_string(lid) + " misfiled on e" + std::to_string(e.id));
      }
    }
  }
  for (const auto& n : nodes_) {
    for (const auto& a : n.analyses) check_analysis(n, a);
    if (n.is_epsilon()) continue;
    auto it = node_index_.find({n.symbol, n.fbp, n.lbp});
    if (it == node_index_.end() || it->second != n.id) fail("node n" + std::to_string(n.id) + " not packed");
    if (std::count(cads_[n.fbp].ndri.begin(), cads_[n.fbp].ndri.end(), n.id) != 1 ||
        std::count(cads_[n.lbp].ndle.begin(), cads_[n.lbp].ndle.end(), n.id) != 1)
      fail("node n" + std::to_string(n.id) + " misregistered");
  }
}

Chart parse(const Parser& parser, const InputLattice& input, ParseOptions options) {
  Chart chart(parser, input, options);
  chart.parse_cycle();
  return chart;
}

}  // namespace scp
