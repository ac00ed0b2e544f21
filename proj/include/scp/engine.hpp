// The bidirectional event-driven parser.
//
// Every lexical item becomes a Node; every Node spawns Events from the
// coverage entries of its symbol. An Event is a doubly dotted production
// instance whose two extremes sit in the CaD (collection and diffusion hub)
// of a breaking point. Links record evidence that an extreme's requirement is
// satisfiable; the logical status of an event is a function of which sides
// carry links. Events without support are deleted, and deletion propagates to
// the events that relied on them. Closed-closed events with support run and
// produce new (packed) nodes; open events sharing a production meet through
// fusion.

#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "scp/lattice.hpp"
#include "scp/relations.hpp"

namespace scp {

using NodeId = std::uint32_t;
using EventId = std::uint32_t;
using LinkId = std::uint32_t;

inline constexpr std::size_t kNoPosition = std::numeric_limits<std::size_t>::max();

enum class NodeOrigin { lexical, derived, epsilon };

struct Analysis {
  ProductionId production = 0;
  std::vector<NodeId> children;  // one per rhs symbol
  friend bool operator==(const Analysis&, const Analysis&) = default;
};

struct Node {
  NodeId id = 0;
  SymbolId symbol = 0;
  std::size_t fbp = kNoPosition;  // kNoPosition for epsilon nodes
  std::size_t lbp = kNoPosition;
  NodeOrigin origin = NodeOrigin::derived;
  std::vector<Analysis> analyses;
  std::vector<std::size_t> lexical_items;  // indices into the input lattice

  bool is_epsilon() const { return origin == NodeOrigin::epsilon; }
};

// DERIVATION is the dormant resting state; it has no queue.
enum class Status { Run, Derivation, Epsilon, Delete };
enum class Side { Left, Right };
enum class LinkKind { Derivation, Adjacency, Fusion, Boundary };
enum class EventState { Live, Deleted, Retired };

const char* to_string(Status s);
const char* to_string(LinkKind k);

struct Event {
  EventId id = 0;
  ProductionId production = 0;
  std::uint32_t leftdot = 0;   // rhs symbols left of the covered range
  std::uint32_t rightdot = 0;  // one past the last covered symbol
  std::uint32_t rhs_size = 0;
  std::size_t left = 0;  // CaD of the left extreme
  std::size_t right = 0;
  std::vector<NodeId> children;  // covered positions leftdot..rightdot-1
  std::vector<LinkId> left_links;
  std::vector<LinkId> right_links;
  Status status = Status::Derivation;
  EventState state = EventState::Live;

  bool left_closed() const { return leftdot == 0; }
  bool right_closed() const { return rightdot == rhs_size; }
  bool live() const { return state == EventState::Live; }
};

struct Link {
  enum class Target { Event, Node, Boundary };
  LinkKind kind = LinkKind::Derivation;
  EventId event = 0;  // consumer extreme
  Side side = Side::Left;
  Target target = Target::Boundary;
  EventId other_event = 0;
  Side other_side = Side::Left;
  NodeId node = 0;
  std::size_t cad = 0;
  bool alive = true;
};

struct CaD {
  std::size_t index = 0;
  std::vector<EventId> open_right;    // right extreme open here ("tole")
  std::vector<EventId> closed_right;  // right extreme closed here ("frle")
  std::vector<EventId> open_left;     // left extreme open here ("tori")
  std::vector<EventId> closed_left;   // left extreme closed here ("frri")
  std::vector<NodeId> ndle;           // nodes ending here
  std::vector<NodeId> ndri;           // nodes starting here
};

struct Stats {
  std::uint64_t events_created = 0;
  std::uint64_t events_deleted = 0;
  std::uint64_t events_run = 0;
  std::uint64_t duplicate_events = 0;
  std::uint64_t epsilon_expansions = 0;
  std::uint64_t fusions = 0;
  std::uint64_t fusion_new = 0;       // case 6.4.1
  std::uint64_t fusion_mutate_right = 0;  // case 6.4.2
  std::uint64_t fusion_mutate_left = 0;   // case 6.4.3
  std::uint64_t fusion_absorb = 0;        // case 6.4.4
  std::uint64_t fusion_links = 0;
  std::uint64_t stale_fusions = 0;
  std::uint64_t links = 0;
  std::uint64_t nodes = 0;
  std::uint64_t epsilon_nodes = 0;
  std::uint64_t packed_analyses = 0;
  std::uint64_t stale_pops = 0;
  std::uint64_t steps = 0;
  std::uint64_t shadow_checks = 0;
  std::uint64_t shadow_mismatches = 0;

  friend bool operator==(const Stats&, const Stats&) = default;
};

std::string format_stats(const Stats& s, bool json);

struct ParseOptions {
  bool shadow_status = false;     // replay every status decision on the literal tables
  bool check_invariants = false;  // tiling on every creation, full sweep at quiescence
  std::uint64_t max_steps = 0;    // 0 = unlimited
  std::ostream* trace = nullptr;
  bool trace_color = false;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class StepLimitExceeded : public ParseError {
 public:
  using ParseError::ParseError;
};

// The literal status tables for closed-closed, closed-open, open-closed and
// open-open events. `left_nullable` is E of the symbol left of the left dot,
// `right_nullable` of the symbol right of the right dot.
Status status_by_tables(bool left_closed, bool right_closed, bool left_links, bool right_links,
                        bool left_nullable, bool right_nullable);

// Per-grammar lookup tables for link analyses, shared read-only by sessions.
class Parser {
 public:
  explicit Parser(const CompiledGrammar& compiled);

  const CompiledGrammar& compiled() const { return *compiled_; }
  const Grammar& grammar() const { return compiled_->grammar; }

  // Symbols an open right extreme with this right dot accepts as a direct
  // node fill: rhs[j'] for j' >= dot with only nullables in between.
  const Bitset& right_fill(ProductionId p, std::uint32_t rightdot) const { return right_fill_[p][rightdot]; }
  // Producer lhs symbols gamma with some fill symbol in LPD(gamma).
  const Bitset& right_producers(ProductionId p, std::uint32_t rightdot) const { return right_prod_[p][rightdot]; }
  const Bitset& left_fill(ProductionId p, std::uint32_t leftdot) const { return left_fill_[p][leftdot]; }
  const Bitset& left_producers(ProductionId p, std::uint32_t leftdot) const { return left_prod_[p][leftdot]; }

 private:
  const CompiledGrammar* compiled_;
  std::vector<std::vector<Bitset>> right_fill_, right_prod_, left_fill_, left_prod_;
};

struct Acceptance {
  bool grammatical = false;
  std::vector<NodeId> roots;
};

class Chart {
 public:
  // init_session: one CaD per breaking point, lexical nodes admitted, their
  // events created and linked, statuses queued.
  Chart(const Parser& parser, const InputLattice& input, ParseOptions options = {});

  Chart(const Chart&) = delete;
  Chart& operator=(const Chart&) = delete;
  Chart(Chart&&) = default;

  // Runs the cycle to quiescence (EPSILON > DELETE > RUN > fusion).
  void parse_cycle();
  // One iteration of the cycle; false when every queue is empty.
  bool step();
  Acceptance accept();

  // Individual operations, public for tests and tooling.
  std::pair<NodeId, bool> add_node(SymbolId symbol, std::size_t fbp, std::size_t lbp,
                                   std::optional<Analysis> analysis);
  Status compute_status(const Event& e) const;
  void epsilon_expand(EventId id);
  void delete_event(EventId id);
  NodeId run_event(EventId id);
  void fuse(LinkId id);
  NodeId epsilon_node(SymbolId symbol);

  const Parser& parser() const { return *parser_; }
  const Grammar& grammar() const { return parser_->grammar(); }
  const InputLattice& input() const { return *input_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Event>& events() const { return events_; }
  const std::vector<Link>& links() const { return links_; }
  const std::vector<CaD>& cads() const { return cads_; }
  const Stats& stats() const { return stats_; }
  std::size_t last() const { return cads_.size() - 1; }

  std::optional<NodeId> find_node(SymbolId symbol, std::size_t fbp, std::size_t lbp) const;
  std::vector<EventId> live_events() const;
  std::string render(const Event& e) const;

  // Throws std::logic_error when a structural invariant is broken.
  void verify_invariants() const;

 private:
  struct EventKey {
    ProductionId production;
    std::uint32_t leftdot, rightdot;
    std::size_t left, right;
    std::vector<NodeId> children;
    friend bool operator==(const EventKey&, const EventKey&) = default;
  };
  struct EventKeyHash {
    std::size_t operator()(const EventKey& k) const;
  };
  struct NodeKeyHash {
    std::size_t operator()(const std::tuple<SymbolId, std::size_t, std::size_t>& k) const;
  };

  const Production& production_of(const Event& e) const { return grammar().production(e.production); }
  SymbolId lhs_of(const Event& e) const { return production_of(e).lhs; }

  void create_events(NodeId node);
  std::optional<EventId> create_event(ProductionId p, std::uint32_t leftdot, std::uint32_t rightdot,
                                      std::size_t left, std::size_t right, std::vector<NodeId> children);
  void analyze_extreme(EventId id, Side side);
  void analyze_node(NodeId node);
  void register_extreme(EventId id, Side side);
  void unregister_extreme(EventId id, Side side);
  LinkId make_link(LinkKind kind, EventId event, Side side, Link::Target target, EventId other_event,
                   Side other_side, NodeId node, std::size_t cad);
  // Drops every link on one side; partners are touched when `propagate`.
  void drop_links(EventId id, Side side, bool propagate);
  void touch(EventId id);
  void settle();
  void update_status(EventId id);
  void retire(EventId id, EventState state, bool propagate);
  bool fusable(const Event& e1, const Event& e2) const;
  // Moves one extreme to a new dot and CaD, replacing the covered children.
  // Returns false (and deletes the event) when the result already exists.
  bool move_extreme(EventId id, Side side, std::uint32_t dot, std::size_t cad, std::vector<NodeId> children);
  std::vector<NodeId> gap_children(ProductionId p, std::uint32_t from, std::uint32_t to);
  std::string dump_state() const;
  void check_event(const Event& e) const;
  void check_analysis(const Node& n, const Analysis& a) const;

  void trace_line(const char* verb, const std::string& rest) const;

  const Parser* parser_;
  const InputLattice* input_;
  ParseOptions options_;
  std::vector<CaD> cads_;
  std::vector<Node> nodes_;
  std::vector<Event> events_;
  std::vector<Link> links_;
  std::unordered_map<std::tuple<SymbolId, std::size_t, std::size_t>, NodeId, NodeKeyHash> node_index_;
  std::vector<std::optional<NodeId>> epsilon_nodes_;
  std::unordered_set<EventKey, EventKeyHash> seen_events_;
  std::deque<EventId> epsilon_queue_, delete_queue_, run_queue_;
  std::deque<LinkId> fusion_agenda_;
  std::deque<EventId> touched_;
  std::vector<bool> touched_flag_;
  std::vector<bool> fresh_;
  Stats stats_;
};

// init_session followed by parse_cycle. The chart keeps references to
// `parser` and `input`; both must outlive it.
Chart parse(const Parser& parser, const InputLattice& input, ParseOptions options = {});

}  // namespace scp
