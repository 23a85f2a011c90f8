#pragma once

// Replays an event log into the process model it builds, and derives the
// graph-based timeline orderings ("distance from start" and "create order
// from start") from that model.

#include <algorithm>
#include <concepts>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "ppmchart/error.hpp"
#include "ppmchart/log_model.hpp"
#include "ppmchart/taxonomy.hpp"

namespace ppmchart {

struct ModelNode {
  std::string element_id;
  ElementKind kind = ElementKind::Activity;
  std::optional<Point> last_position;
  std::optional<Millis> created_at;
  std::optional<Millis> deleted_at;

  friend bool operator==(const ModelNode&, const ModelNode&) = default;
};

struct ModelArc {
  std::string element_id;
  std::optional<std::string> source;
  std::optional<std::string> target;
  std::optional<Millis> created_at;
  std::optional<Millis> deleted_at;

  friend bool operator==(const ModelArc&, const ModelArc&) = default;
};

class ModelGraph {
 public:
  ModelGraph() = default;

  /// `element_ids` lists every element of the originating log in log order;
  /// orderings are permutations of this list.
  explicit ModelGraph(std::vector<std::string> element_ids) : element_ids_(std::move(element_ids)) {}

  const std::vector<ModelNode>& nodes() const { return nodes_; }
  const std::vector<ModelArc>& arcs() const { return arcs_; }
  const std::vector<std::string>& element_ids() const { return element_ids_; }

  const ModelNode* find_node(const std::string& id) const {
    auto it = node_index_.find(id);
    return it == node_index_.end() ? nullptr : &nodes_[it->second];
  }
  const ModelArc* find_arc(const std::string& id) const {
    auto it = arc_index_.find(id);
    return it == arc_index_.end() ? nullptr : &arcs_[it->second];
  }
  std::optional<std::size_t> node_index(const std::string& id) const {
    auto it = node_index_.find(id);
    if (it == node_index_.end()) return std::nullopt;
    return it->second;
  }

  ModelNode& add_node(ModelNode node) {
    node_index_.emplace(node.element_id, nodes_.size());
    ensure_listed(node.element_id);
    nodes_.push_back(std::move(node));
    return nodes_.back();
  }
  ModelArc& add_arc(ModelArc arc) {
    arc_index_.emplace(arc.element_id, arcs_.size());
    ensure_listed(arc.element_id);
    arcs_.push_back(std::move(arc));
    return arcs_.back();
  }
  ModelNode* find_node(const std::string& id) {
    auto it = node_index_.find(id);
    return it == node_index_.end() ? nullptr : &nodes_[it->second];
  }
  ModelArc* find_arc(const std::string& id) {
    auto it = arc_index_.find(id);
    return it == arc_index_.end() ? nullptr : &arcs_[it->second];
  }

  /// Source or target missing, or naming something that is not a node.
  bool is_dangling(const ModelArc& arc) const {
    return !arc.source || !arc.target || !find_node(*arc.source) || !find_node(*arc.target);
  }
  /// Endpoints resolve but at least one of them was deleted while the arc was not.
  bool is_dangling_at_end(const ModelArc& arc) const {
    if (is_dangling(arc) || arc.deleted_at) return false;
    return find_node(*arc.source)->deleted_at || find_node(*arc.target)->deleted_at;
  }

  /// Element ids present in the final model: undeleted nodes, and undeleted
  /// arcs whose endpoints are both undeleted nodes.
  std::vector<std::string> surviving() const {
    std::vector<std::string> out;
    for (const auto& n : nodes_)
      if (!n.deleted_at) out.push_back(n.element_id);
    for (const auto& a : arcs_)
      if (!a.deleted_at && !is_dangling(a) && !is_dangling_at_end(a)) out.push_back(a.element_id);
    return out;
  }

  friend bool operator==(const ModelGraph& a, const ModelGraph& b) {
    return a.nodes_ == b.nodes_ && a.arcs_ == b.arcs_ && a.element_ids_ == b.element_ids_;
  }

 private:
  void ensure_listed(const std::string& id) {
    if (std::find(element_ids_.begin(), element_ids_.end(), id) == element_ids_.end())
      element_ids_.push_back(id);
  }

  std::vector<ModelNode> nodes_;
  std::vector<ModelArc> arcs_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::unordered_map<std::string, std::size_t> arc_index_;
  std::vector<std::string> element_ids_;
};

struct ReplayWarning {
  std::string element_id;
  std::string message;
};

struct ReplayResult {
  ModelGraph graph;
  std::vector<ReplayWarning> warnings;
};

/// Applies every event in global timestamp order. Throws ReplayError on a
/// second creation of the same element and ClassifyError on unknown names.
inline ReplayResult replay(const EventLog& log) {
  std::vector<std::string> ids;
  ids.reserve(log.traces.size());
  for (const auto& t : log.traces) ids.push_back(t.element_id);
  ReplayResult result{ModelGraph(std::move(ids)), {}};
  ModelGraph& g = result.graph;

  for (const EventRef& ref : global_event_order(log)) {
    const LogEvent& ev = at(log, ref);
    const Classification c = classify(ev.name);
    const std::string& id = ev.element_id;
    const bool node = is_node(c.element);

    if (c.category == OperationCategory::Create) {
      if (g.find_node(id) || g.find_arc(id)) throw ReplayError("created twice", id);
      if (node) {
        g.add_node({id, c.element, ev.position, ev.timestamp, std::nullopt});
      } else {
        g.add_arc({id, ev.edge_source, ev.edge_target, ev.timestamp, std::nullopt});
        if (!ev.edge_source || !ev.edge_target)
          result.warnings.push_back({id, "edge created without source/target; arc is dangling"});
      }
      continue;
    }

    ModelNode* n = node ? g.find_node(id) : nullptr;
    ModelArc* a = node ? nullptr : g.find_arc(id);
    if (!n && !a) {
      result.warnings.push_back({id, ev.name + " before any creation of the element; ignored"});
      continue;
    }
    switch (c.category) {
      case OperationCategory::Move:
        if (n && ev.position) n->last_position = ev.position;
        break;
      case OperationCategory::Delete:
        if (n) n->deleted_at = ev.timestamp;
        if (a) a->deleted_at = ev.timestamp;
        break;
      case OperationCategory::Reconnect:
        if (a) {
          if (ev.edge_source) a->source = ev.edge_source;
          if (ev.edge_target) a->target = ev.edge_target;
        }
        break;
      default:
        break;
    }
  }
  return result;
}

/// Text dump, one element per line, for debugging and oracle comparison.
inline std::string dump(const ModelGraph& g) {
  std::ostringstream out;
  auto opt_time = [](const std::optional<Millis>& t) {
    return t ? std::to_string(*t) : std::string("-");
  };
  for (const auto& n : g.nodes()) {
    out << "node " << n.element_id << ' ' << to_string(n.kind) << " pos=";
    if (n.last_position)
      out << n.last_position->x << ',' << n.last_position->y;
    else
      out << '-';
    out << " created=" << opt_time(n.created_at) << " deleted=" << opt_time(n.deleted_at) << '\n';
  }
  for (const auto& a : g.arcs()) {
    out << "arc " << a.element_id << ' ' << a.source.value_or("?") << "->" << a.target.value_or("?")
        << " created=" << opt_time(a.created_at) << " deleted=" << opt_time(a.deleted_at);
    if (g.is_dangling(a)) out << " dangling";
    if (g.is_dangling_at_end(a)) out << " dangling-at-end";
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Orderings

inline constexpr double kUnranked = std::numeric_limits<double>::infinity();

struct RankedElement {
  std::string element_id;
  double rank = kUnranked;

  friend bool operator==(const RankedElement&, const RankedElement&) = default;
};

struct ElementOrder {
  std::vector<RankedElement> elements;
  /// Some node lacked a position, so every arc was given length 1.
  bool unit_length_fallback = false;

  std::vector<std::string> ids() const {
    std::vector<std::string> out;
    out.reserve(elements.size());
    for (const auto& e : elements) out.push_back(e.element_id);
    return out;
  }
  std::optional<double> rank_of(const std::string& id) const {
    for (const auto& e : elements)
      if (e.element_id == id) return e.rank;
    return std::nullopt;
  }
};

struct OrderingOptions {
  /// Use length 1 for every arc when any traversable arc has an endpoint without a position.
  bool unit_length_fallback = true;
};

/// Straight-line distance between the arc's endpoints, ignoring bend points.
/// Throws OrderingUnavailable when an endpoint position is unknown and
/// `unit_fallback` is off.
inline double arc_length(const ModelArc& arc, const ModelGraph& graph, bool unit_fallback = false) {
  if (unit_fallback) return 1.0;
  const ModelNode* s = arc.source ? graph.find_node(*arc.source) : nullptr;
  const ModelNode* t = arc.target ? graph.find_node(*arc.target) : nullptr;
  if (!s || !t || !s->last_position || !t->last_position)
    throw OrderingUnavailable("arc '" + arc.element_id + "' has an endpoint without a position");
  return std::hypot(t->last_position->x - s->last_position->x,
                    t->last_position->y - s->last_position->y);
}

/// Indices of nodes from which distances are measured: undeleted start
/// events, or failing that, undeleted nodes without incoming arcs.
inline std::vector<std::size_t> start_nodes(const ModelGraph& g) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    const auto& n = g.nodes()[i];
    if (n.kind == ElementKind::StartEvent && !n.deleted_at) out.push_back(i);
  }
  if (!out.empty()) return out;
  std::vector<bool> has_incoming(g.nodes().size(), false);
  for (const auto& a : g.arcs()) {
    if (g.is_dangling(a)) continue;
    has_incoming[*g.node_index(*a.target)] = true;
  }
  for (std::size_t i = 0; i < g.nodes().size(); ++i)
    if (!g.nodes()[i].deleted_at && !has_incoming[i]) out.push_back(i);
  return out;
}

/// Multi-source shortest distances over all resolvable arcs (deleted ones
/// included). `length(arc)` must be non-negative. Unreachable nodes get
/// std::nullopt.
template <class Weight, class LengthFn>
std::vector<std::optional<Weight>> node_distances(const ModelGraph& g,
                                                  const std::vector<std::size_t>& sources,
                                                  LengthFn&& length) {
  const std::size_t n = g.nodes().size();
  std::vector<std::vector<std::pair<std::size_t, Weight>>> adjacency(n);
  for (const auto& a : g.arcs()) {
    if (g.is_dangling(a)) continue;
    adjacency[*g.node_index(*a.source)].emplace_back(*g.node_index(*a.target),
                                                     static_cast<Weight>(length(a)));
  }
  std::vector<std::optional<Weight>> dist(n);
  using Entry = std::pair<Weight, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (std::size_t s : sources) {
    dist[s] = Weight{};
    queue.emplace(Weight{}, s);
  }
  std::vector<bool> settled(n, false);
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (settled[u]) continue;
    settled[u] = true;
    for (const auto& [v, w] : adjacency[u]) {
      const Weight candidate = d + w;
      if (!dist[v] || candidate < *dist[v]) {
        dist[v] = candidate;
        queue.emplace(candidate, v);
      }
    }
  }
  return dist;
}

namespace detail {

enum class ArcRankRule { Mean, MaxPlusOne };

template <class LengthFn>
ElementOrder graph_order(const ModelGraph& g, LengthFn&& length, ArcRankRule rule) {
  ElementOrder order;
  if (g.element_ids().empty()) return order;
  const auto sources = start_nodes(g);
  if (sources.empty()) throw OrderingUnavailable("no start node can be resolved");

  const auto dist = node_distances<double>(g, sources, length);
  std::unordered_map<std::string, double> rank;
  for (std::size_t i = 0; i < g.nodes().size(); ++i)
    rank[g.nodes()[i].element_id] = dist[i] ? *dist[i] : kUnranked;
  for (const auto& a : g.arcs()) {
    double r = kUnranked;
    if (!g.is_dangling(a)) {
      const double rs = rank[*a.source];
      const double rt = rank[*a.target];
      if (std::isfinite(rs) && std::isfinite(rt))
        r = rule == ArcRankRule::Mean ? (rs + rt) / 2.0 : std::max(rs, rt) + 1.0;
    }
    rank[a.element_id] = r;
  }

  order.elements.reserve(g.element_ids().size());
  for (const auto& id : g.element_ids()) {
    auto it = rank.find(id);
    order.elements.push_back({id, it == rank.end() ? kUnranked : it->second});
  }
  std::stable_sort(order.elements.begin(), order.elements.end(),
                   [](const RankedElement& a, const RankedElement& b) { return a.rank < b.rank; });
  return order;
}

inline bool needs_unit_fallback(const ModelGraph& g) {
  for (const auto& a : g.arcs()) {
    if (g.is_dangling(a)) continue;
    if (!g.find_node(*a.source)->last_position || !g.find_node(*a.target)->last_position)
      return true;
  }
  return false;
}

template <class Fn>
ElementOrder with_lengths(const ModelGraph& g, const OrderingOptions& opts, Fn&& build) {
  const bool fallback = needs_unit_fallback(g);
  if (fallback && !opts.unit_length_fallback)
    throw OrderingUnavailable("node positions missing and unit-length fallback disabled");
  ElementOrder order =
      build([&](const ModelArc& a) { return arc_length(a, g, fallback); });
  order.unit_length_fallback = fallback;
  return order;
}

}  // namespace detail

/// Node rank: shortest path distance from the start set. Arc rank: mean of
/// its endpoint ranks. Unreachable or unresolvable elements rank +inf and
/// go last; ties keep log order. Throws OrderingUnavailable if there is no
/// start node.
template <class LengthFn>
  requires std::invocable<LengthFn&, const ModelArc&>
ElementOrder distance_from_start(const ModelGraph& g, LengthFn&& length) {
  return detail::graph_order(g, std::forward<LengthFn>(length), detail::ArcRankRule::Mean);
}

inline ElementOrder distance_from_start(const ModelGraph& g, const OrderingOptions& opts = {}) {
  return detail::with_lengths(g, opts, [&](auto&& len) { return distance_from_start(g, len); });
}

/// As distance_from_start, but an arc ranks one past the larger of its endpoint ranks,
/// so every arc sorts after both nodes it connects.
template <class LengthFn>
  requires std::invocable<LengthFn&, const ModelArc&>
ElementOrder create_order_from_start(const ModelGraph& g, LengthFn&& length) {
  return detail::graph_order(g, std::forward<LengthFn>(length), detail::ArcRankRule::MaxPlusOne);
}

inline ElementOrder create_order_from_start(const ModelGraph& g, const OrderingOptions& opts = {}) {
  return detail::with_lengths(g, opts,
                              [&](auto&& len) { return create_order_from_start(g, len); });
}

}  // namespace ppmchart
