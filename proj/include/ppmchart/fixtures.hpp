#pragma once

// Deterministic synthetic modeling sessions with known ground truth, sized
// like real sessions (a small case of ~120 operations, a large one of ~276).

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppmchart/log_model.hpp"
#include "ppmchart/taxonomy.hpp"

namespace ppmchart::fixtures {

struct SessionShape {
  std::string log_id;
  std::size_t activities = 0;
  /// Split/join gateway pairs, each wrapping two parallel activities.
  std::size_t gateway_pairs = 0;
  std::size_t total_operations = 0;
  std::uint64_t seed = 1;
  Millis start_ms = 0;
};

/// 2010-11-24T10:00:00Z
inline constexpr Millis kSessionEpoch = 1'290'592'800'000;

inline SessionShape preflight_shape() { return {"preflight-synthetic", 13, 2, 120, 2010, kSessionEpoch}; }
inline SessionShape mortgage_shape() { return {"mortgage-synthetic", 27, 4, 276, 2012, kSessionEpoch}; }

struct GeneratedSession {
  EventLog log;
  std::array<std::size_t, kOperationCategoryCount> category_counts{};
  std::size_t activity_count = 0;
  std::size_t total_operations = 0;
};

namespace detail {

class SessionBuilder {
 public:
  explicit SessionBuilder(const SessionShape& shape) : shape_(shape), rng_(shape.seed), now_(shape.start_ms) {
    out_.log.log_id = shape.log_id;
    out_.log.source_meta["generator"] = "ppmchart-fixtures";
  }

  GeneratedSession build() {
    plan_model();
    const std::size_t base = base_operation_count();
    if (base > shape_.total_operations)
      throw std::invalid_argument("session shape needs more operations than total_operations");
    padding_left_ = shape_.total_operations - base;
    padding_per_step_ = static_cast<double>(padding_left_) / static_cast<double>(base);

    emit_create(nodes_[0]);
    std::size_t node_cursor = 1;
    for (const auto& e : edges_) {
      // Create every node the edge needs, then the edge itself.
      while (node_cursor < nodes_.size() && (node_cursor <= e.to || node_cursor <= e.from))
        emit_create(nodes_[node_cursor++]);
      emit_edge(e);
    }
    while (node_cursor < nodes_.size()) emit_create(nodes_[node_cursor++]);
    while (padding_left_ > 0) emit_padding();
    out_.total_operations = out_.log.event_count();
    return std::move(out_);
  }

 private:
  struct PlannedNode {
    std::string id;
    OperationKind create;
    Point position;
  };
  struct PlannedEdge {
    std::size_t from;
    std::size_t to;
  };

  void plan_model() {
    nodes_.push_back({"start", OperationKind::CreateStartEvent, {40, 200}});
    std::size_t prev = 0;
    double x = 40;
    std::size_t sequential = shape_.activities - 2 * shape_.gateway_pairs;
    std::size_t act = 0;
    // Sequential activities are spread evenly around the gateway blocks.
    const std::size_t segments = shape_.gateway_pairs + 1;
    for (std::size_t seg = 0; seg < segments; ++seg) {
      const std::size_t here = sequential / segments + (seg < sequential % segments ? 1 : 0);
      for (std::size_t i = 0; i < here; ++i) {
        x += 120;
        nodes_.push_back({"a" + std::to_string(++act), OperationKind::CreateActivity, {x, 200}});
        edges_.push_back({prev, nodes_.size() - 1});
        prev = nodes_.size() - 1;
      }
      if (seg == shape_.gateway_pairs) break;
      const bool xor_block = seg % 2 == 0;
      const auto gw = xor_block ? OperationKind::CreateXor : OperationKind::CreateAnd;
      const std::string prefix = xor_block ? "xor" : "and";
      x += 100;
      nodes_.push_back({prefix + std::to_string(seg + 1) + "s", gw, {x, 200}});
      const std::size_t split = nodes_.size() - 1;
      edges_.push_back({prev, split});
      x += 120;
      nodes_.push_back({"a" + std::to_string(++act), OperationKind::CreateActivity, {x, 120}});
      const std::size_t upper = nodes_.size() - 1;
      nodes_.push_back({"a" + std::to_string(++act), OperationKind::CreateActivity, {x, 280}});
      const std::size_t lower = nodes_.size() - 1;
      x += 120;
      nodes_.push_back({prefix + std::to_string(seg + 1) + "j", gw, {x, 200}});
      const std::size_t join = nodes_.size() - 1;
      edges_.push_back({split, upper});
      edges_.push_back({split, lower});
      edges_.push_back({upper, join});
      edges_.push_back({lower, join});
      prev = join;
    }
    x += 120;
    nodes_.push_back({"end", OperationKind::CreateEndEvent, {x, 200}});
    edges_.push_back({prev, nodes_.size() - 1});
    out_.activity_count = act;
  }

  std::size_t base_operation_count() const {
    // Each activity is created and named.
    return nodes_.size() + out_.activity_count + edges_.size();
  }

  Millis tick() {
    std::uniform_int_distribution<Millis> step(2'000, 14'000);
    now_ += step(rng_);
    return now_;
  }

  ElementTrace& trace_for(const std::string& id) {
    for (auto& t : out_.log.traces)
      if (t.element_id == id) return t;
    out_.log.traces.push_back({id, {}});
    return out_.log.traces.back();
  }

  void record(LogEvent ev) {
    const auto kind = *operation_from_string(ev.name);
    ++out_.category_counts[static_cast<std::size_t>(category_of(kind))];
    trace_for(ev.element_id).events.push_back(std::move(ev));
  }

  LogEvent event(OperationKind kind, const std::string& id) {
    LogEvent ev;
    ev.name = std::string(to_string(kind));
    ev.timestamp = tick();
    ev.element_id = id;
    return ev;
  }

  void emit_create(const PlannedNode& n) {
    LogEvent ev = event(n.create, n.id);
    ev.position = n.position;
    record(std::move(ev));
    created_.push_back(&n);
    after_base_step();
    if (n.create == OperationKind::CreateActivity) {
      LogEvent name = event(OperationKind::NameActivity, n.id);
      name.label_text = "Task " + n.id;
      record(std::move(name));
      after_base_step();
    }
  }

  void emit_edge(const PlannedEdge& e) {
    const std::string id = "e" + std::to_string(++edge_counter_);
    LogEvent ev = event(OperationKind::CreateEdge, id);
    ev.edge_source = nodes_[e.from].id;
    ev.edge_target = nodes_[e.to].id;
    record(std::move(ev));
    after_base_step();
  }

  void after_base_step() {
    padding_credit_ += padding_per_step_;
    while (padding_credit_ >= 1.0 && padding_left_ > 0) {
      padding_credit_ -= 1.0;
      emit_padding();
    }
  }

  /// One filler operation: mostly moves, with occasional renames and
  /// create-then-delete edge mistakes.
  void emit_padding() {
    std::uniform_int_distribution<int> pick(0, 9);
    const int roll = pick(rng_);
    if (roll == 0 && padding_left_ >= 2 && created_.size() >= 2) {
      const std::string id = "x" + std::to_string(++mistake_counter_);
      LogEvent ev = event(OperationKind::CreateEdge, id);
      ev.edge_source = created_[created_.size() - 2]->id;
      ev.edge_target = created_.back()->id;
      record(std::move(ev));
      record(event(OperationKind::DeleteEdge, id));
      padding_left_ -= 2;
      return;
    }
    std::uniform_int_distribution<std::size_t> which(0, created_.size() - 1);
    const PlannedNode& n = *created_[which(rng_)];
    if (roll == 1 && n.create == OperationKind::CreateActivity) {
      LogEvent ev = event(OperationKind::RenameActivity, n.id);
      ev.label_text = "Renamed " + n.id;
      record(std::move(ev));
    } else {
      OperationKind move = OperationKind::MoveActivity;
      switch (n.create) {
        case OperationKind::CreateStartEvent: move = OperationKind::MoveStartEvent; break;
        case OperationKind::CreateEndEvent: move = OperationKind::MoveEndEvent; break;
        case OperationKind::CreateXor: move = OperationKind::MoveXor; break;
        case OperationKind::CreateAnd: move = OperationKind::MoveAnd; break;
        default: break;
      }
      std::uniform_int_distribution<int> jitter(-10, 10);
      LogEvent ev = event(move, n.id);
      ev.position = Point{n.position.x + jitter(rng_), n.position.y + jitter(rng_)};
      record(std::move(ev));
    }
    --padding_left_;
  }

  SessionShape shape_;
  std::mt19937_64 rng_;
  Millis now_;
  GeneratedSession out_;
  std::vector<PlannedNode> nodes_;
  std::vector<PlannedEdge> edges_;
  std::vector<const PlannedNode*> created_;
  std::size_t padding_left_ = 0;
  double padding_per_step_ = 0;
  double padding_credit_ = 0;
  std::size_t edge_counter_ = 0;
  std::size_t mistake_counter_ = 0;
};

}  // namespace detail

/// Builds a session with exactly `shape.total_operations` events, no
/// validation findings, and category counts reported alongside.
inline GeneratedSession generate_session(const SessionShape& shape) {
  return detail::SessionBuilder(shape).build();
}

/// Start, activity and end connected by two straight edges of length 2 and 4.
/// Creation order: s, a, e1, t, e2.
inline EventLog chain_log() {
  EventLog log;
  log.log_id = "chain";
  auto node = [&](std::string id, OperationKind k, Millis t, Point p) {
    LogEvent ev{std::string(to_string(k)), kSessionEpoch + t, id, p, std::nullopt, std::nullopt, std::nullopt, {}};
    log.traces.push_back({std::move(id), {ev}});
  };
  auto edge = [&](std::string id, Millis t, std::string from, std::string to) {
    LogEvent ev{"CREATE_EDGE", kSessionEpoch + t, id, std::nullopt, std::move(from), std::move(to), std::nullopt, {}};
    log.traces.push_back({std::move(id), {ev}});
  };
  node("s", OperationKind::CreateStartEvent, 0, {0, 0});
  node("a", OperationKind::CreateActivity, 1000, {2, 0});
  edge("e1", 2000, "s", "a");
  node("t", OperationKind::CreateEndEvent, 3000, {6, 0});
  edge("e2", 4000, "a", "t");
  log.traces[1].events.push_back({"NAME_ACTIVITY", kSessionEpoch + 5000, "a", std::nullopt,
                                  std::nullopt, std::nullopt, "Check order", {}});
  log.traces[1].events.push_back({"MOVE_ACTIVITY", kSessionEpoch + 6000, "a", Point{2, 0},
                                  std::nullopt, std::nullopt, std::nullopt, {}});
  return log;
}

}  // namespace ppmchart::fixtures
