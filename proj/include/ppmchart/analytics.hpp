#pragma once

// Session metrics and modeling-pattern detectors. Every threshold lives in
// DetectorConfig; the defaults are conventions of this library.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ppmchart/log_model.hpp"
#include "ppmchart/taxonomy.hpp"

namespace ppmchart {

struct DetectorConfig {
  Millis pause_min_gap_ms = 60'000;
  Millis delete_burst_window_ms = 10'000;
  std::size_t delete_burst_min_size = 3;
  /// Fewer moves than this fraction of creates classifies as Few.
  double move_few_ratio = 0.10;
  /// A move is early when it follows its element's creation within this fraction of the session.
  double move_early_lag_fraction = 0.10;
  double move_early_share = 0.70;
  double move_end_phase = 0.80;
  double move_end_share = 0.50;
  std::size_t move_scattered_min_quartiles = 3;
  double aspect_max_score = 0.20;
  double aspect_min_nodes_before_edges = 0.80;
  double flow_min_score = 0.40;
  /// Gateway creation counts as paired at or above this score.
  double gateway_paired_min = 0.50;
  Millis chunk_pause_ms = 60'000;
  double chaos_min_move_delete = 0.40;

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

/// A stretch of session time with no recorded operation.
struct Pause {
  Millis start = 0;
  Millis end = 0;
  friend bool operator==(const Pause&, const Pause&) = default;
};

struct DeleteBurst {
  Millis start = 0;
  Millis end = 0;
  std::size_t size = 0;
  friend bool operator==(const DeleteBurst&, const DeleteBurst&) = default;
};

enum class MoveTiming { Few, EarlyBound, EndPhase, Scattered, Mixed };
enum class Orientation { AspectOriented, FlowOriented, Indeterminate };

inline std::string_view to_string(MoveTiming m) {
  static constexpr std::array<std::string_view, 5> names{"few", "early-bound", "end-phase",
                                                         "scattered", "mixed"};
  return names[static_cast<std::size_t>(m)];
}
inline std::string_view to_string(Orientation o) {
  static constexpr std::array<std::string_view, 3> names{"aspect-oriented", "flow-oriented",
                                                         "indeterminate"};
  return names[static_cast<std::size_t>(o)];
}

struct MoveTimingEvidence {
  std::size_t move_count = 0;
  std::size_t create_count = 0;
  double early_share = 0;
  double end_share = 0;
  std::size_t quartiles_touched = 0;
  friend bool operator==(const MoveTimingEvidence&, const MoveTimingEvidence&) = default;
};

struct MoveTimingResult {
  MoveTiming timing = MoveTiming::Few;
  MoveTimingEvidence evidence;
};

struct OrientationResult {
  Orientation orientation = Orientation::Indeterminate;
  double interleaving_score = 0;
};

struct Chunk {
  Millis start = 0;
  Millis end = 0;
  std::size_t create_count = 0;
  std::array<std::size_t, kElementKindCount> by_kind{};
  friend bool operator==(const Chunk&, const Chunk&) = default;
};

struct BasicMetrics {
  Millis duration_ms = 0;
  std::size_t element_count = 0;
  std::size_t total_operations = 0;
  std::array<std::size_t, kOperationCategoryCount> category_counts{};
  double move_ratio = 0;
  double delete_ratio = 0;
  double rename_ratio = 0;

  std::size_t count(OperationCategory c) const { return category_counts[static_cast<std::size_t>(c)]; }
};

struct SessionProfile {
  std::string log_id;
  BasicMetrics metrics;
  std::vector<Pause> pause_intervals;
  std::vector<DeleteBurst> delete_bursts;
  MoveTimingResult move_timing;
  OrientationResult orientation;
  std::optional<double> gateway_pairing_score;
  std::vector<Chunk> chunks;
  bool chaos_flag = false;
};

namespace detail {

struct TimedOp {
  Millis t;
  OperationKind kind;
  std::size_t trace;
};

/// Recognised operations in global time order; unknown names are skipped.
inline std::vector<TimedOp> timed_ops(const EventLog& log) {
  std::vector<TimedOp> out;
  for (const EventRef& r : global_event_order(log)) {
    const LogEvent& ev = at(log, r);
    if (auto k = operation_from_string(ev.name)) out.push_back({ev.timestamp, *k, r.trace});
  }
  return out;
}

inline std::vector<Pause> pauses_in(const std::vector<Millis>& sorted_times, Millis min_gap_ms) {
  std::vector<Pause> out;
  for (std::size_t i = 1; i < sorted_times.size(); ++i)
    if (sorted_times[i] - sorted_times[i - 1] >= min_gap_ms)
      out.push_back({sorted_times[i - 1], sorted_times[i]});
  return out;
}

inline std::vector<TimedOp> creation_sequence(const EventLog& log) {
  std::vector<TimedOp> out;
  for (const auto& op : timed_ops(log))
    if (category_of(op.kind) == OperationCategory::Create) out.push_back(op);
  return out;
}

}  // namespace detail

/// An empty log yields all zeros.
inline BasicMetrics basic_metrics(const EventLog& log) {
  BasicMetrics m;
  m.element_count = log.traces.size();
  const auto ops = detail::timed_ops(log);
  if (ops.empty()) return m;
  m.duration_ms = ops.back().t - ops.front().t;
  m.total_operations = ops.size();
  for (const auto& op : ops) ++m.category_counts[static_cast<std::size_t>(category_of(op.kind))];
  const double total = static_cast<double>(ops.size());
  m.move_ratio = static_cast<double>(m.count(OperationCategory::Move)) / total;
  m.delete_ratio = static_cast<double>(m.count(OperationCategory::Delete)) / total;
  m.rename_ratio = static_cast<double>(m.count(OperationCategory::Rename)) / total;
  return m;
}

/// Gaps of at least `min_gap_ms` between consecutive events across all traces.
inline std::vector<Pause> detect_pauses(const EventLog& log, Millis min_gap_ms) {
  std::vector<Millis> times;
  for (const auto& op : detail::timed_ops(log)) times.push_back(op.t);
  return detail::pauses_in(times, min_gap_ms);
}

/// Maximal runs of deletes each within `window_ms` of the previous one, kept when at least `min_size` long.
inline std::vector<DeleteBurst> detect_delete_bursts(const EventLog& log, Millis window_ms,
                                                     std::size_t min_size) {
  std::vector<Millis> deletes;
  for (const auto& op : detail::timed_ops(log))
    if (category_of(op.kind) == OperationCategory::Delete) deletes.push_back(op.t);
  std::vector<DeleteBurst> out;
  std::size_t run_start = 0;
  for (std::size_t i = 1; i <= deletes.size(); ++i) {
    if (i == deletes.size() || deletes[i] - deletes[i - 1] > window_ms) {
      const std::size_t size = i - run_start;
      if (size >= min_size && size > 0) out.push_back({deletes[run_start], deletes[i - 1], size});
      run_start = i;
    }
  }
  return out;
}

inline MoveTimingResult classify_move_timing(const EventLog& log, const DetectorConfig& cfg = {}) {
  MoveTimingResult result;
  const auto ops = detail::timed_ops(log);
  if (ops.empty()) return result;
  const Millis first = ops.front().t;
  const Millis duration = ops.back().t - first;

  std::vector<std::optional<Millis>> created(log.traces.size());
  for (const auto& op : ops)
    if (category_of(op.kind) == OperationCategory::Create && !created[op.trace]) created[op.trace] = op.t;

  auto& ev = result.evidence;
  std::size_t early = 0, late = 0;
  std::set<int> quartiles;
  for (const auto& op : ops) {
    const auto cat = category_of(op.kind);
    if (cat == OperationCategory::Create) ++ev.create_count;
    if (cat != OperationCategory::Move) continue;
    ++ev.move_count;
    const Millis created_at = created[op.trace].value_or(log.traces[op.trace].events.front().timestamp);
    const double lag = static_cast<double>(op.t - created_at);
    const double phase = duration > 0 ? static_cast<double>(op.t - first) / static_cast<double>(duration) : 0.0;
    if (lag <= cfg.move_early_lag_fraction * static_cast<double>(duration)) ++early;
    if (phase >= cfg.move_end_phase) ++late;
    quartiles.insert(std::min(3, static_cast<int>(std::floor(phase * 4.0))));
  }
  if (ev.move_count == 0) return result;
  ev.early_share = static_cast<double>(early) / static_cast<double>(ev.move_count);
  ev.end_share = static_cast<double>(late) / static_cast<double>(ev.move_count);
  ev.quartiles_touched = quartiles.size();

  if (static_cast<double>(ev.move_count) < cfg.move_few_ratio * static_cast<double>(ev.create_count))
    result.timing = MoveTiming::Few;
  else if (ev.early_share >= cfg.move_early_share)
    result.timing = MoveTiming::EarlyBound;
  else if (ev.end_share >= cfg.move_end_share)
    result.timing = MoveTiming::EndPhase;
  else if (ev.quartiles_touched >= cfg.move_scattered_min_quartiles)
    result.timing = MoveTiming::Scattered;
  else
    result.timing = MoveTiming::Mixed;
  return result;
}

/// Node/edge labels of creation events, in time order: 'N' or 'E'.
inline std::string creation_labels(const EventLog& log) {
  std::string labels;
  for (const auto& op : detail::creation_sequence(log))
    labels += is_node(element_of(op.kind)) ? 'N' : 'E';
  return labels;
}

/// Scores a node/edge creation label sequence.
inline OrientationResult orientation_of_labels(std::string_view labels, const DetectorConfig& cfg = {}) {
  OrientationResult r;
  const auto nodes = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 'N'));
  const auto edges = labels.size() - nodes;
  if (nodes == 0 || edges == 0) return r;
  std::size_t alternations = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) alternations += labels[i] != labels[i - 1] ? 1 : 0;
  r.interleaving_score = static_cast<double>(alternations) / static_cast<double>(labels.size() - 1);
  const std::size_t first_edge = labels.find('E');
  const double nodes_before = static_cast<double>(first_edge) / static_cast<double>(nodes);
  if (r.interleaving_score <= cfg.aspect_max_score && nodes_before >= cfg.aspect_min_nodes_before_edges)
    r.orientation = Orientation::AspectOriented;
  else if (r.interleaving_score >= cfg.flow_min_score)
    r.orientation = Orientation::FlowOriented;
  return r;
}

inline OrientationResult creation_orientation(const EventLog& log, const DetectorConfig& cfg = {}) {
  return orientation_of_labels(creation_labels(log), cfg);
}

/// Among gateway creations that have a successor in the creation sequence,
/// the fraction whose successor is also a gateway creation. Absent with
/// fewer than two gateway creations.
inline std::optional<double> gateway_pairing_score(const EventLog& log) {
  const auto seq = detail::creation_sequence(log);
  std::size_t gateways = 0, with_successor = 0, paired = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (!is_gateway(element_of(seq[i].kind))) continue;
    ++gateways;
    if (i + 1 == seq.size()) continue;
    ++with_successor;
    if (is_gateway(element_of(seq[i + 1].kind))) ++paired;
  }
  if (gateways < 2 || with_successor == 0) return std::nullopt;
  return static_cast<double>(paired) / static_cast<double>(with_successor);
}

/// Splits creation events at pauses of at least `pause_threshold_ms`.
inline std::vector<Chunk> detect_chunks(const EventLog& log, Millis pause_threshold_ms) {
  const auto seq = detail::creation_sequence(log);
  std::vector<Chunk> out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (out.empty() || seq[i].t - seq[i - 1].t >= pause_threshold_ms) out.push_back({seq[i].t, seq[i].t, 0, {}});
    Chunk& c = out.back();
    c.end = seq[i].t;
    ++c.create_count;
    ++c.by_kind[static_cast<std::size_t>(element_of(seq[i].kind))];
  }
  return out;
}

/// Scattered moves, indeterminate orientation, and a high share of moves plus deletes.
inline bool chaos_flag(MoveTiming timing, Orientation orientation, double move_ratio,
                       double delete_ratio, const DetectorConfig& cfg = {}) {
  return timing == MoveTiming::Scattered && orientation == Orientation::Indeterminate &&
         move_ratio + delete_ratio >= cfg.chaos_min_move_delete;
}

inline bool chaos_flag(const SessionProfile& p, const DetectorConfig& cfg = {}) {
  return chaos_flag(p.move_timing.timing, p.orientation.orientation, p.metrics.move_ratio,
                    p.metrics.delete_ratio, cfg);
}

inline SessionProfile profile_session(const EventLog& log, const DetectorConfig& cfg = {}) {
  SessionProfile p;
  p.log_id = log.log_id;
  p.metrics = basic_metrics(log);
  p.pause_intervals = detect_pauses(log, cfg.pause_min_gap_ms);
  p.delete_bursts = detect_delete_bursts(log, cfg.delete_burst_window_ms, cfg.delete_burst_min_size);
  p.move_timing = classify_move_timing(log, cfg);
  p.orientation = creation_orientation(log, cfg);
  p.gateway_pairing_score = gateway_pairing_score(log);
  p.chunks = detect_chunks(log, cfg.chunk_pause_ms);
  p.chaos_flag = chaos_flag(p, cfg);
  return p;
}

}  // namespace ppmchart
