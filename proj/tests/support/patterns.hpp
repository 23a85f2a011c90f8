#pragma once

// Logs built to satisfy (or violate) one behavioural pattern by construction.

#include <functional>
#include <string>
#include <vector>

#include "ppmchart/analytics.hpp"
#include "random_models.hpp"

namespace ppmtest::patterns {

inline constexpr Millis kSec = 1'000;
inline constexpr Millis kMin = 60'000;
inline constexpr Millis kHour = 3'600'000;

/// Creates elements from a label string: N = activity, E = edge, G = XOR
/// gateway; one creation every `step` ms from `start`.
inline std::vector<std::string> create_sequence(EventLog& log, std::string_view labels, Millis start,
                                                Millis step, const std::string& prefix = "") {
  std::vector<std::string> ids;
  Millis t = start;
  for (char c : labels) {
    const std::string id = prefix + std::string(1, static_cast<char>(std::tolower(c))) +
                           std::to_string(ids.size());
    const OperationKind kind = c == 'E'   ? OperationKind::CreateEdge
                               : c == 'G' ? OperationKind::CreateXor
                                          : OperationKind::CreateActivity;
    add_event(log, make_event(id, kind, t));
    ids.push_back(id);
    t += step;
  }
  return ids;
}

inline void move(EventLog& log, const std::string& id, Millis at) {
  add_event(log, make_event(id, OperationKind::MoveActivity, at));
}

inline void remove(EventLog& log, const std::string& id, Millis at) {
  add_event(log, make_event(id, OperationKind::DeleteActivity, at));
}

// -- delete bursts ---------------------------------------------------------

/// Six activities, five of them deleted one second apart mid-session.
inline EventLog delete_burst() {
  EventLog log;
  const auto ids = create_sequence(log, "NNNNNN", 0, 10 * kSec);
  for (int i = 0; i < 5; ++i) remove(log, ids[static_cast<std::size_t>(i)], 30 * kMin + i * kSec);
  return log;
}

/// Same deletions spread ten minutes apart.
inline EventLog scattered_deletes() {
  EventLog log;
  const auto ids = create_sequence(log, "NNNNNN", 0, 10 * kSec);
  for (int i = 0; i < 5; ++i) remove(log, ids[static_cast<std::size_t>(i)], 5 * kMin + i * 10 * kMin);
  return log;
}

// -- pauses ----------------------------------------------------------------

/// Operations at 0 s, 5 s and 125 s.
inline EventLog with_pause() {
  EventLog log;
  create_sequence(log, "NN", 0, 5 * kSec);
  create_sequence(log, "N", 125 * kSec, kSec, "late-");
  return log;
}

/// One operation per second for five minutes.
inline EventLog steady() {
  EventLog log;
  create_sequence(log, std::string(300, 'N'), 0, kSec);
  return log;
}

// -- move timing -----------------------------------------------------------

/// Ten activities created six minutes apart, each moved one second after creation.
inline EventLog early_moves() {
  EventLog log;
  const auto ids = create_sequence(log, "NNNNNNNNNN", 0, 6 * kMin);
  for (std::size_t i = 0; i < ids.size(); ++i) move(log, ids[i], static_cast<Millis>(i) * 6 * kMin + kSec);
  move(log, ids.back(), kHour);
  return log;
}

/// Ten activities created over the first fifty minutes, all moves in the final five.
inline EventLog end_phase_moves() {
  EventLog log;
  const auto ids = create_sequence(log, "NNNNNNNNNN", 0, 5 * kMin);
  for (std::size_t i = 0; i < ids.size(); ++i)
    move(log, ids[i], 55 * kMin + static_cast<Millis>(i) * 30 * kSec);
  return log;
}

/// Moves at 15%, 40%, 60% and 90% of a one-hour session, none close to its creation.
inline EventLog scattered_moves() {
  EventLog log;
  const auto ids = create_sequence(log, "NNNN", 0, kSec);
  const Millis phases[] = {9 * kMin, 24 * kMin, 36 * kMin, 54 * kMin};
  for (std::size_t i = 0; i < ids.size(); ++i) move(log, ids[i], phases[i]);
  create_sequence(log, "N", kHour, kSec, "last-");
  return log;
}

/// Moves confined to the second quartile, none close to creation.
inline EventLog clustered_moves() {
  EventLog log;
  const auto ids = create_sequence(log, "NNNN", 0, kSec);
  for (std::size_t i = 0; i < ids.size(); ++i) move(log, ids[i], 16 * kMin + static_cast<Millis>(i) * kMin);
  create_sequence(log, "N", kHour, kSec, "last-");
  return log;
}

// -- creation orientation ---------------------------------------------------

inline EventLog aspect_oriented() {
  EventLog log;
  create_sequence(log, "NNNNNEEEEE", 0, 10 * kSec);
  return log;
}

inline EventLog flow_oriented() {
  EventLog log;
  create_sequence(log, "NENENENENE", 0, 10 * kSec);
  return log;
}

// -- gateway pairing -------------------------------------------------------

inline EventLog paired_gateways() {
  EventLog log;
  create_sequence(log, "GGNGG", 0, 10 * kSec);
  return log;
}

inline EventLog unpaired_gateways() {
  EventLog log;
  create_sequence(log, "GNGNG", 0, 10 * kSec);
  return log;
}

// -- chunks ----------------------------------------------------------------

/// Creations every second for ten seconds.
inline EventLog one_chunk() {
  EventLog log;
  create_sequence(log, "NNENNENNENN", 0, kSec);
  return log;
}

/// Creations in 0-10 s and 300-310 s.
inline EventLog two_chunks() {
  EventLog log;
  create_sequence(log, "NNENNENNENN", 0, kSec, "first-");
  create_sequence(log, "NNENNENNENN", 300 * kSec, kSec, "second-");
  return log;
}

// -- chaos -----------------------------------------------------------------

/// Scattered moves, interleaving between the aspect and flow thresholds,
/// and more than 40% moves plus deletes.
inline EventLog chaotic(std::string_view creation_labels = "NNEEENNN") {
  EventLog log;
  const auto ids = create_sequence(log, creation_labels, 0, kSec);
  std::vector<std::string> nodes, edges;
  for (const auto& id : ids) (id[0] == 'e' ? edges : nodes).push_back(id);
  const Millis phases[] = {9 * kMin, 24 * kMin, 36 * kMin, 54 * kMin};
  for (std::size_t i = 0; i < 4; ++i) move(log, nodes[i], phases[i]);
  add_event(log, make_event(edges[0], OperationKind::DeleteEdge, 30 * kMin));
  add_event(log, make_event(edges[1], OperationKind::DeleteEdge, kHour));
  return log;
}

/// The chaotic log with nodes created strictly before edges.
inline EventLog orderly() { return chaotic("NNNNNEEE"); }

struct Case {
  std::string name;
  std::function<EventLog()> fires;
  std::function<EventLog()> negated;
  std::function<bool(const EventLog&)> detector;
};

/// The twelve detector fixture pairs, evaluated under default thresholds.
inline std::vector<Case> all_cases() {
  const DetectorConfig cfg;
  return {
      {"delete-burst", delete_burst, scattered_deletes,
       [cfg](const EventLog& l) {
         return !detect_delete_bursts(l, cfg.delete_burst_window_ms, cfg.delete_burst_min_size).empty();
       }},
      {"pause", with_pause, steady,
       [cfg](const EventLog& l) { return !detect_pauses(l, cfg.pause_min_gap_ms).empty(); }},
      {"early-bound-moves", early_moves, end_phase_moves,
       [](const EventLog& l) { return classify_move_timing(l).timing == MoveTiming::EarlyBound; }},
      {"end-phase-moves", end_phase_moves, early_moves,
       [](const EventLog& l) { return classify_move_timing(l).timing == MoveTiming::EndPhase; }},
      {"scattered-moves", scattered_moves, clustered_moves,
       [](const EventLog& l) { return classify_move_timing(l).timing == MoveTiming::Scattered; }},
      {"aspect-oriented", aspect_oriented, flow_oriented,
       [](const EventLog& l) { return creation_orientation(l).orientation == Orientation::AspectOriented; }},
      {"flow-oriented", flow_oriented, aspect_oriented,
       [](const EventLog& l) { return creation_orientation(l).orientation == Orientation::FlowOriented; }},
      {"gateway-pairing-high", paired_gateways, unpaired_gateways,
       [cfg](const EventLog& l) {
         auto s = gateway_pairing_score(l);
         return s && *s >= cfg.gateway_paired_min;
       }},
      {"gateway-pairing-low", unpaired_gateways, paired_gateways,
       [cfg](const EventLog& l) {
         auto s = gateway_pairing_score(l);
         return s && *s < cfg.gateway_paired_min;
       }},
      {"single-chunk", one_chunk, two_chunks,
       [cfg](const EventLog& l) { return detect_chunks(l, cfg.chunk_pause_ms).size() == 1; }},
      {"multiple-chunks", two_chunks, one_chunk,
       [cfg](const EventLog& l) { return detect_chunks(l, cfg.chunk_pause_ms).size() > 1; }},
      {"chaos", [] { return chaotic(); }, orderly,
       [](const EventLog& l) { return profile_session(l).chaos_flag; }},
  };
}

}  // namespace ppmtest::patterns
