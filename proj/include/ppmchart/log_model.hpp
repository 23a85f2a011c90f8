#pragma once

// In-memory event log of one modeling session: one trace per model element,
// each trace an ordered list of timestamped operations on that element.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppmchart/taxonomy.hpp"
#include "ppmchart/time.hpp"

namespace ppmchart {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct LogEvent {
  std::string name;
  Millis timestamp = 0;
  std::string element_id;
  std::optional<Point> position;
  std::optional<std::string> edge_source;
  std::optional<std::string> edge_target;
  std::optional<std::string> label_text;
  /// Attributes outside the recognised subset; kept for round trips, ignored downstream.
  std::map<std::string, std::string> extra;

  friend bool operator==(const LogEvent&, const LogEvent&) = default;
};

struct ElementTrace {
  std::string element_id;
  std::vector<LogEvent> events;

  friend bool operator==(const ElementTrace&, const ElementTrace&) = default;
};

struct EventLog {
  std::string log_id;
  std::vector<ElementTrace> traces;
  std::map<std::string, std::string> source_meta;

  friend bool operator==(const EventLog&, const EventLog&) = default;

  std::size_t event_count() const {
    std::size_t n = 0;
    for (const auto& t : traces) n += t.events.size();
    return n;
  }

  const ElementTrace* find_trace(const std::string& id) const {
    for (const auto& t : traces)
      if (t.element_id == id) return &t;
    return nullptr;
  }
};

/// Reference to one event by (trace index, event index) in log order.
struct EventRef {
  std::size_t trace = 0;
  std::size_t event = 0;
};

/// All events sorted by timestamp; ties keep log order (trace, then event).
inline std::vector<EventRef> global_event_order(const EventLog& log) {
  std::vector<EventRef> refs;
  refs.reserve(log.event_count());
  for (std::size_t t = 0; t < log.traces.size(); ++t)
    for (std::size_t e = 0; e < log.traces[t].events.size(); ++e) refs.push_back({t, e});
  std::stable_sort(refs.begin(), refs.end(), [&](const EventRef& a, const EventRef& b) {
    return log.traces[a.trace].events[a.event].timestamp <
           log.traces[b.trace].events[b.event].timestamp;
  });
  return refs;
}

inline const LogEvent& at(const EventLog& log, const EventRef& r) {
  return log.traces[r.trace].events[r.event];
}

enum class Severity { Warn, Error };

inline std::string_view to_string(Severity s) { return s == Severity::Warn ? "warn" : "error"; }

struct ValidationFinding {
  Severity severity = Severity::Warn;
  std::string code;
  std::optional<std::string> element_id;
  std::string message;

  friend bool operator==(const ValidationFinding&, const ValidationFinding&) = default;
};

/// Structural checks on a parsed log. Findings are data; nothing throws.
///
/// - `first-op-not-create`: a trace does not start with a creation.
/// - `op-after-delete`: an event follows a delete of the same element.
/// - `edge-missing-endpoints`: an edge creation lacks source or target.
/// - `unknown-operation`: an event name outside the vocabulary (error).
/// - `mixed-element-kinds`: one trace holds operations for different element kinds.
inline std::vector<ValidationFinding> validate_log(const EventLog& log) {
  std::vector<ValidationFinding> out;
  for (const auto& trace : log.traces) {
    const std::string& id = trace.element_id;
    std::optional<ElementKind> kind;
    bool deleted = false;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
      const LogEvent& ev = trace.events[i];
      auto op = operation_from_string(ev.name);
      if (!op) {
        out.push_back({Severity::Error, "unknown-operation", id,
                       "operation '" + ev.name + "' is not in the vocabulary"});
        continue;
      }
      const auto cat = category_of(*op);
      if (i == 0 && cat != OperationCategory::Create)
        out.push_back({Severity::Warn, "first-op-not-create", id,
                       "first operation is " + ev.name + ", expected a creation"});
      if (deleted)
        out.push_back({Severity::Warn, "op-after-delete", id,
                       ev.name + " recorded after the element was deleted"});
      if (cat == OperationCategory::Delete) deleted = true;
      if (*op == OperationKind::CreateEdge && (!ev.edge_source || !ev.edge_target))
        out.push_back({Severity::Warn, "edge-missing-endpoints", id,
                       "edge created without source/target; graph-based sorts degrade"});
      if (!kind) {
        kind = element_of(*op);
      } else if (*kind != element_of(*op)) {
        out.push_back({Severity::Warn, "mixed-element-kinds", id,
                       ev.name + " does not match element kind " + std::string(to_string(*kind))});
      }
    }
  }
  return out;
}

/// Element kind of a trace, taken from its first recognised operation.
inline std::optional<ElementKind> trace_kind(const ElementTrace& trace) {
  for (const auto& ev : trace.events)
    if (auto op = operation_from_string(ev.name)) return element_of(*op);
  return std::nullopt;
}

}  // namespace ppmchart
