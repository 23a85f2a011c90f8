#pragma once

// Builds the timeline model behind a dotted chart: one timeline per model
// element, one styled dot per operation, with time transforms, sorting,
// filtering and gridlines applied according to a ChartConfig.

#include <algorithm>
#include <array>
#include <chrono>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppmchart/error.hpp"
#include "ppmchart/log_model.hpp"
#include "ppmchart/replay_graph.hpp"
#include "ppmchart/taxonomy.hpp"

namespace ppmchart {

enum class TimeOption { Actual, RelativeTime, RelativeRatio };

enum class TimeInterval {
  L1,
  L10,
  L100,
  L500,
  Seconds,
  Minutes,
  HalfHours,
  Hours,
  Days,
  Weeks,
  Months,
  Years,
};

enum class ColorBy { None, Operation };

enum class ShapeBy { None, ModelElement };

enum class SortBy {
  None,
  ModelElement,
  NumberOfOperations,
  Duration,
  DistanceFromStart,
  CreateOrderFromStart,
  FirstOperation,
  LastOperation,
};

namespace detail {
inline constexpr std::array<std::string_view, 3> kTimeOptionNames{"actual", "relative-time",
                                                                  "relative-ratio"};
inline constexpr std::array<std::string_view, 12> kTimeIntervalNames{
    "l1",      "l10",   "l100", "l500",  "seconds", "minutes",
    "half-hours", "hours", "days", "weeks", "months",  "years"};
inline constexpr std::array<std::string_view, 2> kColorByNames{"none", "operation"};
inline constexpr std::array<std::string_view, 2> kShapeByNames{"none", "model-element"};
inline constexpr std::array<std::string_view, 8> kSortByNames{
    "none",
    "model-element",
    "number-of-operations",
    "duration",
    "distance-from-start",
    "create-order-from-start",
    "first-operation",
    "last-operation"};

template <class Enum> struct EnumNames;
template <> struct EnumNames<TimeOption> { static constexpr const auto& names = kTimeOptionNames; };
template <> struct EnumNames<TimeInterval> { static constexpr const auto& names = kTimeIntervalNames; };
template <> struct EnumNames<ColorBy> { static constexpr const auto& names = kColorByNames; };
template <> struct EnumNames<ShapeBy> { static constexpr const auto& names = kShapeByNames; };
template <> struct EnumNames<SortBy> { static constexpr const auto& names = kSortByNames; };
}  // namespace detail

/// Kebab-case name of a chart option value, e.g. SortBy::FirstOperation -> "first-operation".
template <class Enum>
  requires requires { detail::EnumNames<Enum>::names; }
std::string_view to_string(Enum e) {
  return detail::EnumNames<Enum>::names[static_cast<std::size_t>(e)];
}

template <class Enum>
std::optional<Enum> option_from_string(std::string_view name) {
  const auto& names = detail::EnumNames<Enum>::names;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<Enum>(i);
  return std::nullopt;
}

template <class Enum>
constexpr std::size_t option_count() {
  return detail::EnumNames<Enum>::names.size();
}

struct FilterSpec {
  std::set<ElementKind> hide_element_kinds;
  std::set<OperationKind> hide_operation_kinds;
  std::set<OperationKind> hide_elements_with_operation;

  bool empty() const {
    return hide_element_kinds.empty() && hide_operation_kinds.empty() &&
           hide_elements_with_operation.empty();
  }
  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

inline constexpr Millis kDefaultWindowMs = kHourMs;

struct ChartConfig {
  TimeOption time_option = TimeOption::Actual;
  TimeInterval time_interval = TimeInterval::Hours;
  ColorBy color_by = ColorBy::Operation;
  ShapeBy shape_by = ShapeBy::ModelElement;
  SortBy sort_by = SortBy::DistanceFromStart;
  bool descending = false;
  Millis window_ms = kDefaultWindowMs;
  FilterSpec filters;
  std::map<OperationKind, DotStyle> style_overrides;

  void validate() const {
    if (window_ms <= 0) throw ConfigError("window_ms", "must be positive");
  }
  friend bool operator==(const ChartConfig&, const ChartConfig&) = default;
};

struct Dot {
  std::string element_id;
  OperationKind operation = OperationKind::CreateActivity;
  Millis t_actual = 0;
  Millis t_display = 0;
  DotStyle style;
  bool visible = true;
  /// t_display lies within [t0, t0 + window_ms].
  bool in_window = true;

  friend bool operator==(const Dot&, const Dot&) = default;
};

struct Timeline {
  std::string element_id;
  ElementKind kind = ElementKind::Activity;
  std::vector<Dot> dots;

  friend bool operator==(const Timeline&, const Timeline&) = default;
};

struct ChartNotice {
  std::string code;
  std::string message;

  friend bool operator==(const ChartNotice&, const ChartNotice&) = default;
};

struct LegendEntry {
  OperationKind kind;
  DotStyle style;

  friend bool operator==(const LegendEntry&, const LegendEntry&) = default;
};

struct ChartModel {
  std::vector<Timeline> timelines;
  Millis t0 = 0;
  Millis window_ms = kDefaultWindowMs;
  TimeOption time_option = TimeOption::Actual;
  TimeInterval time_interval = TimeInterval::Hours;
  std::vector<Millis> gridline_times;
  std::vector<LegendEntry> legend;
  std::vector<ChartNotice> notices;

  std::size_t visible_dot_count() const {
    std::size_t n = 0;
    for (const auto& t : timelines)
      for (const auto& d : t.dots) n += d.visible ? 1 : 0;
    return n;
  }
  friend bool operator==(const ChartModel&, const ChartModel&) = default;
};

// ---------------------------------------------------------------------------
// Pipeline stages

/// Display times for one line's dots, given sorted actual times. Relative
/// modes are 0-origin; ratio mode rounds to the nearest millisecond.
inline std::vector<Millis> transform_times(std::span<const Millis> sorted_times, TimeOption option,
                                           Millis window_ms) {
  std::vector<Millis> out(sorted_times.begin(), sorted_times.end());
  if (out.empty() || option == TimeOption::Actual) return out;
  const Millis first = sorted_times.front();
  const Millis last = sorted_times.back();
  for (auto& t : out) {
    if (option == TimeOption::RelativeTime) {
      t -= first;
    } else if (last == first) {
      t = 0;
    } else {
      const __int128 num = static_cast<__int128>(t - first) * window_ms;
      const __int128 den = last - first;
      t = static_cast<Millis>((2 * num + den) / (2 * den));
    }
  }
  return out;
}

struct SortOutcome {
  SortBy applied = SortBy::None;
  std::vector<ChartNotice> notices;
};

/// Stable sort of timelines. Graph-based sorts need `graph`; when it is
/// absent or has no start node they fall back to FirstOperation with a notice.
inline SortOutcome sort_timelines(std::vector<Timeline>& timelines, SortBy sort_by, bool descending,
                                  const ModelGraph* graph) {
  SortOutcome outcome{sort_by, {}};
  std::map<std::string, double> rank;
  if (sort_by == SortBy::DistanceFromStart || sort_by == SortBy::CreateOrderFromStart) {
    try {
      if (!graph) throw OrderingUnavailable("model graph unavailable");
      const ElementOrder order = sort_by == SortBy::DistanceFromStart
                                     ? distance_from_start(*graph)
                                     : create_order_from_start(*graph);
      if (order.unit_length_fallback) {
        outcome.notices.push_back(
            {"fallback: unit-length",
             "node positions missing; arc lengths treated as 1 (hop count)"});
      }
      for (const auto& e : order.elements) rank[e.element_id] = e.rank;
    } catch (const OrderingUnavailable& e) {
      outcome.applied = SortBy::FirstOperation;
      outcome.notices.push_back({"fallback: first-operation", e.what()});
    }
  }

  // Sort keys are numeric except for ModelElement.
  auto key = [&](const Timeline& t, std::size_t original) -> double {
    switch (outcome.applied) {
      case SortBy::None:
      case SortBy::ModelElement:
        return static_cast<double>(original);
      case SortBy::NumberOfOperations:
        return static_cast<double>(t.dots.size());
      case SortBy::Duration:
        return t.dots.empty() ? 0.0
                              : static_cast<double>(t.dots.back().t_actual - t.dots.front().t_actual);
      case SortBy::DistanceFromStart:
      case SortBy::CreateOrderFromStart: {
        auto it = rank.find(t.element_id);
        return it == rank.end() ? kUnranked : it->second;
      }
      case SortBy::FirstOperation:
        return t.dots.empty() ? kUnranked : static_cast<double>(t.dots.front().t_actual);
      case SortBy::LastOperation:
        return t.dots.empty() ? kUnranked : static_cast<double>(t.dots.back().t_actual);
    }
    return 0.0;
  };

  struct Keyed {
    double key;
    std::size_t original;
    Timeline* line;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(timelines.size());
  for (std::size_t i = 0; i < timelines.size(); ++i)
    keyed.push_back({key(timelines[i], i), i, &timelines[i]});

  const bool by_name = outcome.applied == SortBy::ModelElement;
  std::stable_sort(keyed.begin(), keyed.end(), [&](const Keyed& a, const Keyed& b) {
    if (by_name) {
      return descending ? b.line->element_id < a.line->element_id
                        : a.line->element_id < b.line->element_id;
    }
    return descending ? b.key < a.key : a.key < b.key;
  });

  std::vector<Timeline> sorted;
  sorted.reserve(timelines.size());
  for (auto& k : keyed) sorted.push_back(std::move(*k.line));
  timelines = std::move(sorted);
  return outcome;
}

/// Sets dot visibility; never removes timelines or dots.
inline void apply_filters(std::vector<Timeline>& timelines, const FilterSpec& filters) {
  for (auto& line : timelines) {
    const bool hide_kind = filters.hide_element_kinds.count(line.kind) > 0;
    const bool hide_line = std::any_of(line.dots.begin(), line.dots.end(), [&](const Dot& d) {
      return filters.hide_elements_with_operation.count(d.operation) > 0;
    });
    for (auto& d : line.dots) {
      d.visible = !hide_kind && !hide_line && filters.hide_operation_kinds.count(d.operation) == 0;
    }
  }
}

namespace detail {

inline Millis ceil_to(Millis t, Millis origin, Millis step) {
  const Millis k = floor_div(t - origin + step - 1, step);
  return origin + k * step;
}

inline Millis month_start(std::chrono::year_month ym) {
  using namespace std::chrono;
  return sys_days{ym / day{1}}.time_since_epoch().count() * kDayMs;
}

}  // namespace detail

inline Millis interval_step_ms(TimeInterval interval) {
  switch (interval) {
    case TimeInterval::L1: return 1;
    case TimeInterval::L10: return 10;
    case TimeInterval::L100: return 100;
    case TimeInterval::L500: return 500;
    case TimeInterval::Seconds: return kSecondMs;
    case TimeInterval::Minutes: return kMinuteMs;
    case TimeInterval::HalfHours: return 30 * kMinuteMs;
    case TimeInterval::Hours: return kHourMs;
    case TimeInterval::Days: return kDayMs;
    case TimeInterval::Weeks: return 7 * kDayMs;
    case TimeInterval::Months: return 28 * kDayMs;
    case TimeInterval::Years: return 365 * kDayMs;
  }
  return kHourMs;
}

/// Upper bound on the number of gridlines for a window; exact for the
/// fixed-length intervals.
inline Millis gridline_count_bound(Millis window_ms, TimeInterval interval) {
  return window_ms / interval_step_ms(interval) + 2;
}

/// Gridline times within [t0, t0 + window_ms]. Millisecond intervals are
/// anchored at t0; the others fall on UTC calendar boundaries (weeks start
/// on Monday).
inline std::vector<Millis> gridlines(Millis t0, Millis window_ms, TimeInterval interval) {
  using namespace std::chrono;
  std::vector<Millis> out;
  const Millis end = t0 + window_ms;
  switch (interval) {
    case TimeInterval::L1:
    case TimeInterval::L10:
    case TimeInterval::L100:
    case TimeInterval::L500: {
      const Millis step = interval_step_ms(interval);
      for (Millis t = t0; t <= end; t += step) out.push_back(t);
      break;
    }
    case TimeInterval::Seconds:
    case TimeInterval::Minutes:
    case TimeInterval::HalfHours:
    case TimeInterval::Hours:
    case TimeInterval::Days:
    case TimeInterval::Weeks: {
      const Millis step = interval_step_ms(interval);
      // 1970-01-05 was a Monday.
      const Millis origin = interval == TimeInterval::Weeks ? 4 * kDayMs : 0;
      for (Millis t = detail::ceil_to(t0, origin, step); t <= end; t += step) out.push_back(t);
      break;
    }
    case TimeInterval::Months: {
      const year_month_day ymd{sys_days{days{detail::floor_div(t0, kDayMs)}}};
      for (year_month ym = ymd.year() / ymd.month();; ym += months{1}) {
        const Millis t = detail::month_start(ym);
        if (t > end) break;
        if (t >= t0) out.push_back(t);
      }
      break;
    }
    case TimeInterval::Years: {
      const year_month_day ymd{sys_days{days{detail::floor_div(t0, kDayMs)}}};
      for (year y = ymd.year();; ++y) {
        const Millis t = detail::month_start(y / January);
        if (t > end) break;
        if (t >= t0) out.push_back(t);
      }
      break;
    }
  }
  return out;
}

/// Style of a dot after overrides and the color/shape toggles.
inline DotStyle effective_style(OperationKind kind, const ChartConfig& config) {
  auto it = config.style_overrides.find(kind);
  DotStyle style = it != config.style_overrides.end() ? it->second : default_style(kind);
  if (config.color_by == ColorBy::None) style.color = palette::kMidGrey;
  if (config.shape_by == ShapeBy::None) style.shape = Shape::Circle;
  return style;
}

/// Refuses to materialise more gridlines than this; the chart gets a notice instead.
inline constexpr Millis kMaxGridlines = 20000;

/// Full pipeline: classify, style, transform, sort, filter. `graph` may be
/// null, in which case graph-based sorts fall back to FirstOperation.
/// Throws ConfigError for an invalid config and ClassifyError for unknown operations.
inline ChartModel build_chart(const EventLog& log, const ModelGraph* graph,
                              const ChartConfig& config) {
  config.validate();
  ChartModel chart;
  chart.window_ms = config.window_ms;
  chart.time_option = config.time_option;
  chart.time_interval = config.time_interval;

  Millis earliest = 0;
  bool any = false;
  chart.timelines.reserve(log.traces.size());
  for (const auto& trace : log.traces) {
    Timeline line;
    line.element_id = trace.element_id;
    for (const auto& ev : trace.events) {
      const Classification c = classify(ev.name);
      if (line.dots.empty()) line.kind = c.element;
      line.dots.push_back({trace.element_id, c.kind, ev.timestamp, ev.timestamp,
                           effective_style(c.kind, config), true, true});
      if (!any || ev.timestamp < earliest) earliest = ev.timestamp;
      any = true;
    }
    std::stable_sort(line.dots.begin(), line.dots.end(),
                     [](const Dot& a, const Dot& b) { return a.t_actual < b.t_actual; });
    std::vector<Millis> times;
    times.reserve(line.dots.size());
    for (const auto& d : line.dots) times.push_back(d.t_actual);
    const auto display = transform_times(times, config.time_option, config.window_ms);
    for (std::size_t i = 0; i < line.dots.size(); ++i) line.dots[i].t_display = display[i];
    chart.timelines.push_back(std::move(line));
  }

  chart.t0 = config.time_option == TimeOption::Actual ? earliest : 0;
  for (auto& line : chart.timelines)
    for (auto& d : line.dots)
      d.in_window = d.t_display >= chart.t0 && d.t_display <= chart.t0 + config.window_ms;

  SortOutcome sorted = sort_timelines(chart.timelines, config.sort_by, config.descending, graph);
  chart.notices = std::move(sorted.notices);
  apply_filters(chart.timelines, config.filters);

  if (gridline_count_bound(config.window_ms, config.time_interval) > kMaxGridlines) {
    chart.notices.push_back({"gridlines-omitted", "time interval '" +
                                                      std::string(to_string(config.time_interval)) +
                                                      "' is too fine for the window"});
  } else {
    chart.gridline_times = gridlines(chart.t0, config.window_ms, config.time_interval);
  }

  chart.legend.reserve(kOperationKindCount);
  for (OperationKind k : all_operation_kinds()) chart.legend.push_back({k, effective_style(k, config)});
  return chart;
}

/// Replays the log first. A log that cannot be replayed still charts, with
/// graph-based sorts falling back and a notice explaining why.
inline ChartModel build_chart(const EventLog& log, const ChartConfig& config) {
  std::optional<ModelGraph> graph;
  std::optional<ChartNotice> replay_notice;
  try {
    graph = replay(log).graph;
  } catch (const ReplayError& e) {
    replay_notice = ChartNotice{"replay-failed", e.what()};
  }
  ChartModel chart = build_chart(log, graph ? &*graph : nullptr, config);
  if (replay_notice) chart.notices.insert(chart.notices.begin(), *replay_notice);
  return chart;
}

}  // namespace ppmchart
