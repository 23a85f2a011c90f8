#pragma once

// JSON encodings shared by the CLI and the HTTP service. Keys are
// snake_case; enumerated option values are kebab-case; operation names are
// the literal vocabulary names.

#include <json.hpp>

#include <string>
#include <vector>

#include "ppmchart/analytics.hpp"
#include "ppmchart/chart_engine.hpp"
#include "ppmchart/error.hpp"
#include "ppmchart/log_io.hpp"
#include "ppmchart/log_model.hpp"
#include "ppmchart/renderer.hpp"
#include "ppmchart/taxonomy.hpp"

namespace ppmchart {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& require_type(const Json& j, Json::value_t type, const std::string& field,
                                const char* expected) {
  const bool ok = type == Json::value_t::number_float ? j.is_number()
                  : type == Json::value_t::number_integer
                      ? (j.is_number_integer() || j.is_number_unsigned())
                      : j.type() == type;
  if (!ok) throw ConfigError(field, std::string("expected ") + expected);
  return j;
}

inline std::string require_string(const Json& j, const std::string& field) {
  return require_type(j, Json::value_t::string, field, "a string").get<std::string>();
}

template <class Enum>
Enum require_option(const Json& j, const std::string& field) {
  const std::string name = require_string(j, field);
  auto v = option_from_string<Enum>(name);
  if (!v) throw ConfigError(field, "unknown value '" + name + "'");
  return *v;
}

inline OperationKind require_operation(const Json& j, const std::string& field) {
  const std::string name = require_string(j, field);
  auto v = operation_from_string(name);
  if (!v) throw ConfigError(field, "unknown operation '" + name + "'");
  return *v;
}

inline ElementKind require_element(const Json& j, const std::string& field) {
  const std::string name = require_string(j, field);
  auto v = element_kind_from_string(name);
  if (!v) throw ConfigError(field, "unknown element kind '" + name + "'");
  return *v;
}

template <class Fn>
void each_object_field(const Json& j, const std::string& where, Fn&& fn) {
  if (!j.is_object()) throw ConfigError(where.empty() ? "config" : where, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string field = where.empty() ? it.key() : where + "." + it.key();
    if (!fn(it.key(), it.value(), field)) throw ConfigError(field, "unknown field");
  }
}

template <class Fn>
void each_array_item(const Json& j, const std::string& field, Fn&& fn) {
  if (!j.is_array()) throw ConfigError(field, "expected an array");
  for (std::size_t i = 0; i < j.size(); ++i) fn(j[i], field + "[" + std::to_string(i) + "]");
}

inline Millis require_positive_int(const Json& j, const std::string& field) {
  require_type(j, Json::value_t::number_integer, field, "an integer");
  const auto v = j.get<long long>();
  if (v <= 0) throw ConfigError(field, "must be positive");
  return v;
}

inline double require_positive(const Json& j, const std::string& field) {
  require_type(j, Json::value_t::number_float, field, "a number");
  const double v = j.get<double>();
  if (!(v > 0)) throw ConfigError(field, "must be positive");
  return v;
}

inline bool require_bool(const Json& j, const std::string& field) {
  return require_type(j, Json::value_t::boolean, field, "a boolean").get<bool>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ChartConfig

inline Json to_json(const DotStyle& s) { return Json{{"color", s.color.hex()}, {"shape", to_string(s.shape)}}; }

inline Json to_json(const ChartConfig& c) {
  Json filters = Json::object();
  Json kinds = Json::array(), ops = Json::array(), with_ops = Json::array();
  for (auto k : c.filters.hide_element_kinds) kinds.push_back(to_string(k));
  for (auto k : c.filters.hide_operation_kinds) ops.push_back(to_string(k));
  for (auto k : c.filters.hide_elements_with_operation) with_ops.push_back(to_string(k));
  filters["hide_element_kinds"] = kinds;
  filters["hide_operations"] = ops;
  filters["hide_elements_with_operations"] = with_ops;
  Json overrides = Json::object();
  for (const auto& [k, s] : c.style_overrides) overrides[std::string(to_string(k))] = to_json(s);
  return Json{{"time_option", to_string(c.time_option)},
              {"time_interval", to_string(c.time_interval)},
              {"color_by", to_string(c.color_by)},
              {"shape_by", to_string(c.shape_by)},
              {"sort_by", to_string(c.sort_by)},
              {"descending", c.descending},
              {"window_ms", c.window_ms},
              {"filters", filters},
              {"style_overrides", overrides}};
}

/// Applies the fields present in `j` on top of `base`. Throws ConfigError naming the bad field.
inline ChartConfig chart_config_from_json(const Json& j, ChartConfig base = {},
                                          const std::string& where = "") {
  using namespace detail;
  each_object_field(j, where, [&](const std::string& key, const Json& v, const std::string& field) {
    if (key == "time_option") base.time_option = require_option<TimeOption>(v, field);
    else if (key == "time_interval") base.time_interval = require_option<TimeInterval>(v, field);
    else if (key == "color_by") base.color_by = require_option<ColorBy>(v, field);
    else if (key == "shape_by") base.shape_by = require_option<ShapeBy>(v, field);
    else if (key == "sort_by") base.sort_by = require_option<SortBy>(v, field);
    else if (key == "descending") base.descending = require_bool(v, field);
    else if (key == "window_ms") base.window_ms = require_positive_int(v, field);
    else if (key == "filters") {
      each_object_field(v, field, [&](const std::string& fkey, const Json& fv, const std::string& ff) {
        if (fkey == "hide_element_kinds") {
          base.filters.hide_element_kinds.clear();
          each_array_item(fv, ff, [&](const Json& item, const std::string& f) {
            base.filters.hide_element_kinds.insert(require_element(item, f));
          });
        } else if (fkey == "hide_operations") {
          base.filters.hide_operation_kinds.clear();
          each_array_item(fv, ff, [&](const Json& item, const std::string& f) {
            base.filters.hide_operation_kinds.insert(require_operation(item, f));
          });
        } else if (fkey == "hide_elements_with_operations") {
          base.filters.hide_elements_with_operation.clear();
          each_array_item(fv, ff, [&](const Json& item, const std::string& f) {
            base.filters.hide_elements_with_operation.insert(require_operation(item, f));
          });
        } else {
          return false;
        }
        return true;
      });
    } else if (key == "style_overrides") {
      base.style_overrides.clear();
      each_object_field(v, field, [&](const std::string& op_name, const Json& sv, const std::string& sf) {
        auto op = operation_from_string(op_name);
        if (!op) throw ConfigError(sf, "unknown operation '" + op_name + "'");
        DotStyle style = default_style(*op);
        each_object_field(sv, sf, [&](const std::string& skey, const Json& s, const std::string& f) {
          if (skey == "color") {
            auto rgb = Rgb::from_hex(require_string(s, f));
            if (!rgb) throw ConfigError(f, "expected a #rrggbb color");
            style.color = *rgb;
          } else if (skey == "shape") {
            auto shape = shape_from_string(require_string(s, f));
            if (!shape) throw ConfigError(f, "expected square, circle, diamond or triangle");
            style.shape = *shape;
          } else {
            return false;
          }
          return true;
        });
        base.style_overrides[*op] = style;
        return true;
      });
    } else {
      return false;
    }
    return true;
  });
  return base;
}

// ---------------------------------------------------------------------------
// RenderOptions

inline Json to_json(const RenderOptions& o) {
  return Json{{"canvas_width", o.canvas_width}, {"canvas_height", o.canvas_height},
              {"dot_size", o.dot_size},         {"show_labels", o.show_labels},
              {"show_legend", o.show_legend},   {"zoom_x", o.zoom_x},
              {"zoom_y", o.zoom_y}};
}

inline RenderOptions render_options_from_json(const Json& j, RenderOptions base = {},
                                              const std::string& where = "") {
  using namespace detail;
  each_object_field(j, where, [&](const std::string& key, const Json& v, const std::string& field) {
    if (key == "canvas_width") base.canvas_width = require_positive(v, field);
    else if (key == "canvas_height") base.canvas_height = require_positive(v, field);
    else if (key == "dot_size") base.dot_size = require_positive(v, field);
    else if (key == "show_labels") base.show_labels = require_bool(v, field);
    else if (key == "show_legend") base.show_legend = require_bool(v, field);
    else if (key == "zoom_x") base.zoom_x = require_positive(v, field);
    else if (key == "zoom_y") base.zoom_y = require_positive(v, field);
    else return false;
    return true;
  });
  return base;
}

// ---------------------------------------------------------------------------
// DetectorConfig

inline Json to_json(const DetectorConfig& c) {
  return Json{{"pause_min_gap_ms", c.pause_min_gap_ms},
              {"delete_burst_window_ms", c.delete_burst_window_ms},
              {"delete_burst_min_size", c.delete_burst_min_size},
              {"move_few_ratio", c.move_few_ratio},
              {"move_early_lag_fraction", c.move_early_lag_fraction},
              {"move_early_share", c.move_early_share},
              {"move_end_phase", c.move_end_phase},
              {"move_end_share", c.move_end_share},
              {"move_scattered_min_quartiles", c.move_scattered_min_quartiles},
              {"aspect_max_score", c.aspect_max_score},
              {"aspect_min_nodes_before_edges", c.aspect_min_nodes_before_edges},
              {"flow_min_score", c.flow_min_score},
              {"gateway_paired_min", c.gateway_paired_min},
              {"chunk_pause_ms", c.chunk_pause_ms},
              {"chaos_min_move_delete", c.chaos_min_move_delete}};
}

inline DetectorConfig detector_config_from_json(const Json& j, DetectorConfig base = {},
                                                const std::string& where = "") {
  using namespace detail;
  auto fraction = [](const Json& v, const std::string& field) {
    require_type(v, Json::value_t::number_float, field, "a number");
    const double d = v.get<double>();
    if (!(d >= 0.0 && d <= 1.0)) throw ConfigError(field, "must lie in [0, 1]");
    return d;
  };
  auto count = [](const Json& v, const std::string& field) {
    return static_cast<std::size_t>(require_positive_int(v, field));
  };
  each_object_field(j, where, [&](const std::string& key, const Json& v, const std::string& field) {
    if (key == "pause_min_gap_ms") base.pause_min_gap_ms = require_positive_int(v, field);
    else if (key == "delete_burst_window_ms") base.delete_burst_window_ms = require_positive_int(v, field);
    else if (key == "delete_burst_min_size") base.delete_burst_min_size = count(v, field);
    else if (key == "move_few_ratio") base.move_few_ratio = fraction(v, field);
    else if (key == "move_early_lag_fraction") base.move_early_lag_fraction = fraction(v, field);
    else if (key == "move_early_share") base.move_early_share = fraction(v, field);
    else if (key == "move_end_phase") base.move_end_phase = fraction(v, field);
    else if (key == "move_end_share") base.move_end_share = fraction(v, field);
    else if (key == "move_scattered_min_quartiles") base.move_scattered_min_quartiles = count(v, field);
    else if (key == "aspect_max_score") base.aspect_max_score = fraction(v, field);
    else if (key == "aspect_min_nodes_before_edges") base.aspect_min_nodes_before_edges = fraction(v, field);
    else if (key == "flow_min_score") base.flow_min_score = fraction(v, field);
    else if (key == "gateway_paired_min") base.gateway_paired_min = fraction(v, field);
    else if (key == "chunk_pause_ms") base.chunk_pause_ms = require_positive_int(v, field);
    else if (key == "chaos_min_move_delete") base.chaos_min_move_delete = require_positive(v, field);
    else return false;
    return true;
  });
  return base;
}

// ---------------------------------------------------------------------------
// Outputs

inline Json to_json(const ChartNotice& n) { return Json{{"code", n.code}, {"message", n.message}}; }

inline Json to_json(const ChartModel& chart) {
  Json timelines = Json::array();
  for (const auto& line : chart.timelines) {
    Json dots = Json::array();
    for (const auto& d : line.dots) {
      dots.push_back(Json{{"operation", to_string(d.operation)},
                          {"t_actual", d.t_actual},
                          {"t_display", d.t_display},
                          {"style", to_json(d.style)},
                          {"visible", d.visible},
                          {"in_window", d.in_window}});
    }
    timelines.push_back(Json{{"element_id", line.element_id}, {"kind", to_string(line.kind)}, {"dots", dots}});
  }
  Json legend = Json::array();
  for (const auto& e : chart.legend)
    legend.push_back(Json{{"operation", to_string(e.kind)}, {"style", to_json(e.style)}});
  Json notices = Json::array();
  for (const auto& n : chart.notices) notices.push_back(to_json(n));
  return Json{{"t0", chart.t0},
              {"window_ms", chart.window_ms},
              {"time_option", to_string(chart.time_option)},
              {"time_interval", to_string(chart.time_interval)},
              {"gridline_times", chart.gridline_times},
              {"timelines", timelines},
              {"legend", legend},
              {"notices", notices}};
}

inline Json to_json(const ValidationFinding& f) {
  Json j{{"severity", to_string(f.severity)}, {"code", f.code}};
  j["element_id"] = f.element_id ? Json(*f.element_id) : Json(nullptr);
  j["message"] = f.message;
  return j;
}

inline Json to_json(const std::vector<ValidationFinding>& findings) {
  Json out = Json::array();
  for (const auto& f : findings) out.push_back(to_json(f));
  return out;
}

inline Json to_json(const ParseWarning& w) {
  return Json{{"code", w.code}, {"element_id", w.element_id}, {"message", w.message}};
}

inline Json legend_json() {
  Json rows = Json::array();
  for (const auto& row : legend_table()) {
    rows.push_back(Json{{"name", to_string(row.kind)},
                        {"element", to_string(row.element)},
                        {"category", to_string(row.category)},
                        {"shape", to_string(row.style.shape)},
                        {"rgb", row.style.color.hex()}});
  }
  return rows;
}

inline Json to_json(const SessionProfile& p) {
  Json counts = Json::object();
  for (std::size_t i = 0; i < kOperationCategoryCount; ++i)
    counts[std::string(to_string(static_cast<OperationCategory>(i)))] = p.metrics.category_counts[i];
  Json pauses = Json::array();
  for (const auto& x : p.pause_intervals) pauses.push_back(Json{{"start", x.start}, {"end", x.end}});
  Json bursts = Json::array();
  for (const auto& b : p.delete_bursts)
    bursts.push_back(Json{{"start", b.start}, {"end", b.end}, {"size", b.size}});
  Json chunks = Json::array();
  for (const auto& c : p.chunks) {
    Json kinds = Json::object();
    for (std::size_t i = 0; i < kElementKindCount; ++i)
      kinds[std::string(to_string(static_cast<ElementKind>(i)))] = c.by_kind[i];
    chunks.push_back(Json{{"start", c.start}, {"end", c.end}, {"create_count", c.create_count}, {"by_kind", kinds}});
  }
  const auto& ev = p.move_timing.evidence;
  return Json{
      {"log_id", p.log_id},
      {"total_operations", p.metrics.total_operations},
      {"duration_ms", p.metrics.duration_ms},
      {"element_count", p.metrics.element_count},
      {"category_counts", counts},
      {"move_ratio", p.metrics.move_ratio},
      {"delete_ratio", p.metrics.delete_ratio},
      {"rename_ratio", p.metrics.rename_ratio},
      {"pause_intervals", pauses},
      {"delete_bursts", bursts},
      {"move_timing_class", to_string(p.move_timing.timing)},
      {"move_timing_evidence",
       Json{{"move_count", ev.move_count},
            {"create_count", ev.create_count},
            {"early_share", ev.early_share},
            {"end_share", ev.end_share},
            {"quartiles_touched", ev.quartiles_touched}}},
      {"orientation", to_string(p.orientation.orientation)},
      {"interleaving_score", p.orientation.interleaving_score},
      {"gateway_pairing_score", p.gateway_pairing_score ? Json(*p.gateway_pairing_score) : Json(nullptr)},
      {"chunks", chunks},
      {"chaos_flag", p.chaos_flag}};
}

inline std::string profile_csv_header() {
  std::string h = "log_id,total_operations,duration_ms,element_count";
  for (std::size_t i = 0; i < kOperationCategoryCount; ++i)
    h += ",count_" + std::string(to_string(static_cast<OperationCategory>(i)));
  h += ",move_ratio,delete_ratio,rename_ratio,pause_count,delete_burst_count,move_timing_class,"
       "orientation,interleaving_score,gateway_pairing_score,chunk_count,chaos_flag";
  return h;
}

/// One line, no trailing newline; matches profile_csv_header().
inline std::string profile_csv_row(const SessionProfile& p) {
  auto real = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  std::string row;
  detail::csv_field(row, p.log_id);
  row += "," + std::to_string(p.metrics.total_operations) + "," + std::to_string(p.metrics.duration_ms) +
         "," + std::to_string(p.metrics.element_count);
  for (auto c : p.metrics.category_counts) row += "," + std::to_string(c);
  row += "," + real(p.metrics.move_ratio) + "," + real(p.metrics.delete_ratio) + "," +
         real(p.metrics.rename_ratio) + "," + std::to_string(p.pause_intervals.size()) + "," +
         std::to_string(p.delete_bursts.size()) + "," + std::string(to_string(p.move_timing.timing)) +
         "," + std::string(to_string(p.orientation.orientation)) + "," +
         real(p.orientation.interleaving_score) + "," +
         (p.gateway_pairing_score ? real(*p.gateway_pairing_score) : std::string()) + "," +
         std::to_string(p.chunks.size()) + "," + (p.chaos_flag ? "true" : "false");
  return row;
}

}  // namespace ppmchart
