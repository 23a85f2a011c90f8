#pragma once

// JSON Schemas (draft 2020-12) for the documents exchanged with clients.
// Enumerations are generated from the same tables the parsers use.

#include "ppmchart/json.hpp"

namespace ppmchart::schemas {

namespace detail {

template <class Enum>
Json option_enum() {
  Json values = Json::array();
  for (std::size_t i = 0; i < option_count<Enum>(); ++i) values.push_back(to_string(static_cast<Enum>(i)));
  return Json{{"type", "string"}, {"enum", values}};
}

inline Json operation_enum() {
  Json values = Json::array();
  for (auto k : all_operation_kinds()) values.push_back(to_string(k));
  return Json{{"type", "string"}, {"enum", values}};
}

inline Json element_enum() {
  Json values = Json::array();
  for (auto k : all_element_kinds()) values.push_back(to_string(k));
  return Json{{"type", "string"}, {"enum", values}};
}

inline Json array_of(Json item) { return Json{{"type", "array"}, {"items", std::move(item)}, {"uniqueItems", true}}; }

inline Json number(double min_exclusive) {
  return Json{{"type", "number"}, {"exclusiveMinimum", min_exclusive}};
}

}  // namespace detail

inline Json chart_config() {
  using namespace detail;
  Json style{{"type", "object"},
             {"additionalProperties", false},
             {"properties",
              {{"color", {{"type", "string"}, {"pattern", "^#[0-9a-fA-F]{6}$"}}},
               {"shape", {{"type", "string"}, {"enum", {"square", "circle", "diamond", "triangle"}}}}}}};
  Json overrides_props = Json::object();
  for (auto k : all_operation_kinds()) overrides_props[std::string(to_string(k))] = style;
  return Json{
      {"$schema", "https://json-schema.org/draft/2020-12/schema"},
      {"$id", "ppmchart/chart-config"},
      {"title", "ChartConfig"},
      {"type", "object"},
      {"additionalProperties", false},
      {"properties",
       {{"time_option", option_enum<TimeOption>()},
        {"time_interval", option_enum<TimeInterval>()},
        {"color_by", option_enum<ColorBy>()},
        {"shape_by", option_enum<ShapeBy>()},
        {"sort_by", option_enum<SortBy>()},
        {"descending", {{"type", "boolean"}}},
        {"window_ms", {{"type", "integer"}, {"minimum", 1}, {"default", kDefaultWindowMs}}},
        {"filters",
         {{"type", "object"},
          {"additionalProperties", false},
          {"properties",
           {{"hide_element_kinds", array_of(element_enum())},
            {"hide_operations", array_of(operation_enum())},
            {"hide_elements_with_operations", array_of(operation_enum())}}}}},
        {"style_overrides",
         {{"type", "object"}, {"additionalProperties", false}, {"properties", overrides_props}}}}}};
}

inline Json render_options() {
  using namespace detail;
  return Json{{"$schema", "https://json-schema.org/draft/2020-12/schema"},
              {"$id", "ppmchart/render-options"},
              {"title", "RenderOptions"},
              {"type", "object"},
              {"additionalProperties", false},
              {"properties",
               {{"canvas_width", number(0)},
                {"canvas_height", number(0)},
                {"dot_size", number(0)},
                {"show_labels", {{"type", "boolean"}}},
                {"show_legend", {{"type", "boolean"}}},
                {"zoom_x", number(0)},
                {"zoom_y", number(0)}}}};
}

inline Json detector_config() {
  Json props = Json::object();
  const Json defaults = to_json(DetectorConfig{});
  for (const auto& it : defaults.items()) {
    const bool integer = it.value().is_number_integer() || it.value().is_number_unsigned();
    props[it.key()] = integer ? Json{{"type", "integer"}, {"minimum", 1}, {"default", it.value()}}
                              : Json{{"type", "number"}, {"minimum", 0}, {"default", it.value()}};
  }
  return Json{{"$schema", "https://json-schema.org/draft/2020-12/schema"},
              {"$id", "ppmchart/detector-config"},
              {"title", "DetectorConfig"},
              {"type", "object"},
              {"additionalProperties", false},
              {"properties", props}};
}

inline Json findings() {
  return Json{
      {"$schema", "https://json-schema.org/draft/2020-12/schema"},
      {"$id", "ppmchart/findings"},
      {"title", "ValidationFindings"},
      {"type", "array"},
      {"items",
       {{"type", "object"},
        {"required", {"severity", "code", "element_id", "message"}},
        {"properties",
         {{"severity", {{"type", "string"}, {"enum", {"warn", "error"}}}},
          {"code",
           {{"type", "string"},
            {"enum",
             {"first-op-not-create", "op-after-delete", "edge-missing-endpoints", "unknown-operation",
              "mixed-element-kinds"}}}},
          {"element_id", {{"type", {"string", "null"}}}},
          {"message", {{"type", "string"}}}}}}}};
}

inline Json session_profile() {
  Json category_props = Json::object();
  for (std::size_t i = 0; i < kOperationCategoryCount; ++i)
    category_props[std::string(to_string(static_cast<OperationCategory>(i)))] = Json{{"type", "integer"}};
  Json interval{{"type", "object"},
                {"required", {"start", "end"}},
                {"properties", {{"start", {{"type", "integer"}}}, {"end", {{"type", "integer"}}}}}};
  Json fraction{{"type", "number"}, {"minimum", 0}, {"maximum", 1}};
  return Json{
      {"$schema", "https://json-schema.org/draft/2020-12/schema"},
      {"$id", "ppmchart/session-profile"},
      {"title", "SessionProfile"},
      {"type", "object"},
      {"required",
       {"log_id", "total_operations", "duration_ms", "element_count", "category_counts", "move_ratio",
        "delete_ratio", "rename_ratio", "pause_intervals", "delete_bursts", "move_timing_class",
        "orientation", "interleaving_score", "gateway_pairing_score", "chunks", "chaos_flag"}},
      {"properties",
       {{"log_id", {{"type", "string"}}},
        {"total_operations", {{"type", "integer"}, {"minimum", 0}}},
        {"duration_ms", {{"type", "integer"}, {"minimum", 0}}},
        {"element_count", {{"type", "integer"}, {"minimum", 0}}},
        {"category_counts", {{"type", "object"}, {"properties", category_props}}},
        {"move_ratio", fraction},
        {"delete_ratio", fraction},
        {"rename_ratio", fraction},
        {"pause_intervals", {{"type", "array"}, {"items", interval}}},
        {"delete_bursts",
         {{"type", "array"},
          {"items",
           {{"type", "object"},
            {"properties",
             {{"start", {{"type", "integer"}}}, {"end", {{"type", "integer"}}}, {"size", {{"type", "integer"}}}}}}}}},
        {"move_timing_class",
         {{"type", "string"}, {"enum", {"few", "early-bound", "end-phase", "scattered", "mixed"}}}},
        {"move_timing_evidence", {{"type", "object"}}},
        {"orientation",
         {{"type", "string"}, {"enum", {"aspect-oriented", "flow-oriented", "indeterminate"}}}},
        {"interleaving_score", fraction},
        {"gateway_pairing_score", {{"type", {"number", "null"}}, {"minimum", 0}, {"maximum", 1}}},
        {"chunks", {{"type", "array"}}},
        {"chaos_flag", {{"type", "boolean"}}}}}};
}

}  // namespace ppmchart::schemas
