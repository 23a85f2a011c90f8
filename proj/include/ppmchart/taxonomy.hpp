#pragma once

// Operation vocabulary of a modeling session, its grouping into categories
// and element kinds, and the fixed default dot coding.

#include <array>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ppmchart/error.hpp"

namespace ppmchart {

enum class OperationKind : std::uint8_t {
  CreateStartEvent,
  CreateEndEvent,
  CreateActivity,
  CreateXor,
  CreateAnd,
  CreateEdge,
  MoveStartEvent,
  MoveEndEvent,
  MoveActivity,
  MoveXor,
  MoveAnd,
  MoveEdgeLabel,
  ReconnectEdge,
  DeleteStartEvent,
  DeleteEndEvent,
  DeleteActivity,
  DeleteXor,
  DeleteAnd,
  DeleteEdge,
  NameActivity,
  RenameActivity,
  NameEdge,
  RenameEdge,
  CreateEdgeBendpoint,
  MoveEdgeBendpoint,
  DeleteEdgeBendpoint,
};

inline constexpr std::size_t kOperationKindCount = 26;

enum class ElementKind : std::uint8_t { StartEvent, EndEvent, Activity, XorGateway, AndGateway, Edge };

inline constexpr std::size_t kElementKindCount = 6;

enum class OperationCategory : std::uint8_t { Create, Move, Delete, Rename, Reconnect, BendPoint };

inline constexpr std::size_t kOperationCategoryCount = 6;

enum class Shape : std::uint8_t { Square, Circle, Diamond, Triangle };

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;

  std::string hex() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
  }

  static std::optional<Rgb> from_hex(std::string_view s) {
    if (s.size() != 7 || s[0] != '#') return std::nullopt;
    auto nibble = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      if (c >= 'A' && c <= 'F') return c - 'A' + 10;
      return -1;
    };
    std::array<int, 6> n{};
    for (std::size_t i = 0; i < 6; ++i) {
      n[i] = nibble(s[i + 1]);
      if (n[i] < 0) return std::nullopt;
    }
    return Rgb{static_cast<std::uint8_t>(n[0] * 16 + n[1]), static_cast<std::uint8_t>(n[2] * 16 + n[3]),
               static_cast<std::uint8_t>(n[4] * 16 + n[5])};
  }
};

struct DotStyle {
  Rgb color;
  Shape shape = Shape::Circle;

  friend bool operator==(const DotStyle&, const DotStyle&) = default;
};

/// Fixed palette. Shade families step 25 points of HSL lightness:
/// dark 17%, bright 42%, light 67%, very light 92%.
namespace palette {
inline constexpr Rgb kDarkGreen{0x00, 0x57, 0x00};
inline constexpr Rgb kGreen{0x00, 0xd6, 0x00};
inline constexpr Rgb kLightGreen{0x57, 0xff, 0x57};
inline constexpr Rgb kVeryLightGreen{0xd6, 0xff, 0xd6};
inline constexpr Rgb kDarkBlue{0x00, 0x24, 0x57};
inline constexpr Rgb kBlue{0x00, 0x59, 0xd6};
inline constexpr Rgb kVeryLightBlue{0xd6, 0xe7, 0xff};
inline constexpr Rgb kDarkRed{0x57, 0x00, 0x00};
inline constexpr Rgb kRed{0xd6, 0x00, 0x00};
inline constexpr Rgb kLightRed{0xff, 0x57, 0x57};
inline constexpr Rgb kVeryLightRed{0xff, 0xd6, 0xd6};
inline constexpr Rgb kOrange{0xff, 0x80, 0x00};
inline constexpr Rgb kLightPurple{0xc7, 0x94, 0xf9};
inline constexpr Rgb kGrey{0x9e, 0x9e, 0x9e};
inline constexpr Rgb kDarkGrey{0x52, 0x52, 0x52};
/// Uniform dot color when color coding is switched off.
inline constexpr Rgb kMidGrey{0x80, 0x80, 0x80};
}  // namespace palette

struct Classification {
  OperationKind kind;
  ElementKind element;
  OperationCategory category;

  friend bool operator==(const Classification&, const Classification&) = default;
};

namespace detail {

struct OperationInfo {
  std::string_view name;
  ElementKind element;
  OperationCategory category;
};

inline constexpr std::array<OperationInfo, kOperationKindCount> kOperations{{
    {"CREATE_START_EVENT", ElementKind::StartEvent, OperationCategory::Create},
    {"CREATE_END_EVENT", ElementKind::EndEvent, OperationCategory::Create},
    {"CREATE_ACTIVITY", ElementKind::Activity, OperationCategory::Create},
    {"CREATE_XOR", ElementKind::XorGateway, OperationCategory::Create},
    {"CREATE_AND", ElementKind::AndGateway, OperationCategory::Create},
    {"CREATE_EDGE", ElementKind::Edge, OperationCategory::Create},
    {"MOVE_START_EVENT", ElementKind::StartEvent, OperationCategory::Move},
    {"MOVE_END_EVENT", ElementKind::EndEvent, OperationCategory::Move},
    {"MOVE_ACTIVITY", ElementKind::Activity, OperationCategory::Move},
    {"MOVE_XOR", ElementKind::XorGateway, OperationCategory::Move},
    {"MOVE_AND", ElementKind::AndGateway, OperationCategory::Move},
    {"MOVE_EDGE_LABEL", ElementKind::Edge, OperationCategory::Move},
    {"RECONNECT_EDGE", ElementKind::Edge, OperationCategory::Reconnect},
    {"DELETE_START_EVENT", ElementKind::StartEvent, OperationCategory::Delete},
    {"DELETE_END_EVENT", ElementKind::EndEvent, OperationCategory::Delete},
    {"DELETE_ACTIVITY", ElementKind::Activity, OperationCategory::Delete},
    {"DELETE_XOR", ElementKind::XorGateway, OperationCategory::Delete},
    {"DELETE_AND", ElementKind::AndGateway, OperationCategory::Delete},
    {"DELETE_EDGE", ElementKind::Edge, OperationCategory::Delete},
    {"NAME_ACTIVITY", ElementKind::Activity, OperationCategory::Rename},
    {"RENAME_ACTIVITY", ElementKind::Activity, OperationCategory::Rename},
    {"NAME_EDGE", ElementKind::Edge, OperationCategory::Rename},
    {"RENAME_EDGE", ElementKind::Edge, OperationCategory::Rename},
    {"CREATE_EDGE_BENDPOINT", ElementKind::Edge, OperationCategory::BendPoint},
    {"MOVE_EDGE_BENDPOINT", ElementKind::Edge, OperationCategory::BendPoint},
    {"DELETE_EDGE_BENDPOINT", ElementKind::Edge, OperationCategory::BendPoint},
}};

inline constexpr std::array<std::string_view, kElementKindCount> kElementNames{
    "start-event", "end-event", "activity", "xor-gateway", "and-gateway", "edge"};

inline constexpr std::array<std::string_view, kOperationCategoryCount> kCategoryNames{
    "create", "move", "delete", "rename", "reconnect", "bendpoint"};

inline constexpr std::array<std::string_view, 4> kShapeNames{"square", "circle", "diamond",
                                                             "triangle"};

template <std::size_t N>
std::optional<std::size_t> index_of(const std::array<std::string_view, N>& names,
                                    std::string_view name) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == name) return i;
  return std::nullopt;
}

}  // namespace detail

inline constexpr std::array<OperationKind, kOperationKindCount> all_operation_kinds() {
  std::array<OperationKind, kOperationKindCount> out{};
  for (std::size_t i = 0; i < kOperationKindCount; ++i) out[i] = static_cast<OperationKind>(i);
  return out;
}

inline constexpr std::array<ElementKind, kElementKindCount> all_element_kinds() {
  return {ElementKind::StartEvent, ElementKind::EndEvent,   ElementKind::Activity,
          ElementKind::XorGateway, ElementKind::AndGateway, ElementKind::Edge};
}

/// The literal operation name as it appears in logs, e.g. "CREATE_ACTIVITY".
inline std::string_view to_string(OperationKind k) {
  return detail::kOperations[static_cast<std::size_t>(k)].name;
}
inline std::string_view to_string(ElementKind k) {
  return detail::kElementNames[static_cast<std::size_t>(k)];
}
inline std::string_view to_string(OperationCategory c) {
  return detail::kCategoryNames[static_cast<std::size_t>(c)];
}
inline std::string_view to_string(Shape s) { return detail::kShapeNames[static_cast<std::size_t>(s)]; }

inline std::optional<OperationKind> operation_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kOperationKindCount; ++i)
    if (detail::kOperations[i].name == name) return static_cast<OperationKind>(i);
  return std::nullopt;
}
inline std::optional<ElementKind> element_kind_from_string(std::string_view name) {
  if (auto i = detail::index_of(detail::kElementNames, name)) return static_cast<ElementKind>(*i);
  return std::nullopt;
}
inline std::optional<Shape> shape_from_string(std::string_view name) {
  if (auto i = detail::index_of(detail::kShapeNames, name)) return static_cast<Shape>(*i);
  return std::nullopt;
}

inline ElementKind element_of(OperationKind k) {
  return detail::kOperations[static_cast<std::size_t>(k)].element;
}
inline OperationCategory category_of(OperationKind k) {
  return detail::kOperations[static_cast<std::size_t>(k)].category;
}

inline bool is_node(ElementKind k) { return k != ElementKind::Edge; }
inline bool is_gateway(ElementKind k) {
  return k == ElementKind::XorGateway || k == ElementKind::AndGateway;
}

/// Throws ClassifyError for names outside the vocabulary.
inline Classification classify(std::string_view name) {
  auto kind = operation_from_string(name);
  if (!kind) throw ClassifyError(std::string(name));
  return {*kind, element_of(*kind), category_of(*kind)};
}

/// Shape under default coding; a function of the element kind only.
inline Shape default_shape(ElementKind e) {
  switch (e) {
    case ElementKind::StartEvent:
    case ElementKind::EndEvent:
      return Shape::Circle;
    case ElementKind::Activity:
      return Shape::Square;
    case ElementKind::XorGateway:
    case ElementKind::AndGateway:
      return Shape::Diamond;
    case ElementKind::Edge:
      return Shape::Triangle;
  }
  return Shape::Circle;
}

inline DotStyle default_style(OperationKind k) {
  using namespace palette;
  const ElementKind e = element_of(k);
  const Shape shape = default_shape(e);
  // Create/Move/Delete: hue by category, shade by element kind.
  auto shade = [e](Rgb very_light, Rgb bright, Rgb dark, Rgb light) {
    switch (e) {
      case ElementKind::StartEvent:
      case ElementKind::EndEvent:
        return very_light;
      case ElementKind::Activity:
        return bright;
      case ElementKind::XorGateway:
      case ElementKind::AndGateway:
        return dark;
      case ElementKind::Edge:
        return light;
    }
    return bright;
  };
  switch (category_of(k)) {
    case OperationCategory::Create:
      return {shade(kVeryLightGreen, kGreen, kDarkGreen, kLightGreen), shape};
    case OperationCategory::Move:
      return {shade(kVeryLightBlue, kBlue, kDarkBlue, kGrey), shape};
    case OperationCategory::Delete:
      return {shade(kVeryLightRed, kRed, kDarkRed, kLightRed), shape};
    case OperationCategory::Rename:
      return {kOrange, shape};
    case OperationCategory::Reconnect:
      return {kLightPurple, shape};
    case OperationCategory::BendPoint:
      return {kDarkGrey, shape};
  }
  return {kMidGrey, shape};
}

/// Throws ClassifyError for unknown names.
inline DotStyle default_style(std::string_view name) { return default_style(classify(name).kind); }

struct LegendRow {
  OperationKind kind;
  ElementKind element;
  OperationCategory category;
  DotStyle style;
};

/// One row per operation kind, in vocabulary order.
inline std::vector<LegendRow> legend_table() {
  std::vector<LegendRow> rows;
  rows.reserve(kOperationKindCount);
  for (OperationKind k : all_operation_kinds())
    rows.push_back({k, element_of(k), category_of(k), default_style(k)});
  return rows;
}

/// `name,element,category,shape,rgb` with a header line.
inline std::string legend_csv() {
  std::string out = "name,element,category,shape,rgb\n";
  for (const auto& row : legend_table()) {
    out.append(to_string(row.kind)).append(",");
    out.append(to_string(row.element)).append(",");
    out.append(to_string(row.category)).append(",");
    out.append(to_string(row.style.shape)).append(",");
    out.append(row.style.color.hex()).append("\n");
  }
  return out;
}

}  // namespace ppmchart
