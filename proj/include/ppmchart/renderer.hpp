#pragma once

// Deterministic SVG rendering of a ChartModel, plus pixel hit-testing
// against the same geometry.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ppmchart/chart_engine.hpp"
#include "ppmchart/error.hpp"
#include "ppmchart/time.hpp"
#include "ppmchart/xml_escape.hpp"

namespace ppmchart {

struct RenderOptions {
  double canvas_width = 1000.0;
  double canvas_height = 600.0;
  double dot_size = 6.0;
  /// Element id at the start of each line.
  bool show_labels = true;
  bool show_legend = true;
  double zoom_x = 1.0;
  double zoom_y = 1.0;
  Rgb background{0x1e, 0x1e, 0x1e};
  Rgb gridline{0xff, 0xff, 0xff};
  Rgb text{0xdd, 0xdd, 0xdd};

  void validate() const {
    if (!(canvas_width > 0)) throw ConfigError("canvas_width", "must be positive");
    if (!(canvas_height > 0)) throw ConfigError("canvas_height", "must be positive");
    if (!(dot_size > 0)) throw ConfigError("dot_size", "must be positive");
    if (!(zoom_x > 0) || !std::isfinite(zoom_x)) throw ConfigError("zoom_x", "must be positive");
    if (!(zoom_y > 0) || !std::isfinite(zoom_y)) throw ConfigError("zoom_y", "must be positive");
  }
  friend bool operator==(const RenderOptions&, const RenderOptions&) = default;
};

/// Pixel layout shared by render_svg and hit_test.
struct ChartLayout {
  double plot_left = 0;
  double plot_top = 0;
  double plot_width = 0;
  double plot_height = 0;
  double band_height = 0;
  double legend_top = 0;
  double document_width = 0;
  double document_height = 0;
  std::size_t legend_columns = 1;

  static constexpr double kLabelWidth = 140.0;
  static constexpr double kBareMargin = 10.0;
  static constexpr double kTopMargin = 24.0;
  static constexpr double kBottomMargin = 10.0;
  static constexpr double kLegendColumnWidth = 190.0;
  static constexpr double kLegendRowHeight = 16.0;

  static ChartLayout compute(const ChartModel& chart, const RenderOptions& opts) {
    ChartLayout l;
    l.plot_left = opts.show_labels ? kLabelWidth : kBareMargin;
    l.plot_top = kTopMargin;
    l.plot_width = opts.canvas_width - l.plot_left - kBareMargin;
    double legend_height = 0;
    if (opts.show_legend) {
      l.legend_columns = std::max<std::size_t>(
          1, static_cast<std::size_t>((opts.canvas_width - 2 * kBareMargin) / kLegendColumnWidth));
      const std::size_t rows = (chart.legend.size() + l.legend_columns - 1) / l.legend_columns;
      legend_height = static_cast<double>(rows) * kLegendRowHeight + kBareMargin;
    }
    l.plot_height = opts.canvas_height - l.plot_top - legend_height - kBottomMargin;
    if (l.plot_width <= 0) throw ConfigError("canvas_width", "too small for the chart margins");
    if (l.plot_height <= 0) throw ConfigError("canvas_height", "too small for the chart margins");
    l.band_height = l.plot_height / static_cast<double>(std::max<std::size_t>(1, chart.timelines.size()));
    l.legend_top = l.plot_top + l.plot_height * opts.zoom_y + kBareMargin;
    l.document_width = l.plot_left + l.plot_width * opts.zoom_x + kBareMargin;
    l.document_height = l.legend_top + legend_height - (opts.show_legend ? kBareMargin : 0) +
                        kBottomMargin;
    return l;
  }

  double x_of(Millis t_display, const ChartModel& chart, const RenderOptions& opts) const {
    return plot_left + static_cast<double>(t_display - chart.t0) /
                           static_cast<double>(chart.window_ms) * plot_width * opts.zoom_x;
  }
  double y_of(std::size_t timeline, const RenderOptions& opts) const {
    return plot_top + (static_cast<double>(timeline) + 0.5) * band_height * opts.zoom_y;
  }
};

namespace detail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

inline void escape_text(std::string& out, std::string_view s) { xml_escape_into(out, s); }

inline void glyph(std::string& out, Shape shape, double cx, double cy, double size,
                  const std::string& attrs) {
  const double h = size / 2.0;
  switch (shape) {
    case Shape::Square:
      out += "<rect " + attrs + " x=\"" + num(cx - h) + "\" y=\"" + num(cy - h) + "\" width=\"" +
             num(size) + "\" height=\"" + num(size) + "\"/>\n";
      break;
    case Shape::Circle:
      out += "<circle " + attrs + " cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(h) +
             "\"/>\n";
      break;
    case Shape::Diamond: {
      const double d = h * std::sqrt(2.0);
      out += "<polygon " + attrs + " points=\"" + num(cx) + "," + num(cy - d) + " " + num(cx + d) +
             "," + num(cy) + " " + num(cx) + "," + num(cy + d) + " " + num(cx - d) + "," + num(cy) +
             "\"/>\n";
      break;
    }
    case Shape::Triangle:
      out += "<polygon " + attrs + " points=\"" + num(cx - h) + "," + num(cy - h) + " " +
             num(cx + h) + "," + num(cy - h) + " " + num(cx) + "," + num(cy + h) + "\"/>\n";
      break;
  }
}

inline std::string axis_text(Millis t, const ChartModel& chart) {
  if (chart.time_option == TimeOption::Actual) return format_iso8601(t);
  return "+" + std::to_string(t) + " ms";
}

}  // namespace detail

/// SVG 1.1 document using only rect, circle, polygon, line and text.
/// Visible dots carry class "dot op-<NAME> el-<kind>" and data-element-id /
/// data-t-actual attributes; hidden dots are not drawn. Output is a pure
/// function of the inputs.
inline std::string render_svg(const ChartModel& chart, const RenderOptions& opts = {}) {
  using detail::num;
  opts.validate();
  const ChartLayout l = ChartLayout::compute(chart, opts);
  std::string out;
  out.reserve(4096 + chart.visible_dot_count() * 200);
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(l.document_width) + "\" height=\"" + num(l.document_height) + "\" viewBox=\"0 0 " +
         num(l.document_width) + " " + num(l.document_height) + "\">\n";
  out += "<rect class=\"background\" x=\"0.000000\" y=\"0.000000\" width=\"" +
         num(l.document_width) + "\" height=\"" + num(l.document_height) + "\" fill=\"" +
         opts.background.hex() + "\"/>\n";

  const double plot_right = l.plot_left + l.plot_width * opts.zoom_x;
  const double plot_bottom = l.plot_top + l.plot_height * opts.zoom_y;
  out += "<rect class=\"plot-area\" x=\"" + num(l.plot_left) + "\" y=\"" + num(l.plot_top) +
         "\" width=\"" + num(plot_right - l.plot_left) + "\" height=\"" +
         num(plot_bottom - l.plot_top) + "\" fill=\"none\" stroke=\"" + opts.text.hex() +
         "\" stroke-width=\"1\"/>\n";

  // Interval start and end, above the plot.
  const std::string text_fill = " fill=\"" + opts.text.hex() + "\" font-family=\"sans-serif\" font-size=\"11\"";
  out += "<text class=\"window-start\" x=\"" + num(l.plot_left) + "\" y=\"" + num(l.plot_top - 8) +
         "\"" + text_fill + ">";
  detail::escape_text(out, detail::axis_text(chart.t0, chart));
  out += "</text>\n";
  out += "<text class=\"window-end\" x=\"" + num(plot_right) + "\" y=\"" + num(l.plot_top - 8) +
         "\" text-anchor=\"end\"" + text_fill + ">";
  detail::escape_text(out, detail::axis_text(chart.t0 + chart.window_ms, chart));
  out += "</text>\n";

  for (Millis t : chart.gridline_times) {
    const double x = l.x_of(t, chart, opts);
    out += "<line class=\"gridline\" x1=\"" + num(x) + "\" y1=\"" + num(l.plot_top) + "\" x2=\"" +
           num(x) + "\" y2=\"" + num(plot_bottom) + "\" stroke=\"" + opts.gridline.hex() +
           "\" stroke-width=\"0.5\"/>\n";
  }

  for (std::size_t i = 0; i < chart.timelines.size(); ++i) {
    const double y = l.y_of(i, opts);
    const Timeline& line = chart.timelines[i];
    out += "<line class=\"timeline el-" + std::string(to_string(line.kind)) + "\" x1=\"" +
           num(l.plot_left) + "\" y1=\"" + num(y) + "\" x2=\"" + num(plot_right) + "\" y2=\"" +
           num(y) + "\" stroke=\"#3a3a3a\" stroke-width=\"0.5\"/>\n";
    if (opts.show_labels) {
      out += "<text class=\"label\" x=\"" + num(l.plot_left - 4) + "\" y=\"" + num(y + 4) +
             "\" text-anchor=\"end\"" + text_fill + ">";
      detail::escape_text(out, line.element_id);
      out += "</text>\n";
    }
  }

  // Later operations are drawn on top.
  struct Placed {
    Millis t;
    std::size_t line;
    std::size_t index;
  };
  std::vector<Placed> order;
  order.reserve(chart.visible_dot_count());
  for (std::size_t i = 0; i < chart.timelines.size(); ++i)
    for (std::size_t j = 0; j < chart.timelines[i].dots.size(); ++j)
      if (chart.timelines[i].dots[j].visible) order.push_back({chart.timelines[i].dots[j].t_actual, i, j});
  std::stable_sort(order.begin(), order.end(),
                   [](const Placed& a, const Placed& b) { return a.t < b.t; });
  for (const Placed& p : order) {
    const Timeline& line = chart.timelines[p.line];
    const Dot& d = line.dots[p.index];
    std::string attrs = "class=\"dot op-" + std::string(to_string(d.operation)) + " el-" +
                        std::string(to_string(line.kind)) + "\" data-element-id=\"";
    detail::escape_text(attrs, d.element_id);
    attrs += "\" data-t-actual=\"" + std::to_string(d.t_actual) + "\" fill=\"" + d.style.color.hex() + "\"";
    detail::glyph(out, d.style.shape, l.x_of(d.t_display, chart, opts), l.y_of(p.line, opts),
                  opts.dot_size, attrs);
  }

  if (opts.show_legend) {
    for (std::size_t k = 0; k < chart.legend.size(); ++k) {
      const LegendEntry& e = chart.legend[k];
      const double x = ChartLayout::kBareMargin +
                       static_cast<double>(k % l.legend_columns) * ChartLayout::kLegendColumnWidth;
      const double y = l.legend_top + static_cast<double>(k / l.legend_columns) * ChartLayout::kLegendRowHeight +
                       ChartLayout::kLegendRowHeight / 2;
      detail::glyph(out, e.style.shape, x + opts.dot_size / 2, y, opts.dot_size,
                    "class=\"legend-glyph op-" + std::string(to_string(e.kind)) + "\" fill=\"" +
                        e.style.color.hex() + "\"");
      out += "<text class=\"legend-label\" x=\"" + num(x + opts.dot_size + 6) + "\" y=\"" +
             num(y + 4) + "\"" + text_fill + ">" + std::string(to_string(e.kind)) + "</text>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

struct PixelRect {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;
};

struct DotHit {
  std::size_t timeline = 0;
  std::size_t dot = 0;
  double cx = 0;
  double cy = 0;
};

/// Visible dots whose rendered centers lie inside `rect`, boundary included.
/// Results are in timeline order, then dot order.
inline std::vector<DotHit> hit_test(const ChartModel& chart, const RenderOptions& opts, PixelRect rect) {
  opts.validate();
  if (rect.width < 0) {
    rect.x += rect.width;
    rect.width = -rect.width;
  }
  if (rect.height < 0) {
    rect.y += rect.height;
    rect.height = -rect.height;
  }
  const ChartLayout l = ChartLayout::compute(chart, opts);
  std::vector<DotHit> hits;
  for (std::size_t i = 0; i < chart.timelines.size(); ++i) {
    const double cy = l.y_of(i, opts);
    if (cy < rect.y || cy > rect.y + rect.height) continue;
    const auto& dots = chart.timelines[i].dots;
    for (std::size_t j = 0; j < dots.size(); ++j) {
      if (!dots[j].visible) continue;
      const double cx = l.x_of(dots[j].t_display, chart, opts);
      if (cx >= rect.x && cx <= rect.x + rect.width) hits.push_back({i, j, cx, cy});
    }
  }
  return hits;
}

}  // namespace ppmchart
