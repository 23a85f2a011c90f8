#pragma once

// Command-line front end: render, analyze, validate, serve.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ppmchart/analytics.hpp"
#include "ppmchart/chart_engine.hpp"
#include "ppmchart/json.hpp"
#include "ppmchart/log_io.hpp"
#include "ppmchart/renderer.hpp"
#include "ppmchart/service.hpp"

namespace ppmchart::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Failure caused by input data rather than by the invocation.
class DataError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write '" + path + "'");
  file << content;
}

struct LoadOptions {
  std::string format;  // empty: detect
  bool strict = false;
};

inline EventLog load_log(const std::string& path, const LoadOptions& opts, std::ostream& err) {
  const std::string text = read_file(path);
  LogFormat format = detect_format(path, text);
  if (opts.format == "xes") format = LogFormat::Xes;
  if (opts.format == "csv") format = LogFormat::Csv;
  ParseResult parsed = [&] {
    try {
      return parse_log(text, format, {opts.strict});
    } catch (const Error& e) {
      throw DataError(path + ": " + e.what());
    }
  }();
  for (const auto& w : parsed.warnings)
    err << "warn: " << path << ": " << w.code << " " << w.element_id << ": " << w.message << '\n';
  return std::move(parsed.log);
}

/// Flag values as parsed by CLI11, before they are folded into a ChartConfig.
struct ChartFlags {
  std::string config_file;
  std::string time_option, interval, color_by, shape_by, sort_by;
  std::optional<bool> descending;
  std::optional<long long> window_ms;
  std::vector<std::string> hide_element, hide_op, hide_with_op, style;
};

/// Config file, then flags. Flag values go through the same JSON decoder
/// as the file, so both routes accept exactly the same vocabulary.
inline ChartConfig resolve_chart_config(const ChartFlags& f) {
  ChartConfig config;
  if (!f.config_file.empty()) {
    const std::string text = read_file(f.config_file);
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::exception& e) {
      throw DataError(f.config_file + ": " + e.what());
    }
    try {
      config = chart_config_from_json(j);
    } catch (const ConfigError& e) {
      throw DataError(f.config_file + ": " + e.what());
    }
  }
  Json overrides = Json::object();
  if (!f.time_option.empty()) overrides["time_option"] = f.time_option;
  if (!f.interval.empty()) overrides["time_interval"] = f.interval;
  if (!f.color_by.empty()) overrides["color_by"] = f.color_by;
  if (!f.shape_by.empty()) overrides["shape_by"] = f.shape_by;
  if (!f.sort_by.empty()) overrides["sort_by"] = f.sort_by;
  if (f.descending) overrides["descending"] = *f.descending;
  if (f.window_ms) overrides["window_ms"] = *f.window_ms;
  Json filters = Json::object();
  if (!f.hide_element.empty()) filters["hide_element_kinds"] = f.hide_element;
  if (!f.hide_op.empty()) filters["hide_operations"] = f.hide_op;
  if (!f.hide_with_op.empty()) filters["hide_elements_with_operations"] = f.hide_with_op;
  if (!filters.empty()) overrides["filters"] = filters;
  if (!f.style.empty()) {
    // OPERATION=#rrggbb[/shape] or OPERATION=shape
    Json styles = config.style_overrides.empty() ? Json::object() : to_json(config)["style_overrides"];
    for (const auto& s : f.style) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--style", "expected OPERATION=#rrggbb[/shape]");
      const std::string op = s.substr(0, eq);
      std::string value = s.substr(eq + 1);
      Json entry = Json::object();
      const auto slash = value.find('/');
      std::string color = slash == std::string::npos ? value : value.substr(0, slash);
      std::string shape = slash == std::string::npos ? "" : value.substr(slash + 1);
      if (!color.empty() && color[0] != '#') std::swap(color, shape);
      if (!color.empty()) entry["color"] = color;
      if (!shape.empty()) entry["shape"] = shape;
      styles[op] = entry;
    }
    overrides["style_overrides"] = styles;
  }
  return chart_config_from_json(overrides, config);
}

struct RenderFlags {
  std::optional<double> width, height, dot_size, zoom_x, zoom_y;
  bool no_labels = false;
  bool no_legend = false;
};

inline RenderOptions resolve_render_options(const RenderFlags& f) {
  Json j = Json::object();
  if (f.width) j["canvas_width"] = *f.width;
  if (f.height) j["canvas_height"] = *f.height;
  if (f.dot_size) j["dot_size"] = *f.dot_size;
  if (f.zoom_x) j["zoom_x"] = *f.zoom_x;
  if (f.zoom_y) j["zoom_y"] = *f.zoom_y;
  if (f.no_labels) j["show_labels"] = false;
  if (f.no_legend) j["show_legend"] = false;
  RenderOptions opts = render_options_from_json(j);
  opts.validate();
  return opts;
}

}  // namespace detail

/// Runs one invocation. Diagnostics go to `err`, prefixed "error:" or "warn:".
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Dotted-chart rendering and analysis of process-modeling session logs", "ppmchart"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  detail::LoadOptions load;
  app.add_option("--format", load.format, "Input format (default: from extension or content)")
      ->check(CLI::IsMember({"xes", "csv"}));
  app.add_flag("--strict", load.strict, "Fail on unknown operation names instead of dropping them");

  // render
  auto* render = app.add_subcommand("render", "Render a dotted chart as SVG");
  std::string render_input, render_output, emit = "svg";
  detail::ChartFlags cf;
  detail::RenderFlags rf;
  render->add_option("log", render_input, "Event log (.xes or .csv)")->required();
  render->add_option("-o,--output", render_output, "Output file (default: stdout)");
  render->add_option("--config", cf.config_file, "ChartConfig JSON file");
  render->add_option("--time-option", cf.time_option, "actual | relative-time | relative-ratio");
  render->add_option("--interval", cf.interval, "l1 | l10 | l100 | l500 | seconds | minutes | half-hours | hours | days | weeks | months | years");
  render->add_option("--color-by", cf.color_by, "none | operation");
  render->add_option("--shape-by", cf.shape_by, "none | model-element");
  render->add_option("--sort", cf.sort_by, "none | model-element | number-of-operations | duration | distance-from-start | create-order-from-start | first-operation | last-operation");
  render->add_flag("--descending,!--ascending", cf.descending, "Reverse the sort order");
  render->add_option("--window-ms", cf.window_ms, "Chart window length in milliseconds");
  render->add_option("--hide-element", cf.hide_element, "Hide dots on elements of this kind (repeatable)");
  render->add_option("--hide-op", cf.hide_op, "Hide dots of this operation (repeatable)");
  render->add_option("--hide-with-op", cf.hide_with_op, "Hide all dots of elements having this operation (repeatable)");
  render->add_option("--style", cf.style, "Style override OPERATION=#rrggbb[/shape] (repeatable)");
  render->add_option("--width", rf.width, "Canvas width in pixels");
  render->add_option("--height", rf.height, "Canvas height in pixels");
  render->add_option("--dot-size", rf.dot_size, "Glyph size in pixels");
  render->add_option("--zoom-x", rf.zoom_x, "Horizontal zoom factor");
  render->add_option("--zoom-y", rf.zoom_y, "Vertical zoom factor");
  render->add_flag("--no-labels", rf.no_labels, "Omit element labels");
  render->add_flag("--no-legend", rf.no_legend, "Omit the legend");
  render->add_option("--emit", emit, "svg | model-json")->check(CLI::IsMember({"svg", "model-json"}));

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Compute session profiles");
  std::vector<std::string> analyze_inputs;
  std::string analyze_output, thresholds_file;
  bool as_json = false, as_csv = false;
  analyze->add_option("logs", analyze_inputs, "Event logs")->required();
  analyze->add_option("-o,--output", analyze_output, "Output file (default: stdout)");
  auto* json_flag = analyze->add_flag("--json", as_json, "JSON array of profiles (default)");
  analyze->add_flag("--csv", as_csv, "CSV table, one row per log")->excludes(json_flag);
  analyze->add_option("--thresholds", thresholds_file, "DetectorConfig JSON file");
  std::map<std::string, std::string> threshold_flags;
  const Json detector_defaults = to_json(DetectorConfig{});
  for (const auto& item : detector_defaults.items()) {
    std::string flag = item.key();
    std::replace(flag.begin(), flag.end(), '_', '-');
    analyze->add_option("--" + flag, threshold_flags[item.key()], "default " + item.value().dump());
  }

  // validate
  auto* validate = app.add_subcommand("validate", "Check a log for structural problems");
  std::string validate_input;
  validate->add_option("log", validate_input, "Event log")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Start the HTTP analysis service");
  int port = 8080;
  std::string logs_dir, host = "127.0.0.1";
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--logs", logs_dir, "Directory for persisted logs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (render->parsed()) {
      ChartConfig config;
      RenderOptions ropts;
      try {
        config = detail::resolve_chart_config(cf);
        ropts = detail::resolve_render_options(rf);
      } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
      }
      const EventLog log = detail::load_log(render_input, load, err);
      const ChartModel chart = build_chart(log, config);
      for (const auto& n : chart.notices) err << "warn: " << n.code << ": " << n.message << '\n';
      detail::write_output(render_output, emit == "svg" ? render_svg(chart, ropts) : to_json(chart).dump(2) + "\n", out);
      return kExitOk;
    }

    if (analyze->parsed()) {
      DetectorConfig cfg;
      try {
        if (!thresholds_file.empty()) {
          Json j;
          try {
            j = Json::parse(detail::read_file(thresholds_file));
          } catch (const Json::exception& e) {
            throw DataError(thresholds_file + ": " + e.what());
          }
          cfg = detector_config_from_json(j, cfg);
        }
        Json flags = Json::object();
        for (const auto& [key, value] : threshold_flags) {
          if (value.empty()) continue;
          try {
            flags[key] = Json::parse(value);
          } catch (const Json::exception&) {
            throw ConfigError(key, "expected a number");
          }
        }
        cfg = detector_config_from_json(flags, cfg);
      } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
      }
      std::vector<EventLog> logs;
      for (const auto& path : analyze_inputs) logs.push_back(detail::load_log(path, load, err));
      std::vector<std::future<SessionProfile>> jobs;
      for (const auto& log : logs)
        jobs.push_back(std::async(std::launch::async, [&log, &cfg] { return profile_session(log, cfg); }));
      std::vector<SessionProfile> profiles;
      for (auto& j : jobs) profiles.push_back(j.get());

      std::string text;
      if (as_csv) {
        text = profile_csv_header() + "\n";
        for (const auto& p : profiles) text += profile_csv_row(p) + "\n";
      } else {
        Json arr = Json::array();
        for (const auto& p : profiles) arr.push_back(to_json(p));
        text = arr.dump(2) + "\n";
      }
      detail::write_output(analyze_output, text, out);
      return kExitOk;
    }

    if (validate->parsed()) {
      const EventLog log = detail::load_log(validate_input, load, err);
      const auto findings = validate_log(log);
      for (const auto& f : findings) {
        out << to_string(f.severity) << ": " << f.code;
        if (f.element_id) out << " [" << *f.element_id << "]";
        out << ": " << f.message << '\n';
      }
      out << findings.size() << (findings.size() == 1 ? " finding" : " findings") << '\n';
      return kExitOk;
    }

    if (serve->parsed()) {
      auto store = logs_dir.empty() ? std::make_shared<service::LogStore>()
                                    : std::make_shared<service::LogStore>(logs_dir);
      auto svc = std::make_shared<service::Service>(store, service::ServiceOptions{"*", {load.strict}});
      service::HttpServer server(svc);
      const int bound = server.bind(host, port);
      if (bound < 0) throw DataError("cannot bind " + host + ":" + std::to_string(port));
      err << "listening on http://" << host << ":" << bound << '\n';
      server.listen_after_bind();
      return kExitOk;
    }
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace ppmchart::cli
