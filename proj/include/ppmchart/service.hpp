#pragma once

// HTTP API for the interactive chart explorer. Request handling is a pure
// router over ApiRequest/ApiResponse; HttpServer binds it to cpp-httplib.

#include <httplib.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ppmchart/analytics.hpp"
#include "ppmchart/chart_engine.hpp"
#include "ppmchart/json.hpp"
#include "ppmchart/log_io.hpp"
#include "ppmchart/renderer.hpp"
#include "ppmchart/schemas.hpp"

namespace ppmchart::service {

struct LogHandle {
  std::string id;
  std::string name;
  std::size_t trace_count = 0;
  std::size_t event_count = 0;
  std::string uploaded_at;
};

inline Json to_json(const LogHandle& h) {
  return Json{{"id", h.id},
              {"name", h.name},
              {"trace_count", h.trace_count},
              {"event_count", h.event_count},
              {"uploaded_at", h.uploaded_at}};
}

struct StoredLog {
  LogHandle handle;
  EventLog log;
  std::vector<ParseWarning> warnings;
};

/// In-memory store with optional directory persistence. Logs are immutable
/// once stored; many readers, one writer.
class LogStore {
 public:
  LogStore() = default;

  /// Loads every *.xes and *.csv in `dir` (sorted by file name) and writes
  /// future uploads there.
  explicit LogStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(*dir_);
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".xes" || ext == ".csv")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      std::ifstream in(path, std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      const std::string text = buf.str();
      try {
        ParseResult parsed = parse_log(text, detect_format(path.string(), text));
        insert(path.stem().string(), std::move(parsed), file_time(path));
      } catch (const Error& e) {
        std::cerr << "warn: skipping " << path.string() << ": " << e.what() << '\n';
      }
    }
  }

  std::shared_ptr<const StoredLog> add(const std::string& name, ParseResult parsed,
                                       const std::string& raw, LogFormat format) {
    std::unique_lock lock(mutex_);
    auto stored = insert_locked(name, std::move(parsed), now_iso());
    if (dir_) {
      std::ofstream out(*dir_ / (stored->handle.id + "." + std::string(to_string(format))),
                        std::ios::binary);
      out << raw;
    }
    return stored;
  }

  std::shared_ptr<const StoredLog> get(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = logs_.find(id);
    return it == logs_.end() ? nullptr : it->second;
  }

  std::vector<LogHandle> list() const {
    std::shared_lock lock(mutex_);
    std::vector<LogHandle> out;
    for (const auto& id : order_) out.push_back(logs_.at(id)->handle);
    return out;
  }

 private:
  static std::string now_iso() {
    using namespace std::chrono;
    return format_iso8601(duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count());
  }

  static std::string file_time(const std::filesystem::path& p) {
    using namespace std::chrono;
    const auto ft = std::filesystem::last_write_time(p);
    const auto sys = time_point_cast<milliseconds>(ft - decltype(ft)::clock::now() + system_clock::now());
    return format_iso8601(sys.time_since_epoch().count());
  }

  void insert(const std::string& name, ParseResult parsed, std::string uploaded_at) {
    std::unique_lock lock(mutex_);
    insert_locked(name, std::move(parsed), std::move(uploaded_at));
  }

  std::shared_ptr<const StoredLog> insert_locked(const std::string& name, ParseResult parsed,
                                                 std::string uploaded_at) {
    auto stored = std::make_shared<StoredLog>();
    stored->handle.id = "log-" + std::to_string(++next_id_);
    stored->handle.name = name.empty() ? (parsed.log.log_id.empty() ? stored->handle.id : parsed.log.log_id) : name;
    stored->handle.trace_count = parsed.log.traces.size();
    stored->handle.event_count = parsed.log.event_count();
    stored->handle.uploaded_at = std::move(uploaded_at);
    stored->log = std::move(parsed.log);
    stored->warnings = std::move(parsed.warnings);
    logs_.emplace(stored->handle.id, stored);
    order_.push_back(stored->handle.id);
    return stored;
  }

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const StoredLog>> logs_;
  std::vector<std::string> order_;
  std::size_t next_id_ = 0;
  std::optional<std::filesystem::path> dir_;
};

struct ApiRequest {
  std::string method;
  std::string path;
  std::string body;
  std::multimap<std::string, std::string> query;
  std::string content_type;

  std::optional<std::string> param(const std::string& key) const {
    auto it = query.find(key);
    if (it == query.end()) return std::nullopt;
    return it->second;
  }
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::vector<std::pair<std::string, std::string>> headers;
};

struct ServiceOptions {
  std::string cors_origin = "*";
  ParseOptions parse;
};

/// Chart, render options and hit-test rectangle decoded from a request body.
struct ChartRequest {
  ChartConfig config;
  RenderOptions render;
  bool want_svg = true;
  std::optional<PixelRect> rect;
};

class Service {
 public:
  explicit Service(std::shared_ptr<LogStore> store, ServiceOptions options = {})
      : store_(std::move(store)), options_(std::move(options)) {}

  LogStore& store() { return *store_; }

  ApiResponse handle(const ApiRequest& req) const {
    ApiResponse res;
    try {
      res = route(req);
    } catch (const ConfigError& e) {
      res = error(422, "invalid-config", e.what(), e.field());
    } catch (const ClassifyError& e) {
      res = error(422, "unknown-operation", e.what());
    } catch (const Json::exception& e) {
      res = error(400, "invalid-json", e.what());
    } catch (const Error& e) {
      res = error(500, "internal", e.what());
    }
    res.headers.emplace_back("Access-Control-Allow-Origin", options_.cors_origin);
    return res;
  }

 private:
  static ApiResponse json(int status, const Json& body) {
    return {status, "application/json", body.dump(), {}};
  }

  static ApiResponse error(int status, const std::string& code, const std::string& message,
                           const std::optional<std::string>& field = std::nullopt) {
    Json body{{"code", code}, {"message", message}};
    if (field) body["field"] = *field;
    return json(status, body);
  }

  static std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path) {
      if (c == '/') {
        if (!cur.empty()) parts.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
  }

  ApiResponse route(const ApiRequest& req) const {
    if (req.method == "OPTIONS") {
      ApiResponse res{204, "text/plain", "", {}};
      res.headers.emplace_back("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.headers.emplace_back("Access-Control-Allow-Headers", "Content-Type");
      return res;
    }
    const auto parts = split_path(req.path);
    if (parts.empty() || parts[0] != "api") return error(404, "not-found", "no such endpoint: " + req.path);

    if (parts.size() == 2 && parts[1] == "legend") {
      if (req.method != "GET") return method_not_allowed(req);
      return json(200, legend_json());
    }
    if (parts.size() == 3 && parts[1] == "schema") {
      if (req.method != "GET") return method_not_allowed(req);
      if (parts[2] == "chart-config") return json(200, schemas::chart_config());
      if (parts[2] == "render-options") return json(200, schemas::render_options());
      if (parts[2] == "session-profile") return json(200, schemas::session_profile());
      if (parts[2] == "detector-config") return json(200, schemas::detector_config());
      if (parts[2] == "findings") return json(200, schemas::findings());
      return error(404, "not-found", "no schema named '" + parts[2] + "'");
    }
    if (parts.size() >= 2 && parts[1] == "logs") {
      if (parts.size() == 2) {
        if (req.method == "GET") return list_logs();
        if (req.method == "POST") return upload(req);
        return method_not_allowed(req);
      }
      auto stored = store_->get(parts[2]);
      if (!stored) return error(404, "unknown-log", "no log with id '" + parts[2] + "'", "id");
      if (parts.size() == 3) {
        if (req.method != "GET") return method_not_allowed(req);
        Json body = service::to_json(stored->handle);
        body["warnings"] = warnings_json(stored->warnings);
        return json(200, body);
      }
      if (parts.size() == 4) {
        const std::string& action = parts[3];
        if (action == "validate" && req.method == "GET") return json(200, to_json(validate_log(stored->log)));
        if (action == "chart" && req.method == "POST") return chart(*stored, req);
        if (action == "profile" && req.method == "GET") return profile(*stored, req);
        if (action == "hit-test" && req.method == "POST") return hit_test(*stored, req);
        if (action == "validate" || action == "chart" || action == "profile" || action == "hit-test")
          return method_not_allowed(req);
      }
    }
    return error(404, "not-found", "no such endpoint: " + req.path);
  }

  static ApiResponse method_not_allowed(const ApiRequest& req) {
    return error(405, "method-not-allowed", req.method + " is not supported on " + req.path);
  }

  static Json warnings_json(const std::vector<ParseWarning>& warnings) {
    Json out = Json::array();
    for (const auto& w : warnings) out.push_back(to_json(w));
    return out;
  }

  ApiResponse list_logs() const {
    Json out = Json::array();
    for (const auto& h : store_->list()) out.push_back(service::to_json(h));
    return json(200, out);
  }

  ApiResponse upload(const ApiRequest& req) const {
    LogFormat format;
    if (auto f = req.param("format")) {
      if (*f == "xes") format = LogFormat::Xes;
      else if (*f == "csv") format = LogFormat::Csv;
      else return error(400, "invalid-format", "format must be xes or csv", "format");
    } else if (req.content_type.find("csv") != std::string::npos) {
      format = LogFormat::Csv;
    } else if (req.content_type.find("xml") != std::string::npos) {
      format = LogFormat::Xes;
    } else {
      format = detect_format(req.param("name").value_or(""), req.body);
    }
    try {
      ParseResult parsed = parse_log(req.body, format, options_.parse);
      Json warnings = warnings_json(parsed.warnings);
      auto stored = store_->add(req.param("name").value_or(""), std::move(parsed), req.body, format);
      Json body = service::to_json(stored->handle);
      body["warnings"] = warnings;
      return json(201, body);
    } catch (const ParseError& e) {
      Json body{{"code", "parse-error"}, {"message", e.what()}, {"line", e.line()}, {"column", e.column()}};
      return json(400, body);
    } catch (const SchemaError& e) {
      return error(400, "schema-error", e.what(), e.trace().empty() ? std::nullopt : std::optional(e.trace()));
    } catch (const ClassifyError& e) {
      return error(400, "unknown-operation", e.what());
    }
  }

  static ChartRequest parse_chart_request(const std::string& body) {
    ChartRequest out;
    if (body.find_first_not_of(" \t\r\n") == std::string::npos) return out;
    const Json j = Json::parse(body);
    if (!j.is_object()) throw ConfigError("body", "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      if (key == "config") {
        out.config = chart_config_from_json(it.value(), {}, "config");
      } else if (key == "render") {
        out.render = render_options_from_json(it.value(), {}, "render");
      } else if (key == "response_kind") {
        const auto kind = it.value().is_string() ? it.value().get<std::string>() : "";
        if (kind == "svg") out.want_svg = true;
        else if (kind == "model-json") out.want_svg = false;
        else throw ConfigError("response_kind", "expected svg or model-json");
      } else if (key == "rect") {
        PixelRect r;
        detail::each_object_field(it.value(), "rect", [&](const std::string& k, const Json& v, const std::string& f) {
          detail::require_type(v, Json::value_t::number_float, f, "a number");
          if (k == "x") r.x = v.get<double>();
          else if (k == "y") r.y = v.get<double>();
          else if (k == "width") r.width = v.get<double>();
          else if (k == "height") r.height = v.get<double>();
          else return false;
          return true;
        });
        out.rect = r;
      } else {
        throw ConfigError(key, "unknown field");
      }
    }
    out.config.validate();
    out.render.validate();
    return out;
  }

  static std::string notice_header(const ChartModel& chart) {
    std::string out;
    for (const auto& n : chart.notices) {
      if (!out.empty()) out += "; ";
      out += n.code;
    }
    return out;
  }

  ApiResponse chart(const StoredLog& stored, const ApiRequest& req) const {
    const ChartRequest cr = parse_chart_request(req.body);
    if (cr.rect) throw ConfigError("rect", "only valid for hit-test");
    const ChartModel model = build_chart(stored.log, cr.config);
    ApiResponse res;
    if (cr.want_svg) {
      res = {200, "image/svg+xml", render_svg(model, cr.render), {}};
    } else {
      res = json(200, to_json(model));
    }
    if (!model.notices.empty()) res.headers.emplace_back("X-Chart-Notices", notice_header(model));
    return res;
  }

  ApiResponse profile(const StoredLog& stored, const ApiRequest& req) const {
    DetectorConfig cfg;
    if (auto t = req.param("thresholds")) cfg = detector_config_from_json(Json::parse(*t), cfg, "thresholds");
    Json singles = Json::object();
    for (const auto& [k, v] : req.query) {
      if (k == "thresholds") continue;
      Json parsed;
      try {
        parsed = Json::parse(v);
      } catch (const Json::exception&) {
        throw ConfigError(k, "expected a number");
      }
      singles[k] = parsed;
    }
    cfg = detector_config_from_json(singles, cfg);
    return json(200, to_json(profile_session(stored.log, cfg)));
  }

  ApiResponse hit_test(const StoredLog& stored, const ApiRequest& req) const {
    const ChartRequest cr = parse_chart_request(req.body);
    if (!cr.rect) throw ConfigError("rect", "required");
    const ChartModel model = build_chart(stored.log, cr.config);
    Json dots = Json::array();
    for (const auto& hit : ppmchart::hit_test(model, cr.render, *cr.rect)) {
      const Dot& d = model.timelines[hit.timeline].dots[hit.dot];
      dots.push_back(Json{{"element_id", d.element_id},
                          {"operation", to_string(d.operation)},
                          {"timestamp", format_iso8601(d.t_actual)},
                          {"t_actual", d.t_actual},
                          {"t_display", d.t_display},
                          {"timeline", hit.timeline},
                          {"cx", hit.cx},
                          {"cy", hit.cy}});
    }
    return json(200, Json{{"dots", dots}});
  }

  std::shared_ptr<LogStore> store_;
  ServiceOptions options_;
};

/// Binds a Service to a cpp-httplib server.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<Service> service) : service_(std::move(service)) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      ApiRequest api{req.method, req.path, req.body, {}, req.get_header_value("Content-Type")};
      for (const auto& [k, v] : req.params) api.query.emplace(k, v);
      ApiResponse out = service_->handle(api);
      res.status = out.status;
      for (const auto& [k, v] : out.headers) res.set_header(k, v);
      if (!out.body.empty() || out.status != 204) res.set_content(out.body, out.content_type);
    };
    server_.Get(".*", handler);
    server_.Post(".*", handler);
    server_.Options(".*", handler);
  }

  /// Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port) {
    if (port == 0) return server_.bind_to_any_port(host);
    return server_.bind_to_port(host, port) ? port : -1;
  }

  /// Blocks until stop().
  bool listen_after_bind() { return server_.listen_after_bind(); }

  void stop() { server_.stop(); }

  bool wait_until_ready() {
    for (int i = 0; i < 500 && !server_.is_running(); ++i)
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    return server_.is_running();
  }

 private:
  std::shared_ptr<Service> service_;
  httplib::Server server_;
};

}  // namespace ppmchart::service
