#pragma once

// Reading and writing event logs: an XES-XML subset and a flat CSV layout.
// See docs/formats.md for both grammars.

#include <expat.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ppmchart/error.hpp"
#include "ppmchart/log_model.hpp"
#include "ppmchart/xml_escape.hpp"

namespace ppmchart {

enum class LogFormat { Xes, Csv };

inline std::string_view to_string(LogFormat f) { return f == LogFormat::Xes ? "xes" : "csv"; }

struct ParseOptions {
  /// Unknown operation names fail the parse instead of being dropped with a warning.
  bool strict_operations = false;
};

struct ParseWarning {
  std::string code;
  std::string element_id;
  std::string message;
};

struct ParseResult {
  EventLog log;
  std::vector<ParseWarning> warnings;
};

namespace detail {

struct RawEvent {
  std::optional<std::string> name;
  std::optional<Millis> timestamp;
  std::optional<std::string> id;
  std::optional<double> x;
  std::optional<double> y;
  std::optional<std::string> source;
  std::optional<std::string> target;
  std::optional<std::string> label;
  std::map<std::string, std::string> extra;
};

struct RawTrace {
  std::optional<std::string> name;
  std::vector<RawEvent> events;
};

struct RawLog {
  std::string log_id;
  std::map<std::string, std::string> meta;
  std::vector<RawTrace> traces;
};

inline std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<Millis> parse_int(std::string_view s) {
  Millis v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline ParseResult finalize(RawLog raw, const ParseOptions& opts) {
  ParseResult result;
  result.log.log_id = std::move(raw.log_id);
  result.log.source_meta = std::move(raw.meta);
  std::set<std::string> seen;
  for (std::size_t ti = 0; ti < raw.traces.size(); ++ti) {
    RawTrace& rt = raw.traces[ti];
    if (!rt.name || rt.name->empty())
      throw SchemaError("trace #" + std::to_string(ti + 1) + " has no concept:name", "");
    const std::string& id = *rt.name;
    if (!seen.insert(id).second) throw SchemaError("duplicate trace name", id);

    ElementTrace trace;
    trace.element_id = id;
    for (std::size_t ei = 0; ei < rt.events.size(); ++ei) {
      RawEvent& re = rt.events[ei];
      const std::string where = "event #" + std::to_string(ei + 1);
      if (!re.name || re.name->empty()) throw SchemaError(where + " has no name", id);
      if (!re.timestamp) throw SchemaError(where + " has no timestamp", id);
      if (*re.timestamp < 0) throw SchemaError(where + " has a negative timestamp", id);
      if (!re.id) throw SchemaError(where + " has no id attribute", id);
      if (*re.id != id)
        throw SchemaError(where + " has id '" + *re.id + "' which does not match the trace name",
                          id);
      if (re.x.has_value() != re.y.has_value())
        throw SchemaError(where + " has only one of the x/y coordinates", id);
      if (!operation_from_string(*re.name)) {
        if (opts.strict_operations) throw ClassifyError(*re.name);
        result.warnings.push_back(
            {"unknown-operation-dropped", id, "dropped unknown operation '" + *re.name + "'"});
        continue;
      }
      LogEvent ev;
      ev.name = std::move(*re.name);
      ev.timestamp = *re.timestamp;
      ev.element_id = id;
      if (re.x) ev.position = Point{*re.x, *re.y};
      ev.edge_source = std::move(re.source);
      ev.edge_target = std::move(re.target);
      ev.label_text = std::move(re.label);
      ev.extra = std::move(re.extra);
      trace.events.push_back(std::move(ev));
    }
    if (trace.events.empty()) {
      result.warnings.push_back({"empty-trace-dropped", id, "trace has no usable events"});
      continue;
    }
    auto by_time = [](const LogEvent& a, const LogEvent& b) { return a.timestamp < b.timestamp; };
    if (!std::is_sorted(trace.events.begin(), trace.events.end(), by_time)) {
      std::stable_sort(trace.events.begin(), trace.events.end(), by_time);
      result.warnings.push_back(
          {"events-resorted", id, "events were not in timestamp order and have been re-sorted"});
    }
    result.log.traces.push_back(std::move(trace));
  }
  return result;
}

// ---------------------------------------------------------------------------
// XES

class XesReader {
 public:
  explicit XesReader(std::vector<ParseWarning>& warnings) : warnings_(warnings) {}

  RawLog read(std::string_view text) {
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"),
                                                                        &XML_ParserFree);
    parser_ = parser.get();
    XML_SetUserData(parser_, this);
    XML_SetElementHandler(parser_, &XesReader::on_start, &XesReader::on_end);
    const auto status = XML_Parse(parser_, text.data(), static_cast<int>(text.size()), XML_TRUE);
    if (failure_) std::rethrow_exception(failure_);
    if (status != XML_STATUS_OK) {
      throw ParseError(XML_ErrorString(XML_GetErrorCode(parser_)),
                       XML_GetCurrentLineNumber(parser_), XML_GetCurrentColumnNumber(parser_) + 1);
    }
    if (!saw_root_) throw ParseError("empty document", 1, 1);
    return std::move(log_);
  }

 private:
  enum class Ctx { Document, Log, Trace, Event, Skip };

  static void on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
    static_cast<XesReader*>(self)->start(name, attrs);
  }
  static void on_end(void* self, const XML_Char*) { static_cast<XesReader*>(self)->stack_.pop_back(); }

  static bool is_attribute_tag(std::string_view tag) {
    return tag == "string" || tag == "date" || tag == "int" || tag == "float" ||
           tag == "boolean" || tag == "id";
  }

  void fail(std::exception_ptr e) {
    if (!failure_) failure_ = e;
    XML_StopParser(parser_, XML_FALSE);
  }

  void start(std::string_view tag, const XML_Char** attrs) {
    if (failure_) return;
    const Ctx top = stack_.empty() ? Ctx::Document : stack_.back();
    Ctx next = Ctx::Skip;
    try {
      switch (top) {
        case Ctx::Document:
          if (tag != "log") {
            throw ParseError("expected <log> as the document element, found <" +
                                 std::string(tag) + ">",
                             XML_GetCurrentLineNumber(parser_),
                             XML_GetCurrentColumnNumber(parser_) + 1);
          }
          saw_root_ = true;
          next = Ctx::Log;
          break;
        case Ctx::Log:
          if (tag == "trace") {
            log_.traces.emplace_back();
            next = Ctx::Trace;
          } else if (is_attribute_tag(tag)) {
            auto [key, value] = key_value(attrs);
            if (key == "concept:name")
              log_.log_id = value;
            else if (!key.empty())
              log_.meta[key] = value;
          }
          break;
        case Ctx::Trace:
          if (tag == "event") {
            log_.traces.back().events.emplace_back();
            next = Ctx::Event;
          } else if (is_attribute_tag(tag)) {
            auto [key, value] = key_value(attrs);
            if (key == "concept:name") log_.traces.back().name = value;
          }
          break;
        case Ctx::Event:
          if (is_attribute_tag(tag)) event_attribute(tag, attrs);
          break;
        case Ctx::Skip:
          break;
      }
    } catch (...) {
      fail(std::current_exception());
    }
    stack_.push_back(next);
  }

  static std::pair<std::string, std::string> key_value(const XML_Char** attrs) {
    std::string key, value;
    for (std::size_t i = 0; attrs[i]; i += 2) {
      std::string_view a = attrs[i];
      if (a == "key") key = attrs[i + 1];
      if (a == "value") value = attrs[i + 1];
    }
    return {key, value};
  }

  std::string current_trace_name() const {
    const auto& t = log_.traces.back();
    return t.name.value_or("#" + std::to_string(log_.traces.size()));
  }

  void event_attribute(std::string_view tag, const XML_Char** attrs) {
    auto [key, value] = key_value(attrs);
    RawEvent& ev = log_.traces.back().events.back();
    if (key == "concept:name") {
      ev.name = value;
    } else if (key == "time:timestamp") {
      auto ts = parse_iso8601(value);
      if (!ts) throw SchemaError("invalid timestamp '" + value + "'", current_trace_name());
      if (ts->coarse) {
        warnings_.push_back({"coarse-timestamp", current_trace_name(),
                             "timestamp '" + value + "' has less than millisecond precision"});
      }
      ev.timestamp = ts->epoch_ms;
    } else if (key == "id") {
      ev.id = value;
    } else if (key == "x" || key == "y") {
      auto v = parse_double(value);
      if (!v) throw SchemaError("invalid coordinate '" + value + "'", current_trace_name());
      (key == "x" ? ev.x : ev.y) = *v;
    } else if (key == "source") {
      ev.source = value;
    } else if (key == "target") {
      ev.target = value;
    } else if (key == "label") {
      ev.label = value;
    } else if (!key.empty()) {
      (void)tag;
      ev.extra[key] = value;
    }
  }

  std::vector<ParseWarning>& warnings_;
  XML_Parser parser_ = nullptr;
  std::vector<Ctx> stack_;
  RawLog log_;
  bool saw_root_ = false;
  std::exception_ptr failure_;
};

inline void xes_attribute(std::string& out, std::string_view indent, std::string_view type,
                          std::string_view key, std::string_view value) {
  out.append(indent).append("<").append(type).append(" key=\"");
  xml_escape_into(out, key);
  out += "\" value=\"";
  xml_escape_into(out, value);
  out += "\"/>\n";
}

inline std::string write_xes(const EventLog& log) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<log xes.version=\"1.0\">\n";
  if (!log.log_id.empty()) xes_attribute(out, "  ", "string", "concept:name", log.log_id);
  for (const auto& [k, v] : log.source_meta) xes_attribute(out, "  ", "string", k, v);
  for (const auto& trace : log.traces) {
    out += "  <trace>\n";
    xes_attribute(out, "    ", "string", "concept:name", trace.element_id);
    for (const auto& ev : trace.events) {
      out += "    <event>\n";
      xes_attribute(out, "      ", "string", "concept:name", ev.name);
      xes_attribute(out, "      ", "date", "time:timestamp", format_iso8601(ev.timestamp));
      xes_attribute(out, "      ", "string", "id", ev.element_id);
      if (ev.position) {
        xes_attribute(out, "      ", "float", "x", format_double(ev.position->x));
        xes_attribute(out, "      ", "float", "y", format_double(ev.position->y));
      }
      if (ev.edge_source) xes_attribute(out, "      ", "string", "source", *ev.edge_source);
      if (ev.edge_target) xes_attribute(out, "      ", "string", "target", *ev.edge_target);
      if (ev.label_text) xes_attribute(out, "      ", "string", "label", *ev.label_text);
      for (const auto& [k, v] : ev.extra) xes_attribute(out, "      ", "string", k, v);
      out += "    </event>\n";
    }
    out += "  </trace>\n";
  }
  out += "</log>\n";
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::array<std::string_view, 7> kCsvColumns{
    "element_id", "name", "timestamp_ms", "x", "y", "source", "target"};

/// Splits one CSV record starting at `pos`; handles RFC 4180 quoting.
inline std::vector<std::string> csv_record(std::string_view text, std::size_t& pos,
                                           std::size_t& line) {
  std::vector<std::string> fields(1);
  const std::size_t start_line = line;
  std::size_t col = 1;
  bool quoted = false;
  bool was_quoted = false;
  while (pos < text.size()) {
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          fields.back() += '"';
          pos += 2;
          col += 2;
          continue;
        }
        quoted = false;
      } else {
        if (c == '\n') {
          ++line;
          col = 0;
        }
        fields.back() += c;
      }
      ++pos;
      ++col;
      continue;
    }
    if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') {
      ++pos;
      continue;
    }
    if (c == '\n') {
      ++pos;
      ++line;
      return fields;
    }
    if (c == ',') {
      fields.emplace_back();
      was_quoted = false;
    } else if (c == '"') {
      if (!fields.back().empty() || was_quoted)
        throw ParseError("unexpected quote inside an unquoted field", line, col);
      quoted = true;
      was_quoted = true;
    } else {
      if (was_quoted) throw ParseError("characters after a closing quote", line, col);
      fields.back() += c;
    }
    ++pos;
    ++col;
  }
  if (quoted) throw ParseError("unterminated quoted field", start_line, 1);
  ++line;
  return fields;
}

inline RawLog read_csv(std::string_view text) {
  RawLog log;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::vector<std::string> header;
  std::map<std::string, std::size_t> trace_index;
  while (pos < text.size()) {
    const std::size_t record_line = line;
    if (text[pos] == '#') {
      std::size_t eol = text.find('\n', pos);
      std::string_view comment = text.substr(pos + 1, eol == std::string_view::npos ? eol : eol - pos - 1);
      if (!comment.empty() && comment.back() == '\r') comment.remove_suffix(1);
      while (!comment.empty() && comment.front() == ' ') comment.remove_prefix(1);
      if (comment.rfind("log_id:", 0) == 0) {
        log.log_id = std::string(comment.substr(7));
        if (!log.log_id.empty() && log.log_id.front() == ' ') log.log_id.erase(0, 1);
      } else if (comment.rfind("meta:", 0) == 0) {
        std::string_view kv = comment.substr(5);
        while (!kv.empty() && kv.front() == ' ') kv.remove_prefix(1);
        auto eq = kv.find('=');
        if (eq != std::string_view::npos)
          log.meta[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
      }
      pos = eol == std::string_view::npos ? text.size() : eol + 1;
      ++line;
      continue;
    }
    if (text[pos] == '\n' || (text[pos] == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n')) {
      pos = text.find('\n', pos) + 1;
      ++line;
      continue;
    }
    auto fields = csv_record(text, pos, line);
    if (header.empty()) {
      header = std::move(fields);
      if (header.size() < kCsvColumns.size())
        throw ParseError("header must start with element_id,name,timestamp_ms,x,y,source,target",
                         record_line, 1);
      for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
        if (header[i] != kCsvColumns[i])
          throw ParseError("expected column '" + std::string(kCsvColumns[i]) + "', found '" +
                               header[i] + "'",
                           record_line, i + 1);
      }
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(fields.size()),
                       record_line, 1);
    }
    const std::string& id = fields[0];
    auto [it, inserted] = trace_index.try_emplace(id, log.traces.size());
    if (inserted) {
      log.traces.emplace_back();
      log.traces.back().name = id;
    }
    RawEvent ev;
    ev.id = id;
    if (!fields[1].empty()) ev.name = fields[1];
    if (!fields[2].empty()) {
      auto ts = parse_int(fields[2]);
      if (!ts) throw SchemaError("invalid timestamp_ms '" + fields[2] + "'", id);
      ev.timestamp = *ts;
    }
    for (std::size_t c : {3u, 4u}) {
      if (fields[c].empty()) continue;
      auto v = parse_double(fields[c]);
      if (!v) throw SchemaError("invalid coordinate '" + fields[c] + "'", id);
      (c == 3 ? ev.x : ev.y) = *v;
    }
    if (!fields[5].empty()) ev.source = fields[5];
    if (!fields[6].empty()) ev.target = fields[6];
    for (std::size_t c = kCsvColumns.size(); c < header.size(); ++c) {
      if (fields[c].empty()) continue;
      if (header[c] == "label")
        ev.label = fields[c];
      else
        ev.extra[header[c]] = fields[c];
    }
    log.traces[it->second].events.push_back(std::move(ev));
  }
  return log;
}

inline void csv_field(std::string& out, std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos && !(s.size() && s.front() == '#')) {
    out += s;
    return;
  }
  out += '"';
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

inline std::string write_csv(const EventLog& log) {
  std::string out;
  if (!log.log_id.empty()) out += "# log_id: " + log.log_id + "\n";
  for (const auto& [k, v] : log.source_meta) out += "# meta: " + k + "=" + v + "\n";
  std::set<std::string> extra_keys;
  for (const auto& t : log.traces)
    for (const auto& ev : t.events)
      for (const auto& [k, v] : ev.extra) extra_keys.insert(k);
  out += "element_id,name,timestamp_ms,x,y,source,target,label";
  for (const auto& k : extra_keys) {
    out += ',';
    csv_field(out, k);
  }
  out += '\n';
  for (const auto& t : log.traces) {
    for (const auto& ev : t.events) {
      csv_field(out, ev.element_id);
      out += ',';
      csv_field(out, ev.name);
      out += ',' + std::to_string(ev.timestamp) + ',';
      if (ev.position) out += format_double(ev.position->x) + ',' + format_double(ev.position->y);
      else out += ',';
      out += ',';
      if (ev.edge_source) csv_field(out, *ev.edge_source);
      out += ',';
      if (ev.edge_target) csv_field(out, *ev.edge_target);
      out += ',';
      if (ev.label_text) csv_field(out, *ev.label_text);
      for (const auto& k : extra_keys) {
        out += ',';
        if (auto f = ev.extra.find(k); f != ev.extra.end()) csv_field(out, f->second);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace detail

/// Parses a log document. Throws ParseError, SchemaError, or ClassifyError (strict mode).
inline ParseResult parse_log(std::string_view raw, LogFormat format, const ParseOptions& opts = {}) {
  std::vector<ParseWarning> warnings;
  detail::RawLog raw_log;
  if (format == LogFormat::Xes) {
    detail::XesReader reader(warnings);
    raw_log = reader.read(raw);
  } else {
    raw_log = detail::read_csv(raw);
  }
  ParseResult result = detail::finalize(std::move(raw_log), opts);
  warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());
  result.warnings = std::move(warnings);
  return result;
}

/// CSV cannot carry empty-valued extra attributes; everything else round-trips in both formats.
inline std::string write_log(const EventLog& log, LogFormat format) {
  return format == LogFormat::Xes ? detail::write_xes(log) : detail::write_csv(log);
}

/// Chooses a format from a file name or, failing that, from the first
/// non-blank byte of the content.
inline LogFormat detect_format(std::string_view file_name, std::string_view content) {
  auto ends_with = [&](std::string_view suffix) {
    return file_name.size() >= suffix.size() &&
           file_name.substr(file_name.size() - suffix.size()) == suffix;
  };
  if (ends_with(".xes") || ends_with(".xml")) return LogFormat::Xes;
  if (ends_with(".csv")) return LogFormat::Csv;
  for (char c : content) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    return c == '<' ? LogFormat::Xes : LogFormat::Csv;
  }
  return LogFormat::Csv;
}

}  // namespace ppmchart
