#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ppmchart {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed syntax in an input document.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that violates the event-log schema.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& message, std::string trace)
      : Error(trace.empty() ? message : "trace '" + trace + "': " + message),
        trace_(std::move(trace)) {}

  const std::string& trace() const noexcept { return trace_; }

 private:
  std::string trace_;
};

/// Operation name outside the fixed vocabulary.
class ClassifyError : public Error {
 public:
  explicit ClassifyError(std::string name)
      : Error("unknown operation '" + name + "'"), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// The log cannot be replayed into a consistent model graph.
class ReplayError : public Error {
 public:
  ReplayError(const std::string& message, std::string element_id)
      : Error("element '" + element_id + "': " + message), element_id_(std::move(element_id)) {}

  const std::string& element_id() const noexcept { return element_id_; }

 private:
  std::string element_id_;
};

/// A graph-based ordering cannot be computed for this graph.
class OrderingUnavailable : public Error {
 public:
  using Error::Error;
};

/// Invalid chart, render or detector configuration. `field` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace ppmchart
