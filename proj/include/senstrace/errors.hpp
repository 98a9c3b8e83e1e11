#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace senstrace {

// Every recoverable failure in the library carries one of these kinds so
// callers (and the CLI exit-code map) can dispatch without string matching.
enum class ErrorKind {
  // evaluator
  UnboundVariable,
  TypeMismatch,
  SensitiveGuard,
  SensitiveScalar,
  DanglingLocation,
  DepthExceeded,
  // frontend
  ParseError,
  UnknownMetric,
  DuplicateName,
  MalformedInput,
  // sensitive wrapper layer
  NonPositiveBound,
  UnboundedSum,
  ProbeEscape,
  // privacy runtime
  InfiniteSensitivity,
  MetricIncompatible,
  DeltaOutOfRange,
  AlphaMismatch,
  RegimeMismatch,
  FilterHalt,
  HeterogeneousCosts,
  EmptyOptions,
  NoQueryAboveThreshold,
  QuerySensitivityViolation,
  // harness
  BaseEvaluationFailed,
  BadCorpus,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// Byte range into the original program text, used by parse diagnostics.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

class ParseError : public Error {
public:
  ParseError(SourceSpan span, const std::string &expected,
             const std::string &message)
      : Error(ErrorKind::ParseError, message + " at bytes [" +
                                         std::to_string(span.start) + ", " +
                                         std::to_string(span.end) +
                                         "), expected " + expected),
        span_(span), expected_(expected) {}

  SourceSpan span() const { return span_; }
  const std::string &expected() const { return expected_; }

private:
  SourceSpan span_;
  std::string expected_;
};

} // namespace senstrace
