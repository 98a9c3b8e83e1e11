#include "senstrace/errors.hpp"

namespace senstrace {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::UnboundVariable: return "UnboundVariable";
  case ErrorKind::TypeMismatch: return "TypeMismatch";
  case ErrorKind::SensitiveGuard: return "SensitiveGuard";
  case ErrorKind::SensitiveScalar: return "SensitiveScalar";
  case ErrorKind::DanglingLocation: return "DanglingLocation";
  case ErrorKind::DepthExceeded: return "DepthExceeded";
  case ErrorKind::ParseError: return "ParseError";
  case ErrorKind::UnknownMetric: return "UnknownMetric";
  case ErrorKind::DuplicateName: return "DuplicateName";
  case ErrorKind::MalformedInput: return "MalformedInput";
  case ErrorKind::NonPositiveBound: return "NonPositiveBound";
  case ErrorKind::UnboundedSum: return "UnboundedSum";
  case ErrorKind::ProbeEscape: return "ProbeEscape";
  case ErrorKind::InfiniteSensitivity: return "InfiniteSensitivity";
  case ErrorKind::MetricIncompatible: return "MetricIncompatible";
  case ErrorKind::DeltaOutOfRange: return "DeltaOutOfRange";
  case ErrorKind::AlphaMismatch: return "AlphaMismatch";
  case ErrorKind::RegimeMismatch: return "RegimeMismatch";
  case ErrorKind::FilterHalt: return "FilterHalt";
  case ErrorKind::HeterogeneousCosts: return "HeterogeneousCosts";
  case ErrorKind::EmptyOptions: return "EmptyOptions";
  case ErrorKind::NoQueryAboveThreshold: return "NoQueryAboveThreshold";
  case ErrorKind::QuerySensitivityViolation: return "QuerySensitivityViolation";
  case ErrorKind::BaseEvaluationFailed: return "BaseEvaluationFailed";
  case ErrorKind::BadCorpus: return "BadCorpus";
  }
  return "UnknownError";
}

} // namespace senstrace
