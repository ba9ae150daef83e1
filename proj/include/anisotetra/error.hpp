#pragma once

#include <stdexcept>
#include <string>

namespace anisotetra {

enum class ErrorKind {
  DegenerateTetrahedron,
  InvalidGammaMax,
  InvalidDegree,
  MissingNodeValue,
  DerivativeUnavailable,
  IllConditionedBasis,
  UnsupportedDegree,
  InadmissiblePC,
  GenerationFailure,
  ParseError,
  ExpressionParseError,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so the CLI can map it
/// onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateTetrahedron: return "DegenerateTetrahedron";
    case ErrorKind::InvalidGammaMax: return "InvalidGammaMax";
    case ErrorKind::InvalidDegree: return "InvalidDegree";
    case ErrorKind::MissingNodeValue: return "MissingNodeValue";
    case ErrorKind::DerivativeUnavailable: return "DerivativeUnavailable";
    case ErrorKind::IllConditionedBasis: return "IllConditionedBasis";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::InadmissiblePC: return "InadmissiblePC";
    case ErrorKind::GenerationFailure: return "GenerationFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ExpressionParseError: return "ExpressionParseError";
  }
  return "Unknown";
}

}  // namespace anisotetra
