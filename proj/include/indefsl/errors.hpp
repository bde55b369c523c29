#pragma once

#include <stdexcept>
#include <string>

namespace indefsl {

enum class ErrorKind {
  NonConvergence,
  InvalidBands,
  DivisionRemainder,
  TauOutOfGap,
  NotHerglotz,
  EdgeEvaluation,
  ComplexResidue,
  PoleHit,
  WindingMismatch,
  QuadratureDivergenceUndecided,
  OrderUnresolved,
  DegenerateD,
  NonIntegrable,
  QuadratureFailure,
  TailDivergence,
  SolveFailure,
  ModulusOutOfRange,
  Usage,
  MalformedInput
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::InvalidBands: return "InvalidBands";
    case ErrorKind::DivisionRemainder: return "DivisionRemainder";
    case ErrorKind::TauOutOfGap: return "TauOutOfGap";
    case ErrorKind::NotHerglotz: return "NotHerglotz";
    case ErrorKind::EdgeEvaluation: return "EdgeEvaluation";
    case ErrorKind::ComplexResidue: return "ComplexResidue";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::WindingMismatch: return "WindingMismatch";
    case ErrorKind::QuadratureDivergenceUndecided: return "QuadratureDivergenceUndecided";
    case ErrorKind::OrderUnresolved: return "OrderUnresolved";
    case ErrorKind::DegenerateD: return "DegenerateD";
    case ErrorKind::NonIntegrable: return "NonIntegrable";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::TailDivergence: return "TailDivergence";
    case ErrorKind::SolveFailure: return "SolveFailure";
    case ErrorKind::ModulusOutOfRange: return "ModulusOutOfRange";
    case ErrorKind::Usage: return "Usage";
    case ErrorKind::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind k, const std::string& what)
      : std::runtime_error(std::string(to_string(k)) + ": " + what), kind_(k) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace indefsl
