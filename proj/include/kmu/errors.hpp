#pragma once

#include <stdexcept>
#include <string>

namespace kmu {

// Every failure mode the engine can report. Sentinel kinds (CriteriaDisagreement,
// ClassMismatch, AsymmetryDetected, FlatCriteriaDisagree, NoSolution,
// NonUniqueSolution, EquivalenceViolation) flag internal inconsistencies that
// should never occur on valid inputs.
enum class ErrorKind {
  DivisionByZero,
  IncompatibleDiscriminants,
  NegativeRadicand,
  NestedRadical,
  SingularSystem,
  InconsistentSystem,
  IoError,
  ParseError,
  InvariantViolation,
  IdentityViolation,
  CriteriaDisagreement,
  NotNullity,
  NonConstantFit,
  SasakianUndefined,
  ClassMismatch,
  AsymmetryDetected,
  FlatCriteriaDisagree,
  DegenerateForm,
  NoSolution,
  NonUniqueSolution,
  EquivalenceViolation,
  PreconditionFailed,
  SignCaseMismatch,
  ParameterOutOfRange,
  InvariantTooSmall,
  InvariantTooLarge,
  SasakianInput,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::IncompatibleDiscriminants: return "IncompatibleDiscriminants";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::NestedRadical: return "NestedRadical";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::InconsistentSystem: return "InconsistentSystem";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::IdentityViolation: return "IdentityViolation";
    case ErrorKind::CriteriaDisagreement: return "CriteriaDisagreement";
    case ErrorKind::NotNullity: return "NotNullity";
    case ErrorKind::NonConstantFit: return "NonConstantFit";
    case ErrorKind::SasakianUndefined: return "SasakianUndefined";
    case ErrorKind::ClassMismatch: return "ClassMismatch";
    case ErrorKind::AsymmetryDetected: return "AsymmetryDetected";
    case ErrorKind::FlatCriteriaDisagree: return "FlatCriteriaDisagree";
    case ErrorKind::DegenerateForm: return "DegenerateForm";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::NonUniqueSolution: return "NonUniqueSolution";
    case ErrorKind::EquivalenceViolation: return "EquivalenceViolation";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::SignCaseMismatch: return "SignCaseMismatch";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::InvariantTooSmall: return "InvariantTooSmall";
    case ErrorKind::InvariantTooLarge: return "InvariantTooLarge";
    case ErrorKind::SasakianInput: return "SasakianInput";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg), kind_(kind), detail_(msg) {}

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace kmu
