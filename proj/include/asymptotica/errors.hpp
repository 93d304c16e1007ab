#pragma once

#include <stdexcept>
#include <string>

namespace asymptotica {

// Root of everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input violated a documented precondition (bad spec, bad matrix, bad range).
// The CLI maps this family to exit code 2.
struct PreconditionError : Error {
  using Error::Error;
};

// A numeric procedure could not certify its result (no convergence, overflow,
// divergence). The CLI maps this family to exit code 3.
struct NumericError : Error {
  using Error::Error;
};

struct NotPsdError : PreconditionError {
  double min_eigenvalue;
  NotPsdError(const std::string& what, double min_eig)
      : PreconditionError(what), min_eigenvalue(min_eig) {}
};

struct SingularError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct IllConditionedError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct NotAContractionError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct NotStrictlyPositiveError : PreconditionError {
  double min_eigenvalue;
  NotStrictlyPositiveError(const std::string& what, double min_eig)
      : PreconditionError(what), min_eigenvalue(min_eig) {}
};

struct NotAnIsometryCandidateError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct NotPowerBoundedError : PreconditionError {
  std::string which;  // names the offending operator ("t" or "t_inverse")
  NotPowerBoundedError(const std::string& what, std::string which_op)
      : PreconditionError(what), which(std::move(which_op)) {}
};

struct NotPowerBoundedEvidenceError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct OutOfRangeError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct InsufficientDataError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct UnknownGalleryEntryError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct UnsupportedVariantError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct SpecParseError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct IoError : PreconditionError {
  using PreconditionError::PreconditionError;
};

struct NoConvergenceError : NumericError {
  using NumericError::NumericError;
};

struct OverflowError : NumericError {
  using NumericError::NumericError;
};

struct DivergentError : NumericError {
  using NumericError::NumericError;
};

// Thrown only when a witness residual is too poor to return even with a
// warning; mild degradation is reported on the witness object instead.
struct WitnessDegradedError : NumericError {
  double residual;
  WitnessDegradedError(const std::string& what, double res)
      : NumericError(what), residual(res) {}
};

}  // namespace asymptotica
