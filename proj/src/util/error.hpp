#pragma once

#include <stdexcept>
#include <string>

namespace qtanner {

// Coarse error classes. The C API maps these onto its status codes and the
// CLI maps those onto exit codes.
enum class Errc {
  invalid_argument,
  precondition,
  budget_exceeded,
  search_exhausted,
  convergence,
  generation_failure,
  io,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

#define QTANNER_DEFINE_ERROR(Name, Code)                                  \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(Errc::Code, what) {}   \
  };

QTANNER_DEFINE_ERROR(InvalidArgument, invalid_argument)
QTANNER_DEFINE_ERROR(DomainError, invalid_argument)
QTANNER_DEFINE_ERROR(DimensionMismatch, invalid_argument)
QTANNER_DEFINE_ERROR(InvalidDimension, invalid_argument)
QTANNER_DEFINE_ERROR(NotInKernel, invalid_argument)
QTANNER_DEFINE_ERROR(GroupMismatch, invalid_argument)
QTANNER_DEFINE_ERROR(StateDimensionMismatch, invalid_argument)
QTANNER_DEFINE_ERROR(UnsupportedField, invalid_argument)
QTANNER_DEFINE_ERROR(PreconditionViolated, precondition)
QTANNER_DEFINE_ERROR(BetaNotAdmissible, precondition)
QTANNER_DEFINE_ERROR(BudgetExceeded, budget_exceeded)
QTANNER_DEFINE_ERROR(SearchExhausted, search_exhausted)
QTANNER_DEFINE_ERROR(ConvergenceFailure, convergence)
QTANNER_DEFINE_ERROR(GenerationFailure, generation_failure)
QTANNER_DEFINE_ERROR(IoError, io)
QTANNER_DEFINE_ERROR(MissingArtifact, io)

#undef QTANNER_DEFINE_ERROR

}  // namespace qtanner
