#pragma once

#include <stdexcept>
#include <string>

namespace pfexpm {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PFEXPM_DEFINE_ERROR(Name)      \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

PFEXPM_DEFINE_ERROR(OrderOutOfRange);
PFEXPM_DEFINE_ERROR(IterationLimitExceeded);
PFEXPM_DEFINE_ERROR(InvariantViolation);
PFEXPM_DEFINE_ERROR(IoError);
PFEXPM_DEFINE_ERROR(ParseError);
PFEXPM_DEFINE_ERROR(PoleHit);
PFEXPM_DEFINE_ERROR(ConditionViolated);
PFEXPM_DEFINE_ERROR(SingularSystem);
PFEXPM_DEFINE_ERROR(ConvergenceFailure);
PFEXPM_DEFINE_ERROR(OrderTooSmall);
PFEXPM_DEFINE_ERROR(Overflow);
PFEXPM_DEFINE_ERROR(BadSpec);

#undef PFEXPM_DEFINE_ERROR

}  // namespace pfexpm
