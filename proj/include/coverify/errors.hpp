#pragma once

#include <stdexcept>
#include <string>

namespace coverify {

/// Error categories shared by the C++ core and the C API.
enum class ErrorCode {
  ok = 0,
  domain,
  overflow,
  resource,
  verification,
  parse,
  validation,
  size,
  precondition,
  divergence,
  undecidable,
  decomposition,
  empty_fiber,
  tail_divergence,
  io,
  invalid_argument,
  internal,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

#define COVERIFY_DEFINE_ERROR(Name, Code)                                   \
  class Name : public Error {                                               \
   public:                                                                  \
    explicit Name(const std::string& msg) : Error(ErrorCode::Code, msg) {}  \
  };

COVERIFY_DEFINE_ERROR(DomainError, domain)
COVERIFY_DEFINE_ERROR(OverflowError, overflow)
COVERIFY_DEFINE_ERROR(ResourceError, resource)
COVERIFY_DEFINE_ERROR(ParseError, parse)
COVERIFY_DEFINE_ERROR(ValidationError, validation)
COVERIFY_DEFINE_ERROR(SizeError, size)
COVERIFY_DEFINE_ERROR(PreconditionError, precondition)
COVERIFY_DEFINE_ERROR(DivergenceError, divergence)
COVERIFY_DEFINE_ERROR(UndecidableOrdering, undecidable)
COVERIFY_DEFINE_ERROR(DecompositionError, decomposition)
COVERIFY_DEFINE_ERROR(EmptyFiberError, empty_fiber)
COVERIFY_DEFINE_ERROR(TailDivergence, tail_divergence)
COVERIFY_DEFINE_ERROR(IoError, io)

#undef COVERIFY_DEFINE_ERROR

/// A certified inequality that did not hold. `subject` names the constant,
/// bin or table row; `detail` carries the computed enclosure.
class VerificationFailure : public Error {
 public:
  VerificationFailure(std::string subject, const std::string& detail)
      : Error(ErrorCode::verification, subject + ": " + detail), subject_(std::move(subject)) {}
  const std::string& subject() const { return subject_; }

 private:
  std::string subject_;
};

}  // namespace coverify
