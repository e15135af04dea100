#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace decot {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  ValidationError,
  FormatError,
  ConfigError,
  DuplicateId,
  EmptyInstruction,
  EmptyPrompt,
  EmptyPlan,
  EmptyInput,
  MissingExemplars,
  KindMismatch,
  ExpansionOverflow,
  BackendFailure,
  BackendUnavailable,
  AuthError,
  OrphanRecord,
  IoError,
};

/// Base error type; every throwing path in the library uses a subclass so
/// callers can dispatch on either the type or the code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define DECOT_DEFINE_ERROR(Name)                       \
  class Name : public Error {                          \
   public:                                             \
    explicit Name(std::string message)                 \
        : Error(ErrorCode::Name, std::move(message)) {} \
  }

DECOT_DEFINE_ERROR(InvalidArgument);
DECOT_DEFINE_ERROR(ParseError);
DECOT_DEFINE_ERROR(ValidationError);
DECOT_DEFINE_ERROR(FormatError);
DECOT_DEFINE_ERROR(ConfigError);
DECOT_DEFINE_ERROR(DuplicateId);
DECOT_DEFINE_ERROR(EmptyInstruction);
DECOT_DEFINE_ERROR(EmptyPrompt);
DECOT_DEFINE_ERROR(EmptyPlan);
DECOT_DEFINE_ERROR(EmptyInput);
DECOT_DEFINE_ERROR(MissingExemplars);
DECOT_DEFINE_ERROR(KindMismatch);
DECOT_DEFINE_ERROR(ExpansionOverflow);
DECOT_DEFINE_ERROR(BackendFailure);
DECOT_DEFINE_ERROR(BackendUnavailable);
DECOT_DEFINE_ERROR(AuthError);
DECOT_DEFINE_ERROR(OrphanRecord);
DECOT_DEFINE_ERROR(IoError);

#undef DECOT_DEFINE_ERROR

}  // namespace decot
