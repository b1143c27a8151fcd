#pragma once

#include <stdexcept>
#include <string>

namespace factional {

enum class ErrorKind {
  kInvalidArgument,
  kInvalidAgent,
  kImpossibleContext,
  kMislabeledStates,
  kNotTwoStates,
  kSpaceTooLarge,
  kBudgetExceeded,
  kNotGraphical,
  kAttemptCapExceeded,
  kParse,
  kInternal,
};

const char* ErrorKindName(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to an exit code without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace factional
