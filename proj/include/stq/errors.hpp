#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace stq {

// Error classes double as process exit codes for the command line driver.
enum class ErrorClass : int {
  Parse = 2,        // malformed job file or expression
  Validation = 3,   // well-formed input that violates a precondition
  Engine = 4,       // the computation cannot proceed or is underdetermined
  Verification = 5, // a requested certificate check failed
};

// Single exception type. `kind` is a stable machine-readable tag
// (e.g. "LeibnizInconsistent"); the message is for humans.
class Error : public std::runtime_error {
public:
  Error(ErrorClass cls, std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message),
        class_(cls),
        kind_(std::move(kind)) {}

  ErrorClass error_class() const { return class_; }
  int exit_code() const { return static_cast<int>(class_); }
  const std::string& kind() const { return kind_; }

private:
  ErrorClass class_;
  std::string kind_;
};

[[noreturn]] inline void fail(ErrorClass cls, const std::string& kind,
                              const std::string& message) {
  throw Error(cls, kind, message);
}

} // namespace stq
