#pragma once

#include <stdexcept>
#include <string>

namespace polybilliard {

enum class ErrorKind {
  InvalidInput,
  PreconditionViolation,
  NumericalFailure,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace polybilliard
