#pragma once

#include <stdexcept>
#include <string>

namespace gpnas {

/// Failure category. The CLI maps each kind to a distinct exit code.
enum class ErrorKind {
  Usage,      // bad arguments or configuration
  Data,       // malformed input, schema violation, I/O
  Numerical,  // factorization failure, degenerate statistic
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline const char* error_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return "E_USAGE";
    case ErrorKind::Data: return "E_DATA";
    case ErrorKind::Numerical: return "E_NUMERIC";
  }
  return "E_UNKNOWN";
}

}  // namespace gpnas
