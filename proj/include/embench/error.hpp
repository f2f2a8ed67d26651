#pragma once

#include <stdexcept>
#include <string>

namespace embench {

/// Error categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  Config = 2,   // bad parameters, specs or configuration
  Data = 3,     // malformed or insufficient input data
  Numeric = 4,  // numeric divergence during training
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

  const char* kind_name() const noexcept {
    switch (kind_) {
      case ErrorKind::Config: return "config";
      case ErrorKind::Data: return "data";
      case ErrorKind::Numeric: return "numeric";
    }
    return "unknown";
  }

 private:
  ErrorKind kind_;
};

inline Error config_error(const std::string& what) { return Error(ErrorKind::Config, what); }
inline Error data_error(const std::string& what) { return Error(ErrorKind::Data, what); }
inline Error numeric_error(const std::string& what) { return Error(ErrorKind::Numeric, what); }

}  // namespace embench
