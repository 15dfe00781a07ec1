#pragma once

#include <stdexcept>
#include <string>

namespace jkp {

// Every failure carries one of three categories; the CLI maps them to
// exit codes 1, 2 and 3 respectively.
enum class ErrorCategory { Malformed, Precondition, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message),
        category_(category),
        code_(std::move(code)) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorCategory category_;
  std::string code_;
};

[[noreturn]] inline void throw_malformed(const std::string& code, const std::string& msg) {
  throw Error(ErrorCategory::Malformed, code, msg);
}

[[noreturn]] inline void throw_precondition(const std::string& code, const std::string& msg) {
  throw Error(ErrorCategory::Precondition, code, msg);
}

[[noreturn]] inline void throw_internal(const std::string& code, const std::string& msg) {
  throw Error(ErrorCategory::Internal, code, msg);
}

}  // namespace jkp
