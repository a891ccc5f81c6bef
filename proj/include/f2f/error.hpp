#pragma once

#include <stdexcept>
#include <string>

namespace f2f {

enum class ErrorCode {
  kParse = 1,
  kInvalidInput,
  kDomain,
  kGeneration,
  kConstruction,
  kJoin,
  kRootDeparture,
  kState,
  kUnsupported,
  kValidation,
  kIo,
};

const char* error_code_name(ErrorCode code) noexcept;

// Single exception type for the library; the C API maps `code()` onto f2f_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace f2f
