#pragma once

#include <stdexcept>
#include <string>

namespace mmtrain {

enum class ErrorCode {
  invalid_argument,
  insufficient_tones,
  dimension_mismatch,
  no_root,
  empty_input,
  rank_deficient,
  singular_system,
  zero_channel,
  capacity_exceeded,
  unknown_key,
  io,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mmtrain
