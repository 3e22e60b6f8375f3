#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oscint {

enum class ErrorCode {
  InvalidArgument,
  Domain,
  PartitionOverflow,
  NoConvergence,
  PanelBudget,
  NotSnd,
  NotMonic,
  NotNormalized,
  Precondition,
  NonconvergentTail,
  SliceOverflow,
  InsufficientSpan,
  NoiseDominated,
  Config,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

// The literal overload keeps hot-path checks free of string construction.
inline void require(bool cond, ErrorCode code, const char* what) {
  if (!cond) fail(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace oscint
