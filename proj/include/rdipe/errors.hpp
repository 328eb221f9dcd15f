#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdipe {

enum class Errc {
  PhaseNotReal,
  InvalidSite,
  InvalidArgument,
  DimensionMismatch,
  TooLarge,
  TooLargeForDense,
  SupportCapExceeded,
  OddN,
  NotReal,
  NoSolution,
  LengthMismatch,
  EmptyRounds,
  PurityTooLow,
  ChannelError,
  ConfigMismatch,
  ProtocolViolation,
  InvalidChannelParam,
  CalibrationFailed,
  InvalidState,
  ParseError,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string &what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string &what) { throw Error(code, what); }

}  // namespace rdipe
