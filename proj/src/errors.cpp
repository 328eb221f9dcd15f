#include "rdipe/errors.hpp"

namespace rdipe {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::PhaseNotReal: return "PhaseNotReal";
    case Errc::InvalidSite: return "InvalidSite";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::TooLargeForDense: return "TooLargeForDense";
    case Errc::SupportCapExceeded: return "SupportCapExceeded";
    case Errc::OddN: return "OddN";
    case Errc::NotReal: return "NotReal";
    case Errc::NoSolution: return "NoSolution";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyRounds: return "EmptyRounds";
    case Errc::PurityTooLow: return "PurityTooLow";
    case Errc::ChannelError: return "ChannelError";
    case Errc::ConfigMismatch: return "ConfigMismatch";
    case Errc::ProtocolViolation: return "ProtocolViolation";
    case Errc::InvalidChannelParam: return "InvalidChannelParam";
    case Errc::CalibrationFailed: return "CalibrationFailed";
    case Errc::InvalidState: return "InvalidState";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace rdipe
