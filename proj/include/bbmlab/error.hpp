#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bbm {

enum class Errc {
  GridTooSmall,
  EnergyDriftExceeded,
  StepSizeInvalid,
  IllConditioned,
  ZeroField,
  DivergentSum,
  DegenerateQuantile,
  CalibrationError,
  InsufficientTail,
  MomentUnstable,
  FlowToleranceExceeded,
  MassOutOfRange,
  ConfigInvalid,
  InvalidArgument,
};

inline std::string_view to_string(Errc c) {
  switch (c) {
    case Errc::GridTooSmall: return "GridTooSmall";
    case Errc::EnergyDriftExceeded: return "EnergyDriftExceeded";
    case Errc::StepSizeInvalid: return "StepSizeInvalid";
    case Errc::IllConditioned: return "IllConditioned";
    case Errc::ZeroField: return "ZeroField";
    case Errc::DivergentSum: return "DivergentSum";
    case Errc::DegenerateQuantile: return "DegenerateQuantile";
    case Errc::CalibrationError: return "CalibrationError";
    case Errc::InsufficientTail: return "InsufficientTail";
    case Errc::MomentUnstable: return "MomentUnstable";
    case Errc::FlowToleranceExceeded: return "FlowToleranceExceeded";
    case Errc::MassOutOfRange: return "MassOutOfRange";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace bbm
