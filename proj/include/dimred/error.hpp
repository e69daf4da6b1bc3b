#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dimred {

enum class Errc {
  DimensionMismatch,
  NonFinite,
  NotSquare,
  NotSymmetric,
  NoConvergence,
  InsufficientSamples,
  InvalidComponentCount,
  DegenerateSpectrum,
  InvalidRank,
  BadMagic,
  BadHeader,
  TruncatedData,
  UnsupportedMaxval,
  PixelRange,
  ShapeMismatch,
  ZeroReference,
  ZeroEnergy,
  EmptyRankList,
  InvalidCondition,
  BadCsv,
  Io,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NonFinite: return "NonFinite";
    case Errc::NotSquare: return "NotSquare";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::InsufficientSamples: return "InsufficientSamples";
    case Errc::InvalidComponentCount: return "InvalidComponentCount";
    case Errc::DegenerateSpectrum: return "DegenerateSpectrum";
    case Errc::InvalidRank: return "InvalidRank";
    case Errc::BadMagic: return "BadMagic";
    case Errc::BadHeader: return "BadHeader";
    case Errc::TruncatedData: return "TruncatedData";
    case Errc::UnsupportedMaxval: return "UnsupportedMaxval";
    case Errc::PixelRange: return "PixelRange";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::ZeroReference: return "ZeroReference";
    case Errc::ZeroEnergy: return "ZeroEnergy";
    case Errc::EmptyRankList: return "EmptyRankList";
    case Errc::InvalidCondition: return "InvalidCondition";
    case Errc::BadCsv: return "BadCsv";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

/// Every domain failure in the library is reported as an Error carrying an Errc.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

} // namespace dimred
