#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qjp {

enum class Errc {
    NotHermitian,
    NotPSD,
    NotDensityMatrix,
    NotProjector,
    DimensionMismatch,
    InvalidWeight,
    InvalidRank,
    ConvergenceFailure,
    IncompleteFamily,
    RankError,
    CommutingPair,
    UnsupportedDimension,
    ZeroConditioningProbability,
    UnknownCandidate,
    InvalidInterval,
    InvalidConfig,
};

constexpr std::string_view to_string(Errc code) {
    switch (code) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotPSD: return "NotPSD";
    case Errc::NotDensityMatrix: return "NotDensityMatrix";
    case Errc::NotProjector: return "NotProjector";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidWeight: return "InvalidWeight";
    case Errc::InvalidRank: return "InvalidRank";
    case Errc::ConvergenceFailure: return "ConvergenceFailure";
    case Errc::IncompleteFamily: return "IncompleteFamily";
    case Errc::RankError: return "RankError";
    case Errc::CommutingPair: return "CommutingPair";
    case Errc::UnsupportedDimension: return "UnsupportedDimension";
    case Errc::ZeroConditioningProbability: return "ZeroConditioningProbability";
    case Errc::UnknownCandidate: return "UnknownCandidate";
    case Errc::InvalidInterval: return "InvalidInterval";
    case Errc::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

  private:
    Errc code_;
};

} // namespace qjp
