#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dimer {

using cplx = std::complex<double>;

enum class ErrorCode {
    InvalidArgument,
    OverlappingCircles,
    CircleOutsideDisk,
    NonConvergent,
    PoleOnPath,
    BadPeriodMatrix,
    NoOddCharacteristic,
    ClusteringViolation,
    CoverSymmetryViolation,
    SchemaError,
    NoConvergence,
    DegenerateDenominator,
    WronskianUnderflow,
    ZeroCountMismatch,
    ThetaZeroHit,
    KasteleynViolation,
    InconsistentLabeling,
    SingularMatrix,
    NotPerfectMatching,
    TooLarge,
    NotLiquid,
    NotImplemented,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace dimer
