#pragma once

#include <stdexcept>
#include <string>

namespace rsmboot {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expanded design (or constraint matrix) is not full rank.
struct RankDeficientError : Error {
  RankDeficientError(const std::string& what, double condition_estimate)
      : Error(what), condition(condition_estimate) {}
  double condition;
};

// |det B| below the scale-aware tolerance: ridge system, no stationary point.
struct SingularBError : Error {
  SingularBError(const std::string& what, double det_value) : Error(what), det(det_value) {}
  double det;
};

struct InsufficientRunsError : Error {
  using Error::Error;
};

// (1 - alpha) * b is not an integer; the confidence coefficient would change.
struct NonIntegerMassError : Error {
  using Error::Error;
};

struct ZeroScaleError : Error {
  using Error::Error;
};

struct PluginFailureError : Error {
  using Error::Error;
};

struct DegenerateSupportError : Error {
  using Error::Error;
};

struct NearSingularMomentsError : Error {
  using Error::Error;
};

struct CsvParseError : Error {
  using Error::Error;
};

}  // namespace rsmboot
