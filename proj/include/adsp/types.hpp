#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace adsp {

/// One tick is 15 minutes of wall time.
using TimeTick = std::int64_t;
using MassKg = std::int64_t;

enum class Zone { Aft, Fwd, Left, Right };
enum class Axis { AF, LR };

/// Which constraint families are switched off.
struct RelaxFlags {
  bool dropRequirements = false;
  bool dropCapacity = false;
  bool dropBalance = false;

  friend bool operator==(const RelaxFlags&, const RelaxFlags&) = default;
};

inline constexpr RelaxFlags kNoRelax{};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ADSP_ERROR(Name)                  \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

ADSP_ERROR(ParseError);
ADSP_ERROR(ValidationError);
ADSP_ERROR(DegenerateInterval);
ADSP_ERROR(CountOutOfRange);
ADSP_ERROR(UnknownReference);
ADSP_ERROR(ConstructionStalled);
ADSP_ERROR(NoSolutionFound);
ADSP_ERROR(ScaleExceeded);
ADSP_ERROR(MissingVariable);
ADSP_ERROR(InconsistentAssignment);
ADSP_ERROR(InfeasibleInput);
ADSP_ERROR(MalformedLog);

#undef ADSP_ERROR

inline const char* to_string(Zone z) {
  switch (z) {
    case Zone::Aft: return "Aft";
    case Zone::Fwd: return "Fwd";
    case Zone::Left: return "Left";
    case Zone::Right: return "Right";
  }
  return "?";
}

inline const char* to_string(Axis a) { return a == Axis::AF ? "AF" : "LR"; }

/// +1 for Aft/Left, -1 for Fwd/Right, 0 when the zone is off this axis.
inline int balance_sign(Zone z, Axis axis) {
  if (axis == Axis::AF) {
    if (z == Zone::Aft) return 1;
    if (z == Zone::Fwd) return -1;
  } else {
    if (z == Zone::Left) return 1;
    if (z == Zone::Right) return -1;
  }
  return 0;
}

}  // namespace adsp
