#pragma once

#include <stdexcept>
#include <string>

namespace nilcone {

// Error codes shared across the library. Each operation documents which of
// these it can raise.
enum class Errc {
  NonPrime,
  SizeLimitExceeded,
  DivisionByZero,
  FieldMismatch,
  NotASubspace,
  OddDimension,
  WrongKind,
  NotSGood,
  NotAlternating,
  ExtensionCapExceeded,
  NotCompatible,
  ZeroSpace,
  NotNilpotent,
  ConstructionInapplicable,
  BudgetExceeded,
  NonIntegralRatio,
  InsufficientPoints,
  Precondition,
  InternalCheck,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonPrime: return "NonPrime";
    case Errc::SizeLimitExceeded: return "SizeLimitExceeded";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::NotASubspace: return "NotASubspace";
    case Errc::OddDimension: return "OddDimension";
    case Errc::WrongKind: return "WrongKind";
    case Errc::NotSGood: return "NotSGood";
    case Errc::NotAlternating: return "NotAlternating";
    case Errc::ExtensionCapExceeded: return "ExtensionCapExceeded";
    case Errc::NotCompatible: return "NotCompatible";
    case Errc::ZeroSpace: return "ZeroSpace";
    case Errc::NotNilpotent: return "NotNilpotent";
    case Errc::ConstructionInapplicable: return "ConstructionInapplicable";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::NonIntegralRatio: return "NonIntegralRatio";
    case Errc::InsufficientPoints: return "InsufficientPoints";
    case Errc::Precondition: return "Precondition";
    case Errc::InternalCheck: return "InternalCheck";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace nilcone
