#ifndef MVCF_ERRORS_HPP
#define MVCF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mvcf {

enum class Err {
  DegreeExceeded,
  BadDescriptor,
  SingularMomentMatrix,
  NearSingularSchur,
  SingularSchur,
  RankDeficientA,
  IncompleteRecurrence,
  CommutativityFailed,
  DefectiveEigenvector,
  InconsistentEigenpair,
  ConfluentRequested,
  ConfluentPoint,
  IncompleteZeroSet,
  ZeroKernelValue,
  Insufficient1DRule,
  SingularVandermonde,
  MultipleZeros,
  PoleHit,
};

/// Exception carrying a machine-readable code; the CLI maps codes to exit status.
class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

inline const char* err_name(Err e) {
  switch (e) {
    case Err::DegreeExceeded: return "DegreeExceeded";
    case Err::BadDescriptor: return "BadDescriptor";
    case Err::SingularMomentMatrix: return "SingularMomentMatrix";
    case Err::NearSingularSchur: return "NearSingularSchur";
    case Err::SingularSchur: return "SingularSchur";
    case Err::RankDeficientA: return "RankDeficientA";
    case Err::IncompleteRecurrence: return "IncompleteRecurrence";
    case Err::CommutativityFailed: return "CommutativityFailed";
    case Err::DefectiveEigenvector: return "DefectiveEigenvector";
    case Err::InconsistentEigenpair: return "InconsistentEigenpair";
    case Err::ConfluentRequested: return "ConfluentRequested";
    case Err::ConfluentPoint: return "ConfluentPoint";
    case Err::IncompleteZeroSet: return "IncompleteZeroSet";
    case Err::ZeroKernelValue: return "ZeroKernelValue";
    case Err::Insufficient1DRule: return "Insufficient1DRule";
    case Err::SingularVandermonde: return "SingularVandermonde";
    case Err::MultipleZeros: return "MultipleZeros";
    case Err::PoleHit: return "PoleHit";
  }
  return "Unknown";
}

}  // namespace mvcf

#endif
