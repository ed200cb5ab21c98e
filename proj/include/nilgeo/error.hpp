#pragma once

#include <stdexcept>
#include <string>

namespace nilgeo {

enum class ErrorCode {
  DimensionMismatch,
  InvalidAlgebra,
  SingularGram,
  DegenerateForm,
  NonCentralArgument,
  NonOrthogonalKernelSplit,
  SingularJOnE2,
  DegenerateCenter,
  StepSizeUnderflow,
  CausalInconsistency,
  NonRationalStructure,
  NotABasis,
  NotCanonical,
  FlatCaseOnly,
  PerpConditionFailed,
  NoXiSolution,
  InconsistentRatio,
  ParseError,
  SchemaError,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nilgeo
