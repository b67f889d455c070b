#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shockform {

/// Failure categories raised by the library. Each maps to one of two CLI
/// exit classes: validation failures (the input violates a precondition of
/// the theory) and numerical failures (a solver did not converge).
enum class ErrorCode {
  // problem_model
  JetMismatch,
  DomainEmpty,
  OutOfDomain,
  // char_geometry
  NewtonDiverged,
  DegenerateImplicit,
  // blowup_analysis
  NoNegativeMin,
  GncViolated,
  JacobianNearSingular,
  SignViolation,
  BeforeBlowup,
  FoldNotFound,
  // multivalued_inversion
  RootCountUnexpected,
  ResidualTooLarge,
  WindowExceeded,
  CubicBranchMissing,
  DenominatorSmall,
  // shock_front
  BranchUnavailable,
  CancellationResidual,
  ContractionFailed,
  BoundViolated,
  MonotonicityLost,
  DegenerateJump,
  EntropyViolated,
  // field_eval
  OnShock,
  JacobianVanishing,
  InsufficientDecades,
  ShockCrossed,
  // reference_fv
  CflViolation,
  NonFiniteState,
  ShockNotDetected,
  // cli_io
  ConfigInvalid,
  UnknownSubcommand,
  ExpressionInvalid,
};

std::string_view to_string(ErrorCode code);

/// True for codes that signal a violated precondition rather than a solver
/// breakdown.
bool is_validation_failure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace shockform
