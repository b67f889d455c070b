#include "shockform/errors.hpp"

namespace shockform {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::JetMismatch: return "JetMismatch";
    case ErrorCode::DomainEmpty: return "DomainEmpty";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::DegenerateImplicit: return "DegenerateImplicit";
    case ErrorCode::NoNegativeMin: return "NoNegativeMin";
    case ErrorCode::GncViolated: return "GncViolated";
    case ErrorCode::JacobianNearSingular: return "JacobianNearSingular";
    case ErrorCode::SignViolation: return "SignViolation";
    case ErrorCode::BeforeBlowup: return "BeforeBlowup";
    case ErrorCode::FoldNotFound: return "FoldNotFound";
    case ErrorCode::RootCountUnexpected: return "RootCountUnexpected";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::WindowExceeded: return "WindowExceeded";
    case ErrorCode::CubicBranchMissing: return "CubicBranchMissing";
    case ErrorCode::DenominatorSmall: return "DenominatorSmall";
    case ErrorCode::BranchUnavailable: return "BranchUnavailable";
    case ErrorCode::CancellationResidual: return "CancellationResidual";
    case ErrorCode::ContractionFailed: return "ContractionFailed";
    case ErrorCode::BoundViolated: return "BoundViolated";
    case ErrorCode::MonotonicityLost: return "MonotonicityLost";
    case ErrorCode::DegenerateJump: return "DegenerateJump";
    case ErrorCode::EntropyViolated: return "EntropyViolated";
    case ErrorCode::OnShock: return "OnShock";
    case ErrorCode::JacobianVanishing: return "JacobianVanishing";
    case ErrorCode::InsufficientDecades: return "InsufficientDecades";
    case ErrorCode::ShockCrossed: return "ShockCrossed";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::ShockNotDetected: return "ShockNotDetected";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::UnknownSubcommand: return "UnknownSubcommand";
    case ErrorCode::ExpressionInvalid: return "ExpressionInvalid";
  }
  return "Unknown";
}

bool is_validation_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::JetMismatch:
    case ErrorCode::DomainEmpty:
    case ErrorCode::OutOfDomain:
    case ErrorCode::NoNegativeMin:
    case ErrorCode::GncViolated:
    case ErrorCode::SignViolation:
    case ErrorCode::BeforeBlowup:
    case ErrorCode::WindowExceeded:
    case ErrorCode::CubicBranchMissing:
    case ErrorCode::EntropyViolated:
    case ErrorCode::MonotonicityLost:
    case ErrorCode::OnShock:
    case ErrorCode::ConfigInvalid:
    case ErrorCode::ExpressionInvalid:
      return true;
    default:
      return false;
  }
}

}  // namespace shockform
