#include "relucert/errors.hpp"

namespace relucert {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroRow: return "ZeroRow";
    case ErrorKind::NotAFrame: return "NotAFrame";
    case ErrorKind::DegenerateHull: return "DegenerateHull";
    case ErrorKind::AtOrigin: return "AtOrigin";
    case ErrorKind::OrphanVertex: return "OrphanVertex";
    case ErrorKind::NotOmnidirectional: return "NotOmnidirectional";
    case ErrorKind::NotNonnegOmnidirectional: return "NotNonnegOmnidirectional";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::SolverFailed: return "SolverFailed";
    case ErrorKind::FrameMismatch: return "FrameMismatch";
    case ErrorKind::ReconstructionFailed: return "ReconstructionFailed";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace relucert
