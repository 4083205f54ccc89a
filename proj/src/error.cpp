#include "barnav/error.hpp"

namespace barnav {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PoseOutOfBounds: return "PoseOutOfBounds";
    case ErrorKind::CellOccupied: return "CellOccupied";
    case ErrorKind::NoPath: return "NoPath";
    case ErrorKind::GenerationExhausted: return "GenerationExhausted";
    case ErrorKind::RoiOutOfWindow: return "RoiOutOfWindow";
    case ErrorKind::DegenerateTarget: return "DegenerateTarget";
    case ErrorKind::DegenerateLookahead: return "DegenerateLookahead";
    case ErrorKind::InvalidOptimalTime: return "InvalidOptimalTime";
    case ErrorKind::InvalidPathLength: return "InvalidPathLength";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace barnav
