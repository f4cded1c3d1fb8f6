#include "optocool/error.hpp"

namespace optocool {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParams: return "InvalidParams";
    case ErrorKind::kNonConvergence: return "NonConvergence";
    case ErrorKind::kUnknownPreset: return "UnknownPreset";
    case ErrorKind::kSingularPropagation: return "SingularPropagation";
    case ErrorKind::kScheduleGap: return "ScheduleGap";
    case ErrorKind::kUnstableSystem: return "UnstableSystem";
    case ErrorKind::kWeakCoupling: return "WeakCoupling";
    case ErrorKind::kBackactionDivergence: return "BackactionDivergence";
    case ErrorKind::kWindowEmpty: return "WindowEmpty";
    case ErrorKind::kTruncationLeak: return "TruncationLeak";
    case ErrorKind::kCapExceeded: return "CapExceeded";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace optocool
