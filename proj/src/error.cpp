#include "mmtrain/error.hpp"

namespace mmtrain {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::insufficient_tones: return "insufficient tones";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::no_root: return "no root";
    case ErrorCode::empty_input: return "empty input";
    case ErrorCode::rank_deficient: return "rank deficient";
    case ErrorCode::singular_system: return "singular system";
    case ErrorCode::zero_channel: return "zero channel";
    case ErrorCode::capacity_exceeded: return "capacity exceeded";
    case ErrorCode::unknown_key: return "unknown key";
    case ErrorCode::io: return "i/o error";
  }
  return "error";
}

}  // namespace mmtrain
