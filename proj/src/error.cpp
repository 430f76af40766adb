#include "bedpose/error.hpp"

namespace bedpose {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kDimensionMismatch: return "dimension mismatch";
    case ErrorCode::kBadMagic: return "unsupported magic number";
    case ErrorCode::kMalformedHeader: return "malformed header";
    case ErrorCode::kUnsupportedMaxval: return "unsupported maxval";
    case ErrorCode::kTruncatedData: return "truncated pixel data";
    case ErrorCode::kIo: return "i/o error";
    case ErrorCode::kNoSubject: return "no subject detected";
    case ErrorCode::kBlockOutOfBounds: return "block out of frame bounds";
    case ErrorCode::kBoxTooSmall: return "box too small to contain one block";
    case ErrorCode::kSingleClass: return "single-class training set";
    case ErrorCode::kInconsistentFeatures: return "inconsistent feature lengths";
    case ErrorCode::kZeroTorso: return "zero torso";
    case ErrorCode::kMalformedJson: return "malformed json";
    case ErrorCode::kInvalidPose: return "invalid pose";
    case ErrorCode::kSubjectDoesNotFit: return "subject does not fit frame";
  }
  return "unknown error";
}

}  // namespace bedpose
