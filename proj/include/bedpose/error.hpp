#pragma once

#include <stdexcept>
#include <string>

namespace bedpose {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  // PGM
  kBadMagic,
  kMalformedHeader,
  kUnsupportedMaxval,
  kTruncatedData,
  kIo,
  // pipeline
  kNoSubject,
  kBlockOutOfBounds,
  kBoxTooSmall,
  kSingleClass,
  kInconsistentFeatures,
  kZeroTorso,
  kMalformedJson,
  kInvalidPose,
  kSubjectDoesNotFit,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bedpose
