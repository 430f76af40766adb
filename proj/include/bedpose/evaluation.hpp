#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bedpose/orientation.hpp"

namespace bedpose {

struct OrientationSample {
  GrayFrame frame;
  /// Classifier target: head-up once a horizontal subject has been turned
  /// upright (true orientation N or W).
  bool north = false;
  /// Full four-way label, when known.
  std::optional<Orientation> orientation;
};

/// Training target implied by a four-way label.
bool north_target(Orientation o);

/// Block size from the subjects' boxes. Horizontal boxes are transposed
/// first so the size always refers to the upright subject.
int calibrate_block_size(std::span<const GrayFrame> frames, const SegmentationConfig& seg);

/// Calibrates l_block when `calibrate` is set, extracts features and trains
/// a model on all samples.
OrientationModel fit_orientation_model(std::span<const OrientationSample> samples, HogParams hog,
                                       const SegmentationConfig& seg, const SvmOptions& svm,
                                       bool calibrate = true);

struct FoldResult {
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  int l_block = 0;
  double bit_n_accuracy = 0.0;
  /// Four-way accuracy of the whole rectification pipeline; NaN without labels.
  double orientation_accuracy = 0.0;
};

struct CrossValidationReport {
  std::vector<FoldResult> folds;
  double mean_bit_n_accuracy = 0.0;
  double mean_orientation_accuracy = 0.0;
  std::string to_csv() const;
};

/// k-fold cross validation with a seeded shuffle of the sample order.
CrossValidationReport cross_validate_orientation(std::span<const OrientationSample> samples,
                                                 const HogParams& hog, const SegmentationConfig& seg,
                                                 const SvmOptions& svm, int folds,
                                                 std::uint64_t seed, bool calibrate = true);

}  // namespace bedpose
