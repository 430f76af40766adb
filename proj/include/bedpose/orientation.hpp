#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bedpose/hog.hpp"
#include "bedpose/image.hpp"
#include "bedpose/segmentation.hpp"

namespace bedpose {

/// General in-bed orientation. N is head-up portrait; E and W have the head
/// pointing right and left respectively; S is upside down.
enum class Orientation { N, E, S, W };

const char* to_string(Orientation o);
Orientation parse_orientation(const std::string& s);

/// Rotation that turns an N-oriented frame into one with orientation `o`.
Rotation orientation_rotation(Orientation o);
/// Rotation that brings a frame of orientation `o` back to N.
Rotation rectifying_rotation(Orientation o);

/// (bit_H, bit_N) -> orientation:
///   (0,1) N   (0,0) S   (1,1) W   (1,0) E
Orientation decode_orientation(bool bit_h, bool bit_n);

/// bit_H: the box is horizontal (w / h > 1). Square boxes are vertical.
bool aspect_bit(const BoundingBox& box);

/// Linear SVM over standardized n-end HOG features.
struct OrientationModel {
  static constexpr int kFormatVersion = 1;

  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> feature_mean;
  std::vector<double> feature_std;
  HogParams hog;

  void validate() const;
  double score(std::span<const double> feature) const;
};

/// bit_N = 1 iff score >= 0 (an exact zero counts as north).
bool predict_north(const OrientationModel& model, std::span<const double> feature);

struct LabeledFeature {
  std::vector<double> feature;
  bool north = false;
};

struct SvmOptions {
  double lambda = 1e-4;
  int epochs = 100;
  std::uint64_t seed = 0;
};

/// Pegasos-style subgradient descent on the L2-regularized hinge loss with
/// step 1 / (lambda t), visiting samples in a freshly shuffled order every
/// epoch. The bias rides along as a constant unit feature.
OrientationModel train_orientation(std::span<const LabeledFeature> samples, const HogParams& hog,
                                   const SvmOptions& options);

std::string model_to_json(const OrientationModel& model);
OrientationModel model_from_json(const std::string& text);
void save_model(const std::filesystem::path& path, const OrientationModel& model);
OrientationModel load_model(const std::filesystem::path& path);

/// Front half of the rectification method: box, optional quarter turn of a
/// horizontal subject, and the n-end feature of the now-vertical subject.
struct OrientationFeatures {
  bool bit_h = false;
  BoundingBox box;          // in the input frame
  BoundingBox working_box;  // in the (possibly rotated) working frame
  std::vector<double> feature;
};

OrientationFeatures extract_orientation_features(const GrayFrame& frame, const HogParams& hog,
                                                 const SegmentationConfig& seg);

struct Detection {
  Orientation orientation = Orientation::N;
  bool bit_h = false;
  bool bit_n = false;
  BoundingBox box;            // subject box in the input frame
  GrayFrame rectified;        // input rotated to head-up portrait
  BoundingBox rectified_box;  // subject box in `rectified`
};

/// Full rectification: detect, classify, decode, and rotate the original
/// frame back to N.
Detection detect_orientation(const GrayFrame& frame, const OrientationModel& model,
                             const SegmentationConfig& seg);

}  // namespace bedpose
