#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bedpose/image.hpp"

namespace bedpose {

struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;  // 0 or 1, row-major

  BinaryMask() = default;
  BinaryMask(int w, int h, bool fill = false)
      : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

  bool at(int row, int col) const { return bits[static_cast<std::size_t>(row) * width + col] != 0; }
  void set(int row, int col, bool v) { bits[static_cast<std::size_t>(row) * width + col] = v ? 1 : 0; }
  std::size_t count() const;

  bool operator==(const BinaryMask&) const = default;
};

BinaryMask rotate(const BinaryMask& mask, Rotation r);

/// Up-left corner (x_c = column, y_c = row) plus extent, in pixels.
struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool operator==(const BoundingBox&) const = default;
};

/// Box covering the rotated pixels of `box` inside a width x height frame.
BoundingBox rotate_box(const BoundingBox& box, Rotation r, int width, int height);

struct GradientField {
  int width = 0;
  int height = 0;
  std::vector<double> gx;
  std::vector<double> gy;
  std::vector<double> magnitude;
};

/// 3x3 Sobel with replicate padding. Requires a frame of at least 3x3.
GradientField sobel(const GrayFrame& frame);

/// Bit set iff intensity > tau.
BinaryMask threshold_mask(const GrayFrame& frame, int tau);

/// Bit set iff gradient magnitude > tau_e.
BinaryMask edge_mask(const GradientField& field, double tau_e);

/// Square-element binary dilation (Chebyshev radius).
BinaryMask dilate(const BinaryMask& mask, int radius);

/// Dilates, keeps the largest 8-connected component and returns its tight box.
/// Throws Error(kNoSubject) on an empty mask.
BoundingBox extract_bbox(const BinaryMask& mask, int dilate_radius);

enum class SegmentationMethod { kThreshold, kEdge };

SegmentationMethod parse_segmentation_method(const std::string& name);
const char* to_string(SegmentationMethod m);

struct SegmentationConfig {
  SegmentationMethod method = SegmentationMethod::kThreshold;
  int tau = 128;
  double tau_e = 100.0;
  int dilate_radius = 2;
};

BinaryMask foreground_mask(const GrayFrame& frame, const SegmentationConfig& config);
BoundingBox segment_subject(const GrayFrame& frame, const SegmentationConfig& config);

/// Otsu threshold over a 256-bin histogram; the class split is "> returned value".
int otsu_threshold(const std::vector<std::uint64_t>& histogram);

}  // namespace bedpose
