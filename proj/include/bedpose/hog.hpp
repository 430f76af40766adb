#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bedpose/image.hpp"
#include "bedpose/segmentation.hpp"

namespace bedpose {

/// Sparse ("n-end") HOG configuration. Each block is l_block x l_block pixels
/// split into 2 x 2 cells of l_block / 2.
struct HogParams {
  int n_points = 2;
  int l_block = 32;
  int n_bins = 9;
  double clip = 0.2;
  /// Use the first point's x offset (l_block / 2) for the last point as well.
  /// Off by default: the last point sits at x_c + l_block.
  bool symmetric_points = false;

  void validate() const;
  std::size_t block_length() const { return 4 * static_cast<std::size_t>(n_bins); }
  std::size_t feature_length() const { return static_cast<std::size_t>(n_points) * block_length(); }
};

struct PixelPoint {
  int x = 0;
  int y = 0;
  bool operator==(const PixelPoint&) const = default;
};

/// min(mean width, mean height) floored to an even integer, at least 4.
int calibrate_block_size(std::span<const BoundingBox> boxes);

/// Block centers along the subject's major axis, top to bottom. The first and
/// last follow
///   C(1) = (x_c + l/2, y_c + l/2),  C(n) = (x_c + l, y_c + h - l/2)
/// with the interior linearly interpolated and rounded to whole pixels. Each
/// center is clamped to [l/2, dim - l/2] so its block stays inside the frame.
std::vector<PixelPoint> interest_points(const BoundingBox& box, const HogParams& params,
                                        int frame_width, int frame_height);

/// Raw 2x2 cell histograms (row-major cell order) of the block whose top-left
/// pixel is center - l_block/2.
std::vector<double> block_histograms(const GrayFrame& frame, PixelPoint center,
                                     const HogParams& params);

/// L2 normalization followed by clipping at `clip` (the first half of L2-Hys).
std::vector<double> l2_clip(std::span<const double> v, double clip);
/// L2-Hys: l2_clip then renormalize. All-zero input stays zero.
std::vector<double> l2hys(std::span<const double> v, double clip);

std::vector<double> hog_block(const GrayFrame& frame, PixelPoint center, const HogParams& params);

/// Blocks at every interest point concatenated top to bottom.
std::vector<double> nend_feature(const GrayFrame& frame, const BoundingBox& box,
                                 const HogParams& params);

}  // namespace bedpose
