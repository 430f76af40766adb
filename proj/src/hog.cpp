#include "bedpose/hog.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bedpose/error.hpp"

namespace bedpose {

void HogParams::validate() const {
  if (n_points < 2) throw Error(ErrorCode::kInvalidArgument, "n_points must be >= 2");
  if (l_block < 4 || l_block % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "l_block must be even and >= 4, got " + std::to_string(l_block));
  }
  if (n_bins < 2) throw Error(ErrorCode::kInvalidArgument, "n_bins must be >= 2");
  if (!(clip > 0.0)) throw Error(ErrorCode::kInvalidArgument, "clip must be positive");
}

int calibrate_block_size(std::span<const BoundingBox> boxes) {
  if (boxes.empty()) throw Error(ErrorCode::kInvalidArgument, "no boxes to calibrate from");
  double sum_w = 0;
  double sum_h = 0;
  for (const auto& b : boxes) {
    sum_w += b.w;
    sum_h += b.h;
  }
  const double n = static_cast<double>(boxes.size());
  const int l = static_cast<int>(std::floor(std::min(sum_w / n, sum_h / n)));
  return std::max(4, l - l % 2);
}

std::vector<PixelPoint> interest_points(const BoundingBox& box, const HogParams& params,
                                        int frame_width, int frame_height) {
  params.validate();
  const int l = params.l_block;
  const int half = l / 2;
  if (box.h < l || frame_width < l || frame_height < l) {
    throw Error(ErrorCode::kBoxTooSmall,
                "box too small to contain one block (h=" + std::to_string(box.h) +
                    ", l_block=" + std::to_string(l) + ")");
  }
  const double x_first = box.x + half;
  const double y_first = box.y + half;
  const double x_last = box.x + (params.symmetric_points ? half : l);
  const double y_last = box.y + box.h - half;

  std::vector<PixelPoint> points;
  points.reserve(static_cast<std::size_t>(params.n_points));
  for (int k = 0; k < params.n_points; ++k) {
    const double t = static_cast<double>(k) / (params.n_points - 1);
    const long x = std::lround(x_first + t * (x_last - x_first));
    const long y = std::lround(y_first + t * (y_last - y_first));
    points.push_back({std::clamp(static_cast<int>(x), half, frame_width - half),
                      std::clamp(static_cast<int>(y), half, frame_height - half)});
  }
  return points;
}

std::vector<double> block_histograms(const GrayFrame& frame, PixelPoint center,
                                     const HogParams& params) {
  params.validate();
  const int l = params.l_block;
  const int cell = l / 2;
  const int top = center.y - l / 2;
  const int left = center.x - l / 2;
  if (top < 0 || left < 0 || top + l > frame.height() || left + l > frame.width()) {
    throw Error(ErrorCode::kBlockOutOfBounds, "block at (" + std::to_string(center.x) + ", " +
                                                  std::to_string(center.y) +
                                                  ") exceeds frame bounds");
  }
  const int w = frame.width();
  const int h = frame.height();
  const int bins = params.n_bins;
  const double bin_width = 180.0 / bins;
  std::vector<double> hist(params.block_length(), 0.0);

  for (int r = top; r < top + l; ++r) {
    for (int c = left; c < left + l; ++c) {
      const double gx = double(frame.at(r, std::min(c + 1, w - 1))) - frame.at(r, std::max(c - 1, 0));
      const double gy = double(frame.at(std::min(r + 1, h - 1), c)) - frame.at(std::max(r - 1, 0), c);
      const double mag = std::hypot(gx, gy);
      if (mag == 0.0) continue;
      double angle = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
      if (angle < 0) angle += 180.0;
      if (angle >= 180.0) angle -= 180.0;

      const double pos = angle / bin_width - 0.5;
      const double lo = std::floor(pos);
      const double frac = pos - lo;
      const int b0 = (static_cast<int>(lo) + bins) % bins;
      const int b1 = (b0 + 1) % bins;
      const int cell_index = ((r - top) / cell) * 2 + (c - left) / cell;
      double* cell_hist = hist.data() + static_cast<std::size_t>(cell_index) * bins;
      cell_hist[b0] += mag * (1.0 - frac);
      cell_hist[b1] += mag * frac;
    }
  }
  return hist;
}

std::vector<double> l2_clip(std::span<const double> v, double clip) {
  double sq = 0;
  for (double x : v) sq += x * x;
  std::vector<double> out(v.begin(), v.end());
  if (sq == 0.0) return out;
  const double norm = std::sqrt(sq);
  for (double& x : out) x = std::min(x / norm, clip);
  return out;
}

std::vector<double> l2hys(std::span<const double> v, double clip) {
  std::vector<double> out = l2_clip(v, clip);
  double sq = 0;
  for (double x : out) sq += x * x;
  if (sq == 0.0) return out;
  const double norm = std::sqrt(sq);
  for (double& x : out) x /= norm;
  return out;
}

std::vector<double> hog_block(const GrayFrame& frame, PixelPoint center, const HogParams& params) {
  return l2hys(block_histograms(frame, center, params), params.clip);
}

std::vector<double> nend_feature(const GrayFrame& frame, const BoundingBox& box,
                                 const HogParams& params) {
  const auto points = interest_points(box, params, frame.width(), frame.height());
  std::vector<double> feature;
  feature.reserve(params.feature_length());
  for (const auto& p : points) {
    const auto block = hog_block(frame, p, params);
    feature.insert(feature.end(), block.begin(), block.end());
  }
  return feature;
}

}  // namespace bedpose
