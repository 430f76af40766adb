#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bedpose {

/// Single-channel 8-bit intensity frame, row-major. Row index grows downward,
/// column index grows rightward. Immutable once constructed.
class GrayFrame {
 public:
  GrayFrame() = default;
  GrayFrame(int width, int height, std::uint8_t fill = 0);
  GrayFrame(int width, int height, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept { return data_.size(); }

  std::uint8_t at(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }
  std::span<const std::uint8_t> data() const noexcept { return data_; }
  const std::vector<std::uint8_t>& pixels() const noexcept { return data_; }

  bool operator==(const GrayFrame&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Ordered frames of identical dimensions at a fixed rate.
struct FrameSequence {
  std::vector<GrayFrame> frames;
  double fps = 0.0;

  /// Throws Error(kDimensionMismatch / kInvalidArgument) on a broken invariant.
  void validate() const;
};

enum class Rotation { R0, R90CW, R180, R90CCW };

Rotation inverse(Rotation r);
/// Rotation equivalent to applying `first` then `second`.
Rotation compose(Rotation first, Rotation second);
const char* to_string(Rotation r);

/// Lossless orthogonal rotation. R90CW maps source pixel (r, c) of an H x W
/// frame to (c, H-1-r) of the W x H result; R90CCW is its inverse.
GrayFrame rotate(const GrayFrame& frame, Rotation r);

/// Image-plane point, x = column, y = row.
struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

/// Maps a point of a width x height source frame through `rotate`.
Point rotate_point(Point p, Rotation r, int width, int height);

/// Three-channel image, interleaved per pixel (c0 c1 c2 c0 c1 c2 ...).
struct ColorImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  std::vector<std::uint8_t> channel(int k) const;
};

ColorImage replicate_channels(const GrayFrame& frame);

}  // namespace bedpose
