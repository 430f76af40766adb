#include "bedpose/image.hpp"

#include <string>

#include "bedpose/error.hpp"

namespace bedpose {

GrayFrame::GrayFrame(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame dimensions must be positive");
  }
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayFrame::GrayFrame(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "frame dimensions must be positive");
  }
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::kDimensionMismatch,
                "pixel buffer holds " + std::to_string(data_.size()) + " values, expected " +
                    std::to_string(static_cast<std::size_t>(width) * height));
  }
}

void FrameSequence::validate() const {
  if (!(fps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fps must be positive");
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].width() != frames[0].width() || frames[i].height() != frames[0].height()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "frame " + std::to_string(i) + " differs in size from frame 0");
    }
  }
}

Rotation inverse(Rotation r) {
  switch (r) {
    case Rotation::R90CW: return Rotation::R90CCW;
    case Rotation::R90CCW: return Rotation::R90CW;
    default: return r;
  }
}

namespace {
int quarter_turns(Rotation r) { return static_cast<int>(r); }
}  // namespace

Rotation compose(Rotation first, Rotation second) {
  return static_cast<Rotation>((quarter_turns(first) + quarter_turns(second)) % 4);
}

const char* to_string(Rotation r) {
  switch (r) {
    case Rotation::R0: return "R0";
    case Rotation::R90CW: return "R90CW";
    case Rotation::R180: return "R180";
    case Rotation::R90CCW: return "R90CCW";
  }
  return "?";
}

GrayFrame rotate(const GrayFrame& frame, Rotation r) {
  const int h = frame.height();
  const int w = frame.width();
  if (r == Rotation::R0) return frame;
  const bool swap = r != Rotation::R180;
  const int out_w = swap ? h : w;
  const int out_h = swap ? w : h;
  std::vector<std::uint8_t> out(frame.size());
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < w; ++col) {
      int dr = 0;
      int dc = 0;
      switch (r) {
        case Rotation::R90CW: dr = col; dc = h - 1 - row; break;
        case Rotation::R180: dr = h - 1 - row; dc = w - 1 - col; break;
        case Rotation::R90CCW: dr = w - 1 - col; dc = row; break;
        case Rotation::R0: break;
      }
      out[static_cast<std::size_t>(dr) * out_w + dc] = frame.at(row, col);
    }
  }
  return GrayFrame(out_w, out_h, std::move(out));
}

Point rotate_point(Point p, Rotation r, int width, int height) {
  switch (r) {
    case Rotation::R0: return p;
    case Rotation::R90CW: return {height - 1 - p.y, p.x};
    case Rotation::R180: return {width - 1 - p.x, height - 1 - p.y};
    case Rotation::R90CCW: return {p.y, width - 1 - p.x};
  }
  return p;
}

std::vector<std::uint8_t> ColorImage::channel(int k) const {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data[3 * i + k];
  return out;
}

ColorImage replicate_channels(const GrayFrame& frame) {
  ColorImage img{frame.width(), frame.height(), {}};
  img.data.reserve(frame.size() * 3);
  for (std::uint8_t v : frame.data()) {
    img.data.insert(img.data.end(), {v, v, v});
  }
  return img;
}

}  // namespace bedpose
