#include "bedpose/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bedpose/error.hpp"

namespace bedpose {

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

BinaryMask rotate(const BinaryMask& mask, Rotation r) {
  std::vector<std::uint8_t> scaled(mask.bits);
  for (auto& b : scaled) b = b ? 255 : 0;
  const GrayFrame turned = rotate(GrayFrame(mask.width, mask.height, std::move(scaled)), r);
  BinaryMask out(turned.width(), turned.height());
  for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] = turned.pixels()[i] ? 1 : 0;
  return out;
}

BoundingBox rotate_box(const BoundingBox& box, Rotation r, int width, int height) {
  const Point a = rotate_point({double(box.x), double(box.y)}, r, width, height);
  const Point b =
      rotate_point({double(box.x + box.w - 1), double(box.y + box.h - 1)}, r, width, height);
  const int x0 = static_cast<int>(std::min(a.x, b.x));
  const int y0 = static_cast<int>(std::min(a.y, b.y));
  const int x1 = static_cast<int>(std::max(a.x, b.x));
  const int y1 = static_cast<int>(std::max(a.y, b.y));
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

GradientField sobel(const GrayFrame& frame) {
  const int w = frame.width();
  const int h = frame.height();
  if (w < 3 || h < 3) {
    throw Error(ErrorCode::kInvalidArgument, "sobel needs a frame of at least 3x3");
  }
  GradientField g{w, h, {}, {}, {}};
  const std::size_t n = frame.size();
  g.gx.resize(n);
  g.gy.resize(n);
  g.magnitude.resize(n);
  auto px = [&](int r, int c) {
    r = std::clamp(r, 0, h - 1);
    c = std::clamp(c, 0, w - 1);
    return static_cast<double>(frame.at(r, c));
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const double gx = (px(r - 1, c + 1) + 2 * px(r, c + 1) + px(r + 1, c + 1)) -
                        (px(r - 1, c - 1) + 2 * px(r, c - 1) + px(r + 1, c - 1));
      const double gy = (px(r + 1, c - 1) + 2 * px(r + 1, c) + px(r + 1, c + 1)) -
                        (px(r - 1, c - 1) + 2 * px(r - 1, c) + px(r - 1, c + 1));
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      g.gx[i] = gx;
      g.gy[i] = gy;
      g.magnitude[i] = std::hypot(gx, gy);
    }
  }
  return g;
}

BinaryMask threshold_mask(const GrayFrame& frame, int tau) {
  BinaryMask m(frame.width(), frame.height());
  const auto px = frame.data();
  for (std::size_t i = 0; i < px.size(); ++i) m.bits[i] = px[i] > tau ? 1 : 0;
  return m;
}

BinaryMask edge_mask(const GradientField& field, double tau_e) {
  BinaryMask m(field.width, field.height);
  for (std::size_t i = 0; i < field.magnitude.size(); ++i) {
    m.bits[i] = field.magnitude[i] > tau_e ? 1 : 0;
  }
  return m;
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
  if (radius < 0) throw Error(ErrorCode::kInvalidArgument, "negative dilation radius");
  if (radius == 0) return mask;
  const int w = mask.width;
  const int h = mask.height;
  // Separable: a square element is a row pass followed by a column pass.
  BinaryMask rows(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!mask.at(r, c)) continue;
      for (int k = std::max(0, c - radius); k <= std::min(w - 1, c + radius); ++k) rows.set(r, k, true);
    }
  }
  BinaryMask out(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!rows.at(r, c)) continue;
      for (int k = std::max(0, r - radius); k <= std::min(h - 1, r + radius); ++k) out.set(k, c, true);
    }
  }
  return out;
}

namespace {

// Union-find over pixel indices for two-pass labeling.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

BoundingBox extract_bbox(const BinaryMask& mask, int dilate_radius) {
  const BinaryMask m = dilate(mask, dilate_radius);
  const int w = m.width;
  const int h = m.height;
  const std::size_t n = m.bits.size();
  DisjointSets sets(n);
  bool any = false;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!m.at(r, c)) continue;
      any = true;
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      // Already-visited 8-neighbours: W, NW, N, NE.
      if (c > 0 && m.at(r, c - 1)) sets.unite(i, i - 1);
      if (r > 0) {
        const std::size_t up = i - w;
        if (c > 0 && m.at(r - 1, c - 1)) sets.unite(i, up - 1);
        if (m.at(r - 1, c)) sets.unite(i, up);
        if (c + 1 < w && m.at(r - 1, c + 1)) sets.unite(i, up + 1);
      }
    }
  }
  if (!any) throw Error(ErrorCode::kNoSubject, "no subject detected");

  struct Extent {
    std::size_t area = 0;
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  };
  std::vector<Extent> extents(n);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!m.at(r, c)) continue;
      auto& e = extents[sets.find(static_cast<std::size_t>(r) * w + c)];
      if (e.area == 0) {
        e = {0, c, r, c, r};
      }
      ++e.area;
      e.x0 = std::min(e.x0, c);
      e.x1 = std::max(e.x1, c);
      e.y0 = std::min(e.y0, r);
      e.y1 = std::max(e.y1, r);
    }
  }
  // Largest area wins; ties go to the component whose root comes first in raster order.
  const Extent* best = nullptr;
  for (const auto& e : extents) {
    if (e.area > 0 && (best == nullptr || e.area > best->area)) best = &e;
  }
  return {best->x0, best->y0, best->x1 - best->x0 + 1, best->y1 - best->y0 + 1};
}

SegmentationMethod parse_segmentation_method(const std::string& name) {
  if (name == "threshold") return SegmentationMethod::kThreshold;
  if (name == "edge") return SegmentationMethod::kEdge;
  throw Error(ErrorCode::kInvalidArgument, "unknown segmentation method '" + name + "'");
}

const char* to_string(SegmentationMethod m) {
  return m == SegmentationMethod::kEdge ? "edge" : "threshold";
}

BinaryMask foreground_mask(const GrayFrame& frame, const SegmentationConfig& config) {
  if (config.method == SegmentationMethod::kEdge) return edge_mask(sobel(frame), config.tau_e);
  return threshold_mask(frame, config.tau);
}

BoundingBox segment_subject(const GrayFrame& frame, const SegmentationConfig& config) {
  return extract_bbox(foreground_mask(frame, config), config.dilate_radius);
}

int otsu_threshold(const std::vector<std::uint64_t>& histogram) {
  if (histogram.size() != 256) throw Error(ErrorCode::kInvalidArgument, "histogram must have 256 bins");
  double total = 0;
  double sum_all = 0;
  for (int i = 0; i < 256; ++i) {
    total += static_cast<double>(histogram[i]);
    sum_all += i * static_cast<double>(histogram[i]);
  }
  if (total == 0) throw Error(ErrorCode::kInvalidArgument, "empty histogram");
  double weight_lo = 0;
  double sum_lo = 0;
  double best_var = -1;
  int best = 0;
  int best_end = 0;
  for (int t = 0; t < 255; ++t) {
    weight_lo += static_cast<double>(histogram[t]);
    sum_lo += t * static_cast<double>(histogram[t]);
    const double weight_hi = total - weight_lo;
    if (weight_lo == 0 || weight_hi == 0) continue;
    const double mean_lo = sum_lo / weight_lo;
    const double mean_hi = (sum_all - sum_lo) / weight_hi;
    const double var = weight_lo * weight_hi * (mean_lo - mean_hi) * (mean_lo - mean_hi);
    if (var > best_var * (1 + 1e-12)) {
      best_var = var;
      best = t;
      best_end = t;
    } else if (var >= best_var * (1 - 1e-12) && best_end == t - 1) {
      best_end = t;
    }
  }
  // Empty bins between two modes form a plateau; split it in the middle.
  return (best + best_end) / 2;
}

}  // namespace bedpose
