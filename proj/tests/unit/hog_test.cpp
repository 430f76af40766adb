#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../oracles/hog_oracle.hpp"
#include "../support.hpp"
#include "bedpose/error.hpp"
#include "bedpose/hog.hpp"

using namespace bedpose;
using testing_support::make_frame;
using testing_support::random_frame;

namespace {

HogParams params_with_block(int l) {
  HogParams p;
  p.l_block = l;
  return p;
}

// Reverses the 2x2 cell order of every block (TL TR BL BR -> BR BL TR TL).
std::vector<double> reverse_cells(const std::vector<double>& block, int bins) {
  std::vector<double> out;
  for (int cell = 3; cell >= 0; --cell) {
    out.insert(out.end(), block.begin() + cell * bins, block.begin() + (cell + 1) * bins);
  }
  return out;
}

double max_relative_error(const std::vector<double>& got, const std::vector<double>& want) {
  double diff = 0;
  double scale = 0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    diff = std::max(diff, std::abs(got[i] - want[i]));
    scale = std::max(scale, std::abs(want[i]));
  }
  return scale > 0 ? diff / scale : diff;
}

}  // namespace

TEST(HogParams, Validation) {
  EXPECT_NO_THROW(HogParams{}.validate());
  EXPECT_THROW(params_with_block(6 - 1).validate(), Error);
  EXPECT_THROW(params_with_block(2).validate(), Error);
  HogParams p;
  p.n_bins = 1;
  EXPECT_THROW(p.validate(), Error);
  EXPECT_EQ(HogParams{}.feature_length(), 72u);
}

TEST(CalibrateBlockSize, Examples) {
  const std::vector<BoundingBox> same(5, BoundingBox{3, 4, 80, 200});
  EXPECT_EQ(calibrate_block_size(same), 80);
  const std::vector<BoundingBox> mixed{{0, 0, 60, 200}, {0, 0, 100, 200}};
  EXPECT_EQ(calibrate_block_size(mixed), 80);
  const std::vector<BoundingBox> tiny{{0, 0, 5, 9}};
  EXPECT_EQ(calibrate_block_size(tiny), 4);
  const std::vector<BoundingBox> odd{{0, 0, 33, 90}, {0, 0, 34, 90}};
  EXPECT_EQ(calibrate_block_size(odd), 32);
  EXPECT_THROW(calibrate_block_size(std::vector<BoundingBox>{}), Error);
}

TEST(InterestPoints, EndpointsFollowPrintedLayout) {
  const BoundingBox box{10, 20, 60, 160};
  const auto pts = interest_points(box, params_with_block(60), 200, 200);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0], (PixelPoint{40, 50}));
  EXPECT_EQ(pts[1], (PixelPoint{70, 150}));
}

TEST(InterestPoints, InteriorIsInterpolated) {
  HogParams p = params_with_block(60);
  p.n_points = 3;
  const auto pts = interest_points({10, 20, 60, 160}, p, 200, 200);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[1], (PixelPoint{55, 100}));
}

TEST(InterestPoints, SymmetricFlagAlignsColumns) {
  HogParams p = params_with_block(60);
  p.symmetric_points = true;
  const auto pts = interest_points({10, 20, 60, 160}, p, 200, 200);
  EXPECT_EQ(pts[1], (PixelPoint{40, 150}));
}

TEST(InterestPoints, ClampedIntoFrame) {
  // C(2) = (60, 30) would put the block at columns [30, 90) of a 60-wide
  // frame; the center is pulled back to 30.
  const auto pts = interest_points({0, 0, 60, 60}, params_with_block(60), 60, 60);
  EXPECT_EQ(pts[0], (PixelPoint{30, 30}));
  EXPECT_EQ(pts[1], (PixelPoint{30, 30}));
}

TEST(InterestPoints, TooSmall) {
  EXPECT_THROW(interest_points({0, 0, 20, 30}, params_with_block(32), 100, 100), Error);
  EXPECT_THROW(interest_points({0, 0, 20, 40}, params_with_block(32), 30, 100), Error);
}

TEST(HogBlock, ConstantBlockIsZero) {
  const auto v = hog_block(GrayFrame(16, 16, 90), {8, 8}, params_with_block(8));
  ASSERT_EQ(v.size(), 36u);
  for (double x : v) EXPECT_EQ(x, 0.0);
}

TEST(HogBlock, VerticalStepEdge) {
  // Columns 3 and 4 carry gx = 200, gy = 0 (angle 0): half of each vote goes
  // to bin 0 (10 deg) and half to bin 8 (170 deg). Each cell collects
  // 4 * 100 in both, so all eight non-zero entries are equal: 1/sqrt(8).
  const auto f = make_frame(8, 8, [](int, int c) { return c <= 3 ? 0 : 200; });
  const auto p = params_with_block(8);
  const auto raw = block_histograms(f, {4, 4}, p);
  const auto v = hog_block(f, {4, 4}, p);
  for (int cell = 0; cell < 4; ++cell) {
    for (int bin = 0; bin < 9; ++bin) {
      const bool hot = bin == 0 || bin == 8;
      EXPECT_DOUBLE_EQ(raw[cell * 9 + bin], hot ? 400.0 : 0.0);
      EXPECT_NEAR(v[cell * 9 + bin], hot ? 1.0 / std::sqrt(8.0) : 0.0, 1e-12);
    }
  }
  for (double x : l2_clip(raw, p.clip)) EXPECT_LE(x, p.clip);
}

TEST(HogBlock, HalfTurnReversesCells) {
  std::mt19937_64 rng(21);
  const auto p = params_with_block(12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_frame(12, 12, rng);
    const auto a = hog_block(f, {6, 6}, p);
    const auto b = hog_block(rotate(f, Rotation::R180), {6, 6}, p);
    const auto expected = reverse_cells(a, p.n_bins);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], expected[i], 1e-12);
  }
}

TEST(HogBlock, OutOfFrame) {
  EXPECT_THROW(hog_block(GrayFrame(10, 10), {3, 5}, params_with_block(8)), Error);
  EXPECT_THROW(hog_block(GrayFrame(10, 10), {7, 5}, params_with_block(8)), Error);
  EXPECT_NO_THROW(hog_block(GrayFrame(10, 10), {6, 5}, params_with_block(8)));
}

TEST(HogBlock, EntriesBoundedAndClipHoldsBeforeRenormalization) {
  std::mt19937_64 rng(22);
  const auto p = params_with_block(10);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_frame(20, 20, rng);
    for (double x : hog_block(f, {10, 10}, p)) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    for (double x : l2_clip(block_histograms(f, {10, 10}, p), p.clip)) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, p.clip);
    }
  }
}

TEST(NendFeature, LengthAndConstantFrame) {
  const auto v = nend_feature(GrayFrame(64, 96, 50), {10, 10, 30, 70}, params_with_block(24));
  ASSERT_EQ(v.size(), 72u);
  for (double x : v) EXPECT_EQ(x, 0.0);
}

TEST(NendFeature, HalfTurnSwapsBlocks) {
  // Asymmetric silhouette whose box is exactly l_block wide: under a half
  // turn the top block of one frame is the bottom block of the other with
  // its cells reversed.
  const int l = 16;
  const auto f = make_frame(40, 60, [](int r, int c) -> std::uint8_t {
    if (c < 12 || c >= 12 + l || r < 8 || r >= 52) return 30;
    if (r < 20 && (c < 15 || c > 24)) return 30;  // narrow head end
    if (r > 40 && c > 17 && c < 21) return 90;    // gap between legs
    return 200;
  });
  HogParams p = params_with_block(l);
  p.symmetric_points = true;
  SegmentationConfig seg;
  seg.dilate_radius = 0;
  const auto box = segment_subject(f, seg);
  ASSERT_EQ(box.w, l);
  const auto g = rotate(f, Rotation::R180);
  const auto box_g = segment_subject(g, seg);
  ASSERT_EQ(box_g, rotate_box(box, Rotation::R180, f.width(), f.height()));

  const auto a = nend_feature(f, box, p);
  const auto b = nend_feature(g, box_g, p);
  const std::vector<double> a_top(a.begin(), a.begin() + 36), a_bottom(a.begin() + 36, a.end());
  const std::vector<double> b_top(b.begin(), b.begin() + 36), b_bottom(b.begin() + 36, b.end());
  const auto want_top = reverse_cells(a_bottom, 9);
  const auto want_bottom = reverse_cells(a_top, 9);
  for (std::size_t i = 0; i < 36; ++i) {
    EXPECT_NEAR(b_top[i], want_top[i], 1e-12);
    EXPECT_NEAR(b_bottom[i], want_bottom[i], 1e-12);
  }
  const oracle::HogSetup setup{2, l, 9, 0.2, true};
  EXPECT_LE(max_relative_error(b, oracle::nend(g, box_g.x, box_g.y, box_g.w, box_g.h, setup)), 1e-9);
  EXPECT_NE(a_top, a_bottom);
}

TEST(NendFeature, MatchesBruteForceOracle) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> dim(24, 72);
  int compared = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const int w = dim(rng);
    const int h = dim(rng);
    auto f = random_frame(w, h, rng);
    HogParams p;
    p.n_points = 2 + trial % 3;
    p.n_bins = 4 + trial % 9;
    p.l_block = 4 + 2 * std::uniform_int_distribution<int>(0, (std::min(w, h) - 4) / 2 / 2)(rng);
    p.clip = trial % 2 ? 0.2 : 0.35;
    p.symmetric_points = trial % 4 == 0;
    const int bh = std::uniform_int_distribution<int>(p.l_block, h)(rng);
    const int bw = std::uniform_int_distribution<int>(1, w)(rng);
    const int bx = std::uniform_int_distribution<int>(0, w - bw)(rng);
    const int by = std::uniform_int_distribution<int>(0, h - bh)(rng);
    const auto got = nend_feature(f, {bx, by, bw, bh}, p);
    const auto want = oracle::nend(
        f, bx, by, bw, bh, {p.n_points, p.l_block, p.n_bins, p.clip, p.symmetric_points});
    ASSERT_EQ(got.size(), want.size());
    EXPECT_LE(max_relative_error(got, want), 1e-9) << "trial " << trial;
    ++compared;
  }
  EXPECT_GE(compared, 50);
}
