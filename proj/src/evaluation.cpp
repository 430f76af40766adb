#include "bedpose/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

#include "bedpose/error.hpp"

namespace bedpose {

bool north_target(Orientation o) { return o == Orientation::N || o == Orientation::W; }

int calibrate_block_size(std::span<const GrayFrame> frames, const SegmentationConfig& seg) {
  std::vector<BoundingBox> boxes;
  boxes.reserve(frames.size());
  for (const auto& f : frames) {
    BoundingBox b = segment_subject(f, seg);
    if (aspect_bit(b)) std::swap(b.w, b.h);
    boxes.push_back(b);
  }
  return calibrate_block_size(boxes);
}

OrientationModel fit_orientation_model(std::span<const OrientationSample> samples, HogParams hog,
                                       const SegmentationConfig& seg, const SvmOptions& svm,
                                       bool calibrate) {
  if (calibrate) {
    std::vector<GrayFrame> frames;
    frames.reserve(samples.size());
    for (const auto& s : samples) frames.push_back(s.frame);
    hog.l_block = calibrate_block_size(frames, seg);
  }
  std::vector<LabeledFeature> features;
  features.reserve(samples.size());
  for (const auto& s : samples) {
    features.push_back({extract_orientation_features(s.frame, hog, seg).feature, s.north});
  }
  return train_orientation(features, hog, svm);
}

CrossValidationReport cross_validate_orientation(std::span<const OrientationSample> samples,
                                                 const HogParams& hog, const SegmentationConfig& seg,
                                                 const SvmOptions& svm, int folds,
                                                 std::uint64_t seed, bool calibrate) {
  if (folds < 2 || static_cast<std::size_t>(folds) > samples.size()) {
    throw Error(ErrorCode::kInvalidArgument, "fold count must lie in [2, sample count]");
  }
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  CrossValidationReport report;
  const bool labelled = std::all_of(samples.begin(), samples.end(),
                                    [](const auto& s) { return s.orientation.has_value(); });
  for (int k = 0; k < folds; ++k) {
    std::vector<OrientationSample> train;
    std::vector<const OrientationSample*> test;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto& s = samples[order[i]];
      if (static_cast<int>(i % static_cast<std::size_t>(folds)) == k) {
        test.push_back(&s);
      } else {
        train.push_back(s);
      }
    }
    const auto model = fit_orientation_model(train, hog, seg, svm, calibrate);
    std::size_t bit_hits = 0;
    std::size_t orient_hits = 0;
    for (const auto* s : test) {
      const auto det = detect_orientation(s->frame, model, seg);
      if (det.bit_n == s->north) ++bit_hits;
      if (labelled && det.orientation == *s->orientation) ++orient_hits;
    }
    FoldResult fold;
    fold.train_size = train.size();
    fold.test_size = test.size();
    fold.l_block = model.hog.l_block;
    fold.bit_n_accuracy = static_cast<double>(bit_hits) / test.size();
    fold.orientation_accuracy = labelled ? static_cast<double>(orient_hits) / test.size()
                                         : std::numeric_limits<double>::quiet_NaN();
    report.folds.push_back(fold);
  }
  for (const auto& f : report.folds) {
    report.mean_bit_n_accuracy += f.bit_n_accuracy / folds;
    report.mean_orientation_accuracy += f.orientation_accuracy / folds;
  }
  return report;
}

namespace {
// Empty when the samples carried no four-way labels.
std::string orientation_field(double v) {
  if (std::isnan(v)) return "\n";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f\n", v);
  return buf;
}
}  // namespace

std::string CrossValidationReport::to_csv() const {
  std::string out = "fold,train,test,l_block,bit_n_accuracy,orientation_accuracy\n";
  char buf[160];
  for (std::size_t i = 0; i < folds.size(); ++i) {
    const auto& f = folds[i];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%d,%.6f,", i, f.train_size, f.test_size, f.l_block,
                  f.bit_n_accuracy);
    out += buf;
    out += orientation_field(f.orientation_accuracy);
  }
  std::snprintf(buf, sizeof buf, "mean,,,,%.6f,", mean_bit_n_accuracy);
  out += buf;
  out += orientation_field(mean_orientation_accuracy);
  return out;
}

}  // namespace bedpose
