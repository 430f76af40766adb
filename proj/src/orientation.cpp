#include "bedpose/orientation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "bedpose/error.hpp"
#include "bedpose/pgm.hpp"

namespace bedpose {

const char* to_string(Orientation o) {
  switch (o) {
    case Orientation::N: return "N";
    case Orientation::E: return "E";
    case Orientation::S: return "S";
    case Orientation::W: return "W";
  }
  return "?";
}

Orientation parse_orientation(const std::string& s) {
  if (s == "N") return Orientation::N;
  if (s == "E") return Orientation::E;
  if (s == "S") return Orientation::S;
  if (s == "W") return Orientation::W;
  throw Error(ErrorCode::kInvalidArgument, "unknown orientation '" + s + "'");
}

Rotation orientation_rotation(Orientation o) {
  switch (o) {
    case Orientation::N: return Rotation::R0;
    case Orientation::E: return Rotation::R90CW;
    case Orientation::S: return Rotation::R180;
    case Orientation::W: return Rotation::R90CCW;
  }
  return Rotation::R0;
}

Rotation rectifying_rotation(Orientation o) { return inverse(orientation_rotation(o)); }

Orientation decode_orientation(bool bit_h, bool bit_n) {
  if (!bit_h) return bit_n ? Orientation::N : Orientation::S;
  return bit_n ? Orientation::W : Orientation::E;
}

bool aspect_bit(const BoundingBox& box) {
  if (box.h <= 0) throw Error(ErrorCode::kInvalidArgument, "box height must be positive");
  return box.w > box.h;
}

void OrientationModel::validate() const {
  hog.validate();
  const std::size_t n = hog.feature_length();
  if (weights.size() != n || feature_mean.size() != n || feature_std.size() != n) {
    throw Error(ErrorCode::kInconsistentFeatures,
                "model vectors do not match feature length " + std::to_string(n));
  }
  for (double s : feature_std) {
    if (!(s > 0.0)) throw Error(ErrorCode::kInvalidArgument, "feature_std entries must be > 0");
  }
}

double OrientationModel::score(std::span<const double> feature) const {
  if (feature.size() != weights.size()) {
    throw Error(ErrorCode::kInconsistentFeatures,
                "feature length " + std::to_string(feature.size()) + " != model length " +
                    std::to_string(weights.size()));
  }
  double s = bias;
  for (std::size_t i = 0; i < feature.size(); ++i) {
    s += weights[i] * (feature[i] - feature_mean[i]) / feature_std[i];
  }
  return s;
}

bool predict_north(const OrientationModel& model, std::span<const double> feature) {
  return model.score(feature) >= 0.0;
}

OrientationModel train_orientation(std::span<const LabeledFeature> samples, const HogParams& hog,
                                   const SvmOptions& options) {
  if (samples.empty()) throw Error(ErrorCode::kSingleClass, "no training samples");
  if (!(options.lambda > 0.0) || options.epochs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must be > 0 and epochs >= 1");
  }
  const std::size_t dim = samples.front().feature.size();
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& s : samples) {
    if (s.feature.size() != dim) {
      throw Error(ErrorCode::kInconsistentFeatures, "inconsistent feature lengths in training set");
    }
    (s.north ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg) {
    throw Error(ErrorCode::kSingleClass, "training set needs both N and notN samples");
  }

  const std::size_t n = samples.size();
  OrientationModel model;
  model.hog = hog;
  model.feature_mean.assign(dim, 0.0);
  model.feature_std.assign(dim, 0.0);
  for (const auto& s : samples) {
    for (std::size_t j = 0; j < dim; ++j) model.feature_mean[j] += s.feature[j];
  }
  for (double& m : model.feature_mean) m /= static_cast<double>(n);
  for (const auto& s : samples) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double d = s.feature[j] - model.feature_mean[j];
      model.feature_std[j] += d * d;
    }
  }
  for (double& sd : model.feature_std) {
    sd = std::sqrt(sd / static_cast<double>(n));
    if (sd < 1e-12) sd = 1.0;  // constant dimension
  }

  // Standardized design matrix with a trailing unit column for the bias.
  const std::size_t cols = dim + 1;
  std::vector<double> x(n * cols);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      x[i * cols + j] = (samples[i].feature[j] - model.feature_mean[j]) / model.feature_std[j];
    }
    x[i * cols + dim] = 1.0;
    y[i] = samples[i].north ? 1.0 : -1.0;
  }

  std::vector<double> w(cols, 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(options.seed);
  const double radius = 1.0 / std::sqrt(options.lambda);
  std::uint64_t t = 0;

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (options.lambda * static_cast<double>(t));
      const double* xi = &x[i * cols];
      double margin = 0;
      for (std::size_t j = 0; j < cols; ++j) margin += w[j] * xi[j];
      margin *= y[i];
      const double shrink = 1.0 - eta * options.lambda;
      for (double& wj : w) wj *= shrink;
      if (margin < 1.0) {
        for (std::size_t j = 0; j < cols; ++j) w[j] += eta * y[i] * xi[j];
      }
      double sq = 0;
      for (double wj : w) sq += wj * wj;
      if (sq > radius * radius) {
        const double scale = radius / std::sqrt(sq);
        for (double& wj : w) wj *= scale;
      }
    }
  }

  model.weights.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(dim));
  model.bias = w[dim];
  return model;
}

std::string model_to_json(const OrientationModel& model) {
  const nlohmann::json doc = {
      {"version", OrientationModel::kFormatVersion},
      {"n_points", model.hog.n_points},
      {"l_block", model.hog.l_block},
      {"n_bins", model.hog.n_bins},
      {"clip", model.hog.clip},
      {"symmetric_points", model.hog.symmetric_points},
      {"weights", model.weights},
      {"bias", model.bias},
      {"feature_mean", model.feature_mean},
      {"feature_std", model.feature_std},
  };
  return doc.dump(2) + "\n";
}

OrientationModel model_from_json(const std::string& text) {
  OrientationModel model;
  try {
    const auto doc = nlohmann::json::parse(text);
    const int version = doc.at("version").get<int>();
    if (version != OrientationModel::kFormatVersion) {
      throw Error(ErrorCode::kMalformedJson,
                  "unsupported model version " + std::to_string(version));
    }
    model.hog.n_points = doc.at("n_points").get<int>();
    model.hog.l_block = doc.at("l_block").get<int>();
    model.hog.n_bins = doc.at("n_bins").get<int>();
    model.hog.clip = doc.at("clip").get<double>();
    model.hog.symmetric_points = doc.value("symmetric_points", false);
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.bias = doc.at("bias").get<double>();
    model.feature_mean = doc.at("feature_mean").get<std::vector<double>>();
    model.feature_std = doc.at("feature_std").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("model file: ") + e.what());
  }
  model.validate();
  return model;
}

void save_model(const std::filesystem::path& path, const OrientationModel& model) {
  write_text_file(path, model_to_json(model));
}

OrientationModel load_model(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return model_from_json(std::string(bytes.begin(), bytes.end()));
}

OrientationFeatures extract_orientation_features(const GrayFrame& frame, const HogParams& hog,
                                                 const SegmentationConfig& seg) {
  OrientationFeatures out;
  out.box = segment_subject(frame, seg);
  out.bit_h = aspect_bit(out.box);
  if (out.bit_h) {
    const GrayFrame vertical = rotate(frame, Rotation::R90CW);
    out.working_box = segment_subject(vertical, seg);
    out.feature = nend_feature(vertical, out.working_box, hog);
  } else {
    out.working_box = out.box;
    out.feature = nend_feature(frame, out.box, hog);
  }
  return out;
}

Detection detect_orientation(const GrayFrame& frame, const OrientationModel& model,
                             const SegmentationConfig& seg) {
  const auto features = extract_orientation_features(frame, model.hog, seg);
  Detection d;
  d.bit_h = features.bit_h;
  d.bit_n = predict_north(model, features.feature);
  d.orientation = decode_orientation(d.bit_h, d.bit_n);
  d.box = features.box;
  const Rotation fix = rectifying_rotation(d.orientation);
  d.rectified = rotate(frame, fix);
  d.rectified_box = rotate_box(d.box, fix, frame.width(), frame.height());
  return d;
}

}  // namespace bedpose
