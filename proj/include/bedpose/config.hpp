#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "bedpose/hog.hpp"
#include "bedpose/orientation.hpp"
#include "bedpose/pose.hpp"
#include "bedpose/segmentation.hpp"
#include "bedpose/trigger.hpp"

namespace bedpose {

struct SynthConfig {
  int width = 128;
  int height = 128;
  int count = 419;
  double noise_sigma = 2.0;
  int episodes = 5;
};

/// Whole-pipeline configuration. Every field has a default, so "{}" is a
/// valid config document.
struct PipelineConfig {
  static constexpr int kVersion = 1;

  std::uint64_t seed = 0;
  SegmentationConfig segmentation;
  HogParams hog;
  bool calibrate_block = true;  // derive l_block from training boxes
  SvmOptions svm;
  int folds = 10;
  std::string model_path;
  TriggerConfig trigger;
  PckConfig pck;
  std::string estimator = "stub";  // "stub" or "pose-file:<path>"
  SynthConfig synth;

  void validate() const;
};

/// Parses a config document; relative paths are resolved against `base_dir`.
PipelineConfig config_from_json(const std::string& text, const std::filesystem::path& base_dir = {});
std::string config_to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace bedpose
