#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bedpose/image.hpp"
#include "bedpose/orientation.hpp"
#include "bedpose/pose.hpp"
#include "bedpose/segmentation.hpp"

namespace bedpose {

enum class Posture { kSupine, kLeftLying, kRightLying };

const char* to_string(Posture p);
Posture parse_posture(const std::string& s);

inline constexpr std::uint8_t kForeground = 200;
inline constexpr std::uint8_t kBackground = 30;

struct SceneSpec {
  Posture posture = Posture::kSupine;
  Orientation orientation = Orientation::N;
  int width = 128;   // of the head-up rendering; E/W outputs are transposed
  int height = 128;
  double subject_scale = 0.75;  // body length as a fraction of height
  double noise_sigma = 2.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RenderedScene {
  GrayFrame frame;
  Pose pose;
  Orientation orientation = Orientation::N;
  Posture posture = Posture::kSupine;
  BinaryMask support;  // silhouette coverage, rotated like `frame`
};

/// Capsule-skeleton silhouette at kForeground on kBackground plus clamped
/// Gaussian noise, drawn head-up and then rotated into `spec.orientation`.
/// Pure function of `spec`. Throws kSubjectDoesNotFit when the body leaves
/// the frame.
RenderedScene render_scene(const SceneSpec& spec);

/// `count` scenes with orientations cycling N, E, S, W and postures cycling
/// every four scenes; jittered scale and per-scene seeds derived from `seed`.
std::vector<SceneSpec> make_dataset_specs(std::size_t count, std::uint64_t seed, int width = 128,
                                          int height = 128, double noise_sigma = 2.0);

struct Episode {
  int hold_frames = 80;
  SceneSpec scene;
};

struct SequenceScript {
  std::vector<Episode> episodes;
  int transition_frames = 12;
  double fps = 11.28;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RenderedSequence {
  FrameSequence sequence;
  std::vector<std::uint8_t> state_labels;  // 1 dynamic, 0 static
  std::vector<std::size_t> trigger_frames; // first static frame of each episode
  std::vector<RenderedScene> episodes;     // noise-free renderings per episode
};

/// Holds each episode (fresh noise per frame) and joins consecutive episodes
/// with blended, jittered relocation frames.
RenderedSequence render_sequence(const SequenceScript& script);

/// `episodes` static periods of 6-8 s at 11.28 fps joined by relocations.
SequenceScript default_monitoring_script(std::uint64_t seed, std::size_t episodes = 5,
                                         double noise_sigma = 2.0);

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace bedpose
