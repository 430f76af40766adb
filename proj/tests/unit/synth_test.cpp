#include <gtest/gtest.h>

#include "bedpose/error.hpp"
#include "bedpose/segmentation.hpp"
#include "bedpose/synth.hpp"
#include "bedpose/trigger.hpp"

using namespace bedpose;

namespace {

SceneSpec scene(Posture posture, Orientation o, double sigma, std::uint64_t seed) {
  SceneSpec s;
  s.posture = posture;
  s.orientation = o;
  s.noise_sigma = sigma;
  s.seed = seed;
  return s;
}

int dynamic_runs(const std::vector<std::uint8_t>& labels) {
  int runs = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] && (i == 0 || !labels[i - 1])) ++runs;
  }
  return runs;
}

}  // namespace

TEST(RenderScene, Deterministic) {
  const auto spec = scene(Posture::kLeftLying, Orientation::S, 2.0, 11);
  const auto a = render_scene(spec);
  const auto b = render_scene(spec);
  EXPECT_EQ(a.frame, b.frame);
  EXPECT_EQ(a.pose, b.pose);
  EXPECT_EQ(a.support, b.support);
  auto other = spec;
  other.seed = 12;
  EXPECT_NE(render_scene(other).frame, a.frame);
}

TEST(RenderScene, OrientationsAreRotationsOfNorth) {
  for (int p = 0; p < 3; ++p) {
    const auto posture = static_cast<Posture>(p);
    const auto north = render_scene(scene(posture, Orientation::N, 2.0, 40 + p));
    for (Orientation o : {Orientation::E, Orientation::S, Orientation::W}) {
      const auto r = orientation_rotation(o);
      const auto turned = render_scene(scene(posture, o, 2.0, 40 + p));
      EXPECT_EQ(turned.orientation, o);
      EXPECT_EQ(turned.frame, rotate(north.frame, r));
      EXPECT_EQ(turned.support, rotate(north.support, r));
      const auto want = rotate_pose(north.pose, r, north.frame.width(), north.frame.height());
      for (int j = 0; j < kNumJoints; ++j) {
        EXPECT_NEAR(turned.pose.joints[j].x, want.joints[j].x, 1e-9);
        EXPECT_NEAR(turned.pose.joints[j].y, want.joints[j].y, 1e-9);
      }
      // Rectifying with the true orientation gives back the upright scene.
      EXPECT_EQ(rotate(turned.frame, rectifying_rotation(o)), north.frame);
    }
  }
}

TEST(RenderScene, EastIsHeadRight) {
  const auto e = render_scene(scene(Posture::kSupine, Orientation::E, 0.0, 3));
  EXPECT_GT(e.pose[JointId::HeadTop].x, e.pose[JointId::LAnkle].x);
  const auto w = render_scene(scene(Posture::kSupine, Orientation::W, 0.0, 3));
  EXPECT_LT(w.pose[JointId::HeadTop].x, w.pose[JointId::LAnkle].x);
}

TEST(RenderScene, NoiseFreeThresholdIsSupport) {
  for (const auto& spec : make_dataset_specs(24, 5, 128, 128, 0.0)) {
    const auto s = render_scene(spec);
    EXPECT_EQ(threshold_mask(s.frame, 115), s.support);
    for (std::uint8_t v : s.frame.pixels()) EXPECT_TRUE(v == kForeground || v == kBackground);
  }
}

TEST(RenderScene, JointsInsideSubjectBox) {
  for (const auto& spec : make_dataset_specs(48, 6)) {
    const auto s = render_scene(spec);
    const auto box = extract_bbox(s.support, 0);
    for (const auto& j : s.pose.joints) {
      EXPECT_GE(j.x, box.x);
      EXPECT_GE(j.y, box.y);
      EXPECT_LE(j.x, box.x + box.w);
      EXPECT_LE(j.y, box.y + box.h);
    }
  }
}

TEST(RenderScene, RejectsOversizedSubject) {
  auto spec = scene(Posture::kSupine, Orientation::N, 0.0, 1);
  spec.width = 24;
  try {
    render_scene(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSubjectDoesNotFit);
  }
  spec.width = 128;
  spec.subject_scale = 1.4;
  EXPECT_THROW(render_scene(spec), Error);
}

TEST(DatasetSpecs, BalancedAndSeeded) {
  const auto specs = make_dataset_specs(419, 2024);
  ASSERT_EQ(specs.size(), 419u);
  int counts[4] = {};
  for (const auto& s : specs) ++counts[static_cast<int>(s.orientation)];
  for (int c : counts) EXPECT_GE(c, 104);
  EXPECT_EQ(make_dataset_specs(419, 2024)[17].seed, specs[17].seed);
  EXPECT_NE(make_dataset_specs(419, 2025)[17].seed, specs[17].seed);
}

TEST(RenderSequence, SingleEpisodeIsStatic) {
  SequenceScript script;
  script.episodes.push_back({10, scene(Posture::kSupine, Orientation::N, 2.0, 1)});
  const auto seq = render_sequence(script);
  ASSERT_EQ(seq.sequence.frames.size(), 10u);
  EXPECT_EQ(seq.state_labels, std::vector<std::uint8_t>(10, 0));
  EXPECT_EQ(seq.trigger_frames, std::vector<std::size_t>{0});
}

TEST(RenderSequence, FiveEpisodes) {
  const auto script = default_monitoring_script(99);
  ASSERT_EQ(script.episodes.size(), 5u);
  const auto seq = render_sequence(script);
  EXPECT_EQ(seq.sequence.fps, 11.28);
  EXPECT_EQ(seq.sequence.frames.size(), seq.state_labels.size());
  EXPECT_EQ(dynamic_runs(seq.state_labels), 4);
  ASSERT_EQ(seq.trigger_frames.size(), 5u);
  for (std::size_t f : seq.trigger_frames) {
    EXPECT_EQ(seq.state_labels[f], 0);
    if (f > 0) EXPECT_EQ(seq.state_labels[f - 1], 1);
  }

  TriggerConfig config;
  config.n_bf = 30;
  for (const auto& e : script.episodes) ASSERT_LT(config.n_bf, e.hold_frames);
  const auto trace = run_trigger(seq.sequence, config);
  ASSERT_EQ(trace.trigger_frames.size(), 5u);
  for (std::size_t e = 0; e < 5; ++e) {
    EXPECT_GE(trace.trigger_frames[e], seq.trigger_frames[e]);
    EXPECT_LE(trace.trigger_frames[e] - seq.trigger_frames[e], 30u);
  }
  // Raw motion follows the label track; the first static frame still
  // differs from the last moving one.
  for (std::size_t i = 1; i < seq.state_labels.size(); ++i) {
    const bool moving = seq.state_labels[i] || seq.state_labels[i - 1];
    EXPECT_EQ(trace.raw[i] != 0, moving) << "frame " << i;
  }
}

TEST(RenderSequence, Deterministic) {
  const auto a = render_sequence(default_monitoring_script(7, 2));
  const auto b = render_sequence(default_monitoring_script(7, 2));
  EXPECT_EQ(a.sequence.frames, b.sequence.frames);
  EXPECT_EQ(a.state_labels, b.state_labels);
}
