#include "bedpose/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "bedpose/error.hpp"

namespace bedpose {

const char* to_string(Posture p) {
  switch (p) {
    case Posture::kSupine: return "supine";
    case Posture::kLeftLying: return "left-lying";
    case Posture::kRightLying: return "right-lying";
  }
  return "?";
}

Posture parse_posture(const std::string& s) {
  if (s == "supine") return Posture::kSupine;
  if (s == "left-lying") return Posture::kLeftLying;
  if (s == "right-lying") return Posture::kRightLying;
  throw Error(ErrorCode::kInvalidArgument, "unknown posture '" + s + "'");
}

void SceneSpec::validate() const {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::kInvalidArgument, "scene size must be positive");
  if (!(subject_scale > 0.0 && subject_scale < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "subject_scale must lie in (0,1)");
  }
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise_sigma must be >= 0");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over (seed, stream)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Body template in body-length units: x relative to the body midline, y from
// the top of the head (0) to the soles (1).
struct BodyTemplate {
  std::array<Point, kNumJoints> joints;
  Point head_center;
  double head_radius;
  std::array<Point, 4> torso;  // convex, clockwise from upper-left
  double arm_radius;
  double leg_radius;
  double neck_radius;
};

BodyTemplate supine_template() {
  BodyTemplate t{};
  using J = JointId;
  auto set = [&](J j, double x, double y) { t.joints[static_cast<std::size_t>(j)] = {x, y}; };
  set(J::HeadTop, 0.0, 0.03);
  set(J::Neck, 0.0, 0.155);
  set(J::RShoulder, -0.11, 0.19);
  set(J::LShoulder, 0.11, 0.19);
  set(J::RElbow, -0.15, 0.33);
  set(J::LElbow, 0.15, 0.33);
  set(J::RWrist, -0.13, 0.46);
  set(J::LWrist, 0.13, 0.46);
  set(J::RHip, -0.05, 0.49);
  set(J::LHip, 0.05, 0.49);
  set(J::RKnee, -0.05, 0.71);
  set(J::LKnee, 0.05, 0.71);
  set(J::RAnkle, -0.05, 0.93);
  set(J::LAnkle, 0.05, 0.93);
  t.head_center = {0.0, 0.075};
  t.head_radius = 0.065;
  t.torso = {Point{-0.13, 0.17}, Point{0.13, 0.17}, Point{0.09, 0.52}, Point{-0.09, 0.52}};
  t.arm_radius = 0.03;
  t.leg_radius = 0.04;
  t.neck_radius = 0.035;
  return t;
}

// On the left side, front facing +x: stacked shoulders and hips, arms
// reaching forward, knees drawn up.
BodyTemplate left_lying_template() {
  BodyTemplate t{};
  using J = JointId;
  auto set = [&](J j, double x, double y) { t.joints[static_cast<std::size_t>(j)] = {x, y}; };
  set(J::HeadTop, 0.01, 0.03);
  set(J::Neck, 0.01, 0.155);
  set(J::RShoulder, 0.02, 0.19);
  set(J::LShoulder, -0.02, 0.20);
  set(J::RElbow, 0.12, 0.28);
  set(J::LElbow, 0.10, 0.31);
  set(J::RWrist, 0.17, 0.38);
  set(J::LWrist, 0.15, 0.41);
  set(J::RHip, 0.01, 0.49);
  set(J::LHip, -0.02, 0.50);
  set(J::RKnee, 0.14, 0.66);
  set(J::LKnee, 0.11, 0.69);
  set(J::RAnkle, 0.04, 0.88);
  set(J::LAnkle, 0.01, 0.91);
  t.head_center = {0.02, 0.075};
  t.head_radius = 0.065;
  t.torso = {Point{-0.07, 0.17}, Point{0.07, 0.17}, Point{0.06, 0.53}, Point{-0.07, 0.53}};
  t.arm_radius = 0.03;
  t.leg_radius = 0.04;
  t.neck_radius = 0.035;
  return t;
}

BodyTemplate mirrored(BodyTemplate t) {
  for (auto& p : t.joints) p.x = -p.x;
  t.head_center.x = -t.head_center.x;
  for (auto& p : t.torso) p.x = -p.x;
  std::swap(t.torso[0], t.torso[1]);
  std::swap(t.torso[2], t.torso[3]);
  return t;
}

BodyTemplate template_for(Posture p) {
  switch (p) {
    case Posture::kSupine: return supine_template();
    case Posture::kLeftLying: return left_lying_template();
    case Posture::kRightLying: return mirrored(left_lying_template());
  }
  return supine_template();
}

struct Capsule {
  Point a, b;
  double r;
};

double segment_distance_sq(Point p, Point a, Point b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len_sq = vx * vx + vy * vy;
  double t = len_sq > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double dx = p.x - (a.x + t * vx);
  const double dy = p.y - (a.y + t * vy);
  return dx * dx + dy * dy;
}

bool inside_convex(Point p, const std::array<Point, 4>& quad) {
  bool pos = false;
  bool neg = false;
  for (std::size_t i = 0; i < quad.size(); ++i) {
    const Point a = quad[i];
    const Point b = quad[(i + 1) % quad.size()];
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross > 0) pos = true;
    if (cross < 0) neg = true;
  }
  return !(pos && neg);
}

GrayFrame add_noise(const GrayFrame& frame, double sigma, std::uint64_t seed) {
  if (sigma <= 0.0) return frame;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<std::uint8_t> out(frame.pixels());
  for (auto& v : out) {
    v = static_cast<std::uint8_t>(std::clamp<long>(std::lround(v + noise(rng)), 0, 255));
  }
  return GrayFrame(frame.width(), frame.height(), std::move(out));
}

}  // namespace

RenderedScene render_scene(const SceneSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(derive_seed(spec.seed, 0));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  BodyTemplate t = template_for(spec.posture);
  const double body = spec.subject_scale * spec.height * (1.0 + 0.04 * unit(rng));
  const double cx = spec.width / 2.0 + 0.05 * spec.width * unit(rng);
  const double top = (spec.height - body) / 2.0 + 0.02 * spec.height * unit(rng);

  // Per-joint jitter; the head moves rigidly with its top joint.
  for (int j = 0; j < kNumJoints; ++j) {
    const auto id = static_cast<JointId>(j);
    const bool limb_end = id == JointId::RElbow || id == JointId::LElbow || id == JointId::RWrist ||
                          id == JointId::LWrist || id == JointId::RKnee || id == JointId::LKnee ||
                          id == JointId::RAnkle || id == JointId::LAnkle;
    const double amp = limb_end ? 0.015 : 0.006;
    const double dx = amp * unit(rng);
    const double dy = amp * unit(rng);
    t.joints[j].x += dx;
    t.joints[j].y += dy;
    if (id == JointId::HeadTop) {
      t.head_center.x += dx;
      t.head_center.y += dy;
    }
  }

  auto to_px = [&](Point p) { return Point{cx + p.x * body, top + p.y * body}; };
  Pose pose;
  for (int j = 0; j < kNumJoints; ++j) pose.joints[j] = to_px(t.joints[j]);
  const Point head_c = to_px(t.head_center);
  const double head_r = t.head_radius * body;
  std::array<Point, 4> torso{};
  for (std::size_t i = 0; i < 4; ++i) torso[i] = to_px(t.torso[i]);

  using J = JointId;
  std::vector<Capsule> capsules;
  auto limb = [&](J a, J b, double r) { capsules.push_back({pose[a], pose[b], r * body}); };
  limb(J::RShoulder, J::RElbow, t.arm_radius);
  limb(J::RElbow, J::RWrist, t.arm_radius);
  limb(J::LShoulder, J::LElbow, t.arm_radius);
  limb(J::LElbow, J::LWrist, t.arm_radius);
  limb(J::RHip, J::RKnee, t.leg_radius);
  limb(J::RKnee, J::RAnkle, t.leg_radius);
  limb(J::LHip, J::LKnee, t.leg_radius);
  limb(J::LKnee, J::LAnkle, t.leg_radius);
  capsules.push_back({pose[J::Neck], head_c, t.neck_radius * body});

  double x0 = head_c.x - head_r, x1 = head_c.x + head_r;
  double y0 = head_c.y - head_r, y1 = head_c.y + head_r;
  for (const auto& c : capsules) {
    x0 = std::min({x0, c.a.x - c.r, c.b.x - c.r});
    x1 = std::max({x1, c.a.x + c.r, c.b.x + c.r});
    y0 = std::min({y0, c.a.y - c.r, c.b.y - c.r});
    y1 = std::max({y1, c.a.y + c.r, c.b.y + c.r});
  }
  for (const auto& p : torso) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  if (x0 < 1.0 || y0 < 1.0 || x1 > spec.width - 2.0 || y1 > spec.height - 2.0) {
    throw Error(ErrorCode::kSubjectDoesNotFit, "subject does not fit a " + std::to_string(spec.width) +
                                                   "x" + std::to_string(spec.height) +
                                                   " frame at scale " +
                                                   std::to_string(spec.subject_scale));
  }

  BinaryMask support(spec.width, spec.height);
  std::vector<std::uint8_t> pixels(static_cast<std::size_t>(spec.width) * spec.height, kBackground);
  for (int r = static_cast<int>(std::floor(y0)); r <= static_cast<int>(std::ceil(y1)); ++r) {
    for (int c = static_cast<int>(std::floor(x0)); c <= static_cast<int>(std::ceil(x1)); ++c) {
      const Point p{double(c), double(r)};
      bool in = (p.x - head_c.x) * (p.x - head_c.x) + (p.y - head_c.y) * (p.y - head_c.y) <=
                    head_r * head_r ||
                inside_convex(p, torso);
      for (std::size_t k = 0; !in && k < capsules.size(); ++k) {
        in = segment_distance_sq(p, capsules[k].a, capsules[k].b) <= capsules[k].r * capsules[k].r;
      }
      if (in) {
        support.set(r, c, true);
        pixels[static_cast<std::size_t>(r) * spec.width + c] = kForeground;
      }
    }
  }

  const GrayFrame upright =
      add_noise(GrayFrame(spec.width, spec.height, std::move(pixels)), spec.noise_sigma,
                derive_seed(spec.seed, 1));
  const Rotation rot = orientation_rotation(spec.orientation);
  return {rotate(upright, rot), rotate_pose(pose, rot, spec.width, spec.height), spec.orientation,
          spec.posture, rotate(support, rot)};
}

std::vector<SceneSpec> make_dataset_specs(std::size_t count, std::uint64_t seed, int width,
                                          int height, double noise_sigma) {
  std::vector<SceneSpec> specs;
  specs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    SceneSpec s;
    s.orientation = static_cast<Orientation>(i % 4);
    s.posture = static_cast<Posture>((i / 4) % 3);
    s.width = width;
    s.height = height;
    s.noise_sigma = noise_sigma;
    s.seed = derive_seed(seed, i);
    std::mt19937_64 rng(derive_seed(s.seed, 7));
    s.subject_scale = std::uniform_real_distribution<double>(0.66, 0.8)(rng);
    specs.push_back(s);
  }
  return specs;
}

void SequenceScript::validate() const {
  if (episodes.empty()) throw Error(ErrorCode::kInvalidArgument, "script needs at least one episode");
  if (transition_frames < 0) throw Error(ErrorCode::kInvalidArgument, "transition_frames must be >= 0");
  if (!(fps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "fps must be positive");
  for (const auto& e : episodes) {
    if (e.hold_frames < 1) throw Error(ErrorCode::kInvalidArgument, "hold_frames must be >= 1");
    e.scene.validate();
  }
}

namespace {

GrayFrame blend_and_shift(const GrayFrame& a, const GrayFrame& b, double alpha, int dx, int dy) {
  const int w = a.width();
  const int h = a.height();
  std::vector<std::uint8_t> out(a.size(), kBackground);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int sr = r - dy;
      const int sc = c - dx;
      if (sr < 0 || sc < 0 || sr >= h || sc >= w) continue;
      const double v = (1.0 - alpha) * a.at(sr, sc) + alpha * b.at(sr, sc);
      out[static_cast<std::size_t>(r) * w + c] = static_cast<std::uint8_t>(std::lround(v));
    }
  }
  return GrayFrame(w, h, std::move(out));
}

}  // namespace

RenderedSequence render_sequence(const SequenceScript& script) {
  script.validate();
  RenderedSequence out;
  out.sequence.fps = script.fps;
  for (const auto& e : script.episodes) {
    SceneSpec clean = e.scene;
    clean.noise_sigma = 0.0;
    out.episodes.push_back(render_scene(clean));
    const auto& f = out.episodes.back().frame;
    const auto& f0 = out.episodes.front().frame;
    if (f.width() != f0.width() || f.height() != f0.height()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "episode renderings differ in size; use square frames when mixing orientations");
    }
  }

  auto push = [&](const GrayFrame& base, double sigma, std::uint8_t label) {
    const std::size_t index = out.sequence.frames.size();
    out.sequence.frames.push_back(add_noise(base, sigma, derive_seed(script.seed, index)));
    out.state_labels.push_back(label);
  };

  std::mt19937_64 jitter(derive_seed(script.seed, 0xC0FFEE));
  std::uniform_int_distribution<int> offset(-5, 5);
  for (std::size_t k = 0; k < script.episodes.size(); ++k) {
    const auto& episode = script.episodes[k];
    if (k > 0) {
      const auto& from = out.episodes[k - 1].frame;
      const auto& to = out.episodes[k].frame;
      // Consecutive offsets differ by >= 4 (L1) and stay >= 3 from rest, so
      // every relocation frame moves visibly against its neighbours.
      int px = 0;
      int py = 0;
      for (int j = 1; j <= script.transition_frames; ++j) {
        int dx = 0;
        int dy = 0;
        do {
          dx = offset(jitter);
          dy = offset(jitter);
        } while (std::abs(dx) + std::abs(dy) < 3 || std::abs(dx - px) + std::abs(dy - py) < 4);
        px = dx;
        py = dy;
        const double alpha = static_cast<double>(j) / (script.transition_frames + 1);
        push(blend_and_shift(from, to, alpha, dx, dy), episode.scene.noise_sigma, 1);
      }
    }
    out.trigger_frames.push_back(out.sequence.frames.size());
    for (int j = 0; j < episode.hold_frames; ++j) {
      push(out.episodes[k].frame, episode.scene.noise_sigma, 0);
    }
  }
  return out;
}

SequenceScript default_monitoring_script(std::uint64_t seed, std::size_t episodes,
                                         double noise_sigma) {
  SequenceScript script;
  script.seed = seed;
  std::mt19937_64 rng(derive_seed(seed, 0x5C41));
  std::uniform_int_distribution<int> orient(0, 3);
  std::uniform_int_distribution<int> posture(0, 2);
  // 6-8 s of stillness at 11.28 fps
  std::uniform_int_distribution<int> hold(68, 90);
  int prev = -1;
  for (std::size_t k = 0; k < episodes; ++k) {
    int o = orient(rng);
    while (o == prev) o = orient(rng);
    prev = o;
    Episode e;
    e.hold_frames = hold(rng);
    e.scene.orientation = static_cast<Orientation>(o);
    e.scene.posture = static_cast<Posture>(posture(rng));
    e.scene.noise_sigma = noise_sigma;
    e.scene.seed = derive_seed(seed, 100 + k);
    script.episodes.push_back(e);
  }
  return script;
}

}  // namespace bedpose
