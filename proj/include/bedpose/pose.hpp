#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bedpose/image.hpp"
#include "bedpose/segmentation.hpp"

namespace bedpose {

/// LSP joint order.
enum class JointId {
  RAnkle, RKnee, RHip, LHip, LKnee, LAnkle,
  RWrist, RElbow, RShoulder, LShoulder, LElbow, LWrist,
  Neck, HeadTop,
};

inline constexpr int kNumJoints = 14;

const char* joint_name(JointId j);

struct Pose {
  std::array<Point, kNumJoints> joints{};
  std::array<bool, kNumJoints> visible{};

  Pose() { visible.fill(true); }

  Point& operator[](JointId j) { return joints[static_cast<std::size_t>(j)]; }
  const Point& operator[](JointId j) const { return joints[static_cast<std::size_t>(j)]; }

  bool operator==(const Pose&) const = default;
};

/// Maps every joint through `rotate` of a width x height frame.
Pose rotate_pose(const Pose& pose, Rotation r, int width, int height);
Pose translate_pose(const Pose& pose, double dx, double dy);

/// Distance from the left shoulder to the right hip. Throws kZeroTorso when
/// the two coincide.
double torso_length(const Pose& gt);

/// Inclusive: a prediction exactly alpha * torso away is correct.
bool pck_joint(Point pred, Point gt, double torso, double alpha);

enum class PartGroup { Total, Hip, Knee, Ankle, Head, Shoulder, Elbow, Wrist };
inline constexpr int kNumGroups = 8;
const char* group_name(PartGroup g);
/// Member joints; Total covers all 14, Head is {HeadTop, Neck}.
std::vector<JointId> group_members(PartGroup g);

struct PckConfig {
  std::vector<double> alphas{0.1, 0.2};
  void validate() const;
};

struct PckReport {
  std::vector<double> alphas;
  std::size_t images = 0;
  /// rates[a][g]: alpha index a, PartGroup g.
  std::vector<std::array<double, kNumGroups>> rates;
  /// joint_rates[a][j]
  std::vector<std::array<double, kNumJoints>> joint_rates;

  double rate(std::size_t alpha_index, PartGroup g) const {
    return rates[alpha_index][static_cast<std::size_t>(g)];
  }
  std::string to_csv() const;
  std::string to_json() const;
};

PckReport evaluate(std::span<const Pose> preds, std::span<const Pose> gts, const PckConfig& config);

class PoseEstimator {
 public:
  virtual ~PoseEstimator() = default;
  /// `key` names the frame (e.g. its file name) for backends that look up
  /// precomputed results; geometric backends ignore it.
  virtual Pose estimate(const GrayFrame& frame, const BoundingBox& box,
                        std::string_view key = {}) const = 0;
  virtual bool concurrent_safe() const { return false; }
};

/// Fixed box-relative template.
Pose stub_estimate(const GrayFrame& frame, const BoundingBox& box);

class StubEstimator final : public PoseEstimator {
 public:
  Pose estimate(const GrayFrame& frame, const BoundingBox& box, std::string_view) const override {
    return stub_estimate(frame, box);
  }
  bool concurrent_safe() const override { return true; }
};

/// One entry of the pose/annotation file.
struct PoseRecord {
  std::string frame;
  Pose pose;
};

/// JSON array of {frame, joints: [[x, y] x 14], visible: [bool x 14]}.
/// Coordinates must be finite and non-negative; when `bounds` is given they
/// must also lie inside a frame of that (width, height).
std::vector<PoseRecord> parse_pose_records(const std::string& text,
                                           std::optional<std::pair<int, int>> bounds = {});
std::string pose_records_to_json(std::span<const PoseRecord> records);
std::vector<PoseRecord> load_pose_file(const std::filesystem::path& path,
                                       std::optional<std::pair<int, int>> bounds = {});
void save_pose_file(const std::filesystem::path& path, std::span<const PoseRecord> records);

/// Serves externally computed poses keyed by frame name.
class PoseFileEstimator final : public PoseEstimator {
 public:
  explicit PoseFileEstimator(const std::filesystem::path& path);
  explicit PoseFileEstimator(std::span<const PoseRecord> records);

  Pose estimate(const GrayFrame& frame, const BoundingBox& box, std::string_view key) const override;
  bool concurrent_safe() const override { return true; }

 private:
  std::map<std::string, Pose, std::less<>> poses_;
};

}  // namespace bedpose
