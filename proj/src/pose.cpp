#include "bedpose/pose.hpp"

#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "bedpose/error.hpp"
#include "bedpose/pgm.hpp"

namespace bedpose {

const char* joint_name(JointId j) {
  static constexpr const char* kNames[kNumJoints] = {
      "RAnkle", "RKnee", "RHip", "LHip", "LKnee", "LAnkle", "RWrist",
      "RElbow", "RShoulder", "LShoulder", "LElbow", "LWrist", "Neck", "HeadTop"};
  return kNames[static_cast<int>(j)];
}

Pose rotate_pose(const Pose& pose, Rotation r, int width, int height) {
  Pose out = pose;
  for (auto& p : out.joints) p = rotate_point(p, r, width, height);
  return out;
}

Pose translate_pose(const Pose& pose, double dx, double dy) {
  Pose out = pose;
  for (auto& p : out.joints) p = {p.x + dx, p.y + dy};
  return out;
}

double torso_length(const Pose& gt) {
  const Point a = gt[JointId::LShoulder];
  const Point b = gt[JointId::RHip];
  const double d = std::hypot(a.x - b.x, a.y - b.y);
  if (!(d > 0.0)) throw Error(ErrorCode::kZeroTorso, "zero torso");
  return d;
}

bool pck_joint(Point pred, Point gt, double torso, double alpha) {
  return std::hypot(pred.x - gt.x, pred.y - gt.y) <= alpha * torso;
}

const char* group_name(PartGroup g) {
  switch (g) {
    case PartGroup::Total: return "total";
    case PartGroup::Hip: return "hip";
    case PartGroup::Knee: return "knee";
    case PartGroup::Ankle: return "ankle";
    case PartGroup::Head: return "head";
    case PartGroup::Shoulder: return "shoulder";
    case PartGroup::Elbow: return "elbow";
    case PartGroup::Wrist: return "wrist";
  }
  return "?";
}

std::vector<JointId> group_members(PartGroup g) {
  using J = JointId;
  switch (g) {
    case PartGroup::Total: {
      std::vector<JointId> all;
      for (int j = 0; j < kNumJoints; ++j) all.push_back(static_cast<JointId>(j));
      return all;
    }
    case PartGroup::Hip: return {J::RHip, J::LHip};
    case PartGroup::Knee: return {J::RKnee, J::LKnee};
    case PartGroup::Ankle: return {J::RAnkle, J::LAnkle};
    case PartGroup::Head: return {J::HeadTop, J::Neck};
    case PartGroup::Shoulder: return {J::RShoulder, J::LShoulder};
    case PartGroup::Elbow: return {J::RElbow, J::LElbow};
    case PartGroup::Wrist: return {J::RWrist, J::LWrist};
  }
  return {};
}

void PckConfig::validate() const {
  if (alphas.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one PCK alpha required");
  for (double a : alphas) {
    if (!(a > 0.0)) throw Error(ErrorCode::kInvalidArgument, "PCK alphas must be > 0");
  }
}

PckReport evaluate(std::span<const Pose> preds, std::span<const Pose> gts, const PckConfig& config) {
  config.validate();
  if (preds.size() != gts.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "prediction count " + std::to_string(preds.size()) + " != ground-truth count " +
                    std::to_string(gts.size()));
  }
  if (gts.empty()) throw Error(ErrorCode::kInvalidArgument, "no poses to evaluate");

  std::vector<double> torsos(gts.size());
  for (std::size_t i = 0; i < gts.size(); ++i) {
    try {
      torsos[i] = torso_length(gts[i]);
    } catch (const Error&) {
      throw Error(ErrorCode::kZeroTorso, "zero torso in ground-truth record " + std::to_string(i));
    }
  }

  PckReport report;
  report.alphas = config.alphas;
  report.images = gts.size();
  const double n = static_cast<double>(gts.size());
  for (double alpha : config.alphas) {
    std::array<std::size_t, kNumJoints> correct{};
    for (std::size_t i = 0; i < gts.size(); ++i) {
      for (int j = 0; j < kNumJoints; ++j) {
        if (pck_joint(preds[i].joints[j], gts[i].joints[j], torsos[i], alpha)) ++correct[j];
      }
    }
    std::array<double, kNumJoints> joint_rates{};
    for (int j = 0; j < kNumJoints; ++j) joint_rates[j] = static_cast<double>(correct[j]) / n;
    std::array<double, kNumGroups> group_rates{};
    for (int g = 0; g < kNumGroups; ++g) {
      const auto members = group_members(static_cast<PartGroup>(g));
      std::size_t hits = 0;
      for (JointId j : members) hits += correct[static_cast<std::size_t>(j)];
      group_rates[g] = static_cast<double>(hits) / (n * static_cast<double>(members.size()));
    }
    report.joint_rates.push_back(joint_rates);
    report.rates.push_back(group_rates);
  }
  return report;
}

namespace {
std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}
}  // namespace

std::string PckReport::to_csv() const {
  std::string out = "group";
  for (double a : alphas) out += ",pck@" + fixed6(a);
  out += "\n";
  for (int g = 0; g < kNumGroups; ++g) {
    out += group_name(static_cast<PartGroup>(g));
    for (std::size_t a = 0; a < alphas.size(); ++a) out += "," + fixed6(rates[a][g]);
    out += "\n";
  }
  return out;
}

std::string PckReport::to_json() const {
  nlohmann::json doc;
  doc["images"] = images;
  doc["alphas"] = alphas;
  nlohmann::json groups = nlohmann::json::object();
  for (int g = 0; g < kNumGroups; ++g) {
    std::vector<double> row;
    for (std::size_t a = 0; a < alphas.size(); ++a) row.push_back(rates[a][g]);
    groups[group_name(static_cast<PartGroup>(g))] = row;
  }
  doc["groups"] = groups;
  nlohmann::json joints = nlohmann::json::object();
  for (int j = 0; j < kNumJoints; ++j) {
    std::vector<double> row;
    for (std::size_t a = 0; a < alphas.size(); ++a) row.push_back(joint_rates[a][j]);
    joints[joint_name(static_cast<JointId>(j))] = row;
  }
  doc["joints"] = joints;
  return doc.dump(2) + "\n";
}

Pose stub_estimate(const GrayFrame& /*frame*/, const BoundingBox& box) {
  using J = JointId;
  struct Frac { J joint; double fx, fy; };
  static constexpr Frac kTemplate[] = {
      {J::HeadTop, 0.5, 0.05},   {J::Neck, 0.5, 0.15},
      {J::RShoulder, 0.35, 0.2}, {J::LShoulder, 0.65, 0.2},
      {J::RHip, 0.4, 0.5},       {J::LHip, 0.6, 0.5},
      {J::RKnee, 0.4, 0.72},     {J::LKnee, 0.6, 0.72},
      {J::RAnkle, 0.4, 0.95},    {J::LAnkle, 0.6, 0.95},
      {J::RElbow, 0.28, 0.33},   {J::LElbow, 0.72, 0.33},
      {J::RWrist, 0.25, 0.47},   {J::LWrist, 0.75, 0.47},
  };
  Pose pose;
  for (const auto& f : kTemplate) {
    pose[f.joint] = {box.x + f.fx * box.w, box.y + f.fy * box.h};
  }
  return pose;
}

std::vector<PoseRecord> parse_pose_records(const std::string& text,
                                           std::optional<std::pair<int, int>> bounds) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("pose file: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kMalformedJson, "pose file: top level must be an array");

  std::vector<PoseRecord> records;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "pose record " + std::to_string(i);
    try {
      PoseRecord rec;
      rec.frame = item.value("frame", std::string{});
      const auto& joints = item.at("joints");
      if (!joints.is_array() || joints.size() != kNumJoints) {
        throw Error(ErrorCode::kInvalidPose, where + ": expected 14 joints, got " +
                                                 std::to_string(joints.is_array() ? joints.size() : 0));
      }
      for (int j = 0; j < kNumJoints; ++j) {
        const auto& xy = joints[j];
        if (!xy.is_array() || xy.size() != 2) {
          throw Error(ErrorCode::kInvalidPose, where + ": joint " + std::to_string(j) + " is not [x, y]");
        }
        const Point p{xy[0].get<double>(), xy[1].get<double>()};
        const bool in_range = std::isfinite(p.x) && std::isfinite(p.y) && p.x >= 0 && p.y >= 0 &&
                              (!bounds || (p.x <= bounds->first - 1 && p.y <= bounds->second - 1));
        if (!in_range) {
          throw Error(ErrorCode::kInvalidPose,
                      where + ": joint " + std::to_string(j) + " coordinates out of bounds");
        }
        rec.pose.joints[j] = p;
      }
      if (item.contains("visible")) {
        const auto& vis = item.at("visible");
        if (!vis.is_array() || vis.size() != kNumJoints) {
          throw Error(ErrorCode::kInvalidPose, where + ": expected 14 visibility flags");
        }
        for (int j = 0; j < kNumJoints; ++j) rec.pose.visible[j] = vis[j].get<bool>();
      }
      records.push_back(std::move(rec));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedJson, where + ": " + e.what());
    }
  }
  return records;
}

std::string pose_records_to_json(std::span<const PoseRecord> records) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& rec : records) {
    nlohmann::json joints = nlohmann::json::array();
    nlohmann::json visible = nlohmann::json::array();
    for (int j = 0; j < kNumJoints; ++j) {
      joints.push_back({rec.pose.joints[j].x, rec.pose.joints[j].y});
      visible.push_back(static_cast<bool>(rec.pose.visible[j]));
    }
    doc.push_back({{"frame", rec.frame}, {"joints", joints}, {"visible", visible}});
  }
  return doc.dump(2) + "\n";
}

std::vector<PoseRecord> load_pose_file(const std::filesystem::path& path,
                                       std::optional<std::pair<int, int>> bounds) {
  const auto bytes = read_file_bytes(path);
  return parse_pose_records(std::string(bytes.begin(), bytes.end()), bounds);
}

void save_pose_file(const std::filesystem::path& path, std::span<const PoseRecord> records) {
  write_text_file(path, pose_records_to_json(records));
}

PoseFileEstimator::PoseFileEstimator(const std::filesystem::path& path)
    : PoseFileEstimator(load_pose_file(path)) {}

PoseFileEstimator::PoseFileEstimator(std::span<const PoseRecord> records) {
  for (const auto& r : records) poses_[r.frame] = r.pose;
}

Pose PoseFileEstimator::estimate(const GrayFrame&, const BoundingBox&, std::string_view key) const {
  const auto it = poses_.find(key);
  if (it == poses_.end()) {
    throw Error(ErrorCode::kInvalidPose, "no precomputed pose for frame '" + std::string(key) + "'");
  }
  return it->second;
}

}  // namespace bedpose
