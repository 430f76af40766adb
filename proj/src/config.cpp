#include "bedpose/config.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "bedpose/error.hpp"
#include "bedpose/pgm.hpp"

namespace bedpose {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw Error(ErrorCode::kMalformedJson, where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      throw Error(ErrorCode::kMalformedJson, "unknown config key '" + where + key + "'");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

void PipelineConfig::validate() const {
  if (segmentation.tau < 0 || segmentation.tau > 255) {
    throw Error(ErrorCode::kInvalidArgument, "segmentation.tau must lie in [0,255]");
  }
  if (segmentation.tau_e < 0) throw Error(ErrorCode::kInvalidArgument, "segmentation.tau_e must be >= 0");
  if (segmentation.dilate_radius < 0) {
    throw Error(ErrorCode::kInvalidArgument, "segmentation.dilate_radius must be >= 0");
  }
  hog.validate();
  if (!(svm.lambda > 0.0) || svm.epochs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "svm.lambda must be > 0 and svm.epochs >= 1");
  }
  if (folds < 2) throw Error(ErrorCode::kInvalidArgument, "svm.folds must be >= 2");
  trigger.validate();
  pck.validate();
  if (estimator != "stub" && estimator.rfind("pose-file:", 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "estimator must be 'stub' or 'pose-file:<path>'");
  }
  if (estimator.rfind("pose-file:", 0) == 0 && !std::filesystem::exists(estimator.substr(10))) {
    throw Error(ErrorCode::kIo, "estimator pose file not found: " + estimator.substr(10));
  }
  if (!model_path.empty() && !std::filesystem::exists(model_path)) {
    throw Error(ErrorCode::kIo, "model file not found: " + model_path);
  }
  if (synth.width <= 0 || synth.height <= 0 || synth.count < 1 || synth.episodes < 1 ||
      synth.noise_sigma < 0) {
    throw Error(ErrorCode::kInvalidArgument, "synth settings out of range");
  }
}

PipelineConfig config_from_json(const std::string& text, const std::filesystem::path& base_dir) {
  PipelineConfig c;
  try {
    const json doc = json::parse(text);
    check_keys(doc,
               {"version", "seed", "segmentation", "hog", "svm", "model_path", "trigger", "pck",
                "estimator", "synth"},
               "");
    const int version = doc.value("version", PipelineConfig::kVersion);
    if (version != PipelineConfig::kVersion) {
      throw Error(ErrorCode::kMalformedJson, "unsupported config version " + std::to_string(version));
    }
    read(doc, "seed", c.seed);
    if (doc.contains("segmentation")) {
      const auto& s = doc["segmentation"];
      check_keys(s, {"method", "tau", "tau_e", "dilate_radius"}, "segmentation.");
      if (s.contains("method")) c.segmentation.method = parse_segmentation_method(s["method"].get<std::string>());
      read(s, "tau", c.segmentation.tau);
      read(s, "tau_e", c.segmentation.tau_e);
      read(s, "dilate_radius", c.segmentation.dilate_radius);
    }
    if (doc.contains("hog")) {
      const auto& h = doc["hog"];
      check_keys(h, {"n_points", "l_block", "n_bins", "clip", "symmetric_points", "calibrate"}, "hog.");
      read(h, "n_points", c.hog.n_points);
      read(h, "l_block", c.hog.l_block);
      read(h, "n_bins", c.hog.n_bins);
      read(h, "clip", c.hog.clip);
      read(h, "symmetric_points", c.hog.symmetric_points);
      read(h, "calibrate", c.calibrate_block);
    }
    if (doc.contains("svm")) {
      const auto& s = doc["svm"];
      check_keys(s, {"lambda", "epochs", "folds"}, "svm.");
      read(s, "lambda", c.svm.lambda);
      read(s, "epochs", c.svm.epochs);
      read(s, "folds", c.folds);
    }
    read(doc, "model_path", c.model_path);
    if (doc.contains("trigger")) {
      const auto& t = doc["trigger"];
      check_keys(t, {"tau_p", "rho", "n_bf"}, "trigger.");
      read(t, "tau_p", c.trigger.tau_p);
      read(t, "rho", c.trigger.rho);
      read(t, "n_bf", c.trigger.n_bf);
    }
    if (doc.contains("pck")) {
      check_keys(doc["pck"], {"alphas"}, "pck.");
      read(doc["pck"], "alphas", c.pck.alphas);
    }
    read(doc, "estimator", c.estimator);
    if (doc.contains("synth")) {
      const auto& s = doc["synth"];
      check_keys(s, {"width", "height", "count", "noise_sigma", "episodes"}, "synth.");
      read(s, "width", c.synth.width);
      read(s, "height", c.synth.height);
      read(s, "count", c.synth.count);
      read(s, "noise_sigma", c.synth.noise_sigma);
      read(s, "episodes", c.synth.episodes);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, std::string("config: ") + e.what());
  }
  if (!c.model_path.empty() && !base_dir.empty() && std::filesystem::path(c.model_path).is_relative()) {
    c.model_path = (base_dir / c.model_path).string();
  }
  if (c.estimator.rfind("pose-file:", 0) == 0 && !base_dir.empty()) {
    const std::filesystem::path p = c.estimator.substr(10);
    if (p.is_relative()) c.estimator = "pose-file:" + (base_dir / p).string();
  }
  c.validate();
  return c;
}

std::string config_to_json(const PipelineConfig& c) {
  const json doc = {
      {"version", PipelineConfig::kVersion},
      {"seed", c.seed},
      {"segmentation",
       {{"method", to_string(c.segmentation.method)},
        {"tau", c.segmentation.tau},
        {"tau_e", c.segmentation.tau_e},
        {"dilate_radius", c.segmentation.dilate_radius}}},
      {"hog",
       {{"n_points", c.hog.n_points},
        {"l_block", c.hog.l_block},
        {"n_bins", c.hog.n_bins},
        {"clip", c.hog.clip},
        {"symmetric_points", c.hog.symmetric_points},
        {"calibrate", c.calibrate_block}}},
      {"svm", {{"lambda", c.svm.lambda}, {"epochs", c.svm.epochs}, {"folds", c.folds}}},
      {"model_path", c.model_path},
      {"trigger", {{"tau_p", c.trigger.tau_p}, {"rho", c.trigger.rho}, {"n_bf", c.trigger.n_bf}}},
      {"pck", {{"alphas", c.pck.alphas}}},
      {"estimator", c.estimator},
      {"synth",
       {{"width", c.synth.width},
        {"height", c.synth.height},
        {"count", c.synth.count},
        {"noise_sigma", c.synth.noise_sigma},
        {"episodes", c.synth.episodes}}},
  };
  return doc.dump(2) + "\n";
}

PipelineConfig load_config(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return config_from_json(std::string(bytes.begin(), bytes.end()), path.parent_path());
}

}  // namespace bedpose
