#include "bedpose/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bedpose/config.hpp"
#include "bedpose/error.hpp"
#include "bedpose/evaluation.hpp"
#include "bedpose/pgm.hpp"
#include "bedpose/synth.hpp"

namespace bedpose::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "Pipeline config (JSON)");
  cmd->add_option("--seed", opts.seed, "Seed overriding the config");
  cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
}

// Thrown for problems with the invocation or its configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PipelineConfig resolve_config(const CommonOptions& opts) {
  PipelineConfig config;
  try {
    if (!opts.config_path.empty()) config = load_config(opts.config_path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (opts.seed) config.seed = *opts.seed;
  config.svm.seed = config.seed;
  return config;
}

std::vector<fs::path> collect_frames(const std::vector<std::string>& inputs) {
  std::vector<fs::path> frames;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pgm") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      frames.insert(frames.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      frames.push_back(p);
    } else {
      throw Error(ErrorCode::kIo, "no such frame or directory: " + in);
    }
  }
  return frames;
}

std::string join_lines(const std::vector<json>& lines) {
  std::string out;
  for (const auto& l : lines) out += l.dump() + "\n";
  return out;
}

json box_json(const BoundingBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

json joints_json(const Pose& pose) {
  json joints = json::array();
  for (const auto& p : pose.joints) joints.push_back({p.x, p.y});
  return joints;
}

std::unique_ptr<PoseEstimator> make_estimator(const PipelineConfig& config) {
  if (config.estimator == "stub") return std::make_unique<StubEstimator>();
  return std::make_unique<PoseFileEstimator>(fs::path(config.estimator.substr(10)));
}

OrientationModel resolve_model(const PipelineConfig& config, const std::string& flag) {
  const std::string path = flag.empty() ? config.model_path : flag;
  if (path.empty()) throw ConfigError("no orientation model given (--model or model_path)");
  if (!fs::exists(path)) throw ConfigError("model file not found: " + path);
  return load_model(path);
}

// ---------------------------------------------------------------- synth

int cmd_synth(const CommonOptions& opts, const std::string& kind, std::optional<int> count,
              std::optional<int> episodes, std::ostream& log) {
  const auto config = resolve_config(opts);
  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  if (kind == "dataset") {
    const int n = count.value_or(config.synth.count);
    if (n < 1) throw ConfigError("--count must be >= 1");
    fs::create_directories(out / "frames");
    const auto specs = make_dataset_specs(static_cast<std::size_t>(n), config.seed, config.synth.width,
                                          config.synth.height, config.synth.noise_sigma);
    std::vector<PoseRecord> annotations;
    json labels = json::array();
    json manifest = json::array();
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const auto scene = render_scene(specs[i]);
      char name[32];
      std::snprintf(name, sizeof name, "frames/scene_%04zu.pgm", i);
      save_pgm(out / name, scene.frame);
      annotations.push_back({name, scene.pose});
      labels.push_back({{"frame", name},
                        {"orientation", to_string(scene.orientation)},
                        {"posture", to_string(scene.posture)}});
      manifest.push_back({{"frame", name}, {"label", north_target(scene.orientation) ? "N" : "notN"}});
    }
    save_pose_file(out / "annotations.json", annotations);
    write_text_file(out / "labels.json", labels.dump(2) + "\n");
    write_text_file(out / "train_manifest.json", manifest.dump(2) + "\n");
    log << "synth: wrote " << n << " scenes to " << out.string() << "\n";
    return kExitOk;
  }
  if (kind == "sequence") {
    const int k = episodes.value_or(config.synth.episodes);
    if (k < 1) throw ConfigError("--episodes must be >= 1");
    auto script = default_monitoring_script(config.seed, static_cast<std::size_t>(k),
                                            config.synth.noise_sigma);
    for (auto& e : script.episodes) {
      e.scene.width = config.synth.width;
      e.scene.height = config.synth.height;
    }
    const auto rendered = render_sequence(script);
    save_sequence(out / "sequence", rendered.sequence);
    json eps = json::array();
    std::vector<PoseRecord> poses;
    for (std::size_t i = 0; i < rendered.episodes.size(); ++i) {
      const auto& e = rendered.episodes[i];
      eps.push_back({{"first_static_frame", rendered.trigger_frames[i]},
                     {"hold_frames", script.episodes[i].hold_frames},
                     {"orientation", to_string(e.orientation)},
                     {"posture", to_string(e.posture)}});
      poses.push_back({sequence_frame_name(rendered.trigger_frames[i]), e.pose});
    }
    const json truth = {{"fps", script.fps},
                        {"state_labels", rendered.state_labels},
                        {"trigger_frames", rendered.trigger_frames},
                        {"episodes", eps}};
    write_text_file(out / "sequence_truth.json", truth.dump(2) + "\n");
    save_pose_file(out / "sequence_annotations.json", poses);
    log << "synth: wrote " << rendered.sequence.frames.size() << "-frame sequence with " << k
        << " episodes to " << (out / "sequence").string() << "\n";
    return kExitOk;
  }
  throw ConfigError("--kind must be 'dataset' or 'sequence'");
}

// ---------------------------------------------------------------- calibrate

int cmd_calibrate(const CommonOptions& opts, const std::string& frames_dir, std::ostream& log) {
  auto config = resolve_config(opts);
  const auto paths = collect_frames({frames_dir});
  if (paths.empty()) throw Error(ErrorCode::kNoSubject, "no frames found in " + frames_dir);

  std::vector<BoundingBox> boxes;
  std::vector<std::uint64_t> histogram(256, 0);
  for (const auto& p : paths) {
    const auto frame = load_pgm(p);
    for (auto v : frame.data()) ++histogram[v];
    try {
      BoundingBox b = segment_subject(frame, config.segmentation);
      if (aspect_bit(b)) std::swap(b.w, b.h);
      boxes.push_back(b);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoSubject) throw;
      log << "calibrate: no subject in " << p.string() << "\n";
    }
  }
  if (boxes.empty()) throw Error(ErrorCode::kNoSubject, "no subject detected in any frame");

  double mean_w = 0;
  double mean_h = 0;
  for (const auto& b : boxes) {
    mean_w += b.w;
    mean_h += b.h;
  }
  mean_w /= static_cast<double>(boxes.size());
  mean_h /= static_cast<double>(boxes.size());
  const int l_block = calibrate_block_size(boxes);
  const int tau = otsu_threshold(histogram);

  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  const json report = {{"frames", paths.size()},       {"detected", boxes.size()},
                       {"mean_width", mean_w},          {"mean_height", mean_h},
                       {"l_block", l_block},            {"tau_suggestion", tau}};
  write_text_file(out / "calibration.json", report.dump(2) + "\n");
  config.hog.l_block = l_block;
  config.calibrate_block = false;
  config.segmentation.tau = tau;
  write_text_file(out / "config.json", config_to_json(config));
  log << "calibrate: " << boxes.size() << "/" << paths.size() << " frames, mean box " << mean_w << "x"
      << mean_h << ", l_block " << l_block << ", suggested tau " << tau << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- train

std::vector<OrientationSample> load_training_manifest(const fs::path& manifest) {
  json doc;
  try {
    const auto bytes = read_file_bytes(manifest);
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, manifest.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::kMalformedJson, "training manifest must be an array");
  std::vector<OrientationSample> samples;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      const auto label = doc[i].at("label").get<std::string>();
      if (label != "N" && label != "notN") {
        throw Error(ErrorCode::kMalformedJson,
                    "manifest entry " + std::to_string(i) + ": label must be 'N' or 'notN'");
      }
      OrientationSample s;
      s.frame = load_pgm(manifest.parent_path() / doc[i].at("frame").get<std::string>());
      s.north = label == "N";
      samples.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedJson, "manifest entry " + std::to_string(i) + ": " + e.what());
    }
  }
  return samples;
}

int cmd_train(const CommonOptions& opts, const std::string& manifest, std::ostream& log) {
  const auto config = resolve_config(opts);
  const auto samples = load_training_manifest(manifest);
  const auto positives = std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.north; });
  if (positives == 0 || positives == static_cast<long>(samples.size())) {
    throw Error(ErrorCode::kSingleClass, "training manifest needs both N and notN samples");
  }
  const auto cv = cross_validate_orientation(samples, config.hog, config.segmentation, config.svm,
                                             config.folds, config.seed, config.calibrate_block);
  const auto model = fit_orientation_model(samples, config.hog, config.segmentation, config.svm,
                                           config.calibrate_block);
  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  save_model(out / "model.json", model);
  write_text_file(out / "cv_report.csv", cv.to_csv());
  log << "train-orientation: " << samples.size() << " samples, l_block " << model.hog.l_block << ", "
      << config.folds << "-fold CV accuracy " << cv.mean_bit_n_accuracy << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- detect / rectify

int cmd_detect(const CommonOptions& opts, const std::vector<std::string>& inputs,
               const std::string& model_flag, bool write_frames, std::ostream& log) {
  const auto config = resolve_config(opts);
  const auto model = resolve_model(config, model_flag);
  const auto paths = collect_frames(inputs);
  if (paths.empty()) throw Error(ErrorCode::kIo, "no input frames");
  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  if (write_frames) fs::create_directories(out / "rectified");

  std::vector<json> lines;
  std::size_t failures = 0;
  for (const auto& p : paths) {
    json rec = {{"frame", p.filename().string()}};
    try {
      const auto det = detect_orientation(load_pgm(p), model, config.segmentation);
      rec["orientation"] = to_string(det.orientation);
      rec["bit_h"] = det.bit_h ? 1 : 0;
      rec["bit_n"] = det.bit_n ? 1 : 0;
      rec["bbox"] = box_json(det.box);
      rec["rectified_bbox"] = box_json(det.rectified_box);
      if (write_frames) save_pgm(out / "rectified" / p.filename(), det.rectified);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kIo) throw;
      rec["error"] = e.what();
      ++failures;
    }
    lines.push_back(std::move(rec));
  }
  write_text_file(out / (write_frames ? "rectify.jsonl" : "detections.jsonl"), join_lines(lines));
  log << (write_frames ? "rectify: " : "detect: ") << paths.size() - failures << "/" << paths.size()
      << " frames processed\n";
  return failures ? kExitPartialFailure : kExitOk;
}

// ---------------------------------------------------------------- monitor

int cmd_monitor(const CommonOptions& opts, const std::string& sequence_dir,
                const std::string& model_flag, std::ostream& log) {
  const auto config = resolve_config(opts);
  const auto model = resolve_model(config, model_flag);
  const auto estimator = make_estimator(config);
  std::vector<std::string> names;
  const auto seq = load_sequence(sequence_dir, &names);

  OnDemandTrigger trigger(config.trigger);
  std::vector<json> events;
  std::vector<json> records;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    if (trigger.step(seq.frames[i]) != TriggerEvent::kTrigger) continue;
    events.push_back({{"frame_index", i}, {"event", "trigger"}});
    json rec = {{"frame_index", i}, {"frame", names[i]}};
    try {
      const auto det = detect_orientation(seq.frames[i], model, config.segmentation);
      const auto pose = estimator->estimate(det.rectified, det.rectified_box, names[i]);
      rec["orientation"] = to_string(det.orientation);
      rec["bbox"] = box_json(det.box);
      rec["rectified_bbox"] = box_json(det.rectified_box);
      rec["joints"] = joints_json(pose);
    } catch (const Error& e) {
      rec["error"] = e.what();
      ++failures;
    }
    records.push_back(std::move(rec));
  }

  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  write_text_file(out / "events.jsonl", join_lines(events));
  write_text_file(out / "records.jsonl", join_lines(records));
  const double reduction =
      seq.frames.empty() ? 0.0 : 1.0 - static_cast<double>(events.size()) / seq.frames.size();
  const json summary = {{"frames", seq.frames.size()},
                        {"triggers", events.size()},
                        {"failures", failures},
                        {"estimator_invocations", events.size() - failures},
                        {"invocation_reduction", reduction}};
  write_text_file(out / "summary.json", summary.dump(2) + "\n");
  log << "monitor: " << seq.frames.size() << " frames, " << events.size() << " triggers, "
      << failures << " failures\n";
  return failures ? kExitPartialFailure : kExitOk;
}

// ---------------------------------------------------------------- evaluate

int cmd_evaluate(const CommonOptions& opts, const std::string& pred_path, const std::string& gt_path,
                 std::ostream& log) {
  const auto config = resolve_config(opts);
  const auto preds = load_pose_file(pred_path);
  const auto gts = load_pose_file(gt_path);
  if (preds.size() != gts.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "prediction and ground-truth files differ in length (" +
                                                   std::to_string(preds.size()) + " vs " +
                                                   std::to_string(gts.size()) + ")");
  }
  std::vector<Pose> p;
  std::vector<Pose> g;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!preds[i].frame.empty() && !gts[i].frame.empty() && preds[i].frame != gts[i].frame) {
      throw Error(ErrorCode::kDimensionMismatch, "record " + std::to_string(i) + " frame mismatch: '" +
                                                     preds[i].frame + "' vs '" + gts[i].frame + "'");
    }
    p.push_back(preds[i].pose);
    g.push_back(gts[i].pose);
  }
  const auto report = evaluate(p, g, config.pck);
  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  write_text_file(out / "pck.csv", report.to_csv());
  write_text_file(out / "pck.json", report.to_json());
  log << "evaluate: " << report.images << " images\n" << report.to_csv();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& log) {
  CLI::App app{"In-bed pose monitoring pipeline"};
  app.require_subcommand(1);

  CommonOptions opts;

  auto* synth = app.add_subcommand("synth", "Render a synthetic dataset or monitoring sequence");
  add_common(synth, opts);
  std::string kind = "dataset";
  std::optional<int> count;
  std::optional<int> episodes;
  synth->add_option("--kind", kind, "dataset | sequence")->capture_default_str();
  synth->add_option("--count", count, "Number of dataset scenes");
  synth->add_option("--episodes", episodes, "Number of sequence episodes");

  auto* calibrate = app.add_subcommand("calibrate", "Estimate block size and thresholds from frames");
  add_common(calibrate, opts);
  std::string frames_dir;
  calibrate->add_option("frames", frames_dir, "Directory of PGM frames")->required();

  auto* train = app.add_subcommand("train-orientation", "Train the orientation classifier with CV");
  add_common(train, opts);
  std::string manifest;
  train->add_option("manifest", manifest, "Training manifest JSON")->required();

  std::string model_flag;
  std::vector<std::string> inputs;
  auto* detect = app.add_subcommand("detect", "Detect subject orientation in frames");
  add_common(detect, opts);
  detect->add_option("--model", model_flag, "Orientation model JSON");
  detect->add_option("frames", inputs, "PGM frames or directories")->required();

  auto* rectify = app.add_subcommand("rectify", "Rotate frames to head-up portrait");
  add_common(rectify, opts);
  rectify->add_option("--model", model_flag, "Orientation model JSON");
  rectify->add_option("frames", inputs, "PGM frames or directories")->required();

  auto* monitor = app.add_subcommand("monitor", "Run the on-demand trigger over a sequence");
  add_common(monitor, opts);
  std::string sequence_dir;
  monitor->add_option("--model", model_flag, "Orientation model JSON");
  monitor->add_option("sequence", sequence_dir, "Sequence directory with manifest.json")->required();

  auto* eval = app.add_subcommand("evaluate", "PCK evaluation of predicted poses");
  add_common(eval, opts);
  std::string pred_path;
  std::string gt_path;
  eval->add_option("--pred", pred_path, "Predicted pose file")->required();
  eval->add_option("--gt", gt_path, "Ground-truth pose file")->required();

  std::vector<std::string> argv_storage{"bedpose"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, log, log);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (*synth) return cmd_synth(opts, kind, count, episodes, log);
    if (*calibrate) return cmd_calibrate(opts, frames_dir, log);
    if (*train) return cmd_train(opts, manifest, log);
    if (*detect) return cmd_detect(opts, inputs, model_flag, false, log);
    if (*rectify) return cmd_detect(opts, inputs, model_flag, true, log);
    if (*monitor) return cmd_monitor(opts, sequence_dir, model_flag, log);
    if (*eval) return cmd_evaluate(opts, pred_path, gt_path, log);
  } catch (const ConfigError& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const fs::filesystem_error& e) {
    log << "error: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitConfigError;
}

}  // namespace bedpose::cli
