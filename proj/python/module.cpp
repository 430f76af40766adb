#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "bedpose/error.hpp"
#include "bedpose/evaluation.hpp"
#include "bedpose/hog.hpp"
#include "bedpose/orientation.hpp"
#include "bedpose/pose.hpp"
#include "bedpose/segmentation.hpp"
#include "bedpose/synth.hpp"
#include "bedpose/trigger.hpp"

namespace py = pybind11;
using namespace bedpose;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using F64Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Box = std::tuple<int, int, int, int>;

GrayFrame to_frame(const U8Array& a) {
  if (a.ndim() != 2) throw py::value_error("frame must be a 2-D uint8 array");
  const int h = static_cast<int>(a.shape(0));
  const int w = static_cast<int>(a.shape(1));
  return GrayFrame(w, h, std::vector<std::uint8_t>(a.data(), a.data() + a.size()));
}

py::array_t<std::uint8_t> to_array(const GrayFrame& f) {
  py::array_t<std::uint8_t> out({f.height(), f.width()});
  std::memcpy(out.mutable_data(), f.data().data(), f.data().size());
  return out;
}

py::array_t<bool> mask_array(const BinaryMask& m) {
  py::array_t<bool> out({m.height, m.width});
  auto* dst = out.mutable_data();
  for (std::size_t i = 0; i < m.bits.size(); ++i) dst[i] = m.bits[i] != 0;
  return out;
}

BinaryMask to_mask(const py::array_t<bool, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw py::value_error("mask must be a 2-D array");
  BinaryMask m(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
  for (std::size_t i = 0; i < m.bits.size(); ++i) m.bits[i] = a.data()[i] ? 1 : 0;
  return m;
}

py::array_t<double> vector_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<double> grid_array(const std::vector<double>& v, int w, int h) {
  py::array_t<double> out({h, w});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

BoundingBox to_box(const Box& b) { return {std::get<0>(b), std::get<1>(b), std::get<2>(b), std::get<3>(b)}; }
Box from_box(const BoundingBox& b) { return {b.x, b.y, b.w, b.h}; }

Rotation parse_rotation(const std::string& s) {
  if (s == "R0") return Rotation::R0;
  if (s == "R90CW") return Rotation::R90CW;
  if (s == "R180") return Rotation::R180;
  if (s == "R90CCW") return Rotation::R90CCW;
  throw py::value_error("rotation must be one of R0, R90CW, R180, R90CCW");
}

HogParams make_hog(int n_points, int l_block, int n_bins, double clip, bool symmetric_points) {
  HogParams p;
  p.n_points = n_points;
  p.l_block = l_block;
  p.n_bins = n_bins;
  p.clip = clip;
  p.symmetric_points = symmetric_points;
  p.validate();
  return p;
}

SegmentationConfig make_seg(const std::string& method, int tau, double tau_e, int dilate_radius) {
  SegmentationConfig c;
  c.method = parse_segmentation_method(method);
  c.tau = tau;
  c.tau_e = tau_e;
  c.dilate_radius = dilate_radius;
  return c;
}

py::array_t<double> joints_array(const Pose& p) {
  py::array_t<double> out({kNumJoints, 2});
  auto* d = out.mutable_data();
  for (int j = 0; j < kNumJoints; ++j) {
    d[2 * j] = p.joints[j].x;
    d[2 * j + 1] = p.joints[j].y;
  }
  return out;
}

std::vector<Pose> to_poses(const F64Array& a) {
  if (a.ndim() != 3 || a.shape(1) != kNumJoints || a.shape(2) != 2) {
    throw py::value_error("poses must have shape (n, 14, 2)");
  }
  std::vector<Pose> poses(static_cast<std::size_t>(a.shape(0)));
  const double* d = a.data();
  for (auto& p : poses) {
    for (auto& j : p.joints) {
      j = {d[0], d[1]};
      d += 2;
    }
  }
  return poses;
}

#define SEG_ARGS                                                                        \
  py::arg("method") = "threshold", py::arg("tau") = 128, py::arg("tau_e") = 100.0, \
  py::arg("dilate_radius") = 2

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "In-bed pose monitoring pipeline";

  py::register_exception<Error>(m, "BedposeError", PyExc_RuntimeError);

  m.def("rotate", [](const U8Array& frame, const std::string& r) {
    return to_array(rotate(to_frame(frame), parse_rotation(r)));
  }, py::arg("frame"), py::arg("rotation"));

  m.def("sobel", [](const U8Array& frame) {
    const auto g = sobel(to_frame(frame));
    return py::make_tuple(grid_array(g.gx, g.width, g.height), grid_array(g.gy, g.width, g.height),
                          grid_array(g.magnitude, g.width, g.height));
  }, py::arg("frame"), "Returns (gx, gy, magnitude).");

  m.def("threshold_mask", [](const U8Array& frame, int tau) {
    return mask_array(threshold_mask(to_frame(frame), tau));
  }, py::arg("frame"), py::arg("tau"));

  m.def("extract_bbox", [](const py::array_t<bool, py::array::c_style | py::array::forcecast>& mask,
                           int radius) { return from_box(extract_bbox(to_mask(mask), radius)); },
        py::arg("mask"), py::arg("dilate_radius") = 2, "Returns (x, y, w, h).");

  m.def("segment_subject", [](const U8Array& frame, const std::string& method, int tau, double tau_e,
                              int radius) {
    return from_box(segment_subject(to_frame(frame), make_seg(method, tau, tau_e, radius)));
  }, py::arg("frame"), SEG_ARGS);

  m.def("nend_feature", [](const U8Array& frame, const Box& box, int n_points, int l_block, int n_bins,
                           double clip, bool symmetric) {
    return vector_array(nend_feature(to_frame(frame), to_box(box),
                                     make_hog(n_points, l_block, n_bins, clip, symmetric)));
  }, py::arg("frame"), py::arg("box"), py::arg("n_points") = 2, py::arg("l_block") = 32,
        py::arg("n_bins") = 9, py::arg("clip") = 0.2, py::arg("symmetric_points") = false);

  py::class_<OrientationModel>(m, "OrientationModel")
      .def_property_readonly("weights", [](const OrientationModel& o) { return vector_array(o.weights); })
      .def_readonly("bias", &OrientationModel::bias)
      .def_property_readonly("l_block", [](const OrientationModel& o) { return o.hog.l_block; })
      .def("score", [](const OrientationModel& o, const F64Array& f) {
        return o.score(std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
      })
      .def("predict_north", [](const OrientationModel& o, const F64Array& f) {
        return predict_north(o, std::span<const double>(f.data(), static_cast<std::size_t>(f.size())));
      })
      .def("to_json", &model_to_json)
      .def_static("from_json", &model_from_json)
      .def_static("load", [](const std::string& path) { return load_model(path); });

  m.def("train_orientation", [](const F64Array& features, const std::vector<bool>& north, int n_points,
                                int l_block, int n_bins, double clip, bool symmetric, double lambda,
                                int epochs, std::uint64_t seed) {
    if (features.ndim() != 2 || static_cast<std::size_t>(features.shape(0)) != north.size()) {
      throw py::value_error("features must be (n, d) with one label per row");
    }
    const auto d = static_cast<std::size_t>(features.shape(1));
    std::vector<LabeledFeature> samples;
    for (std::size_t i = 0; i < north.size(); ++i) {
      samples.push_back({std::vector<double>(features.data() + i * d, features.data() + (i + 1) * d), north[i]});
    }
    SvmOptions svm;
    svm.lambda = lambda;
    svm.epochs = epochs;
    svm.seed = seed;
    return train_orientation(samples, make_hog(n_points, l_block, n_bins, clip, symmetric), svm);
  }, py::arg("features"), py::arg("north"), py::arg("n_points") = 2, py::arg("l_block") = 32,
        py::arg("n_bins") = 9, py::arg("clip") = 0.2, py::arg("symmetric_points") = false,
        py::arg("lam") = 1e-4, py::arg("epochs") = 100, py::arg("seed") = 0);

  m.def("fit_orientation_model", [](const std::vector<U8Array>& frames, const std::vector<bool>& north,
                                    bool calibrate, int l_block, bool symmetric, std::uint64_t seed) {
    if (frames.size() != north.size()) throw py::value_error("one label per frame required");
    std::vector<OrientationSample> samples;
    for (std::size_t i = 0; i < frames.size(); ++i) samples.push_back({to_frame(frames[i]), north[i], {}});
    HogParams hog;
    hog.l_block = l_block;
    hog.symmetric_points = symmetric;
    SvmOptions svm;
    svm.seed = seed;
    return fit_orientation_model(samples, hog, SegmentationConfig{}, svm, calibrate);
  }, py::arg("frames"), py::arg("north"), py::arg("calibrate") = true, py::arg("l_block") = 32,
        py::arg("symmetric_points") = false, py::arg("seed") = 0,
        "Segments, calibrates the block size and trains on whole frames.");

  m.def("detect_orientation", [](const U8Array& frame, const OrientationModel& model,
                                 const std::string& method, int tau, double tau_e, int radius) {
    const auto d = detect_orientation(to_frame(frame), model, make_seg(method, tau, tau_e, radius));
    py::dict out;
    out["orientation"] = to_string(d.orientation);
    out["bit_h"] = d.bit_h;
    out["bit_n"] = d.bit_n;
    out["box"] = from_box(d.box);
    out["rectified"] = to_array(d.rectified);
    out["rectified_box"] = from_box(d.rectified_box);
    return out;
  }, py::arg("frame"), py::arg("model"), SEG_ARGS);

  m.def("run_trigger", [](const std::vector<U8Array>& frames, int tau_p, double rho, int n_bf) {
    FrameSequence seq;
    for (const auto& f : frames) seq.frames.push_back(to_frame(f));
    TriggerConfig c;
    c.tau_p = tau_p;
    c.rho = rho;
    c.n_bf = n_bf;
    const auto t = run_trigger(seq, c);
    py::dict out;
    out["raw"] = t.raw;
    out["filtered"] = t.filtered;
    out["trigger_frames"] = t.trigger_frames;
    return out;
  }, py::arg("frames"), py::arg("tau_p") = 15, py::arg("rho") = 0.02, py::arg("n_bf") = 30);

  m.def("evaluate", [](const F64Array& preds, const F64Array& gts, const std::vector<double>& alphas) {
    const auto report = evaluate(to_poses(preds), to_poses(gts), PckConfig{alphas});
    py::dict out;
    for (int g = 0; g < kNumGroups; ++g) {
      std::vector<double> rates;
      for (std::size_t a = 0; a < alphas.size(); ++a) rates.push_back(report.rate(a, static_cast<PartGroup>(g)));
      out[group_name(static_cast<PartGroup>(g))] = rates;
    }
    return out;
  }, py::arg("preds"), py::arg("gts"), py::arg("alphas") = std::vector<double>{0.1, 0.2},
        "PCK rates per part group, one entry per alpha.");

  m.def("stub_estimate", [](const U8Array& frame, const Box& box) {
    return joints_array(stub_estimate(to_frame(frame), to_box(box)));
  }, py::arg("frame"), py::arg("box"));

  m.def("render_scene", [](const std::string& posture, const std::string& orientation, int width,
                           int height, double scale, double sigma, std::uint64_t seed) {
    SceneSpec spec;
    spec.posture = parse_posture(posture);
    spec.orientation = parse_orientation(orientation);
    spec.width = width;
    spec.height = height;
    spec.subject_scale = scale;
    spec.noise_sigma = sigma;
    spec.seed = seed;
    const auto s = render_scene(spec);
    py::dict out;
    out["frame"] = to_array(s.frame);
    out["joints"] = joints_array(s.pose);
    out["support"] = mask_array(s.support);
    out["orientation"] = to_string(s.orientation);
    return out;
  }, py::arg("posture") = "supine", py::arg("orientation") = "N", py::arg("width") = 128,
        py::arg("height") = 128, py::arg("subject_scale") = 0.75, py::arg("noise_sigma") = 2.0,
        py::arg("seed") = 0);
}
