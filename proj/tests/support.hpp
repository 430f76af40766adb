#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bedpose/image.hpp"

namespace testing_support {

inline bedpose::GrayFrame make_frame(int w, int h,
                                     const std::function<std::uint8_t(int, int)>& value) {
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) px[static_cast<std::size_t>(r) * w + c] = value(r, c);
  }
  return bedpose::GrayFrame(w, h, std::move(px));
}

inline bedpose::GrayFrame random_frame(int w, int h, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> v(0, 255);
  return make_frame(w, h, [&](int, int) { return static_cast<std::uint8_t>(v(rng)); });
}

/// Fresh per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("bedpose_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support
