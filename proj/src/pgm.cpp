#include "bedpose/pgm.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "bedpose/error.hpp"

namespace bedpose {

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  // Whitespace and '#' comments may precede every header field.
  void skip_space() {
    while (pos_ < bytes_.size()) {
      const auto ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(ch)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* field) {
    skip_space();
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) {
        throw Error(ErrorCode::kMalformedHeader, std::string("PGM ") + field + " out of range");
      }
      ++pos_;
      ++digits;
    }
    if (digits == 0) {
      throw Error(ErrorCode::kMalformedHeader, std::string("PGM header: expected ") + field);
    }
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::kMalformedHeader, "PGM header: missing separator before raster");
    }
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayFrame decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw Error(ErrorCode::kBadMagic, "unsupported magic number");
  }
  HeaderReader in(bytes);
  in.advance(2);
  const long width = in.read_uint("width");
  const long height = in.read_uint("height");
  const long maxval = in.read_uint("maxval");
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kMalformedHeader, "PGM header: non-positive dimensions");
  }
  if (maxval <= 0 || maxval > 255) {
    throw Error(ErrorCode::kUnsupportedMaxval,
                "unsupported maxval " + std::to_string(maxval) + " (must be 1..255)");
  }
  in.single_space();
  const std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - in.pos() < need) {
    throw Error(ErrorCode::kTruncatedData, "truncated pixel data: have " +
                                               std::to_string(bytes.size() - in.pos()) +
                                               " bytes, need " + std::to_string(need));
  }
  std::vector<std::uint8_t> pixels(bytes.begin() + static_cast<std::ptrdiff_t>(in.pos()),
                                   bytes.begin() + static_cast<std::ptrdiff_t>(in.pos() + need));
  for (auto v : pixels) {
    if (v > maxval) {
      throw Error(ErrorCode::kMalformedHeader, "pixel value exceeds maxval");
    }
  }
  return GrayFrame(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

std::vector<std::uint8_t> encode_pgm(const GrayFrame& frame) {
  const std::string header =
      "P5\n" + std::to_string(frame.width()) + " " + std::to_string(frame.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), frame.data().begin(), frame.data().end());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file_bytes(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

GrayFrame load_pgm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_pgm(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_pgm(const std::filesystem::path& path, const GrayFrame& frame) {
  write_file_bytes(path, encode_pgm(frame));
}

std::string sequence_frame_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06zu.pgm", index);
  return buf;
}

FrameSequence load_sequence(const std::filesystem::path& dir, std::vector<std::string>* names) {
  const auto manifest_path = dir / "manifest.json";
  nlohmann::json doc;
  try {
    const auto bytes = read_file_bytes(manifest_path);
    doc = nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, manifest_path.string() + ": " + e.what());
  }
  FrameSequence seq;
  try {
    seq.fps = doc.at("fps").get<double>();
    for (const auto& name : doc.at("frames")) {
      const auto file = name.get<std::string>();
      seq.frames.push_back(load_pgm(dir / file));
      if (names) names->push_back(file);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, manifest_path.string() + ": " + e.what());
  }
  seq.validate();
  return seq;
}

void save_sequence(const std::filesystem::path& dir, const FrameSequence& seq) {
  seq.validate();
  std::filesystem::create_directories(dir);
  nlohmann::json names = nlohmann::json::array();
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const auto name = sequence_frame_name(i);
    save_pgm(dir / name, seq.frames[i]);
    names.push_back(name);
  }
  const nlohmann::json doc = {
      {"fps", seq.fps}, {"frame_count", seq.frames.size()}, {"frames", names}};
  write_text_file(dir / "manifest.json", doc.dump(2) + "\n");
}

}  // namespace bedpose
