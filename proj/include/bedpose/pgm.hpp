#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bedpose/image.hpp"

namespace bedpose {

/// Binary PGM (P5, maxval <= 255). Errors: kBadMagic, kMalformedHeader,
/// kUnsupportedMaxval, kTruncatedData.
GrayFrame decode_pgm(std::span<const std::uint8_t> bytes);
/// Canonical encoding: "P5\n<w> <h>\n255\n" followed by raw pixels.
std::vector<std::uint8_t> encode_pgm(const GrayFrame& frame);

GrayFrame load_pgm(const std::filesystem::path& path);
void save_pgm(const std::filesystem::path& path, const GrayFrame& frame);

/// Zero-padded frame file name used inside sequence directories.
std::string sequence_frame_name(std::size_t index);

/// Directory holding `manifest.json` ({fps, frame_count, frames: [names]})
/// and the PGM frames it lists.
/// `names`, when given, receives the manifest's frame file names.
FrameSequence load_sequence(const std::filesystem::path& dir,
                            std::vector<std::string>* names = nullptr);
void save_sequence(const std::filesystem::path& dir, const FrameSequence& seq);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace bedpose
