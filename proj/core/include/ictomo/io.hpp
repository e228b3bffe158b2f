#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ictomo/detection.hpp"
#include "ictomo/volume.hpp"

// Binary containers, all little-endian:
//
//   CFV1  "CFV1" u32 nx ny nz, then nx*ny*nz bytes in {0,1}, i1 fastest
//   RAD1  "RAD1" u32 n_angles nu nv, f64 tilt angles (deg), f64 counts
//         (angle-major, then detector rows, pixels within a row fastest)
//   REC1  "REC1" u32 nx ny nz, then nx*ny*nz f32 values, i1 fastest
//
// Readers throw IoError on bad magic, truncated payloads or trailing bytes.

namespace ictomo::io {

[[nodiscard]] std::vector<std::uint8_t> encode_cfv(const BinaryVolume& volume);
[[nodiscard]] BinaryVolume decode_cfv(std::span<const std::uint8_t> bytes);

[[nodiscard]] std::vector<std::uint8_t> encode_rad(const forward::Measurements& m);
/// Only counts and metadata are stored; `expected` comes back empty.
[[nodiscard]] forward::Measurements decode_rad(std::span<const std::uint8_t> bytes);

[[nodiscard]] std::vector<std::uint8_t> encode_rec(const Dims& dims, std::span<const double> values);
struct RecVolume {
    Dims dims;
    std::vector<double> values;
};
[[nodiscard]] RecVolume decode_rec(std::span<const std::uint8_t> bytes);

[[nodiscard]] std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);

void write_cfv(const std::filesystem::path& path, const BinaryVolume& volume);
[[nodiscard]] BinaryVolume read_cfv(const std::filesystem::path& path);
void write_rad(const std::filesystem::path& path, const forward::Measurements& m);
[[nodiscard]] forward::Measurements read_rad(const std::filesystem::path& path);
void write_rec(const std::filesystem::path& path, const Dims& dims, std::span<const double> values);
[[nodiscard]] RecVolume read_rec(const std::filesystem::path& path);

/// 64-bit FNV-1a digest, as 16 lowercase hex digits.
[[nodiscard]] std::string digest_hex(std::span<const std::uint8_t> bytes);
[[nodiscard]] std::string digest_hex(std::string_view text);
[[nodiscard]] std::string file_digest(const std::filesystem::path& path);

}  // namespace ictomo::io
