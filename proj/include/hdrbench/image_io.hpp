#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hdrbench/image.hpp"

namespace hdrbench {

// Portable Float Map, colour variant only ("PF").
//
// Layout: "PF\n<width> <height>\n<scale>\n" followed by width*height*3 IEEE
// binary32 samples. A negative scale marks little-endian samples, a positive
// one big-endian; |scale| multiplies every sample on read. Rows are stored
// bottom-to-top, so the first row in the file is the bottom row of the image.
// The writer always emits scale -1.0 (little-endian, unit scale).
//
// Samples are binary32: writing rounds each component to the nearest float,
// and a read-write-read cycle is bit-exact.
HdrImage decode_pfm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pfm(const HdrImage& image);

HdrImage read_pfm(const std::filesystem::path& path);
void write_pfm(const std::filesystem::path& path, const HdrImage& image);

// 16-bit RGB PNG (big-endian samples). Component v is stored as
// round(v * 65535); reading yields k / 65535.
RasterD decode_png16(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png16(const RasterD& pixels);

LdrFrame read_png16(const std::filesystem::path& path, double exposure_time = 1.0,
                    double gamma = 2.2);
void write_png16(const std::filesystem::path& path, const LdrFrame& frame);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes);

}  // namespace hdrbench
