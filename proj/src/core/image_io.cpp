#include "hdrbench/image_io.hpp"

#include <png.h>

#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace hdrbench {

namespace {

// ---------------------------------------------------------------------------
// PFM

class HeaderCursor {
 public:
  explicit HeaderCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }

  void skip_space() {
    while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
  }

  std::string token(const char* what) {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) ++pos_;
    if (start == pos_) throw DecodeError(std::string("PFM: missing ") + what, start);
    return std::string(bytes_.begin() + static_cast<std::ptrdiff_t>(start),
                       bytes_.begin() + static_cast<std::ptrdiff_t>(pos_));
  }

  // Exactly one whitespace byte separates the header from the payload.
  void end_of_header() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      throw DecodeError("PFM: header must end with a single whitespace byte", pos_);
    ++pos_;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::size_t parse_dimension(const std::string& text, std::size_t offset,
                            const char* what) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || value <= 0 || value > (1LL << 20))
    throw DecodeError(std::string("PFM: invalid ") + what + " '" + text + "'", offset);
  return static_cast<std::size_t>(value);
}

std::uint32_t load_u32(const std::uint8_t* p, bool little_endian) {
  if (little_endian)
    return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 |
           std::uint32_t{p[2]} << 16 | std::uint32_t{p[3]} << 24;
  return std::uint32_t{p[3]} | std::uint32_t{p[2]} << 8 |
         std::uint32_t{p[1]} << 16 | std::uint32_t{p[0]} << 24;
}

void store_u32_le(std::uint32_t v, std::vector<std::uint8_t>& out) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 24));
}

// ---------------------------------------------------------------------------
// PNG

struct PngReadContext {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
  char message[256];
};

void png_read_bytes(png_structp png, png_bytep out, png_size_t count) {
  auto* ctx = static_cast<PngReadContext*>(png_get_io_ptr(png));
  if (count > ctx->size - ctx->pos) png_error(png, "truncated PNG stream");
  std::memcpy(out, ctx->data + ctx->pos, count);
  ctx->pos += count;
}

void png_on_error(png_structp png, png_const_charp message) {
  auto* ctx = static_cast<PngReadContext*>(png_get_error_ptr(png));
  std::snprintf(ctx->message, sizeof ctx->message, "%s", message);
  png_longjmp(png, 1);
}

void png_on_warning(png_structp, png_const_charp) {}

// Returns 0 on success. `rows` must hold height pointers once the header has
// been read, which is why decoding happens in two calls sharing `png`.
// No object with a non-trivial destructor may live in these frames.
int png_read_header(png_structp png, png_infop info, png_uint_32* width,
                    png_uint_32* height, int* bit_depth, int* color_type) {
  if (setjmp(png_jmpbuf(png))) return 1;
  png_read_info(png, info);
  int interlace = 0;
  png_get_IHDR(png, info, width, height, bit_depth, color_type, &interlace,
               nullptr, nullptr);
  if (interlace != PNG_INTERLACE_NONE) png_set_interlace_handling(png);
  png_read_update_info(png, info);
  return 0;
}

int png_read_rows(png_structp png, png_infop info, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return 1;
  png_read_image(png, rows);
  png_read_end(png, info);
  return 0;
}

struct PngWriteContext {
  std::vector<std::uint8_t>* out;
  char message[256];
};

void png_write_bytes(png_structp png, png_bytep data, png_size_t count) {
  auto* ctx = static_cast<PngWriteContext*>(png_get_io_ptr(png));
  ctx->out->insert(ctx->out->end(), data, data + count);
}

void png_flush_noop(png_structp) {}

void png_on_write_error(png_structp png, png_const_charp message) {
  auto* ctx = static_cast<PngWriteContext*>(png_get_error_ptr(png));
  std::snprintf(ctx->message, sizeof ctx->message, "%s", message);
  png_longjmp(png, 1);
}

int png_write_all(png_structp png, png_infop info, png_uint_32 width,
                  png_uint_32 height, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return 1;
  png_set_IHDR(png, info, width, height, 16, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, info);
  return 0;
}

}  // namespace

HdrImage decode_pfm(std::span<const std::uint8_t> bytes) {
  HeaderCursor cursor(bytes);
  const std::string magic = cursor.token("magic");
  if (magic == "Pf")
    throw DecodeError("PFM: greyscale 'Pf' variant is not supported", 0);
  if (magic != "PF") throw DecodeError("PFM: bad magic '" + magic + "'", 0);

  cursor.skip_space();
  const std::size_t width_at = cursor.offset();
  const std::size_t width = parse_dimension(cursor.token("width"), width_at, "width");
  cursor.skip_space();
  const std::size_t height_at = cursor.offset();
  const std::size_t height =
      parse_dimension(cursor.token("height"), height_at, "height");
  cursor.skip_space();
  const std::size_t scale_at = cursor.offset();
  const std::string scale_text = cursor.token("scale");
  double scale = 0.0;
  {
    std::size_t used = 0;
    try {
      scale = std::stod(scale_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != scale_text.size() || !std::isfinite(scale) || scale == 0.0)
      throw DecodeError("PFM: invalid scale '" + scale_text + "'", scale_at);
  }
  cursor.end_of_header();

  const bool little_endian = scale < 0.0;
  const double magnitude = std::fabs(scale);
  const std::size_t payload_at = cursor.offset();
  const std::size_t count = width * height * 3;
  const std::size_t available = bytes.size() - payload_at;
  if (available < count * 4)
    throw DecodeError("PFM: truncated payload, expected " + std::to_string(count * 4) +
                          " bytes, found " + std::to_string(available),
                      bytes.size());

  RasterD pixels(height, width, 3);
  const std::uint8_t* p = bytes.data() + payload_at;
  for (std::size_t file_row = 0; file_row < height; ++file_row) {
    const std::size_t y = height - 1 - file_row;
    for (std::size_t x = 0; x < width; ++x) {
      for (std::size_t c = 0; c < 3; ++c, p += 4) {
        const float f = std::bit_cast<float>(load_u32(p, little_endian));
        const double v = static_cast<double>(f) * magnitude;
        if (!std::isfinite(v) || v < 0.0)
          throw DecodeError("PFM: sample is negative or non-finite",
                            static_cast<std::uint64_t>(p - bytes.data()));
        pixels.at(y, x, c) = v;
      }
    }
  }
  return HdrImage(std::move(pixels));
}

std::vector<std::uint8_t> encode_pfm(const HdrImage& image) {
  const RasterD& px = image.pixels();
  const std::string header = "PF\n" + std::to_string(px.width()) + " " +
                             std::to_string(px.height()) + "\n-1.0\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + px.size() * 4);
  for (std::size_t file_row = 0; file_row < px.height(); ++file_row) {
    const std::size_t y = px.height() - 1 - file_row;
    for (std::size_t x = 0; x < px.width(); ++x) {
      for (std::size_t c = 0; c < 3; ++c) {
        const auto f = static_cast<float>(px.at(y, x, c));
        if (!std::isfinite(f)) throw InvalidInput("PFM: value overflows binary32");
        store_u32_le(std::bit_cast<std::uint32_t>(f), out);
      }
    }
  }
  return out;
}

HdrImage read_pfm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_pfm(bytes);
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what(), e.offset());
  }
}

void write_pfm(const std::filesystem::path& path, const HdrImage& image) {
  write_file_bytes(path, encode_pfm(image));
}

RasterD decode_png16(std::span<const std::uint8_t> bytes) {
  PngReadContext ctx{bytes.data(), bytes.size(), 0, {}};
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
    throw DecodeError("PNG: bad signature", 0);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &ctx,
                                           png_on_error, png_on_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("PNG: out of memory");
  }
  png_set_read_fn(png, &ctx, png_read_bytes);

  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  if (png_read_header(png, info, &width, &height, &bit_depth, &color_type) != 0) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DecodeError(std::string("PNG: ") + ctx.message, ctx.pos);
  }
  if (bit_depth != 16 || color_type != PNG_COLOR_TYPE_RGB) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DecodeError("PNG: only 16-bit RGB images are supported (bit depth " +
                          std::to_string(bit_depth) + ", colour type " +
                          std::to_string(color_type) + ")",
                      ctx.pos);
  }

  const std::size_t stride = static_cast<std::size_t>(width) * 6;
  std::vector<std::uint8_t> buffer(stride * height);
  std::vector<png_bytep> rows(height);
  for (std::size_t y = 0; y < height; ++y) rows[y] = buffer.data() + y * stride;

  if (png_read_rows(png, info, rows.data()) != 0) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DecodeError(std::string("PNG: ") + ctx.message, ctx.pos);
  }
  png_destroy_read_struct(&png, &info, nullptr);

  RasterD out(height, width, 3);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const unsigned k = unsigned{buffer[2 * i]} << 8 | buffer[2 * i + 1];
    out[i] = static_cast<double>(k) / 65535.0;
  }
  return out;
}

std::vector<std::uint8_t> encode_png16(const RasterD& pixels) {
  if (pixels.channels() != 3 || pixels.empty())
    throw InvalidInput("PNG: need a non-empty 3-channel raster");
  const std::size_t stride = pixels.width() * 6;
  std::vector<std::uint8_t> buffer(stride * pixels.height());
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double v = pixels[i];
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("PNG: component outside [0,1]");
    const auto k = static_cast<unsigned>(std::lround(v * 65535.0));
    buffer[2 * i] = static_cast<std::uint8_t>(k >> 8);
    buffer[2 * i + 1] = static_cast<std::uint8_t>(k & 0xff);
  }
  std::vector<png_bytep> rows(pixels.height());
  for (std::size_t y = 0; y < rows.size(); ++y) rows[y] = buffer.data() + y * stride;

  std::vector<std::uint8_t> out;
  PngWriteContext ctx{&out, {}};
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &ctx,
                                            png_on_write_error, png_on_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error("PNG: out of memory");
  }
  png_set_write_fn(png, &ctx, png_write_bytes, png_flush_noop);
  const int status =
      png_write_all(png, info, static_cast<png_uint_32>(pixels.width()),
                    static_cast<png_uint_32>(pixels.height()), rows.data());
  png_destroy_write_struct(&png, &info);
  if (status != 0) throw Error(std::string("PNG: encode failed: ") + ctx.message);
  return out;
}

LdrFrame read_png16(const std::filesystem::path& path, double exposure_time,
                    double gamma) {
  const auto bytes = read_file_bytes(path);
  try {
    return LdrFrame(decode_png16(bytes), exposure_time, gamma);
  } catch (const DecodeError& e) {
    throw DecodeError(path.string() + ": " + e.what(), e.offset());
  }
}

void write_png16(const std::filesystem::path& path, const LdrFrame& frame) {
  write_file_bytes(path, encode_png16(frame.pixels()));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>());
}

void write_file_bytes(const std::filesystem::path& path,
                      std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace hdrbench
