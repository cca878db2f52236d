#include "morphkit/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "morphkit/error.hpp"

namespace morphkit {

namespace {

struct MemoryReader {
  const std::vector<unsigned char>* bytes;
  std::size_t offset;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t count) {
  auto* reader = static_cast<MemoryReader*>(png_get_io_ptr(png));
  if (reader->offset + count > reader->bytes->size()) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, reader->bytes->data() + reader->offset, count);
  reader->offset += count;
}

void on_png_error(png_structp png, png_const_charp msg) {
  auto* message = static_cast<std::string*>(png_get_error_ptr(png));
  if (message) *message = msg;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    fail(Errc::MissingFile, "no such file: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::MissingFile, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Decoding state that must survive a longjmp lives outside the setjmp frame.
struct DecodeState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::string message;
  std::vector<unsigned char> pixels;
  png_uint_32 width = 0, height = 0;
  int bit_depth = 0;
  int channels = 0;
  int out_channels = 0;

  ~DecodeState() { png_destroy_read_struct(&png, &info, nullptr); }
};

bool decode(DecodeState& s, MemoryReader& reader) {
  if (setjmp(png_jmpbuf(s.png))) return false;
  png_set_read_fn(s.png, &reader, read_from_memory);
  png_read_info(s.png, s.info);
  s.width = png_get_image_width(s.png, s.info);
  s.height = png_get_image_height(s.png, s.info);
  const int color_type = png_get_color_type(s.png, s.info);
  s.bit_depth = png_get_bit_depth(s.png, s.info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(s.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && s.bit_depth < 8) png_set_expand_gray_1_2_4_to_8(s.png);
  if (png_get_valid(s.png, s.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(s.png);
  if (s.bit_depth == 16) png_set_swap(s.png);  // host order on little-endian machines
  png_read_update_info(s.png, s.info);

  s.bit_depth = png_get_bit_depth(s.png, s.info);
  s.channels = png_get_channels(s.png, s.info);
  const std::size_t rowbytes = png_get_rowbytes(s.png, s.info);
  s.pixels.resize(rowbytes * s.height);
  std::vector<png_bytep> rows(s.height);
  for (png_uint_32 y = 0; y < s.height; ++y) rows[y] = s.pixels.data() + y * rowbytes;
  png_read_image(s.png, rows.data());
  png_read_end(s.png, nullptr);
  return true;
}

}  // namespace

unsigned char quantize8(double v) noexcept {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<unsigned char>(std::floor(c * 255.0 + 0.5));
}

ImageBuffer load_image(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_file(path);
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
    fail(Errc::UnsupportedFormat, path.string() + " is not a PNG file");

  DecodeState s;
  s.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &s.message, on_png_error, on_png_warning);
  if (!s.png) fail(Errc::IoError, "libpng initialisation failed");
  s.info = png_create_info_struct(s.png);
  if (!s.info) fail(Errc::IoError, "libpng initialisation failed");

  MemoryReader reader{&bytes, 0};
  if (!decode(s, reader)) fail(Errc::CorruptData, path.string() + ": " + s.message);

  const bool gray = s.channels <= 2;
  const int out_channels = gray ? 1 : 3;
  const double scale = s.bit_depth == 16 ? 65535.0 : 255.0;
  ImageBuffer img(static_cast<int>(s.width), static_cast<int>(s.height), out_channels);
  for (png_uint_32 y = 0; y < s.height; ++y) {
    for (png_uint_32 x = 0; x < s.width; ++x) {
      for (int c = 0; c < out_channels; ++c) {
        const std::size_t idx = (static_cast<std::size_t>(y) * s.width + x) * s.channels + c;
        double raw;
        if (s.bit_depth == 16) {
          std::uint16_t v;
          std::memcpy(&v, s.pixels.data() + idx * 2, 2);
          raw = v;
        } else {
          raw = s.pixels[idx];
        }
        img.at(static_cast<int>(x), static_cast<int>(y), c) = raw / scale;
      }
    }
  }
  return img;
}

namespace {

struct EncodeState {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::string message;
  FILE* file = nullptr;
  ~EncodeState() {
    png_destroy_write_struct(&png, &info);
    if (file) std::fclose(file);
  }
};

bool encode(EncodeState& s, const ImageBuffer& img, std::vector<png_bytep>& rows) {
  if (setjmp(png_jmpbuf(s.png))) return false;
  png_init_io(s.png, s.file);
  png_set_IHDR(s.png, s.info, img.width(), img.height(), 8,
               img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(s.png, s.info);
  png_write_image(s.png, rows.data());
  png_write_end(s.png, nullptr);
  return true;
}

}  // namespace

void save_image(const ImageBuffer& img, const std::filesystem::path& path) {
  require(!img.empty(), Errc::InvalidArgument, "cannot save an empty image");
  std::vector<unsigned char> bytes(img.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize8(img.data()[i]);
  std::vector<png_bytep> rows(img.height());
  for (int y = 0; y < img.height(); ++y) rows[y] = bytes.data() + y * img.row_stride();

  EncodeState s;
  s.file = std::fopen(path.c_str(), "wb");
  if (!s.file) fail(Errc::IoError, "cannot write " + path.string());
  s.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &s.message, on_png_error, on_png_warning);
  if (!s.png) fail(Errc::IoError, "libpng initialisation failed");
  s.info = png_create_info_struct(s.png);
  if (!s.info) fail(Errc::IoError, "libpng initialisation failed");
  if (!encode(s, img, rows)) fail(Errc::IoError, path.string() + ": " + s.message);
}

}  // namespace morphkit
