#include "morphkit/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "morphkit/error.hpp"

namespace morphkit {

ImageBuffer::ImageBuffer(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels) {
  require(width > 0 && height > 0, Errc::InvalidArgument, "image dimensions must be positive");
  require(channels == 1 || channels == 3, Errc::InvalidArgument, "images have 1 or 3 channels");
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

ImageBuffer::ImageBuffer(int width, int height, int channels, std::vector<double> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  require(width > 0 && height > 0, Errc::InvalidArgument, "image dimensions must be positive");
  require(channels == 1 || channels == 3, Errc::InvalidArgument, "images have 1 or 3 channels");
  require(data_.size() == static_cast<std::size_t>(width) * height * channels,
          Errc::DimensionMismatch, "image data length does not match width x height x channels");
}

double ImageBuffer::clamped(int x, int y, int c) const {
  x = std::clamp(x, 0, width_ - 1);
  y = std::clamp(y, 0, height_ - 1);
  return data_[index(x, y, c)];
}

void ImageBuffer::clamp01() {
  for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
}

namespace {

struct BilinearTap {
  int x0, x1, y0, y1;
  double fx, fy;
};

BilinearTap bilinear_tap(const ImageBuffer& img, Point2 p) {
  const double px = std::clamp(p.x, 0.0, static_cast<double>(img.width() - 1));
  const double py = std::clamp(p.y, 0.0, static_cast<double>(img.height() - 1));
  const double flx = std::floor(px);
  const double fly = std::floor(py);
  BilinearTap t;
  t.x0 = static_cast<int>(flx);
  t.y0 = static_cast<int>(fly);
  t.x1 = std::min(t.x0 + 1, img.width() - 1);
  t.y1 = std::min(t.y0 + 1, img.height() - 1);
  t.fx = px - flx;
  t.fy = py - fly;
  return t;
}

// An exact integer position must reproduce the stored value bit for bit, so the weights are
// applied as nested lerps that collapse to the corner value when the fractions are zero.
inline double lerp_tap(const ImageBuffer& img, const BilinearTap& t, int c) {
  const double top = t.fx == 0.0 ? img.at(t.x0, t.y0, c)
                                 : img.at(t.x0, t.y0, c) * (1.0 - t.fx) + img.at(t.x1, t.y0, c) * t.fx;
  if (t.fy == 0.0) return top;
  const double bottom = t.fx == 0.0
                            ? img.at(t.x0, t.y1, c)
                            : img.at(t.x0, t.y1, c) * (1.0 - t.fx) + img.at(t.x1, t.y1, c) * t.fx;
  return top * (1.0 - t.fy) + bottom * t.fy;
}

}  // namespace

void sample_bilinear(const ImageBuffer& img, Point2 p, std::span<double> out) {
  const BilinearTap t = bilinear_tap(img, p);
  for (int c = 0; c < img.channels(); ++c) out[c] = lerp_tap(img, t, c);
}

double sample_bilinear(const ImageBuffer& img, Point2 p, int channel) {
  return lerp_tap(img, bilinear_tap(img, p), channel);
}

ImageBuffer clamped_copy(ImageBuffer img) {
  img.clamp01();
  return img;
}

ImageBuffer to_grayscale(const ImageBuffer& img) {
  if (img.channels() == 1) return img;
  ImageBuffer out(img.width(), img.height(), 1);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      out.at(x, y) = 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
  return out;
}

ImageBuffer mirror_horizontal(const ImageBuffer& img) {
  ImageBuffer out(img.width(), img.height(), img.channels());
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < img.channels(); ++c) out.at(x, y, c) = img.at(img.width() - 1 - x, y, c);
  return out;
}

double max_abs_difference(const ImageBuffer& a, const ImageBuffer& b) {
  require_same_shape(a, b, "max_abs_difference");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b, const char* what) {
  if (!a.same_shape(b))
    fail(Errc::DimensionMismatch,
         std::string(what) + ": image shapes differ (" + std::to_string(a.width()) + "x" +
             std::to_string(a.height()) + "x" + std::to_string(a.channels()) + " vs " +
             std::to_string(b.width()) + "x" + std::to_string(b.height()) + "x" +
             std::to_string(b.channels()) + ")");
}

}  // namespace morphkit
