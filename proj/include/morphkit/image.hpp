#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "morphkit/geometry.hpp"

namespace morphkit {

/// Interleaved row-major raster of doubles. Pixel (x, y) has its center at integer coordinates.
/// Intensities are nominally in [0,1]; band-split results use the same type without clamping.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, int channels, double fill = 0.0);
  ImageBuffer(int width, int height, int channels, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }
  double at(int x, int y, int c = 0) const { return data_[index(x, y, c)]; }

  /// Edge-clamped read.
  double clamped(int x, int y, int c = 0) const;

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  std::span<double> row(int y) { return {data_.data() + index(0, y, 0), row_stride()}; }
  std::span<const double> row(int y) const { return {data_.data() + index(0, y, 0), row_stride()}; }
  std::size_t row_stride() const noexcept { return static_cast<std::size_t>(width_) * channels_; }

  bool same_shape(const ImageBuffer& o) const noexcept {
    return width_ == o.width_ && height_ == o.height_ && channels_ == o.channels_;
  }
  bool contains(Point2 p) const noexcept {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= width_ - 1 && p.y <= height_ - 1;
  }

  void clamp01();
  bool operator==(const ImageBuffer&) const = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<double> data_;
};

/// Signed band image (e.g. the high band of a frequency split); same layout, never clamped.
using SignedImage = ImageBuffer;

/// Bilinear sample of every channel at p, clamping out-of-range coordinates to the edge.
void sample_bilinear(const ImageBuffer& img, Point2 p, std::span<double> out);
double sample_bilinear(const ImageBuffer& img, Point2 p, int channel);

ImageBuffer clamped_copy(ImageBuffer img);
ImageBuffer to_grayscale(const ImageBuffer& img);
ImageBuffer mirror_horizontal(const ImageBuffer& img);
double max_abs_difference(const ImageBuffer& a, const ImageBuffer& b);

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b, const char* what);

}  // namespace morphkit
