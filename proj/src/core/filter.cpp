#include "morphkit/filter.hpp"

#include <algorithm>
#include <cmath>

#include "morphkit/error.hpp"
#include "morphkit/simd/kernels.hpp"

namespace morphkit {

std::vector<double> gaussian_kernel(double sigma) {
  require(sigma > 0.0 && std::isfinite(sigma), Errc::NonPositiveSigma, "sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;
  return k;
}

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
  const std::vector<double> kernel = gaussian_kernel(sigma);
  const int radius = static_cast<int>(kernel.size() / 2);
  const int w = img.width(), h = img.height(), ch = img.channels();
  const std::size_t stride = img.row_stride();
  const simd::Kernels& k = simd::active();

  // Horizontal pass over an edge-replicated copy of each row, one axpy per tap.
  ImageBuffer horiz(w, h, ch);
  std::vector<double> padded((w + 2 * radius) * static_cast<std::size_t>(ch));
  for (int y = 0; y < h; ++y) {
    for (int x = -radius; x < w + radius; ++x)
      for (int c = 0; c < ch; ++c) padded[(x + radius) * ch + c] = img.clamped(x, y, c);
    double* out = horiz.row(y).data();
    for (std::size_t t = 0; t < kernel.size(); ++t)
      k.axpy(kernel[t], padded.data() + t * ch, out, stride);
  }

  ImageBuffer result(w, h, ch);
  for (int y = 0; y < h; ++y) {
    double* out = result.row(y).data();
    for (int t = -radius; t <= radius; ++t) {
      const int src = std::clamp(y + t, 0, h - 1);
      k.axpy(kernel[t + radius], horiz.row(src).data(), out, stride);
    }
  }
  return result;
}

FrequencyBands split_frequency(const ImageBuffer& img, double sigma) {
  FrequencyBands bands{gaussian_blur(img, sigma), img};
  auto high = bands.high.data();
  auto low = bands.low.data();
  for (std::size_t i = 0; i < high.size(); ++i) high[i] -= low[i];
  return bands;
}

}  // namespace morphkit
