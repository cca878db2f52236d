#pragma once

#include <vector>

#include "morphkit/image.hpp"

namespace morphkit {

/// Normalized sampled Gaussian with radius ceil(3 sigma); index `radius` is the center tap.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with edge clamping.
ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma);

struct FrequencyBands {
  ImageBuffer low;
  SignedImage high;  // img - low, unclamped
};

FrequencyBands split_frequency(const ImageBuffer& img, double sigma);

}  // namespace morphkit
