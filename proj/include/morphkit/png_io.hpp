#pragma once

#include <filesystem>

#include "morphkit/image.hpp"

namespace morphkit {

/// Reads an 8- or 16-bit PNG. Gray and gray+alpha load as one channel, everything else as RGB;
/// alpha is dropped. Intensities are scaled to [0,1].
ImageBuffer load_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG (1 or 3 channels); values are clamped and quantized round-half-up.
void save_image(const ImageBuffer& img, const std::filesystem::path& path);

/// round-half-up quantization to 8 bits, shared with anything that needs to match file output
unsigned char quantize8(double v) noexcept;

}  // namespace morphkit
