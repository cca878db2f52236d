#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "morphkit/image.hpp"
#include "morphkit/landmarks.hpp"
#include "morphkit/random.hpp"

namespace morphkit {

enum class AugmentKind { None, MotionBlur, GaussianBlur, SaltPepper, GaussianNoise };
std::string_view augment_kind_name(AugmentKind k) noexcept;
AugmentKind parse_augment_kind(std::string_view name);

/// One corruption with its drawn parameters; `seed` drives the random corruptions so the result
/// can be re-rendered from the AugmentSpec alone.
struct AugmentSpec {
  AugmentKind kind = AugmentKind::None;
  double length = 0.0;  // motion blur, pixels
  double angle = 0.0;   // motion blur, radians
  double sigma = 0.0;   // gaussian blur, pixels
  double fraction = 0.0;  // salt and pepper
  double stddev = 0.0;  // gaussian noise
  std::uint64_t seed = 0;
};

/// Parameter ranges of the five-version expansion, relative to image height where noted.
struct AugmentRanges {
  static constexpr double motion_min = 0.005, motion_max = 0.01;
  static constexpr double blur_min = 0.0025, blur_max = 0.005;
  static constexpr double salt_pepper_fraction = 0.01;
  static constexpr double noise_stddev = 0.05;
};

/// Averages `length` pixels along direction `angle`; lengths up to 1 pixel leave the image as is.
ImageBuffer motion_blur(const ImageBuffer& img, double length, double angle);
/// Sets exactly round(fraction * W * H) distinct pixels to black or white (all channels).
ImageBuffer salt_pepper(const ImageBuffer& img, double fraction, Rng& rng);
ImageBuffer gaussian_noise(const ImageBuffer& img, double stddev, Rng& rng);
ImageBuffer apply_augment(const ImageBuffer& img, const AugmentSpec& spec);

/// Parameters for [original, motion blur, gaussian blur, salt and pepper, gaussian noise].
std::array<AugmentSpec, 5> draw_five_specs(int image_height, Rng& rng);

struct AugmentedImage {
  ImageBuffer image;
  AugmentSpec spec;
};
std::vector<AugmentedImage> expand_five(const ImageBuffer& img, Rng& rng);

/// Similarity map between an input image and its normalized crop. Output pixel centers sit at
/// integer coordinates like everywhere else.
struct CropTransform {
  Point2 pivot;  // eye-center midpoint in the input
  double cos_t = 1.0, sin_t = 0.0;  // eye-line rotation
  double origin_x = 0.0, origin_y = 0.0;  // box corner in the rotated frame
  double step = 1.0;  // input pixels per output pixel
  double shift_x = 0.0, shift_y = 0.0;  // output pixels
  int size = 224;

  Point2 to_source(Point2 out) const;
  Point2 to_output(Point2 src) const;
};

CropTransform crop_transform(const LandmarkSet& lm, int output_size = 224, Point2 shift = {});
/// Rotates the eyes level and crops the square brow-to-lip, eye-corner-to-eye-corner box;
/// content beyond the image border is edge-replicated.
ImageBuffer normalize_crop(const ImageBuffer& img, const LandmarkSet& lm, Point2 shift = {}, int output_size = 224);
ImageBuffer apply_crop(const ImageBuffer& img, const CropTransform& t);
/// Landmark positions in crop coordinates (not clamped; may fall outside the crop).
std::vector<Point2> crop_points(const std::vector<Point2>& pts, const CropTransform& t);

}  // namespace morphkit
