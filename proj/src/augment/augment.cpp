#include "morphkit/augment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "morphkit/error.hpp"
#include "morphkit/filter.hpp"

namespace morphkit {

std::string_view augment_kind_name(AugmentKind k) noexcept {
  switch (k) {
    case AugmentKind::None: return "none";
    case AugmentKind::MotionBlur: return "motion_blur";
    case AugmentKind::GaussianBlur: return "gaussian_blur";
    case AugmentKind::SaltPepper: return "salt_pepper";
    case AugmentKind::GaussianNoise: return "gaussian_noise";
  }
  return "?";
}

AugmentKind parse_augment_kind(std::string_view name) {
  for (AugmentKind k : {AugmentKind::None, AugmentKind::MotionBlur, AugmentKind::GaussianBlur,
                        AugmentKind::SaltPepper, AugmentKind::GaussianNoise})
    if (augment_kind_name(k) == name) return k;
  fail(Errc::ParseError, "unknown augmentation '" + std::string(name) + "'");
}

ImageBuffer motion_blur(const ImageBuffer& img, double length, double angle) {
  require(length > 0.0, Errc::NonPositiveLength, "motion blur length must be positive");
  if (length <= 1.0) return img;
  const int taps = static_cast<int>(std::ceil(length));
  const double half = 0.5 * (length - 1.0);
  const double dx = std::cos(angle), dy = std::sin(angle);
  std::vector<Point2> offsets(taps);
  for (int k = 0; k < taps; ++k) {
    const double t = -half + (length - 1.0) * k / (taps - 1);
    offsets[k] = {t * dx, t * dy};
  }
  const int w = img.width(), h = img.height(), ch = img.channels();
  ImageBuffer out(w, h, ch);
  std::vector<double> tmp(ch);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      auto px = out.data().subspan((static_cast<std::size_t>(y) * w + x) * ch, ch);
      for (const Point2& o : offsets) {
        sample_bilinear(img, {x + o.x, y + o.y}, tmp);
        for (int c = 0; c < ch; ++c) px[c] += tmp[c];
      }
      for (int c = 0; c < ch; ++c) px[c] /= taps;
    }
  return out;
}

ImageBuffer salt_pepper(const ImageBuffer& img, double fraction, Rng& rng) {
  require(fraction > 0.0 && fraction < 1.0, Errc::BadFraction, "salt-and-pepper fraction must lie in (0, 1)");
  const std::size_t n = img.pixel_count();
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  ImageBuffer out = img;
  if (count == 0) return out;
  std::vector<std::size_t> sites(n);
  std::iota(sites.begin(), sites.end(), std::size_t{0});
  const int ch = img.channels();
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t j = k + static_cast<std::size_t>(rng.below(n - k));
    std::swap(sites[k], sites[j]);
    const double v = rng.coin() ? 1.0 : 0.0;
    for (int c = 0; c < ch; ++c) out.data()[sites[k] * ch + c] = v;
  }
  return out;
}

ImageBuffer gaussian_noise(const ImageBuffer& img, double stddev, Rng& rng) {
  require(stddev >= 0.0 && std::isfinite(stddev), Errc::InvalidArgument, "noise standard deviation must be >= 0");
  ImageBuffer out = img;
  if (stddev == 0.0) return out;
  for (double& v : out.data()) v = std::clamp(v + stddev * rng.normal(), 0.0, 1.0);
  return out;
}

ImageBuffer apply_augment(const ImageBuffer& img, const AugmentSpec& spec) {
  switch (spec.kind) {
    case AugmentKind::None: return img;
    case AugmentKind::MotionBlur: return motion_blur(img, spec.length, spec.angle);
    case AugmentKind::GaussianBlur: return gaussian_blur(img, spec.sigma);
    case AugmentKind::SaltPepper: {
      Rng rng(spec.seed);
      return salt_pepper(img, spec.fraction, rng);
    }
    case AugmentKind::GaussianNoise: {
      Rng rng(spec.seed);
      return gaussian_noise(img, spec.stddev, rng);
    }
  }
  return img;
}

std::array<AugmentSpec, 5> draw_five_specs(int image_height, Rng& rng) {
  using R = AugmentRanges;
  std::array<AugmentSpec, 5> s{};
  s[0].kind = AugmentKind::None;
  s[1].kind = AugmentKind::MotionBlur;
  s[1].length = rng.uniform(R::motion_min, R::motion_max) * image_height;
  s[1].angle = rng.uniform(0.0, std::numbers::pi);
  s[2].kind = AugmentKind::GaussianBlur;
  s[2].sigma = rng.uniform(R::blur_min, R::blur_max) * image_height;
  s[3].kind = AugmentKind::SaltPepper;
  s[3].fraction = R::salt_pepper_fraction;
  s[3].seed = rng.next_u64();
  s[4].kind = AugmentKind::GaussianNoise;
  s[4].stddev = R::noise_stddev;
  s[4].seed = rng.next_u64();
  return s;
}

std::vector<AugmentedImage> expand_five(const ImageBuffer& img, Rng& rng) {
  const auto specs = draw_five_specs(img.height(), rng);
  std::vector<AugmentedImage> out;
  out.reserve(specs.size());
  for (const AugmentSpec& s : specs) out.push_back({apply_augment(img, s), s});
  return out;
}

Point2 CropTransform::to_source(Point2 out) const {
  const double rx = origin_x + (out.x - shift_x + 0.5) * step;
  const double ry = origin_y + (out.y - shift_y + 0.5) * step;
  return {pivot.x + cos_t * rx - sin_t * ry, pivot.y + sin_t * rx + cos_t * ry};
}

Point2 CropTransform::to_output(Point2 src) const {
  const double dx = src.x - pivot.x, dy = src.y - pivot.y;
  const double rx = cos_t * dx + sin_t * dy, ry = -sin_t * dx + cos_t * dy;
  return {(rx - origin_x) / step - 0.5 + shift_x, (ry - origin_y) / step - 0.5 + shift_y};
}

CropTransform crop_transform(const LandmarkSet& lm, int output_size, Point2 shift) {
  validate_landmarks(lm);
  require(output_size >= 8, Errc::InvalidArgument, "crop size must be at least 8 pixels");
  require(std::abs(shift.x) <= 0.05 * output_size + 1e-12 && std::abs(shift.y) <= 0.05 * output_size + 1e-12,
          Errc::InvalidArgument, "crop shift exceeds 5% of the crop size");
  const Point2 le = left_eye_center(lm), re = right_eye_center(lm);
  CropTransform t;
  t.pivot = midpoint(le, re);
  const double theta = std::atan2(re.y - le.y, re.x - le.x);
  t.cos_t = std::cos(theta);
  t.sin_t = std::sin(theta);
  auto rotated = [&](Point2 p) {
    const double dx = p.x - t.pivot.x, dy = p.y - t.pivot.y;
    return Point2{t.cos_t * dx + t.sin_t * dy, -t.sin_t * dx + t.cos_t * dy};
  };
  const Point2 l = rotated(lm[lm68::kLeftEyeOuter]), r = rotated(lm[lm68::kRightEyeOuter]);
  double top = rotated(lm[lm68::kLeftBrowBegin]).y;
  for (int i = lm68::kLeftBrowBegin; i < lm68::kRightBrowEnd; ++i) top = std::min(top, rotated(lm[i]).y);
  const double bottom = rotated(lm[lm68::kLowerLipBottom]).y;
  const double x0 = std::min(l.x, r.x), x1 = std::max(l.x, r.x);
  const double side = std::max({x1 - x0, bottom - top, 1.0});
  t.origin_x = 0.5 * (x0 + x1) - 0.5 * side;
  t.origin_y = 0.5 * (top + bottom) - 0.5 * side;
  t.step = side / output_size;
  t.shift_x = shift.x;
  t.shift_y = shift.y;
  t.size = output_size;
  return t;
}

ImageBuffer apply_crop(const ImageBuffer& img, const CropTransform& t) {
  const int n = t.size, ch = img.channels();
  // area-average when shrinking so fine texture does not alias
  const int ss = std::max(1, static_cast<int>(std::ceil(t.step - 1e-9)));
  // the shift is applied to the integer pixel index first, so integer shifts translate exactly
  CropTransform base = t;
  base.shift_x = base.shift_y = 0.0;
  ImageBuffer out(n, n, ch);
  std::vector<double> tmp(ch);
  for (int v = 0; v < n; ++v)
    for (int u = 0; u < n; ++u) {
      auto px = out.data().subspan((static_cast<std::size_t>(v) * n + u) * ch, ch);
      const double bu = u - t.shift_x, bv = v - t.shift_y;
      if (ss == 1) {
        sample_bilinear(img, base.to_source({bu, bv}), px);
        continue;
      }
      for (int sy = 0; sy < ss; ++sy)
        for (int sx = 0; sx < ss; ++sx) {
          const Point2 o{bu + ((sx + 0.5) / ss - 0.5), bv + ((sy + 0.5) / ss - 0.5)};
          sample_bilinear(img, base.to_source(o), tmp);
          for (int c = 0; c < ch; ++c) px[c] += tmp[c];
        }
      for (int c = 0; c < ch; ++c) px[c] /= ss * ss;
    }
  return out;
}

ImageBuffer normalize_crop(const ImageBuffer& img, const LandmarkSet& lm, Point2 shift, int output_size) {
  require(img.width() == lm.image_width && img.height() == lm.image_height, Errc::DimensionMismatch,
          "normalize_crop: landmarks refer to a different image size");
  return apply_crop(img, crop_transform(lm, output_size, shift));
}

std::vector<Point2> crop_points(const std::vector<Point2>& pts, const CropTransform& t) {
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (const Point2& p : pts) out.push_back(t.to_output(p));
  return out;
}

}  // namespace morphkit
