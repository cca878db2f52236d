#include <algorithm>
#include <cmath>

#include "morphkit/blend.hpp"
#include "morphkit/error.hpp"
#include "morphkit/filter.hpp"
#include "morphkit/simd/kernels.hpp"

namespace morphkit {

TransitionZone::Side TransitionZone::classify(Point2 p) const {
  if (inner.radius_of(p) <= 1.0) return Side::Inner;
  if (outer.radius_of(p) >= 1.0) return Side::Outer;
  return Side::Annulus;
}

std::vector<TransitionZone::Side> TransitionZone::mask() const {
  std::vector<Side> m(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      m[static_cast<std::size_t>(y) * width + x] = classify({static_cast<double>(x), static_cast<double>(y)});
  return m;
}

TransitionZone transition_ellipses(const LandmarkSet& lm, const TransitionParams& params) {
  validate_landmarks(lm);
  require(params.inner_margin > 0.0 && params.outer_factor > 1.0, Errc::InvalidArgument,
          "transition zone: margin must be positive and the outer factor above 1");
  const Point2 eyes = midpoint(left_eye_center(lm), right_eye_center(lm));
  const Point2 center = midpoint(eyes, mouth_center(lm));
  double brow_top = lm[lm68::kLeftBrowBegin].y;
  for (int i = lm68::kLeftBrowBegin; i < lm68::kRightBrowEnd; ++i) brow_top = std::min(brow_top, lm[i].y);
  const double half_w = 0.5 * distance(lm[lm68::kLeftEyeOuter], lm[lm68::kRightEyeOuter]);
  const double half_h = 0.5 * std::abs(lm[lm68::kLowerLipBottom].y - brow_top);

  TransitionZone z;
  z.width = lm.image_width;
  z.height = lm.image_height;
  z.inner = {center, params.inner_margin * half_w, params.inner_margin * half_h};
  // Grow the ellipse uniformly until every brow, eye, nose and mouth point sits inside with the
  // same relative margin, so no feature point falls into the transition annulus.
  double reach = 0.0;
  for (int i = lm68::kLeftBrowBegin; i < kLandmarkCount; ++i) reach = std::max(reach, z.inner.radius_of(lm[i]));
  const double grow = std::max(1.0, params.inner_margin * reach);
  z.inner.semi_axis_x *= grow;
  z.inner.semi_axis_y *= grow;
  z.outer = {center, params.outer_factor * z.inner.semi_axis_x, params.outer_factor * z.inner.semi_axis_y};
  return z;
}

ImageBuffer alpha_blend(const ImageBuffer& a, const ImageBuffer& b, double alpha) {
  require_same_shape(a, b, "alpha_blend");
  require(alpha >= 0.0 && alpha <= 1.0, Errc::InvalidArgument, "alpha must lie in [0, 1]");
  if (alpha == 1.0) return clamped_copy(a);
  if (alpha == 0.0) return clamped_copy(b);
  ImageBuffer out(a.width(), a.height(), a.channels());
  simd::active().lerp(a.data().data(), b.data().data(), alpha, out.data().data(), out.size());
  out.clamp01();
  return out;
}

MorphResult compose_morph_detailed(const ImageBuffer& img_a, const ImageBuffer& img_b, const LandmarkSet& lm_a,
                                   const LandmarkSet& lm_b, WarpMethod method, const MorphOptions& options) {
  require(options.sigma_iod_fraction > 0.0, Errc::NonPositiveSigma, "frequency split sigma must be positive");
  MorphResult r;
  r.aligned = morph_align(img_a, img_b, lm_a, lm_b, method, options.field);
  r.blended = alpha_blend(r.aligned.warped_a, r.aligned.warped_b, options.alpha);
  r.zone = transition_ellipses(r.aligned.target, options.transition);
  const ImageBuffer& outer = options.outer_source == OuterSource::A ? r.aligned.warped_a : r.aligned.warped_b;

  const double sigma = options.sigma_iod_fraction * inter_ocular_distance(r.aligned.target);
  const FrequencyBands in = split_frequency(r.blended, sigma);
  const FrequencyBands out = split_frequency(outer, sigma);
  const ImageBuffer low = poisson_blend_low(in.low, out.low, r.zone, options.poisson, &r.poisson);
  r.seam = seam_cut_high(in.high, out.high, r.zone, options.polar);
  const auto take_inner = seam_inner_mask(r.zone, r.seam);

  // low + high with high = selected - selected_low; written as selected + (low - selected_low) so
  // regions where the Poisson solution equals its source reproduce the source pixels exactly.
  const int ch = r.blended.channels();
  r.image = ImageBuffer(r.blended.width(), r.blended.height(), ch);
  auto dst = r.image.data();
  for (std::size_t p = 0; p < take_inner.size(); ++p)
    for (int c = 0; c < ch; ++c) {
      const std::size_t k = p * ch + c;
      const bool inner = take_inner[p] != 0;
      const double sel = inner ? r.blended.data()[k] : outer.data()[k];
      const double sel_low = inner ? in.low.data()[k] : out.low.data()[k];
      dst[k] = std::clamp(sel + (low.data()[k] - sel_low), 0.0, 1.0);
    }
  return r;
}

ImageBuffer compose_morph(const ImageBuffer& img_a, const ImageBuffer& img_b, const LandmarkSet& lm_a,
                          const LandmarkSet& lm_b, WarpMethod method, const MorphOptions& options) {
  return compose_morph_detailed(img_a, img_b, lm_a, lm_b, method, options).image;
}

}  // namespace morphkit
