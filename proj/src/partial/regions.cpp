#include "morphkit/regions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "morphkit/error.hpp"
#include "morphkit/simd/kernels.hpp"

namespace morphkit {

std::string_view region_name(RegionId r) noexcept {
  switch (r) {
    case RegionId::LeftEye: return "left_eye";
    case RegionId::RightEye: return "right_eye";
    case RegionId::Nose: return "nose";
    case RegionId::Mouth: return "mouth";
  }
  return "?";
}

RegionId parse_region(std::string_view name) {
  for (RegionId r : kAllRegions)
    if (region_name(r) == name) return r;
  fail(Errc::InvalidArgument, "unknown region '" + std::string(name) + "'");
}

RegionSet::RegionSet(std::initializer_list<RegionId> regions) {
  for (RegionId r : regions) insert(r);
}

int RegionSet::size() const { return std::popcount(static_cast<unsigned>(bits_)); }

std::string RegionSet::flags() const {
  std::string s = "LRNM";
  for (int i = 0; i < kRegionCount; ++i)
    if (!((bits_ >> i) & 1u)) s[i] = '-';
  return s;
}

RegionSet RegionSet::parse_flags(std::string_view s) {
  require(s.size() == 4, Errc::ParseError, "region flags need 4 characters (e.g. \"L-N-\")");
  RegionSet out;
  const char on[4] = {'L', 'R', 'N', 'M'};
  for (int i = 0; i < kRegionCount; ++i) {
    if (s[i] == on[i] || s[i] == '1')
      out.insert(static_cast<RegionId>(i));
    else
      require(s[i] == '-' || s[i] == '0', Errc::ParseError, "bad region flag character in '" + std::string(s) + "'");
  }
  return out;
}

const std::vector<int>& region_landmarks(RegionId r) {
  static const std::array<std::vector<int>, kRegionCount> sets = [] {
    std::array<std::vector<int>, kRegionCount> s;
    for (int i = lm68::kLeftEyeBegin; i < lm68::kLeftEyeEnd; ++i) s[0].push_back(i);
    for (int i = lm68::kLeftBrowBegin; i < lm68::kLeftBrowEnd; ++i) s[0].push_back(i);
    for (int i = lm68::kRightEyeBegin; i < lm68::kRightEyeEnd; ++i) s[1].push_back(i);
    for (int i = lm68::kRightBrowBegin; i < lm68::kRightBrowEnd; ++i) s[1].push_back(i);
    for (int i = lm68::kNoseBridgeBegin; i < lm68::kNoseBaseEnd; ++i) s[2].push_back(i);
    for (int i = lm68::kOuterLipBegin; i < lm68::kInnerLipEnd; ++i) s[3].push_back(i);
    return s;
  }();
  return sets[static_cast<int>(r)];
}

double RegionShape::signed_distance(Point2 p) const {
  // rounded box: shrink by the corner radius, then measure distance and subtract it again
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  const double hx = 0.5 * (x1 - x0) - corner_radius, hy = 0.5 * (y1 - y0) - corner_radius;
  const double qx = std::abs(p.x - cx) - hx, qy = std::abs(p.y - cy) - hy;
  const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
  const double inside = std::min(std::max(qx, qy), 0.0);
  return outside + inside - corner_radius;
}

RegionShape region_shape(RegionId r, const LandmarkSet& lm, const RegionParams& params) {
  const auto& idx = region_landmarks(r);
  double x0 = lm[idx[0]].x, x1 = x0, y0 = lm[idx[0]].y, y1 = y0;
  for (int i : idx) {
    x0 = std::min(x0, lm[i].x);
    x1 = std::max(x1, lm[i].x);
    y0 = std::min(y0, lm[i].y);
    y1 = std::max(y1, lm[i].y);
  }
  const double margin = params.expand_diagonal * std::hypot(x1 - x0, y1 - y0);
  RegionShape s{x0 - margin, y0 - margin, x1 + margin, y1 + margin, 0.0, 0.0};
  s.corner_radius = params.corner_fraction * std::min(s.x1 - s.x0, s.y1 - s.y0);
  s.feather = params.feather_height * lm.image_height;
  return s;
}

namespace {

std::array<RegionMask, kRegionCount> build_masks(const LandmarkSet& lm, const RegionParams& params, bool hard) {
  validate_landmarks(lm);
  const int w = lm.image_width, h = lm.image_height;
  std::array<RegionShape, kRegionCount> shapes;
  std::array<RegionMask, kRegionCount> masks;
  for (int r = 0; r < kRegionCount; ++r) {
    shapes[r] = region_shape(static_cast<RegionId>(r), lm, params);
    masks[r] = {static_cast<RegionId>(r), w, h, std::vector<double>(static_cast<std::size_t>(w) * h, 0.0)};
  }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const Point2 p{static_cast<double>(x), static_cast<double>(y)};
      int owner = -1;
      double best = 0.0;
      for (int r = 0; r < kRegionCount; ++r) {
        const double d = shapes[r].signed_distance(p);
        const double reach = hard ? 0.0 : shapes[r].feather;
        if ((hard ? d <= 0.0 : d < reach) && (owner < 0 || d < best)) {
          owner = r;
          best = d;
        }
      }
      if (owner < 0) continue;
      double weight = 1.0;
      if (!hard && best > 0.0) weight = 1.0 - best / shapes[owner].feather;
      masks[owner].weight[static_cast<std::size_t>(y) * w + x] = weight;
    }
  return masks;
}

}  // namespace

std::array<RegionMask, kRegionCount> region_masks(const LandmarkSet& lm, const RegionParams& params) {
  return build_masks(lm, params, false);
}

std::array<RegionMask, kRegionCount> hard_region_masks(const LandmarkSet& lm, const RegionParams& params) {
  return build_masks(lm, params, true);
}

RegionMask region_mask(RegionId region, const LandmarkSet& lm, const RegionParams& params) {
  return std::move(region_masks(lm, params)[static_cast<int>(region)]);
}

ImageBuffer compose_partial(const ImageBuffer& morph, const ImageBuffer& aligned_original,
                            const LandmarkSet& lm_target, RegionSet morphed_regions, const RegionParams& params) {
  require_same_shape(morph, aligned_original, "compose_partial");
  require(morph.width() == lm_target.image_width && morph.height() == lm_target.image_height,
          Errc::DimensionMismatch, "compose_partial: landmarks refer to a different image size");
  ImageBuffer out = aligned_original;
  if (morphed_regions.empty()) return out;
  const auto masks = region_masks(lm_target, params);
  const int ch = morph.channels();
  const std::size_t n = morph.pixel_count();
  std::vector<double> weight(n * ch, 0.0);
  for (const RegionMask& m : masks) {
    if (!morphed_regions.contains(m.region)) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (int c = 0; c < ch; ++c) weight[i * ch + c] += m.weight[i];
  }
  simd::active().lerp_weighted(morph.data().data(), aligned_original.data().data(), weight.data(),
                               out.data().data(), weight.size());
  // full weight takes the morph pixel itself
  for (std::size_t k = 0; k < weight.size(); ++k)
    if (weight[k] == 1.0) out.data()[k] = morph.data()[k];
  return out;
}

}  // namespace morphkit
