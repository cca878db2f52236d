#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "morphkit/image.hpp"
#include "morphkit/landmarks.hpp"

namespace morphkit {

enum class RegionId : std::uint8_t { LeftEye = 0, RightEye = 1, Nose = 2, Mouth = 3 };
inline constexpr int kRegionCount = 4;
inline constexpr std::array<RegionId, kRegionCount> kAllRegions{RegionId::LeftEye, RegionId::RightEye,
                                                                 RegionId::Nose, RegionId::Mouth};

std::string_view region_name(RegionId r) noexcept;
RegionId parse_region(std::string_view name);

/// Set of regions as a 4-bit mask, bit i = RegionId i; printed as "LRNM" with '-' for absent.
class RegionSet {
 public:
  constexpr RegionSet() = default;
  constexpr explicit RegionSet(std::uint8_t bits) : bits_(bits & 0xF) {}
  RegionSet(std::initializer_list<RegionId> regions);
  static constexpr RegionSet all() { return RegionSet(0xF); }

  constexpr bool contains(RegionId r) const { return (bits_ >> static_cast<int>(r)) & 1u; }
  constexpr void insert(RegionId r) { bits_ |= static_cast<std::uint8_t>(1u << static_cast<int>(r)); }
  constexpr std::uint8_t bits() const { return bits_; }
  int size() const;
  constexpr bool empty() const { return bits_ == 0; }
  std::string flags() const;
  static RegionSet parse_flags(std::string_view s);
  constexpr bool operator==(const RegionSet&) const = default;

 private:
  std::uint8_t bits_ = 0;
};

/// Landmark indices defining each region (eye regions include their brow).
const std::vector<int>& region_landmarks(RegionId r);

struct RegionShape {
  double x0, y0, x1, y1;  // expanded rectangle
  double corner_radius;
  double feather;  // width of the linear falloff outside the rectangle

  /// Signed distance to the rounded rectangle, negative inside.
  double signed_distance(Point2 p) const;
};

struct RegionParams {
  double expand_diagonal = 0.15;
  double feather_height = 0.03;
  double corner_fraction = 0.25;  // corner radius relative to the shorter side
};

RegionShape region_shape(RegionId r, const LandmarkSet& lm, const RegionParams& params = {});

struct RegionMask {
  RegionId region;
  int width = 0;
  int height = 0;
  std::vector<double> weight;  // row-major in [0, 1]

  double at(int x, int y) const { return weight[static_cast<std::size_t>(y) * width + x]; }
};

/// Feathered masks for all four regions. Where regions compete, the pixel goes to the region it
/// lies deepest inside (ties to the lower RegionId), so the masks never overlap.
std::array<RegionMask, kRegionCount> region_masks(const LandmarkSet& lm, const RegionParams& params = {});
RegionMask region_mask(RegionId region, const LandmarkSet& lm, const RegionParams& params = {});
/// Unfeathered variant: weight 1 where the region owns the pixel inside its rectangle, else 0.
std::array<RegionMask, kRegionCount> hard_region_masks(const LandmarkSet& lm, const RegionParams& params = {});

/// Takes the selected regions from `morph` and everything else from `aligned_original`.
ImageBuffer compose_partial(const ImageBuffer& morph, const ImageBuffer& aligned_original,
                            const LandmarkSet& lm_target, RegionSet morphed_regions,
                            const RegionParams& params = {});

}  // namespace morphkit
