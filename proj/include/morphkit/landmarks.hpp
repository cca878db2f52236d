#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "morphkit/geometry.hpp"

namespace morphkit {

inline constexpr int kLandmarkCount = 68;

/// Index ranges of the standard 68-point annotation. "Left" and "right" are image left/right
/// throughout the library: the left eye is points 36-41, which sits at smaller x.
namespace lm68 {
inline constexpr int kJawBegin = 0, kJawEnd = 17;  // [begin, end)
inline constexpr int kChinTip = 8;
inline constexpr int kLeftBrowBegin = 17, kLeftBrowEnd = 22;
inline constexpr int kRightBrowBegin = 22, kRightBrowEnd = 27;
inline constexpr int kNoseBridgeBegin = 27, kNoseBridgeEnd = 31;
inline constexpr int kNoseBaseBegin = 31, kNoseBaseEnd = 36;
inline constexpr int kLeftEyeBegin = 36, kLeftEyeEnd = 42;
inline constexpr int kRightEyeBegin = 42, kRightEyeEnd = 48;
inline constexpr int kOuterLipBegin = 48, kOuterLipEnd = 60;
inline constexpr int kInnerLipBegin = 60, kInnerLipEnd = 68;
inline constexpr int kLeftEyeOuter = 36, kRightEyeOuter = 45;
inline constexpr int kLeftMouthCorner = 48, kRightMouthCorner = 54;
inline constexpr int kLowerLipBottom = 57;
inline constexpr int kInnerLipTopCenter = 62, kInnerLipBottomCenter = 66;
inline constexpr int kLeftBrowMiddle = 19, kRightBrowMiddle = 24;

/// Index of the mirror-image counterpart of each point.
const std::array<int, kLandmarkCount>& mirror_permutation();
}  // namespace lm68

struct LandmarkSet {
  std::vector<Point2> points;
  int image_width = 0;
  int image_height = 0;

  const Point2& operator[](int i) const { return points[i]; }
  std::size_t size() const { return points.size(); }
};

/// Checks count, bounds and distinct eye centroids; throws on violation.
void validate_landmarks(const LandmarkSet& lm);
LandmarkSet make_landmarks(std::vector<Point2> points, int image_width, int image_height);

/// Plain text, one "x y" pair per line, '#' starts a comment, blank lines ignored.
LandmarkSet parse_landmarks(const std::filesystem::path& path, int image_width, int image_height);
LandmarkSet parse_landmarks_text(std::string_view text, int image_width, int image_height);
void write_landmarks(const LandmarkSet& lm, const std::filesystem::path& path);

Point2 centroid(std::span<const Point2> pts);
Point2 left_eye_center(const LandmarkSet& lm);
Point2 right_eye_center(const LandmarkSet& lm);
Point2 mouth_center(const LandmarkSet& lm);
double inter_ocular_distance(const LandmarkSet& lm);

/// Reflects about the vertical image axis and relabels points so the result is again a valid
/// 68-point annotation.
LandmarkSet mirror_landmarks(const LandmarkSet& lm);

/// Base points with the two central inner-lip points fused, followed by fifteen derived points.
struct ExtendedLandmarkSet {
  static constexpr int kBaseCount = kLandmarkCount - 1;
  static constexpr int kBorderBegin = kBaseCount;  // TL, TR, BL, BR, top, bottom, left, right
  static constexpr int kLeftEyeCenter = kBorderBegin + 8;
  static constexpr int kRightEyeCenter = kLeftEyeCenter + 1;
  static constexpr int kLeftCheek = kRightEyeCenter + 1;
  static constexpr int kRightCheek = kLeftCheek + 1;
  static constexpr int kMouthChin = kRightCheek + 1;
  static constexpr int kLeftForehead = kMouthChin + 1;
  static constexpr int kRightForehead = kLeftForehead + 1;
  static constexpr int kCount = kRightForehead + 1;
  /// Extended index holding the fused inner-lip point.
  static constexpr int kFusedLip = lm68::kInnerLipTopCenter;

  /// Extended index of a base landmark (both central inner-lip points map to kFusedLip).
  static constexpr int from_base(int i) {
    return i < lm68::kInnerLipBottomCenter ? i
           : i == lm68::kInnerLipBottomCenter ? kFusedLip
                                              : i - 1;
  }

  std::vector<Point2> points;
  int image_width = 0;
  int image_height = 0;
  bool lip_fused = true;
};

ExtendedLandmarkSet extend_landmarks(const LandmarkSet& lm);

struct LineSegment {
  Point2 start;
  Point2 end;
};

/// Fixed 55-segment pattern: jaw (16), brows (4 + 4), closed eye contours (6 + 6),
/// nose bridge (3), nose base (4), closed outer lip (12).
inline constexpr int kLinePatternSize = 55;
std::vector<LineSegment> build_line_pattern(const LandmarkSet& lm);
/// Landmark index pairs behind build_line_pattern, in the same order.
const std::vector<std::array<int, 2>>& line_pattern_indices();

std::vector<Point2> average_points(std::span<const Point2> a, std::span<const Point2> b);
LandmarkSet average_landmarks(const LandmarkSet& a, const LandmarkSet& b);
ExtendedLandmarkSet average_landmarks(const ExtendedLandmarkSet& a, const ExtendedLandmarkSet& b);

}  // namespace morphkit
