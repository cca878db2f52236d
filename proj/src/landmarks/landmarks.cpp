#include "morphkit/landmarks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "morphkit/error.hpp"

namespace morphkit {

namespace lm68 {

const std::array<int, kLandmarkCount>& mirror_permutation() {
  static const std::array<int, kLandmarkCount> perm = [] {
    std::array<int, kLandmarkCount> p{};
    for (int i = 0; i < kLandmarkCount; ++i) p[i] = i;
    auto pair = [&](int a, int b) {
      p[a] = b;
      p[b] = a;
    };
    for (int i = 0; i < 8; ++i) pair(i, 16 - i);
    for (int i = 0; i < 5; ++i) pair(17 + i, 26 - i);
    pair(31, 35);
    pair(32, 34);
    pair(36, 45);
    pair(37, 44);
    pair(38, 43);
    pair(39, 42);
    pair(40, 47);
    pair(41, 46);
    pair(48, 54);
    pair(49, 53);
    pair(50, 52);
    pair(55, 59);
    pair(56, 58);
    pair(60, 64);
    pair(61, 63);
    pair(65, 67);
    return p;
  }();
  return perm;
}

}  // namespace lm68

Point2 centroid(std::span<const Point2> pts) {
  Point2 s;
  for (const Point2& p : pts) s = s + p;
  return s / static_cast<double>(pts.size());
}

namespace {

std::span<const Point2> range(const LandmarkSet& lm, int begin, int end) {
  return std::span<const Point2>(lm.points).subspan(begin, end - begin);
}

}  // namespace

Point2 left_eye_center(const LandmarkSet& lm) {
  return centroid(range(lm, lm68::kLeftEyeBegin, lm68::kLeftEyeEnd));
}
Point2 right_eye_center(const LandmarkSet& lm) {
  return centroid(range(lm, lm68::kRightEyeBegin, lm68::kRightEyeEnd));
}
Point2 mouth_center(const LandmarkSet& lm) {
  return centroid(range(lm, lm68::kOuterLipBegin, lm68::kOuterLipEnd));
}
double inter_ocular_distance(const LandmarkSet& lm) {
  return distance(left_eye_center(lm), right_eye_center(lm));
}

void validate_landmarks(const LandmarkSet& lm) {
  require(lm.image_width > 0 && lm.image_height > 0, Errc::InvalidArgument,
          "landmark set needs positive image dimensions");
  require(lm.points.size() == kLandmarkCount, Errc::WrongPointCount,
          "expected 68 landmarks, got " + std::to_string(lm.points.size()));
  for (std::size_t i = 0; i < lm.points.size(); ++i) {
    const Point2 p = lm.points[i];
    if (!(p.x >= 0.0 && p.y >= 0.0 && p.x <= lm.image_width - 1 && p.y <= lm.image_height - 1))
      fail(Errc::PointOutOfBounds, "landmark " + std::to_string(i) + " (" + std::to_string(p.x) +
                                       ", " + std::to_string(p.y) + ") lies outside the image");
  }
  require(!(left_eye_center(lm) == right_eye_center(lm)), Errc::InvalidArgument,
          "eye centroids coincide");
}

LandmarkSet make_landmarks(std::vector<Point2> points, int image_width, int image_height) {
  LandmarkSet lm{std::move(points), image_width, image_height};
  validate_landmarks(lm);
  return lm;
}

LandmarkSet parse_landmarks_text(std::string_view text, int image_width, int image_height) {
  std::vector<Point2> pts;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream in(line);
    double x, y;
    if (!(in >> x)) {
      in.clear();
      std::string rest;
      if (in >> rest) fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 'x y'");
      continue;  // blank or comment-only
    }
    if (!(in >> y)) fail(Errc::ParseError, "line " + std::to_string(line_no) + ": expected 'x y'");
    std::string extra;
    if (in >> extra)
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": trailing text '" + extra + "'");
    if (!std::isfinite(x) || !std::isfinite(y))
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": non-finite coordinate");
    pts.push_back({x, y});
  }
  return make_landmarks(std::move(pts), image_width, image_height);
}

LandmarkSet parse_landmarks(const std::filesystem::path& path, int image_width, int image_height) {
  std::ifstream in(path);
  if (!in) fail(Errc::MissingFile, "cannot open landmark file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_landmarks_text(buf.str(), image_width, image_height);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_landmarks(const LandmarkSet& lm, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out.precision(17);
  out << "# 68-point landmarks, image " << lm.image_width << "x" << lm.image_height << "\n";
  for (const Point2& p : lm.points) out << p.x << ' ' << p.y << '\n';
  if (!out) fail(Errc::IoError, "write failed for " + path.string());
}

LandmarkSet mirror_landmarks(const LandmarkSet& lm) {
  LandmarkSet out{std::vector<Point2>(lm.points.size()), lm.image_width, lm.image_height};
  const auto& perm = lm68::mirror_permutation();
  for (int i = 0; i < kLandmarkCount; ++i) {
    const Point2 p = lm.points[perm[i]];
    out.points[i] = {(lm.image_width - 1) - p.x, p.y};
  }
  return out;
}

namespace {

// x where the jaw polyline (walked from `from` towards the chin) crosses height y; falls back to
// the closer end point when the polyline never reaches y.
Point2 jaw_at_height(const LandmarkSet& lm, int from, int step, double y) {
  for (int i = from; i != lm68::kChinTip; i += step) {
    const Point2 a = lm.points[i], b = lm.points[i + step];
    const double lo = std::min(a.y, b.y), hi = std::max(a.y, b.y);
    if (y >= lo && y <= hi) {
      if (b.y == a.y) return midpoint(a, b);
      const double t = (y - a.y) / (b.y - a.y);
      return a + (b - a) * t;
    }
  }
  const Point2 top = lm.points[from], bottom = lm.points[lm68::kChinTip];
  return std::abs(y - top.y) <= std::abs(y - bottom.y) ? top : bottom;
}

Point2 clamp_inside(Point2 p, int w, int h) {
  // Keep derived points strictly off the border so they never coincide with border points.
  const double m = 0.5;
  return {std::clamp(p.x, m, w - 1 - m), std::clamp(p.y, m, h - 1 - m)};
}

}  // namespace

ExtendedLandmarkSet extend_landmarks(const LandmarkSet& lm) {
  validate_landmarks(lm);
  ExtendedLandmarkSet ext;
  ext.image_width = lm.image_width;
  ext.image_height = lm.image_height;
  ext.points.reserve(ExtendedLandmarkSet::kCount);
  for (int i = 0; i < kLandmarkCount; ++i) {
    if (i == lm68::kInnerLipBottomCenter) continue;
    if (i == lm68::kInnerLipTopCenter)
      ext.points.push_back(midpoint(lm.points[lm68::kInnerLipTopCenter],
                                    lm.points[lm68::kInnerLipBottomCenter]));
    else
      ext.points.push_back(lm.points[i]);
  }

  const double w1 = lm.image_width - 1, h1 = lm.image_height - 1;
  ext.points.insert(ext.points.end(), {{0.0, 0.0},
                                       {w1, 0.0},
                                       {0.0, h1},
                                       {w1, h1},
                                       {w1 / 2.0, 0.0},
                                       {w1 / 2.0, h1},
                                       {0.0, h1 / 2.0},
                                       {w1, h1 / 2.0}});

  ext.points.push_back(left_eye_center(lm));
  ext.points.push_back(right_eye_center(lm));

  const double mouth_y =
      0.5 * (lm.points[lm68::kLeftMouthCorner].y + lm.points[lm68::kRightMouthCorner].y);
  const Point2 jaw_left = jaw_at_height(lm, lm68::kJawBegin, +1, mouth_y);
  const Point2 jaw_right = jaw_at_height(lm, lm68::kJawEnd - 1, -1, mouth_y);
  ext.points.push_back(midpoint(lm.points[lm68::kLeftEyeOuter], jaw_left));
  ext.points.push_back(midpoint(lm.points[lm68::kRightEyeOuter], jaw_right));

  ext.points.push_back(midpoint(lm.points[lm68::kLowerLipBottom], lm.points[lm68::kChinTip]));

  const double lift = 0.6 * inter_ocular_distance(lm);
  ext.points.push_back(clamp_inside(lm.points[lm68::kLeftBrowMiddle] - Point2{0.0, lift},
                                    lm.image_width, lm.image_height));
  ext.points.push_back(clamp_inside(lm.points[lm68::kRightBrowMiddle] - Point2{0.0, lift},
                                    lm.image_width, lm.image_height));
  return ext;
}

const std::vector<std::array<int, 2>>& line_pattern_indices() {
  static const std::vector<std::array<int, 2>> idx = [] {
    std::vector<std::array<int, 2>> v;
    auto polyline = [&](int begin, int end, bool closed) {
      for (int i = begin; i + 1 < end; ++i) v.push_back({i, i + 1});
      if (closed) v.push_back({end - 1, begin});
    };
    polyline(lm68::kJawBegin, lm68::kJawEnd, false);
    polyline(lm68::kLeftBrowBegin, lm68::kLeftBrowEnd, false);
    polyline(lm68::kRightBrowBegin, lm68::kRightBrowEnd, false);
    polyline(lm68::kLeftEyeBegin, lm68::kLeftEyeEnd, true);
    polyline(lm68::kRightEyeBegin, lm68::kRightEyeEnd, true);
    polyline(lm68::kNoseBridgeBegin, lm68::kNoseBridgeEnd, false);
    polyline(lm68::kNoseBaseBegin, lm68::kNoseBaseEnd, false);
    polyline(lm68::kOuterLipBegin, lm68::kOuterLipEnd, true);
    return v;
  }();
  return idx;
}

std::vector<LineSegment> build_line_pattern(const LandmarkSet& lm) {
  validate_landmarks(lm);
  std::vector<LineSegment> segs;
  segs.reserve(kLinePatternSize);
  for (const auto& [a, b] : line_pattern_indices()) {
    if (lm.points[a] == lm.points[b])
      fail(Errc::DegenerateSegment, "landmarks " + std::to_string(a) + " and " + std::to_string(b) +
                                        " coincide; line segment has zero length");
    segs.push_back({lm.points[a], lm.points[b]});
  }
  return segs;
}

std::vector<Point2> average_points(std::span<const Point2> a, std::span<const Point2> b) {
  require(a.size() == b.size(), Errc::CardinalityMismatch,
          "cannot average point sets of size " + std::to_string(a.size()) + " and " +
              std::to_string(b.size()));
  std::vector<Point2> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = midpoint(a[i], b[i]);
  return out;
}

LandmarkSet average_landmarks(const LandmarkSet& a, const LandmarkSet& b) {
  require(a.image_width == b.image_width && a.image_height == b.image_height,
          Errc::DimensionMismatch, "landmark sets belong to images of different size");
  return {average_points(a.points, b.points), a.image_width, a.image_height};
}

ExtendedLandmarkSet average_landmarks(const ExtendedLandmarkSet& a, const ExtendedLandmarkSet& b) {
  require(a.image_width == b.image_width && a.image_height == b.image_height,
          Errc::DimensionMismatch, "landmark sets belong to images of different size");
  ExtendedLandmarkSet out;
  out.points = average_points(a.points, b.points);
  out.image_width = a.image_width;
  out.image_height = a.image_height;
  out.lip_fused = a.lip_fused && b.lip_fused;
  return out;
}

}  // namespace morphkit
