#include <cmath>

#include "morphkit/error.hpp"
#include "morphkit/warp.hpp"

namespace morphkit {

namespace {

bool degenerate(const LineSegment& s) { return !(norm(s.end - s.start) > 0.0); }

}  // namespace

Point2 segment_normal(const LineSegment& s) {
  const Point2 d = s.end - s.start;
  const double len = norm(d);
  require(len > 0.0, Errc::DegenerateSegment, "segment has zero length");
  return {-d.y / len, d.x / len};
}

LineSegmentPair make_segment_pair(LineSegment src, LineSegment dst) {
  require(!degenerate(src) && !degenerate(dst), Errc::DegenerateSegment,
          "segment pair contains a zero-length segment");
  return {src, dst};
}

std::vector<LineSegmentPair> pair_segments(std::span<const LineSegment> src,
                                           std::span<const LineSegment> dst) {
  require(src.size() == dst.size(), Errc::CardinalityMismatch, "segment lists differ in length");
  std::vector<LineSegmentPair> out;
  out.reserve(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) out.push_back(make_segment_pair(src[i], dst[i]));
  return out;
}

namespace {

struct PreparedPair {
  Point2 q_start, q_end, q_dir, q_normal;
  double q_len2;
  Point2 s_start, s_dir, s_normal;
  bool rigid;
  Point2 shift;
};

std::vector<PreparedPair> prepare(std::span<const LineSegmentPair> pairs, const FieldMorphParams& params) {
  require(!pairs.empty(), Errc::NoSegments, "field morph needs at least one segment pair");
  require(params.epsilon > 0.0, Errc::InvalidArgument, "field morph epsilon must be positive");
  std::vector<PreparedPair> out;
  out.reserve(pairs.size());
  for (const LineSegmentPair& pr : pairs) {
    const LineSegment& q = pr.dst;
    const LineSegment& qs = pr.src;
    require(!degenerate(q) && !degenerate(qs), Errc::DegenerateSegment, "field morph: zero-length segment");
    PreparedPair pp;
    pp.q_start = q.start;
    pp.q_end = q.end;
    pp.q_dir = q.end - q.start;
    pp.q_len2 = dot(pp.q_dir, pp.q_dir);
    pp.q_normal = segment_normal(q);
    pp.s_start = qs.start;
    pp.s_dir = qs.end - qs.start;
    pp.s_normal = segment_normal(qs);
    pp.shift = qs.start - q.start;
    // rigid translation of the pair (including the identity): displacement is exact
    pp.rigid = qs.end - q.end == pp.shift;
    out.push_back(pp);
  }
  return out;
}

Point2 morph_point(Point2 p, const std::vector<PreparedPair>& pairs, double epsilon) {
  Point2 sum{0.0, 0.0};
  double weight_sum = 0.0;
  Point2 first{};
  bool uniform = true;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PreparedPair& pp = pairs[i];
    Point2 disp;
    if (pp.rigid) {
      disp = pp.shift;
    } else {
      const Point2 rel = p - pp.q_start;
      const double u = dot(rel, pp.q_dir) / pp.q_len2;
      const double v = dot(rel, pp.q_normal);
      disp = (pp.s_start + u * pp.s_dir + v * pp.s_normal) - p;
    }
    const double d = segment_distance(p, pp.q_start, pp.q_end);
    const double w = 1.0 / ((d + epsilon) * (d + epsilon));
    if (i == 0)
      first = disp;
    else if (!(disp == first))
      uniform = false;
    sum = sum + w * disp;
    weight_sum += w;
  }
  if (uniform) return p + first;
  return p + (1.0 / weight_sum) * sum;
}

}  // namespace

Point2 field_morph_point(Point2 p, std::span<const LineSegmentPair> pairs, const FieldMorphParams& params) {
  return morph_point(p, prepare(pairs, params), params.epsilon);
}

ImageBuffer warp_field(const ImageBuffer& img, std::span<const LineSegmentPair> pairs,
                       const FieldMorphParams& params) {
  const auto prepared = prepare(pairs, params);
  const int w = img.width(), h = img.height(), ch = img.channels();
  ImageBuffer out(w, h, ch);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const Point2 src = morph_point({static_cast<double>(x), static_cast<double>(y)}, prepared, params.epsilon);
      sample_bilinear(img, src, out.data().subspan((static_cast<std::size_t>(y) * w + x) * ch, ch));
    }
  return out;
}

}  // namespace morphkit
