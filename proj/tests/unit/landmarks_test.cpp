#include <algorithm>
#include <fstream>
#include <sstream>

#include "morphkit/landmarks.hpp"
#include "morphkit/synth.hpp"
#include "support.hpp"

using namespace morphkit;

namespace {

LandmarkSet symmetric_face(int size = 100) {
  SyntheticFaceParams p;  // no rotation, no shift
  return synthetic_landmarks(p, size, size);
}

std::string as_text(const LandmarkSet& lm, int count) {
  std::ostringstream s;
  s.precision(17);
  for (int i = 0; i < count; ++i) s << lm[i].x << ' ' << lm[i].y << '\n';
  return s.str();
}

bool near(Point2 a, Point2 b, double tol) { return distance(a, b) <= tol; }

}  // namespace

TEST_CASE("parse_landmarks: 68 pairs in order, comments ignored") {
  const LandmarkSet lm = symmetric_face();
  const std::string text = "# header\n\n" + as_text(lm, 68) + "# trailing\n";
  const LandmarkSet back = parse_landmarks_text(text, 100, 100);
  REQUIRE(back.size() == 68);
  for (int i = 0; i < 68; ++i) CHECK(back[i] == lm[i]);

  testing::TempDir dir;
  write_landmarks(lm, dir / "lm.txt");
  const LandmarkSet file = parse_landmarks(dir / "lm.txt", 100, 100);
  for (int i = 0; i < 68; ++i) CHECK(file[i] == lm[i]);
}

TEST_CASE("parse_landmarks: error paths") {
  const LandmarkSet lm = symmetric_face();
  CHECK_ERRC(parse_landmarks_text(as_text(lm, 67), 100, 100), Errc::WrongPointCount);
  std::string bad = as_text(lm, 68);
  bad.replace(0, bad.find('\n'), "-3 10");
  CHECK_ERRC(parse_landmarks_text(bad, 100, 100), Errc::PointOutOfBounds);
  CHECK_ERRC(parse_landmarks_text("12 abc\n" + as_text(lm, 67), 100, 100), Errc::ParseError);
  testing::TempDir dir;
  CHECK_ERRC(parse_landmarks(dir / "none.txt", 100, 100), Errc::MissingFile);
}

TEST_CASE("extend_landmarks: counts, borders, fused lip") {
  const LandmarkSet lm = symmetric_face();
  const ExtendedLandmarkSet ext = extend_landmarks(lm);
  CHECK(ext.points.size() == 82u);
  CHECK(ExtendedLandmarkSet::kCount == 82);
  const Point2 corners[8] = {{0, 0}, {99, 0}, {0, 99}, {99, 99}, {49.5, 0}, {49.5, 99}, {0, 49.5}, {99, 49.5}};
  for (int i = 0; i < 8; ++i) CHECK(ext.points[ExtendedLandmarkSet::kBorderBegin + i] == corners[i]);
  CHECK(ext.points[ExtendedLandmarkSet::kFusedLip] == midpoint(lm[62], lm[66]));
  CHECK(ext.points[ExtendedLandmarkSet::from_base(67)] == lm[67]);
  CHECK(ext.points[ExtendedLandmarkSet::kLeftEyeCenter] == left_eye_center(lm));
  CHECK(ext.points[ExtendedLandmarkSet::kMouthChin] == midpoint(lm[57], lm[8]));
  const double iod = inter_ocular_distance(lm);
  CHECK(ext.points[ExtendedLandmarkSet::kLeftForehead].y == doctest::Approx(lm[19].y - 0.6 * iod));
}

TEST_CASE("extend_landmarks: symmetric face gives mirrored extras") {
  const LandmarkSet lm = symmetric_face();
  const LandmarkSet mirrored = mirror_landmarks(lm);
  for (int i = 0; i < 68; ++i) REQUIRE(near(mirrored[i], lm[i], 1e-9));
  const ExtendedLandmarkSet ext = extend_landmarks(lm);
  auto mirror = [](Point2 p) { return Point2{99 - p.x, p.y}; };
  using E = ExtendedLandmarkSet;
  CHECK(near(mirror(ext.points[E::kLeftEyeCenter]), ext.points[E::kRightEyeCenter], 1e-9));
  CHECK(near(mirror(ext.points[E::kLeftCheek]), ext.points[E::kRightCheek], 1e-9));
  CHECK(near(mirror(ext.points[E::kLeftForehead]), ext.points[E::kRightForehead], 1e-9));
  CHECK(ext.points[E::kMouthChin].x == doctest::Approx(49.5));
}

TEST_CASE("build_line_pattern: 55 positive-length segments") {
  const LandmarkSet lm = symmetric_face();
  const auto segs = build_line_pattern(lm);
  CHECK(segs.size() == 55u);
  for (const LineSegment& s : segs) CHECK(distance(s.start, s.end) > 0.0);
}

TEST_CASE("build_line_pattern: mirrored face gives the mirrored segment set") {
  Rng rng(3);
  SyntheticFaceParams p = random_face_params(rng);
  const LandmarkSet lm = synthetic_landmarks(p, 120, 120);
  const auto a = build_line_pattern(lm);
  const auto b = build_line_pattern(mirror_landmarks(lm));
  for (const LineSegment& s : a) {
    const Point2 ms{119 - s.start.x, s.start.y}, me{119 - s.end.x, s.end.y};
    const bool found = std::any_of(b.begin(), b.end(), [&](const LineSegment& t) {
      return (near(t.start, ms, 1e-9) && near(t.end, me, 1e-9)) || (near(t.start, me, 1e-9) && near(t.end, ms, 1e-9));
    });
    CHECK(found);
  }
}

TEST_CASE("build_line_pattern: coincident chin points are rejected") {
  LandmarkSet lm = symmetric_face();
  lm.points[4] = lm.points[3];
  CHECK_ERRC(build_line_pattern(lm), Errc::DegenerateSegment);
}

TEST_CASE("average_landmarks: mean, idempotence, symmetry, cardinality") {
  const std::vector<Point2> a{{0, 0}, {4, 4}}, b{{10, 20}, {0, 2}};
  const auto m = average_points(a, b);
  CHECK(m[0] == Point2{5, 10});
  CHECK(m[1] == Point2{2, 3});
  CHECK(average_points(b, a) == m);
  CHECK(average_points(a, a) == a);
  const std::vector<Point2> c{{1, 1}};
  CHECK_ERRC(average_points(a, c), Errc::CardinalityMismatch);

  Rng rng(5);
  const LandmarkSet l1 = synthetic_landmarks(random_face_params(rng), 90, 90);
  const LandmarkSet l2 = synthetic_landmarks(random_face_params(rng), 90, 90);
  const LandmarkSet t12 = average_landmarks(l1, l2), t21 = average_landmarks(l2, l1);
  for (int i = 0; i < 68; ++i) CHECK(t12[i] == t21[i]);
}
