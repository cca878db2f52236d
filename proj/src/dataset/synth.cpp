#include "morphkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "morphkit/random.hpp"

namespace morphkit {

double Grating::at(double x, double y) const {
  const double t = x * std::cos(orientation) + y * std::sin(orientation);
  return amplitude * std::cos(2.0 * std::numbers::pi * frequency * t + phase);
}

double Texture::at(double x, double y) const {
  double v = 0.0;
  for (const Grating& g : waves) v += g.at(x, y);
  return v;
}

namespace {

Grating random_grating(Rng& rng, double f_lo, double f_hi, double amplitude) {
  Grating g;
  g.frequency = rng.uniform(f_lo, f_hi);
  g.orientation = rng.uniform(0.0, std::numbers::pi);
  g.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  g.amplitude = amplitude;
  return g;
}

Texture random_texture(Rng& rng, double f_lo, double f_hi, double amplitude) {
  Texture t;
  for (Grating& g : t.waves) g = random_grating(rng, f_lo, f_hi, amplitude);
  return t;
}

Mark random_mark(Rng& rng, double reach) {
  Mark m;
  const double r = reach * std::sqrt(rng.uniform()), a = rng.uniform(0.0, 2.0 * std::numbers::pi);
  m.u = r * std::cos(a);
  m.v = r * std::sin(a);
  m.radius = rng.uniform(0.04, 0.06);
  m.depth = rng.uniform(0.3, 0.4);
  return m;
}

double mark_shade(Point2 q, Point2 at, double radius, double depth) {
  const double d2 = (q.x - at.x) * (q.x - at.x) + (q.y - at.y) * (q.y - at.y);
  if (d2 > 9.0 * radius * radius) return 0.0;
  return depth * std::exp(-0.5 * d2 / (radius * radius));
}

double smoothstep_edge(double signed_dist, double width) {
  // 1 inside (negative distance), 0 outside, linear over `width` pixels
  return std::clamp(0.5 - signed_dist / width, 0.0, 1.0);
}

// Approximate signed distance (pixels) to an axis-aligned ellipse.
double ellipse_sdf(Point2 p, Point2 c, double ax, double ay) {
  const double dx = (p.x - c.x) / ax, dy = (p.y - c.y) / ay;
  const double r = std::sqrt(dx * dx + dy * dy);
  return (r - 1.0) * std::min(ax, ay);
}

double polyline_distance(Point2 p, std::span<const Point2> pts, bool closed) {
  double best = 1e300;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i + 1 < n + (closed ? 1 : 0); ++i)
    best = std::min(best, segment_distance(p, pts[i], pts[(i + 1) % n]));
  return best;
}

bool inside_polygon(Point2 p, std::span<const Point2> poly) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2 a = poly[i], b = poly[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

}  // namespace

SyntheticFaceParams random_face_params(Rng& rng) {
  SyntheticFaceParams p;
  p.face_half_width = rng.uniform(0.25, 0.29);
  p.face_half_height = rng.uniform(0.40, 0.44);
  p.eye_spacing = rng.uniform(0.125, 0.155);
  p.eye_height = rng.uniform(0.40, 0.44);
  p.eye_half_width = rng.uniform(0.052, 0.066);
  p.eye_half_height = rng.uniform(0.018, 0.026);
  p.brow_gap = rng.uniform(0.06, 0.08);
  p.nose_length = rng.uniform(0.16, 0.20);
  p.mouth_height = rng.uniform(0.70, 0.74);
  p.mouth_half_width = rng.uniform(0.085, 0.115);
  p.scale = rng.uniform(0.80, 0.86);
  p.rotation = rng.uniform(-0.04, 0.04);
  p.shift_x = rng.uniform(-2.0, 2.0);
  p.shift_y = rng.uniform(-2.0, 2.0);
  p.background = rng.uniform(0.2, 0.5);
  p.skin = rng.uniform(0.52, 0.72);
  p.iris = rng.uniform(0.08, 0.25);
  p.brow = rng.uniform(0.12, 0.3);
  p.lip = rng.uniform(0.3, 0.45);
  p.background_texture = random_grating(rng, 0.02, 0.05, 0.05);
  p.skin_texture = random_texture(rng, 0.10, 0.22, 0.02);
  for (auto& t : p.region_texture) t = random_texture(rng, 0.15, 0.3, 0.04);
  for (auto& marks : p.region_marks)
    for (Mark& m : marks) m = random_mark(rng, 0.45);
  for (Mark& m : p.skin_marks) m = random_mark(rng, 0.85);
  p.noise_seed = rng.next_u64();
  return p;
}

SyntheticFaceParams vary_capture(const SyntheticFaceParams& identity, Rng& rng) {
  SyntheticFaceParams p = identity;
  p.scale *= rng.uniform(0.98, 1.02);
  p.rotation += rng.uniform(-0.02, 0.02);
  p.shift_x += rng.uniform(-1.5, 1.5);
  p.shift_y += rng.uniform(-1.5, 1.5);
  p.background = std::clamp(p.background + rng.uniform(-0.05, 0.05), 0.05, 0.6);
  p.skin = std::clamp(p.skin + rng.uniform(-0.03, 0.03), 0.45, 0.8);
  p.noise_seed = rng.next_u64();
  return p;
}

LandmarkSet synthetic_landmarks(const SyntheticFaceParams& p, int width, int height) {
  std::vector<Point2> q(kLandmarkCount);
  const double ex = p.eye_spacing, ey = p.eye_height;
  const double ew = p.eye_half_width, eh = p.eye_half_height;
  for (int side = 0; side < 2; ++side) {
    // side 0: image-left eye (36-41), side 1: image-right eye (42-47)
    const double cx = side == 0 ? 0.5 - ex : 0.5 + ex;
    const double outer = side == 0 ? cx - ew : cx + ew;
    const double inner = side == 0 ? cx + ew : cx - ew;
    const double a = side == 0 ? cx - ew / 3 : cx + ew / 3;  // top/bottom points nearer the outer corner
    const double b = side == 0 ? cx + ew / 3 : cx - ew / 3;
    const int base = side == 0 ? lm68::kLeftEyeBegin : lm68::kRightEyeBegin;
    if (side == 0) {
      q[base + 0] = {outer, ey};
      q[base + 1] = {a, ey - eh};
      q[base + 2] = {b, ey - eh};
      q[base + 3] = {inner, ey};
      q[base + 4] = {b, ey + eh};
      q[base + 5] = {a, ey + eh};
    } else {
      q[base + 0] = {inner, ey};
      q[base + 1] = {b, ey - eh};
      q[base + 2] = {a, ey - eh};
      q[base + 3] = {outer, ey};
      q[base + 4] = {a, ey + eh};
      q[base + 5] = {b, ey + eh};
    }
    // brows: five points from outer to inner on the left, inner to outer on the right
    const double by = ey - eh - p.brow_gap;
    const double arch[5] = {0.018, 0.006, 0.0, 0.004, 0.012};
    for (int k = 0; k < 5; ++k) {
      const double t = -1.25 + 2.5 * k / 4.0;  // spans slightly wider than the eye
      if (side == 0)
        q[lm68::kLeftBrowBegin + k] = {cx + t * ew * 1.0, by + arch[k]};
      else
        q[lm68::kRightBrowBegin + k] = {cx - 1.25 * ew + 2.5 * ew * k / 4.0, by + arch[4 - k]};
    }
  }
  const double nose_top = ey, nose_tip = ey + p.nose_length;
  for (int k = 0; k < 4; ++k) q[lm68::kNoseBridgeBegin + k] = {0.5, nose_top + (nose_tip - nose_top) * k / 3.0};
  const double nose_w = 0.06;
  const double nb_dy[5] = {-0.015, -0.005, 0.0, -0.005, -0.015};
  for (int k = 0; k < 5; ++k)
    q[lm68::kNoseBaseBegin + k] = {0.5 - nose_w + nose_w * k / 2.0, nose_tip + 0.025 + nb_dy[k]};

  const double my = p.mouth_height, mw = p.mouth_half_width;
  const double top[7] = {0.0, -0.02, -0.03, -0.025, -0.03, -0.02, 0.0};   // 48..54
  const double bottom[5] = {0.03, 0.04, 0.045, 0.04, 0.03};              // 55..59 (right to left)
  for (int k = 0; k < 7; ++k) q[48 + k] = {0.5 - mw + 2 * mw * k / 6.0, my + top[k]};
  for (int k = 0; k < 5; ++k) q[55 + k] = {0.5 + mw * (2.0 / 3.0) - 2 * mw * k / 6.0, my + bottom[k]};
  const double iw = mw * 0.8;
  q[60] = {0.5 - iw, my};
  q[61] = {0.5 - iw / 2, my - 0.006};
  q[62] = {0.5, my - 0.006};
  q[63] = {0.5 + iw / 2, my - 0.006};
  q[64] = {0.5 + iw, my};
  q[65] = {0.5 + iw / 2, my + 0.01};
  q[66] = {0.5, my + 0.012};
  q[67] = {0.5 - iw / 2, my + 0.01};

  const double jaw_top = ey;
  const double chin = std::min(0.5 + p.face_half_height, 0.93);
  for (int i = 0; i < 17; ++i) {
    const double th = std::numbers::pi - i * std::numbers::pi / 16.0;
    q[i] = {0.5 + p.face_half_width * std::cos(th), jaw_top + (chin - jaw_top) * std::sin(th)};
  }

  // similarity transform about the image center, then into pixels
  const double cx = 0.5 * (width - 1), cy = 0.5 * (height - 1);
  const double c = std::cos(p.rotation), s = std::sin(p.rotation);
  std::vector<Point2> pts(kLandmarkCount);
  for (int i = 0; i < kLandmarkCount; ++i) {
    const double x = (q[i].x - 0.5) * (width - 1) * p.scale;
    const double y = (q[i].y - 0.5) * (height - 1) * p.scale;
    Point2 r{cx + c * x - s * y + p.shift_x, cy + s * x + c * y + p.shift_y};
    r.x = std::clamp(r.x, 0.0, width - 1.0);
    r.y = std::clamp(r.y, 0.0, height - 1.0);
    pts[i] = r;
  }
  return make_landmarks(std::move(pts), width, height);
}

SyntheticFace render_synthetic_face(const SyntheticFaceParams& p, int width, int height, int channels) {
  SyntheticFace face;
  face.landmarks = synthetic_landmarks(p, width, height);
  const LandmarkSet& lm = face.landmarks;
  const auto pts = std::span<const Point2>(lm.points);

  const Point2 le = left_eye_center(lm), re = right_eye_center(lm);
  const double iod = distance(le, re);
  const double eye_ax = distance(lm[36], lm[39]) * 0.5;
  const double eye_ay = std::max(1.0, distance(midpoint(lm[37], lm[38]), midpoint(lm[40], lm[41])) * 0.5);
  Point2 face_c = midpoint(midpoint(lm[0], lm[16]), lm[8]);
  face_c.y -= iod * 0.3;
  const double face_ax = distance(lm[0], lm[16]) * 0.5 * 1.04;
  const double face_ay = (lm[8].y - face_c.y) * 1.03;
  const Point2 nose_c = midpoint(lm[30], lm[33]);
  const double region_r[4] = {iod * 0.45, iod * 0.45, iod * 0.35, iod * 0.45};
  const Point2 brow_c[2] = {centroid(pts.subspan(17, 5)), centroid(pts.subspan(22, 5))};
  const Point2 region_c[4] = {midpoint(le, brow_c[0]), midpoint(re, brow_c[1]), nose_c, mouth_center(lm)};
  const std::vector<Point2> outer_lip(pts.begin() + 48, pts.begin() + 60);
  const std::vector<Point2> inner_lip(pts.begin() + 60, pts.begin() + 68);

  struct Placed {
    Point2 at;
    double radius, depth;
  };
  std::vector<Placed> marks;
  for (int r = 0; r < 4; ++r)
    for (const Mark& m : p.region_marks[r])
      marks.push_back({{region_c[r].x + m.u * iod, region_c[r].y + m.v * iod}, m.radius * iod, m.depth});
  for (const Mark& m : p.skin_marks) {
    const Point2 at{face_c.x + m.u * face_ax, face_c.y + m.v * face_ay};
    bool clear = true;
    for (int r = 0; r < 4; ++r) clear = clear && distance(at, region_c[r]) > region_r[r] * 1.2;
    if (clear) marks.push_back({at, m.radius * iod, m.depth});
  }

  Rng noise(p.noise_seed);
  const double tint[3] = {1.06, 1.0, 0.92};
  face.image = ImageBuffer(width, height, channels);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Point2 q{static_cast<double>(x), static_cast<double>(y)};
      double v = p.background + p.background_texture.at(x, y) + 0.1 * (static_cast<double>(y) / height - 0.5);
      const double face_w = smoothstep_edge(ellipse_sdf(q, face_c, face_ax, face_ay), 2.0);
      double skin = p.skin + p.skin_texture.at(x, y);
      for (int r = 0; r < 4; ++r) {
        const double d = distance(q, region_c[r]) / region_r[r];
        if (d < 1.0) {
          const double fall = 0.5 * (1.0 + std::cos(std::numbers::pi * d));
          skin += fall * p.region_texture[r].at(x, y);
        }
      }
      // eyes: sclera, iris
      for (const Point2 ec : {le, re}) {
        const double wsc = smoothstep_edge(ellipse_sdf(q, ec, eye_ax, eye_ay), 1.0);
        const double wir = smoothstep_edge(distance(q, ec) - eye_ay * 0.9, 1.0);
        skin = skin * (1 - wsc) + (0.85 * (1 - wir) + p.iris * wir) * wsc;
      }
      // brows
      for (int b = 0; b < 2; ++b) {
        const double d = polyline_distance(q, pts.subspan(17 + 5 * b, 5), false);
        const double wb = smoothstep_edge(d - iod * 0.06, 1.0);
        skin = skin * (1 - wb) + p.brow * wb;
      }
      // nostrils and nose shading
      for (int k : {32, 34}) {
        const double wn = smoothstep_edge(distance(q, lm[k]) - iod * 0.04, 1.0);
        skin = skin * (1 - wn) + 0.25 * wn;
      }
      skin -= 0.05 * smoothstep_edge(polyline_distance(q, pts.subspan(27, 4), false) - 1.0, 1.5);
      // lips
      if (inside_polygon(q, outer_lip)) skin = p.lip + 0.5 * p.region_texture[3].at(x, y);
      if (inside_polygon(q, inner_lip)) skin = 0.12;
      for (const Placed& m : marks) skin -= mark_shade(q, m.at, m.radius, m.depth);
      v = v * (1 - face_w) + skin * face_w;
      v += p.noise_amplitude * (noise.uniform() - 0.5) * 2.0;
      for (int c = 0; c < channels; ++c)
        face.image.at(x, y, c) = std::clamp(channels == 3 ? v * tint[c] : v, 0.0, 1.0);
    }
  }
  return face;
}

}  // namespace morphkit
