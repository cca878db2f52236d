#include "morphkit/polar.hpp"

#include <cmath>
#include <numbers>

#include "morphkit/error.hpp"

namespace morphkit {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double PolarPatch::radius(int i) const {
  if (radial_samples == 1) return r_min;
  return r_min + (r_max - r_min) * i / (radial_samples - 1);
}

Point2 PolarPatch::position(int i, int j) const {
  const double r = radius(i);
  const double t = kTwoPi * j / angular_samples;
  return {center.x + r * scale_x * std::cos(t), center.y + r * scale_y * std::sin(t)};
}

double PolarPatch::radius_of(Point2 p) const {
  const double u = (p.x - center.x) / scale_x;
  const double v = (p.y - center.y) / scale_y;
  return std::sqrt(u * u + v * v);
}

Point2 PolarPatch::grid_coords(Point2 p) const {
  const double u = (p.x - center.x) / scale_x;
  const double v = (p.y - center.y) / scale_y;
  double t = std::atan2(v, u);
  if (t < 0.0) t += kTwoPi;
  double a = t / kTwoPi * angular_samples;
  if (a >= angular_samples) a -= angular_samples;
  const double r = std::sqrt(u * u + v * v);
  return {(r - r_min) / (r_max - r_min) * (radial_samples - 1), a};
}

double sample_polar(const PolarPatch& patch, double radial, double angular, int channel) {
  const double rmax = patch.radial_samples - 1;
  radial = radial < 0.0 ? 0.0 : (radial > rmax ? rmax : radial);
  const int i0 = static_cast<int>(std::floor(radial));
  const int i1 = std::min(i0 + 1, patch.radial_samples - 1);
  const double fi = radial - i0;
  const double af = std::floor(angular);
  const double fj = angular - af;
  int j0 = static_cast<int>(af) % patch.angular_samples;
  if (j0 < 0) j0 += patch.angular_samples;
  const int j1 = (j0 + 1) % patch.angular_samples;
  const double top = patch.at(i0, j0, channel) * (1.0 - fj) + patch.at(i0, j1, channel) * fj;
  const double bottom = patch.at(i1, j0, channel) * (1.0 - fj) + patch.at(i1, j1, channel) * fj;
  return top * (1.0 - fi) + bottom * fi;
}

PolarPatch to_polar(const ImageBuffer& img, const PolarGeometry& g) {
  require(g.r_min < g.r_max && g.r_min >= 0.0, Errc::DegenerateRadii, "polar patch needs r_min < r_max");
  require(g.radial_samples >= 2 && g.angular_samples >= 3, Errc::InvalidArgument,
          "polar patch needs at least 2 radial and 3 angular samples");
  require(g.scale_x > 0.0 && g.scale_y > 0.0, Errc::InvalidArgument, "polar scales must be positive");
  const double ex = g.r_max * g.scale_x, ey = g.r_max * g.scale_y;
  const double eps = 1e-9;
  require(g.center.x - ex >= -eps && g.center.x + ex <= img.width() - 1 + eps &&
              g.center.y - ey >= -eps && g.center.y + ey <= img.height() - 1 + eps,
          Errc::AnnulusOutOfBounds, "annulus extends beyond the image");

  PolarPatch patch;
  patch.center = g.center;
  patch.r_min = g.r_min;
  patch.r_max = g.r_max;
  patch.scale_x = g.scale_x;
  patch.scale_y = g.scale_y;
  patch.radial_samples = g.radial_samples;
  patch.angular_samples = g.angular_samples;
  patch.channels = img.channels();
  patch.data.resize(static_cast<std::size_t>(g.radial_samples) * g.angular_samples * img.channels());
  for (int i = 0; i < g.radial_samples; ++i)
    for (int j = 0; j < g.angular_samples; ++j) {
      const Point2 p = patch.position(i, j);
      for (int c = 0; c < img.channels(); ++c) patch.at(i, j, c) = sample_bilinear(img, p, c);
    }
  return patch;
}

PolarPatch to_polar(const ImageBuffer& img, Point2 center, double r_min, double r_max, int nr,
                    int ntheta) {
  return to_polar(img, PolarGeometry{center, r_min, r_max, 1.0, 1.0, nr, ntheta});
}

ImageBuffer from_polar(const PolarPatch& patch, const ImageBuffer& target) {
  require(patch.channels == target.channels(), Errc::DimensionMismatch,
          "polar patch and target differ in channel count");
  ImageBuffer out = target;
  for (int y = 0; y < out.height(); ++y)
    for (int x = 0; x < out.width(); ++x) {
      const Point2 p{static_cast<double>(x), static_cast<double>(y)};
      const double r = patch.radius_of(p);
      if (r < patch.r_min || r > patch.r_max) continue;
      const Point2 g = patch.grid_coords(p);
      for (int c = 0; c < out.channels(); ++c) out.at(x, y, c) = sample_polar(patch, g.x, g.y, c);
    }
  return out;
}

}  // namespace morphkit
