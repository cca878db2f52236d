#pragma once

#include <vector>

#include "morphkit/image.hpp"

namespace morphkit {

/// Resampling of an (elliptical) annulus onto a radius x angle grid.
///
/// Grid row i is the radius r_i = r_min + i (r_max - r_min) / (radial_samples - 1), column j the
/// angle 2 pi j / angular_samples. The sample position is
/// center + r (scale_x cos t, scale_y sin t), so unit scales give a circular annulus and the
/// semi-axes of an ellipse give a family of concentric, similar ellipses.
/// The angular axis is cyclic.
struct PolarPatch {
  Point2 center;
  double r_min = 0.0;
  double r_max = 1.0;
  double scale_x = 1.0;
  double scale_y = 1.0;
  int radial_samples = 0;
  int angular_samples = 0;
  int channels = 1;
  std::vector<double> data;  // radial-major, channels interleaved

  double& at(int i, int j, int c = 0) {
    return data[(static_cast<std::size_t>(i) * angular_samples + j) * channels + c];
  }
  double at(int i, int j, int c = 0) const {
    return data[(static_cast<std::size_t>(i) * angular_samples + j) * channels + c];
  }

  Point2 position(int i, int j) const;
  double radius(int i) const;
  /// Normalized radius of p in this patch's frame (r_min..r_max inside the annulus).
  double radius_of(Point2 p) const;
  /// Fractional (radial, angular) grid coordinates of p; angular in [0, angular_samples).
  Point2 grid_coords(Point2 p) const;
};

struct PolarGeometry {
  Point2 center;
  double r_min = 0.0;
  double r_max = 1.0;
  double scale_x = 1.0;
  double scale_y = 1.0;
  int radial_samples = 2;
  int angular_samples = 8;
};

PolarPatch to_polar(const ImageBuffer& img, const PolarGeometry& geometry);
PolarPatch to_polar(const ImageBuffer& img, Point2 center, double r_min, double r_max, int nr,
                    int ntheta);

/// Writes the patch back into a copy of target; only pixels inside the annulus change.
ImageBuffer from_polar(const PolarPatch& patch, const ImageBuffer& target);

/// Bilinear lookup in the patch, cyclic along angle and clamped along radius.
double sample_polar(const PolarPatch& patch, double radial, double angular, int channel);

}  // namespace morphkit
