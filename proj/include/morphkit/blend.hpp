#pragma once

#include <cstdint>
#include <vector>

#include "morphkit/image.hpp"
#include "morphkit/landmarks.hpp"
#include "morphkit/polar.hpp"
#include "morphkit/warp.hpp"

namespace morphkit {

/// Inner and outer ellipse sharing a center. Pixels with inner radius <= 1 belong to the inner
/// face, pixels with outer radius >= 1 to the outer part, the rest form the annulus.
struct TransitionZone {
  Ellipse inner;
  Ellipse outer;
  int width = 0;
  int height = 0;

  enum class Side : std::uint8_t { Inner, Annulus, Outer };
  Side classify(Point2 p) const;
  std::vector<Side> mask() const;  // row-major, image resolution
  double outer_ratio() const { return outer.semi_axis_x / inner.semi_axis_x; }
};

struct TransitionParams {
  double inner_margin = 1.05;
  double outer_factor = 1.35;
};

TransitionZone transition_ellipses(const LandmarkSet& lm, const TransitionParams& params = {});

/// out = alpha a + (1 - alpha) b, clamped to [0, 1]; alpha 0 and 1 return the operands exactly.
ImageBuffer alpha_blend(const ImageBuffer& a, const ImageBuffer& b, double alpha);

struct PoissonOptions {
  double tolerance = 1e-12;  // RMS residual
  int iteration_factor = 10;  // cap = factor x unknowns
};

struct PoissonStats {
  int unknowns = 0;
  int iterations = 0;
  double residual_rms = 0.0;
};

/// Solves the 5-point Poisson equation on the annulus with guidance gradients from `low_inner`
/// and Dirichlet values from `low_inner` (inner side) and `low_outer` (outer side).
ImageBuffer poisson_blend_low(const ImageBuffer& low_inner, const ImageBuffer& low_outer,
                              const TransitionZone& zone, const PoissonOptions& options = {},
                              PoissonStats* stats = nullptr);

struct PolarDims {
  int radial = 0;   // 0 selects about one sample per pixel of annulus width
  int angular = 0;  // 0 selects about one sample per pixel of outer circumference
};

/// Per angular column, cut[j] is the last radial index taken from the inner image.
struct SeamCut {
  std::vector<int> cut;
  double cost = 0.0;
  double flow = 0.0;
  int radial_samples = 0;
  int angular_samples = 0;
};

/// Per-node seam costs on a radial x angular grid (radial-major).
struct SeamCostGrid {
  int radial = 0;
  int angular = 0;
  std::vector<double> node_cost;

  double at(int i, int j) const { return node_cost[static_cast<std::size_t>(i) * angular + j]; }
};

/// Node cost: magnitude of the forward-difference gradient of (inner - outer), summed over
/// channels in quadrature; the angular difference wraps around.
SeamCostGrid seam_costs(const PolarPatch& inner, const PolarPatch& outer);

/// Minimum cut on the cyclic grid: source ring 0, sink ring radial-1, edge cost c(p) + c(q).
/// `max_step` >= 0 additionally bounds |cut[j] - cut[j+1]|.
SeamCut min_cut_seam(const SeamCostGrid& costs, int max_step = -1);
/// Cost of an explicit cut under the same edge model.
double seam_cost(const SeamCostGrid& costs, const std::vector<int>& cut);

PolarGeometry seam_geometry(const TransitionZone& zone, PolarDims dims);
SeamCut seam_cut_high(const SignedImage& high_inner, const SignedImage& high_outer,
                      const TransitionZone& zone, PolarDims dims = {});
/// Pixelwise choice: true where the seam assigns the pixel to the inner image.
std::vector<char> seam_inner_mask(const TransitionZone& zone, const SeamCut& seam);

enum class OuterSource { A, B };

struct MorphOptions {
  double alpha = 0.5;
  OuterSource outer_source = OuterSource::A;
  double sigma_iod_fraction = 0.01;  // frequency-split sigma relative to the inter-ocular distance
  TransitionParams transition;
  PolarDims polar;
  PoissonOptions poisson;
  FieldMorphParams field;
};

struct MorphResult {
  ImageBuffer image;
  AlignedPair aligned;
  ImageBuffer blended;
  TransitionZone zone;
  SeamCut seam;
  PoissonStats poisson;
};

MorphResult compose_morph_detailed(const ImageBuffer& img_a, const ImageBuffer& img_b,
                                   const LandmarkSet& lm_a, const LandmarkSet& lm_b,
                                   WarpMethod method, const MorphOptions& options = {});
ImageBuffer compose_morph(const ImageBuffer& img_a, const ImageBuffer& img_b, const LandmarkSet& lm_a,
                          const LandmarkSet& lm_b, WarpMethod method, const MorphOptions& options = {});

}  // namespace morphkit
