#pragma once

#include <array>
#include <cstdint>

#include "morphkit/image.hpp"
#include "morphkit/landmarks.hpp"

namespace morphkit {

/// Oriented sinusoid used as an identity-specific texture.
struct Grating {
  double frequency = 0.1;  // cycles per pixel
  double orientation = 0.0;
  double phase = 0.0;
  double amplitude = 0.05;

  double at(double x, double y) const;
};

/// Sum of randomly oriented gratings: a stationary, roughly isotropic texture whose statistics do
/// not change under small smooth warps.
struct Texture {
  std::array<Grating, 6> waves;
  double at(double x, double y) const;
};

/// Small dark blemish placed relative to a facial anchor; offsets and radius in units of the
/// inter-ocular distance.
struct Mark {
  double u = 0.0, v = 0.0;
  double radius = 0.05;
  double depth = 0.0;
};

/// Parameters of a procedural face-like image. Geometry is expressed in fractions of the image
/// size; textures are in pixels.
struct SyntheticFaceParams {
  double face_half_width = 0.27;
  double face_half_height = 0.42;
  double eye_spacing = 0.14;  // half distance between eye centers
  double eye_height = 0.42;
  double eye_half_width = 0.06;
  double eye_half_height = 0.022;
  double brow_gap = 0.07;
  double nose_length = 0.18;
  double mouth_height = 0.72;
  double mouth_half_width = 0.10;
  double scale = 0.83;
  double rotation = 0.0;  // radians
  double shift_x = 0.0, shift_y = 0.0;  // pixels

  double background = 0.35;
  double skin = 0.62;
  double iris = 0.15;
  double brow = 0.2;
  double lip = 0.38;
  Grating background_texture;
  Texture skin_texture;
  std::array<Texture, 4> region_texture;  // left eye, right eye, nose, mouth
  std::array<std::array<Mark, 8>, 4> region_marks;  // around each region center
  std::array<Mark, 12> skin_marks;  // u, v in face-ellipse units; skipped inside regions
  std::uint64_t noise_seed = 0;
  double noise_amplitude = 0.0;  // uniform per-pixel noise
};

struct SyntheticFace {
  ImageBuffer image;
  LandmarkSet landmarks;
};

class Rng;

/// Draws a random identity.
SyntheticFaceParams random_face_params(Rng& rng);
/// Small pose/illumination perturbation of an identity (a second capture of the same person).
SyntheticFaceParams vary_capture(const SyntheticFaceParams& identity, Rng& rng);

LandmarkSet synthetic_landmarks(const SyntheticFaceParams& p, int width, int height);
SyntheticFace render_synthetic_face(const SyntheticFaceParams& p, int width, int height, int channels = 1);

}  // namespace morphkit
