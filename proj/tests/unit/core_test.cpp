#include <cmath>
#include <fstream>

#include "morphkit/filter.hpp"
#include "morphkit/png_io.hpp"
#include "morphkit/polar.hpp"
#include "support.hpp"

using namespace morphkit;

TEST_CASE("png: full-scale white and mid-gray round trip") {
  testing::TempDir dir;
  ImageBuffer white(2, 2, 1, 1.0);
  save_image(white, dir / "w.png");
  const ImageBuffer w = load_image(dir / "w.png");
  CHECK(w.width() == 2);
  CHECK(w.height() == 2);
  for (double v : w.data()) CHECK(v == 1.0);

  ImageBuffer gray(1, 1, 1, 128.0 / 255.0);
  save_image(gray, dir / "g.png");
  CHECK(load_image(dir / "g.png").at(0, 0) == doctest::Approx(0.50196).epsilon(1e-5));

  ImageBuffer rgb = testing::random_image(5, 3, 3, 1);
  save_image(rgb, dir / "c.png");
  const ImageBuffer back = load_image(dir / "c.png");
  CHECK(back.channels() == 3);
  CHECK(max_abs_difference(rgb, back) <= 0.5 / 255.0 + 1e-12);
}

TEST_CASE("png: quantization rounds half up") {
  CHECK(quantize8(0.0) == 0);
  CHECK(quantize8(1.0) == 255);
  CHECK(quantize8(0.5 / 255.0) == 1);
  CHECK(quantize8(-3.0) == 0);
  CHECK(quantize8(7.0) == 255);
}

TEST_CASE("png: error paths") {
  testing::TempDir dir;
  CHECK_ERRC(load_image(dir / "absent.png"), Errc::MissingFile);
  {
    std::ofstream(dir / "text.png") << "definitely not an image";
  }
  CHECK_ERRC(load_image(dir / "text.png"), Errc::UnsupportedFormat);

  save_image(testing::random_image(32, 32, 1, 2), dir / "full.png");
  std::ifstream in(dir / "full.png", std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  std::ofstream(dir / "cut.png", std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  CHECK_ERRC(load_image(dir / "cut.png"), Errc::CorruptData);
}

TEST_CASE("split_frequency: constant image has no high band") {
  ImageBuffer c(9, 7, 3, 0.37);
  const FrequencyBands b = split_frequency(c, 1.7);
  for (double v : b.low.data()) CHECK(v == doctest::Approx(0.37).epsilon(1e-14));
  for (double v : b.high.data()) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("split_frequency: exact additive decomposition") {
  const ImageBuffer img = testing::random_image(23, 17, 3, 3);
  for (double sigma : {0.3, 1.0, 2.5}) {
    const FrequencyBands b = split_frequency(img, sigma);
    double worst = 0.0;
    for (std::size_t i = 0; i < img.size(); ++i)
      worst = std::max(worst, std::abs(img.data()[i] - (b.low.data()[i] + b.high.data()[i])));
    CHECK(worst < 1e-15);
  }
}

TEST_CASE("split_frequency: low band matches a dense 2-D convolution") {
  const ImageBuffer img = testing::random_image(16, 16, 1, 4);
  const double sigma = 2.0;
  const int r = static_cast<int>(std::ceil(3 * sigma));
  double z = 0.0;
  for (int i = -r; i <= r; ++i)
    for (int j = -r; j <= r; ++j) z += std::exp(-(i * i + j * j) / (2 * sigma * sigma));
  const FrequencyBands b = split_frequency(img, sigma);
  double worst = 0.0;
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) {
      double s = 0.0;
      for (int i = -r; i <= r; ++i)
        for (int j = -r; j <= r; ++j) s += std::exp(-(i * i + j * j) / (2 * sigma * sigma)) * img.clamped(x + i, y + j);
      worst = std::max(worst, std::abs(s / z - b.low.at(x, y)));
    }
  CHECK(worst < 1e-6);
}

TEST_CASE("split_frequency: sigma must be positive") {
  const ImageBuffer img(4, 4, 1, 0.5);
  CHECK_ERRC(split_frequency(img, 0.0), Errc::NonPositiveSigma);
  CHECK_ERRC(split_frequency(img, -1.0), Errc::NonPositiveSigma);
}

TEST_CASE("polar: constant image stays constant") {
  ImageBuffer img(40, 40, 1, 0.42);
  const PolarPatch p = to_polar(img, {20, 20}, 5, 15, 8, 32);
  for (double v : p.data) CHECK(v == doctest::Approx(0.42));
  const ImageBuffer back = from_polar(p, img);
  CHECK(max_abs_difference(back, img) < 1e-12);
}

TEST_CASE("polar: radially symmetric image is constant along angle") {
  const Point2 c{31.5, 31.5};
  ImageBuffer img(64, 64, 1);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) img.at(x, y) = 0.5 + 0.4 * std::sin(distance({double(x), double(y)}, c) / 4.0);
  const PolarPatch p = to_polar(img, c, 4, 28, 16, 90);
  for (int i = 0; i < p.radial_samples; ++i) {
    double lo = 1e9, hi = -1e9;
    for (int j = 0; j < p.angular_samples; ++j) {
      lo = std::min(lo, p.at(i, j));
      hi = std::max(hi, p.at(i, j));
    }
    CHECK(hi - lo < 0.02);
  }
}

TEST_CASE("polar: round trip inside the annulus, untouched outside") {
  ImageBuffer img(64, 64, 1);
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) img.at(x, y) = 0.1 + 0.8 * (x + 0.5 * y) / 96.0;
  const Point2 c{32, 32};
  const PolarPatch p = to_polar(img, c, 6, 26, 32, 128);
  ImageBuffer marked = img;
  for (double& v : marked.data()) v = 1.0 - v;
  const ImageBuffer back = from_polar(p, marked);
  double inside = 0.0;
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x) {
      const double r = distance({double(x), double(y)}, c);
      if (r >= 6 && r <= 26)
        inside = std::max(inside, std::abs(back.at(x, y) - img.at(x, y)));
      else if (r < 5 || r > 27)
        CHECK(back.at(x, y) == marked.at(x, y));
    }
  CHECK(inside < 0.02);
}

TEST_CASE("polar: angular axis is cyclic") {
  const ImageBuffer img = testing::random_image(40, 40, 1, 5);
  const PolarPatch p = to_polar(img, {20, 20}, 3, 12, 6, 24);
  CHECK(sample_polar(p, 2.0, 24.0, 0) == doctest::Approx(p.at(2, 0)));
  CHECK(sample_polar(p, 2.0, 23.5, 0) == doctest::Approx(0.5 * (p.at(2, 23) + p.at(2, 0))));
}

TEST_CASE("polar: error paths") {
  const ImageBuffer img(30, 30, 1);
  CHECK_ERRC(to_polar(img, {15, 15}, 8, 8, 4, 16), Errc::DegenerateRadii);
  CHECK_ERRC(to_polar(img, {15, 15}, 9, 4, 4, 16), Errc::DegenerateRadii);
  CHECK_ERRC(to_polar(img, {15, 15}, 2, 20, 4, 16), Errc::AnnulusOutOfBounds);
}

TEST_CASE("rng: derived seeds and streams are reproducible") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  Rng a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng r(11);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
}

TEST_CASE("image: grayscale, mirror, clamped reads") {
  ImageBuffer img(3, 2, 3);
  img.at(0, 0, 0) = 1.0;
  img.at(2, 1, 2) = 0.5;
  const ImageBuffer g = to_grayscale(img);
  CHECK(g.channels() == 1);
  const ImageBuffer m = mirror_horizontal(img);
  CHECK(m.at(2, 0, 0) == 1.0);
  CHECK(m.at(0, 1, 2) == 0.5);
  CHECK(img.clamped(-5, -5, 0) == 1.0);
  CHECK(img.clamped(9, 9, 2) == 0.5);
  ImageBuffer wild(2, 1, 1, std::vector<double>{-0.2, 1.3});
  wild.clamp01();
  CHECK(wild.at(0, 0) == 0.0);
  CHECK(wild.at(1, 0) == 1.0);
}
