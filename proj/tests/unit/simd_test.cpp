#include <cmath>
#include <cstdlib>

#include "morphkit/filter.hpp"
#include "morphkit/nn.hpp"
#include "morphkit/simd/kernels.hpp"
#include "support.hpp"

using namespace morphkit;

namespace {

std::vector<double> random_vector(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

struct ActiveGuard {
  simd::Isa saved = simd::active().isa;
  ~ActiveGuard() { simd::set_active(saved); }
};

}  // namespace

TEST_CASE("scalar kernels are always available") {
  const auto isas = simd::available_isas();
  REQUIRE_FALSE(isas.empty());
  CHECK(isas.front() == simd::Isa::Scalar);
  CHECK(simd::kernels_for(simd::Isa::Scalar).isa == simd::Isa::Scalar);
  CHECK(simd::isa_name(simd::Isa::Avx2) == "avx2");
  MESSAGE("active kernels: " << simd::isa_name(simd::active().isa));
}

TEST_CASE("every variant matches the scalar reference") {
  Rng rng(1);
  const simd::Kernels& ref = simd::kernels_for(simd::Isa::Scalar);
  for (simd::Isa isa : simd::available_isas()) {
    const simd::Kernels& k = simd::kernels_for(isa);
    INFO(simd::isa_name(isa));
    for (std::size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 31, 64, 100, 1001}) {
      const auto a = random_vector(n, rng), b = random_vector(n, rng), w = random_vector(n, rng);
      double exact = 0.0, mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        exact += static_cast<long double>(a[i]) * b[i];
        mag += std::abs(a[i] * b[i]);
      }
      CHECK(std::abs(k.dot(a.data(), b.data(), n) - ref.dot(a.data(), b.data(), n)) <= 1e-14 * (mag + 1));
      CHECK(std::abs(k.dot(a.data(), b.data(), n) - exact) <= 1e-14 * (mag + 1));

      auto y1 = b, y2 = b;
      k.axpy(0.37, a.data(), y1.data(), n);
      ref.axpy(0.37, a.data(), y2.data(), n);
      CHECK(y1 == y2);
      for (std::size_t i = 0; i < n; ++i) CHECK(y2[i] == std::fma(0.37, a[i], b[i]));

      std::vector<double> o1(n), o2(n);
      k.lerp(a.data(), b.data(), 0.3, o1.data(), n);
      ref.lerp(a.data(), b.data(), 0.3, o2.data(), n);
      CHECK(o1 == o2);
      for (std::size_t i = 0; i < n; ++i) CHECK(o2[i] == std::fma(0.3, a[i] - b[i], b[i]));
      k.lerp_weighted(a.data(), b.data(), w.data(), o1.data(), n);
      ref.lerp_weighted(a.data(), b.data(), w.data(), o2.data(), n);
      CHECK(o1 == o2);
      for (std::size_t i = 0; i < n; ++i) CHECK(o2[i] == std::fma(w[i], a[i] - b[i], b[i]));
    }
  }
}

TEST_CASE("library results agree across kernel variants") {
  ActiveGuard guard;
  const ImageBuffer img = testing::random_image(37, 29, 3, 2);
  nn::Network net = nn::Network::desk_scale(16, 3, nn::Head::Softmax2, 4, 8, 2);
  net.init(3);
  const nn::Tensor x = nn::image_to_tensor(img, 2, 2, 16, 16);
  simd::set_active(simd::Isa::Scalar);
  const ImageBuffer blur_ref = gaussian_blur(img, 1.7);
  const nn::Tensor out_ref = net.forward(x);
  for (simd::Isa isa : simd::available_isas()) {
    simd::set_active(isa);
    INFO(simd::isa_name(isa));
    CHECK(gaussian_blur(img, 1.7) == blur_ref);
    const nn::Tensor out = net.forward(x);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out.values[i] - out_ref.values[i]) < 1e-12);
  }
}
