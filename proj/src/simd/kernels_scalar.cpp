#include <cmath>

#include "variants.hpp"

namespace morphkit::simd::detail {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(alpha, x[i], y[i]);
}

void lerp_scalar(const double* a, const double* b, double t, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fma(t, a[i] - b[i], b[i]);
}

void lerp_weighted_scalar(const double* a, const double* b, const double* w, double* out,
                          std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::fma(w[i], a[i] - b[i], b[i]);
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::Scalar, dot_scalar, axpy_scalar, lerp_scalar, lerp_weighted_scalar};
  return k;
}

}  // namespace morphkit::simd::detail
