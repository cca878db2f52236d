#include <arm_neon.h>

#include "variants.hpp"

namespace morphkit::simd::detail {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] = vfmad_f64(y[i], alpha, x[i]);
}

void lerp_neon(const double* a, const double* b, double t, double* out, std::size_t n) {
  const float64x2_t vt = vdupq_n_f64(t);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vb = vld1q_f64(b + i);
    vst1q_f64(out + i, vfmaq_f64(vb, vt, vsubq_f64(vld1q_f64(a + i), vb)));
  }
  for (; i < n; ++i) out[i] = vfmad_f64(b[i], t, a[i] - b[i]);
}

void lerp_weighted_neon(const double* a, const double* b, const double* w, double* out,
                        std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vb = vld1q_f64(b + i);
    vst1q_f64(out + i, vfmaq_f64(vb, vld1q_f64(w + i), vsubq_f64(vld1q_f64(a + i), vb)));
  }
  for (; i < n; ++i) out[i] = vfmad_f64(b[i], w[i], a[i] - b[i]);
}

}  // namespace

const Kernels& neon_kernels() {
  static const Kernels k{Isa::Neon, dot_neon, axpy_neon, lerp_neon, lerp_weighted_neon};
  return k;
}

}  // namespace morphkit::simd::detail
