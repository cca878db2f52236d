// Compiled with -mavx2 -mfma; only reached through the dispatch table after a CPU check.
// Keep standard-library templates out of this file so no AVX2 code leaks into shared
// inline instantiations.
#include <immintrin.h>

#include "variants.hpp"

namespace morphkit::simd::detail {

namespace {

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  acc0 = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc0);
  __m128d hi = _mm256_extractf128_pd(acc0, 1);
  lo = _mm_add_pd(lo, hi);
  double s = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) {
    __m128d r = _mm_fmadd_sd(_mm_set_sd(alpha), _mm_set_sd(x[i]), _mm_set_sd(y[i]));
    y[i] = _mm_cvtsd_f64(r);
  }
}

void lerp_avx2(const double* a, const double* b, double t, double* out, std::size_t n) {
  const __m256d vt = _mm256_set1_pd(t);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), vb);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vt, d, vb));
  }
  for (; i < n; ++i) {
    __m128d r = _mm_fmadd_sd(_mm_set_sd(t), _mm_set_sd(a[i] - b[i]), _mm_set_sd(b[i]));
    out[i] = _mm_cvtsd_f64(r);
  }
}

void lerp_weighted_avx2(const double* a, const double* b, const double* w, double* out,
                        std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vb = _mm256_loadu_pd(b + i);
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), vb);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(_mm256_loadu_pd(w + i), d, vb));
  }
  for (; i < n; ++i) {
    __m128d r = _mm_fmadd_sd(_mm_set_sd(w[i]), _mm_set_sd(a[i] - b[i]), _mm_set_sd(b[i]));
    out[i] = _mm_cvtsd_f64(r);
  }
}

}  // namespace

const Kernels& avx2_kernels() {
  static const Kernels k{Isa::Avx2, dot_avx2, axpy_avx2, lerp_avx2, lerp_weighted_avx2};
  return k;
}

}  // namespace morphkit::simd::detail
