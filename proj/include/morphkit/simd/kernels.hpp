#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace morphkit::simd {

enum class Isa { Scalar, Avx2, Neon };

/// Data-parallel inner loops. Every ISA variant of axpy and the lerps is bit-identical to the
/// scalar reference (all use a single fused multiply-add per element); dot products may differ
/// in the last bits because of the reduction order.
struct Kernels {
  Isa isa;
  /// sum a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// y[i] = fma(alpha, x[i], y[i])
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  /// out[i] = fma(t, a[i] - b[i], b[i])
  void (*lerp)(const double* a, const double* b, double t, double* out, std::size_t n);
  /// out[i] = fma(w[i], a[i] - b[i], b[i])
  void (*lerp_weighted)(const double* a, const double* b, const double* w, double* out,
                        std::size_t n);
};

std::string_view isa_name(Isa isa) noexcept;

/// Variants compiled into this binary and supported by the running CPU; scalar first.
std::vector<Isa> available_isas();
const Kernels& kernels_for(Isa isa);

/// The table used by the library. Picked once from CPU features; the MORPHKIT_SIMD environment
/// variable ("scalar", "avx2", "neon") overrides the choice when that variant is available.
const Kernels& active();
void set_active(Isa isa);

inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}

}  // namespace morphkit::simd
