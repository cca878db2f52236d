#include <atomic>
#include <cstdlib>
#include <string>

#include "morphkit/error.hpp"
#include "variants.hpp"

namespace morphkit::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(MORPHKIT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(MORPHKIT_HAVE_NEON)
      return true;  // baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

const Kernels* pick_default() {
  std::vector<Isa> isas = available_isas();
  Isa chosen = isas.back();
  if (const char* env = std::getenv("MORPHKIT_SIMD")) {
    for (Isa isa : isas)
      if (isa_name(isa) == env) chosen = isa;
  }
  return &kernels_for(chosen);
}

std::atomic<const Kernels*>& active_slot() {
  static std::atomic<const Kernels*> slot{pick_default()};
  return slot;
}

}  // namespace

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  for (Isa isa : {Isa::Avx2, Isa::Neon})
    if (cpu_supports(isa)) out.push_back(isa);
  return out;
}

const Kernels& kernels_for(Isa isa) {
  require(cpu_supports(isa), Errc::InvalidArgument,
          "SIMD variant " + std::string(isa_name(isa)) + " is not available");
  switch (isa) {
#if defined(MORPHKIT_HAVE_AVX2)
    case Isa::Avx2: return detail::avx2_kernels();
#endif
#if defined(MORPHKIT_HAVE_NEON)
    case Isa::Neon: return detail::neon_kernels();
#endif
    default: return detail::scalar_kernels();
  }
}

const Kernels& active() { return *active_slot().load(std::memory_order_acquire); }

void set_active(Isa isa) { active_slot().store(&kernels_for(isa), std::memory_order_release); }

}  // namespace morphkit::simd
