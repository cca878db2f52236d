#pragma once

#include "morphkit/simd/kernels.hpp"

namespace morphkit::simd::detail {

const Kernels& scalar_kernels();
#if defined(MORPHKIT_HAVE_AVX2)
const Kernels& avx2_kernels();
#endif
#if defined(MORPHKIT_HAVE_NEON)
const Kernels& neon_kernels();
#endif

}  // namespace morphkit::simd::detail
