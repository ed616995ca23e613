#include <cstdlib>
#include <string_view>

#include "kernels_internal.hpp"

namespace pgm::raster {

namespace {

const KernelTable kScalarKernels = {Isa::scalar, detail::fill_edges_row_scalar, detail::fill_annulus_row_scalar,
                                    detail::sum_bytes_scalar, detail::count_diff_scalar};

bool force_scalar() {
  const char* env = std::getenv("PGM_FORCE_SCALAR");
  return env != nullptr && std::string_view(env) != "" && std::string_view(env) != "0";
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

const KernelTable& scalar_kernels() { return kScalarKernels; }

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::scalar: return &kScalarKernels;
    case Isa::avx2:
#if defined(PGM_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2")) return &detail::kAvx2Kernels;
#endif
      return nullptr;
    case Isa::neon:
#if defined(PGM_HAVE_NEON)
      return &detail::kNeonKernels;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active_kernels() {
  static const KernelTable* selected = [] {
    if (force_scalar()) return &kScalarKernels;
    for (auto isa : {Isa::avx2, Isa::neon})
      if (const auto* k = kernels_for(isa)) return k;
    return &kScalarKernels;
  }();
  return *selected;
}

}  // namespace pgm::raster
