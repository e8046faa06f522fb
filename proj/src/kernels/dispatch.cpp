#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace rdm::kernels {

const KernelTable& scalar() noexcept {
  static const KernelTable table{
      "scalar",
      detail::interval_mask_scalar,
      detail::popcount_scalar,
      detail::and_count_scalar,
      detail::or_count_scalar,
      detail::andnot_count_scalar,
      detail::and_inplace_scalar,
      detail::or_inplace_scalar,
  };
  return table;
}

const KernelTable* avx2() noexcept {
#if defined(RDM_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return supported ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& chosen = []() -> const KernelTable& {
    if (const char* env = std::getenv("RDM_SIMD"); env && std::string_view(env) == "scalar") {
      return scalar();
    }
    if (const KernelTable* t = avx2()) return *t;
    return scalar();
  }();
  return chosen;
}

}  // namespace rdm::kernels
