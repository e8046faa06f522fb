#include "kernels_impl.hpp"

#include <bit>

namespace rdm::kernels::detail {

void interval_mask_scalar(const double* values, std::size_t n, double lo, double hi,
                          std::uint64_t* out) {
  const std::size_t words = (n + 63) / 64;
  for (std::size_t w = 0; w < words; ++w) {
    const std::size_t base = w * 64;
    const std::size_t end = base + 64 < n ? base + 64 : n;
    std::uint64_t bits = 0;
    for (std::size_t i = base; i < end; ++i) {
      const double v = values[i];
      bits |= static_cast<std::uint64_t>(lo <= v && v <= hi) << (i - base);
    }
    out[w] = bits;
  }
}

std::size_t popcount_scalar(const std::uint64_t* a, std::size_t words) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < words; ++i) c += std::popcount(a[i]);
  return c;
}

std::size_t and_count_scalar(const std::uint64_t* a, const std::uint64_t* b,
                             std::size_t words) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < words; ++i) c += std::popcount(a[i] & b[i]);
  return c;
}

std::size_t or_count_scalar(const std::uint64_t* a, const std::uint64_t* b,
                            std::size_t words) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < words; ++i) c += std::popcount(a[i] | b[i]);
  return c;
}

std::size_t andnot_count_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < words; ++i) c += std::popcount(a[i] & ~b[i]);
  return c;
}

void and_inplace_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) dst[i] &= src[i];
}

void or_inplace_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  for (std::size_t i = 0; i < words; ++i) dst[i] |= src[i];
}

}  // namespace rdm::kernels::detail
