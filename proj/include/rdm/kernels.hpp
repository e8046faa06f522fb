#pragma once

// Data-parallel inner loops used by support-set arithmetic and literal
// evaluation. Each kernel has a scalar reference version and, on x86-64,
// an AVX2 version; the active table is picked once at runtime from CPUID
// (override with RDM_SIMD=scalar).

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace rdm::kernels {

struct KernelTable {
  std::string_view name;

  // Sets bit i of `out` iff lo <= values[i] <= hi; bits past n are cleared.
  // `out` must hold (n + 63) / 64 words.
  void (*interval_mask)(const double* values, std::size_t n, double lo, double hi,
                        std::uint64_t* out);

  std::size_t (*popcount)(const std::uint64_t* a, std::size_t words);
  std::size_t (*and_count)(const std::uint64_t* a, const std::uint64_t* b,
                           std::size_t words);
  std::size_t (*or_count)(const std::uint64_t* a, const std::uint64_t* b,
                          std::size_t words);
  // |a \ b|
  std::size_t (*andnot_count)(const std::uint64_t* a, const std::uint64_t* b,
                              std::size_t words);

  void (*and_inplace)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
  void (*or_inplace)(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
};

const KernelTable& scalar() noexcept;

// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2() noexcept;

// Table selected for this process.
const KernelTable& active() noexcept;

}  // namespace rdm::kernels
