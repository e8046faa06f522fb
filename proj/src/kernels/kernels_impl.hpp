#pragma once

#include <cstddef>
#include <cstdint>

#include "rdm/kernels.hpp"

namespace rdm::kernels::detail {

void interval_mask_scalar(const double* values, std::size_t n, double lo, double hi,
                          std::uint64_t* out);
std::size_t popcount_scalar(const std::uint64_t* a, std::size_t words);
std::size_t and_count_scalar(const std::uint64_t* a, const std::uint64_t* b,
                             std::size_t words);
std::size_t or_count_scalar(const std::uint64_t* a, const std::uint64_t* b,
                            std::size_t words);
std::size_t andnot_count_scalar(const std::uint64_t* a, const std::uint64_t* b,
                                std::size_t words);
void and_inplace_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);
void or_inplace_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t words);

#if defined(RDM_HAVE_AVX2_TU)
// Compiled in a translation unit built with -mavx2; only call after a CPUID check.
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace rdm::kernels::detail
