// Built with -mavx2 -mpopcnt. Nothing here may run before the dispatcher
// has confirmed AVX2 support.

#include <immintrin.h>

#include <bit>

#include "kernels_impl.hpp"

namespace rdm::kernels::detail {
namespace {

// Nibble-lookup popcount over 256-bit lanes, accumulated with SAD.
inline __m256i popcount_epi8_sum(__m256i v) {
  const __m256i lookup = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,  //
                                          0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  const __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                                      _mm256_shuffle_epi8(lookup, hi));
  return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
}

inline std::size_t hsum_epi64(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return static_cast<std::size_t>(lanes[0] + lanes[1] + lanes[2] + lanes[3]);
}

template <class Combine, class Tail>
std::size_t count_words(const std::uint64_t* a, const std::uint64_t* b, std::size_t words,
                        Combine combine, Tail tail) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc = _mm256_add_epi64(acc, popcount_epi8_sum(combine(va, vb)));
  }
  std::size_t c = hsum_epi64(acc);
  for (; i < words; ++i) c += std::popcount(tail(a[i], b[i]));
  return c;
}

void interval_mask_avx2(const double* values, std::size_t n, double lo, double hi,
                        std::uint64_t* out) {
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vhi = _mm256_set1_pd(hi);
  const std::size_t full_words = n / 64;
  for (std::size_t w = 0; w < full_words; ++w) {
    const double* p = values + w * 64;
    std::uint64_t bits = 0;
    for (int j = 0; j < 16; ++j) {
      const __m256d v = _mm256_loadu_pd(p + 4 * j);
      const __m256d in = _mm256_and_pd(_mm256_cmp_pd(v, vlo, _CMP_GE_OQ),
                                       _mm256_cmp_pd(v, vhi, _CMP_LE_OQ));
      bits |= static_cast<std::uint64_t>(_mm256_movemask_pd(in)) << (4 * j);
    }
    out[w] = bits;
  }
  if (full_words * 64 < n) {
    interval_mask_scalar(values + full_words * 64, n - full_words * 64, lo, hi,
                         out + full_words);
  }
}

std::size_t popcount_avx2(const std::uint64_t* a, std::size_t words) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    acc = _mm256_add_epi64(acc, popcount_epi8_sum(va));
  }
  std::size_t c = hsum_epi64(acc);
  for (; i < words; ++i) c += std::popcount(a[i]);
  return c;
}

std::size_t and_count_avx2(const std::uint64_t* a, const std::uint64_t* b,
                           std::size_t words) {
  return count_words(
      a, b, words, [](__m256i x, __m256i y) { return _mm256_and_si256(x, y); },
      [](std::uint64_t x, std::uint64_t y) { return x & y; });
}

std::size_t or_count_avx2(const std::uint64_t* a, const std::uint64_t* b,
                          std::size_t words) {
  return count_words(
      a, b, words, [](__m256i x, __m256i y) { return _mm256_or_si256(x, y); },
      [](std::uint64_t x, std::uint64_t y) { return x | y; });
}

std::size_t andnot_count_avx2(const std::uint64_t* a, const std::uint64_t* b,
                              std::size_t words) {
  // _mm256_andnot_si256(x, y) computes ~x & y.
  return count_words(
      a, b, words, [](__m256i x, __m256i y) { return _mm256_andnot_si256(y, x); },
      [](std::uint64_t x, std::uint64_t y) { return x & ~y; });
}

void and_inplace_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    auto* d = reinterpret_cast<__m256i*>(dst + i);
    const auto* s = reinterpret_cast<const __m256i*>(src + i);
    _mm256_storeu_si256(d, _mm256_and_si256(_mm256_loadu_si256(d), _mm256_loadu_si256(s)));
  }
  for (; i < words; ++i) dst[i] &= src[i];
}

void or_inplace_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t words) {
  std::size_t i = 0;
  for (; i + 4 <= words; i += 4) {
    auto* d = reinterpret_cast<__m256i*>(dst + i);
    const auto* s = reinterpret_cast<const __m256i*>(src + i);
    _mm256_storeu_si256(d, _mm256_or_si256(_mm256_loadu_si256(d), _mm256_loadu_si256(s)));
  }
  for (; i < words; ++i) dst[i] |= src[i];
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{
      "avx2",           interval_mask_avx2, popcount_avx2,   and_count_avx2,
      or_count_avx2,    andnot_count_avx2,  and_inplace_avx2, or_inplace_avx2,
  };
  return table;
}

}  // namespace rdm::kernels::detail
