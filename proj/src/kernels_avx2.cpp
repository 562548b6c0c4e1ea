#include "ramsey/kernels.hpp"

#include <immintrin.h>

#include <algorithm>

namespace ramsey::kernels::avx2 {

namespace {

inline std::uint64_t word_at(const std::uint64_t* src, std::size_t src_words,
                             std::int64_t q) {
  if (q < 0 || q >= static_cast<std::int64_t>(src_words)) return 0;
  return src[q];
}

inline void and_shifted_one(std::uint64_t* dst, const std::uint64_t* src,
                            std::size_t src_words, std::size_t i,
                            std::int64_t ws, unsigned bs) {
  std::int64_t q = static_cast<std::int64_t>(i) + ws;
  std::uint64_t lo = word_at(src, src_words, q);
  if (bs == 0) {
    dst[i] &= lo;
    return;
  }
  std::uint64_t hi = word_at(src, src_words, q + 1);
  dst[i] &= (lo >> bs) | (hi << (64 - bs));
}

}  // namespace

void and_shifted(std::uint64_t* dst, std::size_t dst_words,
                 const std::uint64_t* src, std::size_t src_words,
                 std::int64_t shift) {
  std::int64_t ws = shift >> 6;
  unsigned bs = static_cast<unsigned>(shift & 63);

  // Widest i-range where all source loads stay in bounds; the second load
  // reads words q+1..q+4, hence the -5.
  std::int64_t lo_i = std::max<std::int64_t>(0, -ws);
  std::int64_t hi_src = static_cast<std::int64_t>(src_words) - ws - (bs == 0 ? 4 : 5);
  std::int64_t hi_i = std::min<std::int64_t>(static_cast<std::int64_t>(dst_words),
                                             hi_src + 1);

  std::int64_t i = 0;
  for (; i < std::min<std::int64_t>(lo_i, dst_words); ++i)
    and_shifted_one(dst, src, src_words, i, ws, bs);

  if (bs == 0) {
    for (; i + 4 <= hi_i; i += 4) {
      __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
      __m256i s = _mm256_loadu_si256(
          reinterpret_cast<const __m256i*>(src + i + ws));
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                          _mm256_and_si256(d, s));
    }
  } else {
    __m256i cl = _mm256_set1_epi64x(bs);
    __m256i ch = _mm256_set1_epi64x(64 - bs);
    for (; i + 4 <= hi_i; i += 4) {
      __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
      __m256i vlo = _mm256_loadu_si256(
          reinterpret_cast<const __m256i*>(src + i + ws));
      __m256i vhi = _mm256_loadu_si256(
          reinterpret_cast<const __m256i*>(src + i + ws + 1));
      __m256i merged = _mm256_or_si256(_mm256_srlv_epi64(vlo, cl),
                                       _mm256_sllv_epi64(vhi, ch));
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i),
                          _mm256_and_si256(d, merged));
    }
  }

  for (; i < static_cast<std::int64_t>(dst_words); ++i)
    and_shifted_one(dst, src, src_words, i, ws, bs);
}

std::uint64_t popcount(const std::uint64_t* words, std::size_t n) {
  // pshufb nibble-lookup popcount, accumulated through sad_epu8.
  const __m256i lookup = _mm256_setr_epi8(
      0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
      0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(words + i));
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi64(v, 4), low_mask);
    __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                                  _mm256_shuffle_epi8(lookup, hi));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(cnt, _mm256_setzero_si256()));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) total += static_cast<std::uint64_t>(_mm_popcnt_u64(words[i]));
  return total;
}

}  // namespace ramsey::kernels::avx2
