#include "ramsey/kernels.hpp"

namespace ramsey::kernels::scalar {

namespace {

// Bits of src at word index q (64-bit aligned), 0 outside [0, src_words).
inline std::uint64_t word_at(const std::uint64_t* src, std::size_t src_words,
                             std::int64_t q) {
  if (q < 0 || q >= static_cast<std::int64_t>(src_words)) return 0;
  return src[q];
}

}  // namespace

void and_shifted(std::uint64_t* dst, std::size_t dst_words,
                 const std::uint64_t* src, std::size_t src_words,
                 std::int64_t shift) {
  // Euclidean split: shift = ws*64 + bs with bs in [0, 64).
  std::int64_t ws = shift >> 6;
  unsigned bs = static_cast<unsigned>(shift & 63);
  if (bs == 0) {
    for (std::size_t i = 0; i < dst_words; ++i)
      dst[i] &= word_at(src, src_words, static_cast<std::int64_t>(i) + ws);
    return;
  }
  for (std::size_t i = 0; i < dst_words; ++i) {
    std::int64_t q = static_cast<std::int64_t>(i) + ws;
    std::uint64_t lo = word_at(src, src_words, q);
    std::uint64_t hi = word_at(src, src_words, q + 1);
    dst[i] &= (lo >> bs) | (hi << (64 - bs));
  }
}

std::uint64_t popcount(const std::uint64_t* words, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += __builtin_popcountll(words[i]);
  return total;
}

}  // namespace ramsey::kernels::scalar
