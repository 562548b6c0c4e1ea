#pragma once

// Bit-vector kernels behind every mask-based search: fused shifted-AND and
// popcount. Each kernel has a scalar reference implementation and an AVX2
// variant; the active backend is chosen at runtime (CPUID) and can be forced
// for differential testing.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ramsey::kernels {

enum class Backend { scalar, avx2 };

// Runtime selection. Default: avx2 when the CPU supports it, else scalar.
// The POLYRAMSEY_KERNEL environment variable ("scalar"/"avx2") overrides.
Backend active_backend();
void set_backend(Backend b);
bool avx2_available();
std::string backend_name(Backend b);

// dst[w] &= bits of src read at bit offset w*64 + shift, for w in
// [0, dst_words). shift may be negative; out-of-range source bits read as 0.
void and_shifted(std::uint64_t* dst, std::size_t dst_words,
                 const std::uint64_t* src, std::size_t src_words,
                 std::int64_t shift);

// Total popcount of words[0..n).
std::uint64_t popcount(const std::uint64_t* words, std::size_t n);

// Reference implementations, exposed for equivalence tests.
namespace scalar {
void and_shifted(std::uint64_t* dst, std::size_t dst_words,
                 const std::uint64_t* src, std::size_t src_words,
                 std::int64_t shift);
std::uint64_t popcount(const std::uint64_t* words, std::size_t n);
}  // namespace scalar

#if defined(POLYRAMSEY_HAVE_AVX2)
namespace avx2 {
void and_shifted(std::uint64_t* dst, std::size_t dst_words,
                 const std::uint64_t* src, std::size_t src_words,
                 std::int64_t shift);
std::uint64_t popcount(const std::uint64_t* words, std::size_t n);
}  // namespace avx2
#endif

// Fixed-size bit vector; bit i is stored in word i/64.
struct BitVec {
  std::vector<std::uint64_t> w;
  std::size_t nbits = 0;

  BitVec() = default;
  explicit BitVec(std::size_t bits) : w((bits + 63) / 64, 0), nbits(bits) {}

  bool get(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { w[i >> 6] |= std::uint64_t(1) << (i & 63); }
  void reset(std::size_t i) { w[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
  std::size_t words() const { return w.size(); }

  void fill_all() {
    for (auto& x : w) x = ~std::uint64_t(0);
    clear_tail();
  }
  void clear_all() {
    for (auto& x : w) x = 0;
  }
  // Bits at positions >= nbits must stay zero.
  void clear_tail() {
    if (nbits % 64 != 0 && !w.empty())
      w.back() &= (std::uint64_t(1) << (nbits % 64)) - 1;
  }
  std::uint64_t count() const { return popcount(w.data(), w.size()); }

  bool operator==(const BitVec& o) const { return nbits == o.nbits && w == o.w; }
};

// dst &= (src viewed at bit offset `shift`); dst keeps its own length.
inline void and_shifted(BitVec& dst, const BitVec& src, std::int64_t shift) {
  and_shifted(dst.w.data(), dst.w.size(), src.w.data(), src.w.size(), shift);
  dst.clear_tail();
}

// Index of lowest set bit, or npos.
std::size_t find_first(const BitVec& v);
inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

}  // namespace ramsey::kernels
