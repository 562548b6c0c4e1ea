#include "ramsey/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace ramsey::kernels {

namespace {

Backend detect_backend() {
#if defined(POLYRAMSEY_HAVE_AVX2)
  if (const char* env = std::getenv("POLYRAMSEY_KERNEL")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_available()) return Backend::avx2;
  }
  if (avx2_available()) return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> b{detect_backend()};
  return b;
}

}  // namespace

bool avx2_available() {
#if defined(POLYRAMSEY_HAVE_AVX2)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
#if !defined(POLYRAMSEY_HAVE_AVX2)
  b = Backend::scalar;
#else
  if (b == Backend::avx2 && !avx2_available()) b = Backend::scalar;
#endif
  backend_slot().store(b, std::memory_order_relaxed);
}

std::string backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

void and_shifted(std::uint64_t* dst, std::size_t dst_words,
                 const std::uint64_t* src, std::size_t src_words,
                 std::int64_t shift) {
#if defined(POLYRAMSEY_HAVE_AVX2)
  if (active_backend() == Backend::avx2) {
    avx2::and_shifted(dst, dst_words, src, src_words, shift);
    return;
  }
#endif
  scalar::and_shifted(dst, dst_words, src, src_words, shift);
}

std::uint64_t popcount(const std::uint64_t* words, std::size_t n) {
#if defined(POLYRAMSEY_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return avx2::popcount(words, n);
#endif
  return scalar::popcount(words, n);
}

std::size_t find_first(const BitVec& v) {
  for (std::size_t i = 0; i < v.w.size(); ++i)
    if (v.w[i]) return i * 64 + static_cast<std::size_t>(__builtin_ctzll(v.w[i]));
  return npos;
}

}  // namespace ramsey::kernels
