#include <doctest.h>

#include <random>
#include <vector>

#include "ramsey/kernels.hpp"
#include "ramsey/parse.hpp"
#include "ramsey/search.hpp"

using namespace ramsey::kernels;

namespace {

// Bit-by-bit model of and_shifted, the semantic ground truth both backends
// are tested against.
std::vector<std::uint64_t> model_and_shifted(std::vector<std::uint64_t> dst,
                                             const std::vector<std::uint64_t>& src,
                                             std::int64_t shift) {
  auto src_bit = [&](std::int64_t pos) -> bool {
    if (pos < 0 || pos >= static_cast<std::int64_t>(src.size()) * 64) return false;
    return (src[static_cast<std::size_t>(pos) >> 6] >> (pos & 63)) & 1u;
  };
  for (std::size_t i = 0; i < dst.size() * 64; ++i) {
    bool keep = src_bit(static_cast<std::int64_t>(i) + shift);
    if (!keep) dst[i >> 6] &= ~(std::uint64_t(1) << (i & 63));
  }
  return dst;
}

std::vector<std::uint64_t> random_words(std::mt19937_64& rng, std::size_t n) {
  std::vector<std::uint64_t> w(n);
  for (auto& x : w) x = rng();
  return w;
}

}  // namespace

TEST_CASE("scalar and_shifted matches the bit model") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> len(1, 24);
  std::uniform_int_distribution<std::int64_t> sh(-1400, 1400);
  for (int trial = 0; trial < 300; ++trial) {
    auto dst = random_words(rng, len(rng));
    auto src = random_words(rng, len(rng));
    std::int64_t shift = sh(rng);
    auto expect = model_and_shifted(dst, src, shift);
    auto got = dst;
    scalar::and_shifted(got.data(), got.size(), src.data(), src.size(), shift);
    CHECK(got == expect);
  }
}

#if defined(__AVX2__) || 1
TEST_CASE("avx2 backend agrees with scalar exactly") {
  if (!avx2_available()) return;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_int_distribution<std::int64_t> sh(-2600, 2600);
  for (int trial = 0; trial < 500; ++trial) {
    auto dst = random_words(rng, len(rng));
    auto src = random_words(rng, len(rng));
    std::int64_t shift = sh(rng);

    auto a = dst;
    set_backend(Backend::scalar);
    and_shifted(a.data(), a.size(), src.data(), src.size(), shift);
    auto b = dst;
    set_backend(Backend::avx2);
    and_shifted(b.data(), b.size(), src.data(), src.size(), shift);
    CHECK(a == b);

    set_backend(Backend::scalar);
    std::uint64_t pc_s = popcount(src.data(), src.size());
    set_backend(Backend::avx2);
    std::uint64_t pc_a = popcount(src.data(), src.size());
    CHECK(pc_s == pc_a);
  }
  set_backend(avx2_available() ? Backend::avx2 : Backend::scalar);
}
#endif

TEST_CASE("word-aligned and zero shifts") {
  std::mt19937_64 rng(3);
  for (std::int64_t shift : {std::int64_t(0), std::int64_t(64), std::int64_t(-64),
                             std::int64_t(128), std::int64_t(6400)}) {
    auto dst = random_words(rng, 8);
    auto src = random_words(rng, 8);
    auto expect = model_and_shifted(dst, src, shift);
    auto got = dst;
    scalar::and_shifted(got.data(), got.size(), src.data(), src.size(), shift);
    CHECK(got == expect);
  }
}

TEST_CASE("popcount over ragged lengths") {
  std::mt19937_64 rng(4);
  for (std::size_t n = 0; n <= 17; ++n) {
    auto w = random_words(rng, n);
    std::uint64_t expect = 0;
    for (auto x : w) expect += __builtin_popcountll(x);
    CHECK(scalar::popcount(w.data(), n) == expect);
  }
}

TEST_CASE("backends produce identical search results") {
  if (!avx2_available()) return;
  ramsey::GroundSet g =
      ramsey::materialize(ramsey::parse_set_expr("rand(1/2, 2024)"), 8192);
  std::vector<ramsey::Poly> polys = ramsey::parse_poly_list("x; x^2");
  std::vector<ramsey::IPFragment> frags = {
      ramsey::IPFragment({ramsey::Int(3), ramsey::Int(7), ramsey::Int(11)})};
  ramsey::SearchBounds b;
  b.max_a = 8192;

  set_backend(Backend::scalar);
  ramsey::SearchResult rs = ramsey::jp_witness_search(g, polys, frags, b);
  set_backend(Backend::avx2);
  ramsey::SearchResult ra = ramsey::jp_witness_search(g, polys, frags, b);
  REQUIRE(rs.found() == ra.found());
  if (rs.found()) {
    CHECK(rs.witness->a == ra.witness->a);
    CHECK(rs.witness->beta->code() == ra.witness->beta->code());
  }
  set_backend(avx2_available() ? Backend::avx2 : Backend::scalar);
}

TEST_CASE("bitvec basics") {
  BitVec v(130);
  CHECK(v.words() == 3);
  v.set(0);
  v.set(64);
  v.set(129);
  CHECK(v.count() == 3);
  CHECK(find_first(v) == 0);
  v.reset(0);
  CHECK(find_first(v) == 64);
  v.fill_all();
  CHECK(v.count() == 130);
  v.clear_all();
  CHECK(find_first(v) == npos);
}
