#include <doctest.h>

#include <random>

#include "ramsey/hindman.hpp"

using namespace ramsey;
using namespace ramsey::hindman;

namespace {

// Independent oracle: rebuilds the block boundaries from scratch with direct
// rational-power comparisons and scans the support without bitmask tricks.
struct BlockOracle {
  std::vector<std::uint64_t> b;

  explicit BlockOracle(std::uint64_t bits) {
    std::vector<std::uint64_t> a, s{0};
    auto a_of = [](unsigned n) {
      Rat ratio(Int((Int(1) << n) - 1), Int(Int(1) << n));
      Rat pw(1);
      std::uint64_t t = 0;
      do {
        pw *= ratio;
        ++t;
      } while (pw > Rat(1, 2));
      return t;
    };
    b = {0, 1};
    while (b.back() < bits) {
      std::uint64_t t = b.size() - 1;
      while (s.back() <= t) {
        a.push_back(a_of(static_cast<unsigned>(a.size() + 1)));
        s.push_back(s.back() + a.back());
      }
      std::uint64_t n = 0;
      while (n + 1 < s.size() && s[n + 1] <= t) ++n;
      b.push_back(b.back() + n + 1);
    }
  }

  bool member(std::uint64_t x) const {
    if (x == 0) return false;
    for (std::size_t k = 0; k + 1 < b.size(); ++k) {
      bool full = true;
      for (std::uint64_t p = b[k]; p < b[k + 1] && full; ++p)
        if (((x >> p) & 1u) == 0) full = false;
      if (full && b[k + 1] <= 64) return false;
    }
    return true;
  }
};

}  // namespace

TEST_CASE("minimal halving exponents") {
  CHECK(a_seq(1) == 1);
  CHECK(a_seq(2) == 3);
  CHECK(a_seq(3) == 6);
  CHECK(ratio_pow_le_half(3, 6));
  CHECK_FALSE(ratio_pow_le_half(3, 5));
}

TEST_CASE("a_seq agrees with direct rational power evaluation") {
  // ((2^n-1)/2^n)^t as an exact numerator/denominator pair; the denominator
  // is a plain power of two, so the comparison against 1/2 is
  // 2 * (2^n-1)^t <= 2^(n t).
  auto direct_le_half = [](unsigned n, std::uint64_t t) {
    Int num = int_pow((Int(1) << n) - 1, static_cast<unsigned>(t));
    return 2 * num <= Int(1) << static_cast<unsigned>(n * t);
  };
  for (unsigned n = 1; n <= 20; ++n) {
    std::uint64_t t = a_seq(n);
    CHECK(direct_le_half(n, t));
    if (t > 1) CHECK_FALSE(direct_le_half(n, t - 1));
  }
}

TEST_CASE("block boundaries match the recurrence") {
  BlockSystem sys = BlockSystem::up_to_block(8);
  CHECK(sys.partial_sums()[1] == 1);
  CHECK(sys.partial_sums()[2] == 4);
  CHECK(sys.partial_sums()[3] == 10);
  std::vector<std::uint64_t> expect_b = {0, 1, 3, 5, 7, 10};
  for (std::size_t i = 0; i < expect_b.size(); ++i) CHECK(sys.b(i) == expect_b[i]);
  CHECK(sys.block_size(0) == 1);
  CHECK(sys.block_size(1) == 2);
  CHECK(sys.block_size(2) == 2);
  CHECK(sys.block_size(3) == 2);
  CHECK(sys.block_size(4) == 3);

  // Blocks are consecutive and partition [0, b_{K+1}).
  for (std::size_t k = 0; k + 1 < sys.block_count(); ++k)
    CHECK(sys.block_end(k) == sys.block_begin(k + 1));
  // Sizes never shrink.
  for (std::size_t k = 0; k + 1 < sys.block_count(); ++k)
    CHECK(sys.block_size(k) <= sys.block_size(k + 1));
}

TEST_CASE("membership basics") {
  BlockSystem sys = BlockSystem::up_to_bits(64);
  CHECK_FALSE(sys.member(std::uint64_t(1)));  // block {0} inside supp
  CHECK(sys.member(std::uint64_t(2)));
  CHECK(sys.member(std::uint64_t(4)));
  CHECK_FALSE(sys.member(std::uint64_t(0)));
  CHECK(sys.member_with_zero(Int(0)));

  std::vector<std::uint64_t> low;
  for (std::uint64_t x = 1; x <= 8; ++x)
    if (sys.member(x)) low.push_back(x);
  CHECK(low == std::vector<std::uint64_t>{2, 4, 8});
}

TEST_CASE("membership agrees with the independent oracle up to 2^16") {
  BlockSystem sys = BlockSystem::up_to_bits(64);
  BlockOracle oracle(64);
  for (std::uint64_t x = 0; x <= (1u << 16); ++x)
    CHECK(sys.member(x) == oracle.member(x));
}

TEST_CASE("membership handles values wider than 64 bits") {
  BlockSystem sys = BlockSystem::up_to_bits(256);
  Int big = (Int(1) << 200) + 2;  // bits 200 and 1; no block fully covered
  CHECK(sys.member(big));
  // Fill one whole block far up: find a block fully below 200 bits.
  std::size_t k = 0;
  while (sys.block_end(k + 1) < 190) ++k;
  Int bad = Int(1) << 200;
  for (std::uint64_t p = sys.block_begin(k); p < sys.block_end(k); ++p)
    bad += Int(1) << p;
  CHECK_FALSE(sys.member(bad));
}

TEST_CASE("density report at a small window") {
  auto curve = density_report(8, {8});
  CHECK(curve[0].max_count == 3);  // {2,4,8}
  CHECK(curve[0].value() == Rat(3, 8));
}

TEST_CASE("density reproducible across worker counts") {
  auto c1 = density_report(1 << 12, {64, 256}, 1);
  auto c4 = density_report(1 << 12, {64, 256}, 4);
  for (std::size_t i = 0; i < c1.size(); ++i)
    CHECK(c1[i].max_count == c4[i].max_count);
}

TEST_CASE("greedy witness with engineered fragments") {
  // Generators all equal to 2^{b_2} = 8.
  std::vector<IPFragment> frags = {IPFragment(std::vector<Int>(6, Int(8)))};
  std::vector<Poly> polys = {Poly::identity()};
  GreedyTrace trace;
  Witness w = greedy_witness(polys, frags, 0, &trace);
  CHECK(w.verified);
  REQUIRE(w.beta.has_value());
  BlockSystem check = BlockSystem::up_to_bits(4096);
  for (const AuditEntry& e : w.audit) CHECK(check.member_with_zero(e.value));
}

TEST_CASE("greedy witness for a quadratic pair") {
  BlockSystem sys = BlockSystem::up_to_block(8);
  // r = 2, so the start block must be wider than 2: k = 4, 2^{b_4} = 2^7.
  Int unit = Int(1) << sys.b(4);
  std::vector<Int> gens;
  for (int i = 1; i <= 8; ++i) gens.push_back(unit * i);
  std::vector<IPFragment> frags = {IPFragment(gens)};
  std::vector<Poly> polys = {Poly::identity(), Poly({Rat(0), Rat(1)})};
  GreedyTrace trace;
  Witness w = greedy_witness(polys, frags, 0, &trace);
  CHECK(w.verified);
  CHECK(trace.k == 4);
  BlockSystem check = BlockSystem::up_to_bits(8192);
  for (const AuditEntry& e : w.audit) CHECK(check.member_with_zero(e.value));
}

TEST_CASE("greedy witness honors the index floor") {
  std::vector<Int> gens;
  for (int i = 0; i < 10; ++i) gens.push_back(Int(1) << 7);
  std::vector<IPFragment> frags = {IPFragment(gens)};
  GreedyTrace trace;
  Witness w = greedy_witness({Poly::identity()}, frags, 3, &trace);
  CHECK(w.verified);
  CHECK(w.beta->min() > 3);
}

TEST_CASE("too-short fragments fail with a structured error") {
  std::vector<IPFragment> frags = {IPFragment({Int(1), Int(2)})};
  std::vector<Poly> polys = {Poly::identity(), Poly({Rat(0), Rat(1)})};
  CHECK_THROWS_AS(greedy_witness(polys, frags, 0, nullptr), InsufficientFragment);
  try {
    greedy_witness(polys, frags, 0, nullptr);
  } catch (const InsufficientFragment& e) {
    CHECK(e.have() == 2);
    CHECK(e.needed() > 2);
  }
}
