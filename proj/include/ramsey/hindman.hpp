#pragma once

// The explicit density-zero witness set built from binary blocks: a number
// belongs when every block of bit positions misses at least one bit of its
// binary support. Includes the block-sequence construction, membership,
// density materialization, and the greedy witness builder.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ramsey/bigint.hpp"
#include "ramsey/finset.hpp"
#include "ramsey/groundset.hpp"
#include "ramsey/poly.hpp"
#include "ramsey/witness.hpp"

namespace ramsey::hindman {

/// Minimal t with ((2^n - 1)/2^n)^t <= 1/2, decided by exact big-integer
/// comparison 2*(2^n - 1)^t <= 2^(n*t). A rational series bracket narrows the
/// candidate range; the returned value is always certified at t and t-1.
std::uint64_t a_seq(unsigned n);

/// Exact comparison ((2^n-1)/2^n)^t <= 1/2.
bool ratio_pow_le_half(unsigned n, std::uint64_t t);

/// Block structure: b_0 = 0, b_1 = 1, and b_{t+1} = b_t + n + 1 while t lies
/// in [S_n, S_{n+1}); block k is the bit range [b_k, b_{k+1}).
class BlockSystem {
 public:
  /// Build blocks until they cover at least `bits` bit positions.
  static BlockSystem up_to_bits(std::uint64_t bits);
  /// Build blocks B_0..B_k.
  static BlockSystem up_to_block(std::size_t k);

  std::size_t block_count() const { return b_.size() - 1; }
  std::uint64_t b(std::size_t k) const { return b_.at(k); }
  std::uint64_t block_begin(std::size_t k) const { return b_.at(k); }
  std::uint64_t block_end(std::size_t k) const { return b_.at(k + 1); }
  std::uint64_t block_size(std::size_t k) const { return b_.at(k + 1) - b_.at(k); }
  std::uint64_t covered_bits() const { return b_.back(); }

  const std::vector<std::uint64_t>& a() const { return a_; }
  const std::vector<std::uint64_t>& partial_sums() const { return s_; }

  /// Membership of x >= 1: no block fully contained in the binary support.
  /// x = 0 is not a member (it belongs to the zero-extended variant only).
  bool member(const Int& x) const;
  bool member(std::uint64_t x) const;
  /// Membership in the variant that additionally contains 0.
  bool member_with_zero(const Int& x) const {
    return x == 0 || member(x);
  }

 private:
  BlockSystem() = default;
  void grow_to(std::uint64_t bits);

  std::vector<std::uint64_t> a_;   // a_1.. (index 0 is a_1)
  std::vector<std::uint64_t> s_;   // partial sums, s_[n] = a_1+..+a_n, s_[0]=0
  std::vector<std::uint64_t> b_;   // b_0, b_1, ...
  std::vector<std::uint64_t> full_masks_;  // blocks fully inside 64 bits
};

/// Membership mask of the block set on [1..n].
GroundSet materialize_member_set(std::int64_t n);

/// Density curve of the block set on [1..n].
std::vector<DensityPoint> density_report(std::int64_t n,
                                         const std::vector<std::int64_t>& lengths,
                                         unsigned workers = 1);

struct GreedyTrace {
  std::size_t k = 0;           // starting block index
  Int c;                       // 2^{b_k}
  FinSet h = FinSet({1});      // chosen fragment indices
  std::uint64_t l_max = 0;     // highest support bit over the seeded values
  std::size_t j = 0;           // final block index
  std::vector<std::uint64_t> picks;  // r_0..r_{j-k}
  std::uint64_t backtracks = 0;
};

class InsufficientFragment : public std::runtime_error {
 public:
  InsufficientFragment(std::size_t have, const Int& needed)
      : std::runtime_error("insufficient fragment: have " + std::to_string(have) +
                           " generators, need about " + needed.str()),
        have_(have),
        needed_(needed) {}
  std::size_t have() const { return have_; }
  const Int& needed() const { return needed_; }

 private:
  std::size_t have_;
  Int needed_;
};

class GreedyExhausted : public std::runtime_error {
 public:
  explicit GreedyExhausted(std::size_t block)
      : std::runtime_error("greedy pick exhausted at block " + std::to_string(block)),
        block_(block) {}
  std::size_t block() const { return block_; }

 private:
  std::size_t block_;
};

/// Witness production following the block construction: pick an index set H
/// (min H > m) forcing every P(sum) divisible by 2^{b_k}, seed c = 2^{b_k},
/// then greedily add one bit per block, backtracking inside a block when an
/// avoidance check fails. Every audit value is re-checked through member().
/// Throws InsufficientFragment or GreedyExhausted.
Witness greedy_witness(const std::vector<Poly>& polys,
                       const std::vector<IPFragment>& frags,
                       std::uint32_t m,
                       GreedyTrace* trace = nullptr);

}  // namespace ramsey::hindman
