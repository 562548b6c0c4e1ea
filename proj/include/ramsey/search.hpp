#pragma once

// All witness searches. Candidate orders are part of each operation's
// contract and results are independent of the worker count: workers scan
// disjoint candidate ranges and a reduction keeps the order-minimal witness.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ramsey/finset.hpp"
#include "ramsey/groundset.hpp"
#include "ramsey/poly.hpp"
#include "ramsey/witness.hpp"

namespace ramsey {

/// Monochromatic configuration {a + p(d) : p in F} inside one color class.
/// Order: a ascending, then d ascending; a, d >= 1. All values must land in
/// the window to count.
SearchResult pvdw_search(const Coloring& c, const std::vector<Poly>& polys,
                         const SearchBounds& b);

/// Witness (a, beta) with a + f(x_beta^1, .., x_beta^j) in G for every f.
/// Default order: a ascending, then beta by subset code; a >= 1.
SearchResult ip_vdw_search(const GroundSet& g, const std::vector<MultiPoly>& polys,
                           const std::vector<IPFragment>& frags,
                           const SearchBounds& b);

/// Witness (a, beta), one beta shared across fragments, with
/// a + P(x_beta^i) in G for every P and i. Order: beta by subset code
/// ascending, then a ascending; a >= 0. Admissible shifts are read off an
/// AND of shifted membership masks.
SearchResult jp_witness_search(const GroundSet& g, const std::vector<Poly>& polys,
                               const std::vector<IPFragment>& frags,
                               const SearchBounds& b);

/// jp_witness_search with the identity polynomial only.
SearchResult j_witness_search(const GroundSet& g,
                              const std::vector<IPFragment>& frags,
                              const SearchBounds& b);

/// jp-shaped engine without the nonnegativity requirement and with a minimum
/// index constraint on the returned set. Shifted difference polynomials may
/// take negative values; membership then simply fails unless the value lands
/// inside the window.
SearchResult signed_jp_search(const GroundSet& g, const std::vector<Poly>& polys,
                              const std::vector<IPFragment>& frags,
                              std::uint32_t min_index, const SearchBounds& b);

/// Same result as jp_witness_search, obtained through the multidimensional
/// reduction: each P becomes the arity-l polynomial P(x_i) and the product
/// IP-set is searched with ip_vdw_search under the jp order.
SearchResult reduce_and_search(const GroundSet& g, const std::vector<Poly>& polys,
                               const std::vector<IPFragment>& frags,
                               const SearchBounds& b);

class InsufficientFragmentError : public std::runtime_error {
 public:
  InsufficientFragmentError(std::size_t have, const Int& needed)
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

/// Disjoint, increasingly ordered index blocks whose generator sums are all
/// divisible by M, found by prefix-sum residue pigeonhole. The returned
/// fragment's generators are the (undivided) block sums.
std::pair<IPFragment, std::vector<FinSet>> sub_ip_multiple_extract(
    const IPFragment& frag, const Int& m, std::size_t count);

/// Shared-block variant: one block list making every fragment's block sum
/// divisible by M (pigeonhole over residue tuples). Extracts as many blocks
/// as the fragments admit, at most max_blocks.
std::vector<FinSet> extract_shared_blocks(const std::vector<IPFragment>& frags,
                                          const Int& m, std::size_t max_blocks);

struct RationalSearchResult {
  SearchResult result;
  Int scale = 1;                 // the common multiple M
  std::vector<FinSet> blocks;    // extracted index blocks
};

/// Rational-coefficient pipeline: clear denominators with the family-wide M,
/// pass to block sums divisible by M, divide, run jp_witness_search on the
/// scaled family, then map the witness back and re-verify against the
/// original rational polynomials and fragments.
RationalSearchResult rational_search(const GroundSet& g,
                                     const std::vector<Poly>& polys,
                                     const std::vector<IPFragment>& frags,
                                     const SearchBounds& b);

class WindowOverflow : public std::runtime_error {
 public:
  explicit WindowOverflow(const std::string& what) : std::runtime_error(what) {}
};

/// Transport a witness for G under {(1/n)P} to a witness (n*a, beta) for the
/// dilated set under the original family. Throws WindowOverflow when a value
/// leaves the window.
Witness dilate_witness(const Witness& w, const std::vector<Poly>& polys,
                       const std::vector<IPFragment>& frags, const GroundSet& g,
                       std::int64_t n);

/// Minimal (a asc, x asc) pair with a + P(x) in G for all P; a, x >= 1.
SearchResult pp_rich_search(const GroundSet& g, const std::vector<Poly>& polys,
                            const SearchBounds& b);

struct PartitionOptions {
  std::int64_t grid = 12;       // coefficient grid bound N'
  bool force_fast = false;      // skip the proof-following mode
  std::uint64_t work_limit = 20'000'000;  // refusal threshold, grid cells * points
};

struct PartitionTrace {
  std::string mode;             // "proof" or "fast"
  std::int64_t base_x = 0, base_y = 0;  // (x, y) covering the whole family
  std::uint64_t family_size = 0;
  std::vector<std::int64_t> z;  // pattern base point
  std::int64_t w = 0;           // pattern step
  std::string stage_failed;     // empty on success
};

struct PartitionResult {
  SearchStatus status = SearchStatus::exhausted;
  unsigned part = 0;            // 1 or 2
  std::optional<Witness> witness;
  PartitionTrace trace;

  bool found() const { return status == SearchStatus::found; }
};

/// Two-part partition experiment. Proof mode walks the strong-partition-
/// regularity argument on a finite coefficient grid; fast mode just searches
/// each part. Either way the final witness is re-verified directly.
PartitionResult partition_experiment(const GroundSet& g, const GroundSet& part1,
                                     const GroundSet& part2,
                                     const std::vector<Poly>& polys,
                                     const SearchBounds& b,
                                     const PartitionOptions& opts = {});

/// Independent verification: re-evaluates every audit entry with the
/// monomial-summation path and direct mask lookups. Used by every search
/// before a witness is returned.
bool verify_witness_against(const GroundSet& g, const Witness& w);

}  // namespace ramsey
