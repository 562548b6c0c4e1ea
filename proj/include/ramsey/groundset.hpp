#pragma once

// Finite windows [1..N] of the naturals with bitmask membership, built from
// a small expression language; colorings; density and gap diagnostics.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ramsey/bigint.hpp"
#include "ramsey/kernels.hpp"

namespace ramsey {

struct SetExpr {
  enum class Kind {
    full,
    multiples,
    hindman,
    random_density,
    explicit_list,
    set_union,
    set_intersect,
    complement,
    shift,
    dilate,
    dilate_inverse,
  };

  Kind kind = Kind::full;
  std::int64_t m = 0;          // multiples / dilate / dilinv factor
  std::int64_t t = 0;          // shift offset (signed)
  Rat rho;                     // random density in (0,1]
  std::uint64_t seed = 0;      // random seed
  std::string path;            // explicit list file
  std::vector<SetExpr> kids;

  std::string to_string() const;
};

/// Window [1..N] with bitmask membership; bit v-1 holds membership of v.
class GroundSet {
 public:
  GroundSet(std::int64_t n, kernels::BitVec bits, std::string provenance);

  static GroundSet full(std::int64_t n);
  static GroundSet empty(std::int64_t n);

  std::int64_t window() const { return n_; }
  bool contains(std::int64_t v) const {
    return v >= 1 && v <= n_ && bits_.get(static_cast<std::size_t>(v - 1));
  }
  bool contains(const Int& v) const {
    return fits_i64(v) && contains(to_i64(v));
  }
  std::uint64_t count() const { return bits_.count(); }
  const kernels::BitVec& bits() const { return bits_; }
  const std::string& provenance() const { return provenance_; }

  std::vector<std::int64_t> elements() const;

 private:
  std::int64_t n_;
  kernels::BitVec bits_;
  std::string provenance_;
};

struct MaterializeStats {
  std::uint64_t out_of_window_ignored = 0;  // explicit-list entries dropped
};

/// Deterministic: identical (expr, n) always produce identical masks.
/// RandomDensity uses SplitMix64 in counter mode keyed by (seed, index).
GroundSet materialize(const SetExpr& e, std::int64_t n,
                      MaterializeStats* stats = nullptr);

struct DensityPoint {
  std::int64_t window_len;
  std::uint64_t max_count;  // max |A ∩ (m, m+len]| over all m
  Rat value() const { return Rat(Int(max_count), Int(window_len)); }
};

/// Exact sliding-window maxima, one per requested length. Lengths beyond the
/// window are rejected.
std::vector<DensityPoint> upper_density_curve(const GroundSet& g,
                                              const std::vector<std::int64_t>& lengths,
                                              unsigned workers = 1);

/// True iff some length-L window of [1..N] holds members of G such that
/// every g consecutive positions inside it contain at least one member.
bool piecewise_syndetic_probe(const GroundSet& g, std::int64_t gap,
                              std::int64_t block_len);

/// {y in G : for every x in shifts, x+y <= N and x+y in G}. Window edges are
/// excluded rather than assumed. Computed as an AND of shifted masks.
GroundSet shifted_intersection(const GroundSet& g,
                               const std::vector<Int>& shifts);

/// Dilate(n): x in result iff n | x and x/n in g (same window).
GroundSet dilate(const GroundSet& g, std::int64_t n);

/// r-coloring of [1..N]; colors are 1-based.
class Coloring {
 public:
  Coloring(std::int64_t n, unsigned r, std::vector<std::uint16_t> color);

  static Coloring parity(std::int64_t n);  // odd -> 1, even -> 2
  static Coloring monochrome(std::int64_t n);
  /// Two-coloring by set membership: members -> 1, the rest -> 2.
  static Coloring from_set(const GroundSet& g);
  /// Decode r colors from the base-r digits of `code` (LSB = value 1).
  static Coloring from_code(std::int64_t n, unsigned r, std::uint64_t code);

  std::int64_t window() const { return n_; }
  unsigned colors() const { return r_; }
  unsigned color_of(std::int64_t v) const {
    return color_[static_cast<std::size_t>(v - 1)];
  }
  /// Members of one color class as a ground set.
  GroundSet color_class(unsigned color) const;

 private:
  std::int64_t n_;
  unsigned r_;
  std::vector<std::uint16_t> color_;
};

}  // namespace ramsey
