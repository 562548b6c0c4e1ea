#pragma once

// Finite index sets and truncated IP-set generators.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ramsey/bigint.hpp"

namespace ramsey {

/// Nonempty, strictly increasing set of positive integers.
class FinSet {
 public:
  explicit FinSet(std::vector<std::uint32_t> elems);

  /// Decode a subset code: bit i-1 of `code` set means element i is present.
  static FinSet from_code(std::uint64_t code);
  std::uint64_t code() const;

  const std::vector<std::uint32_t>& elems() const { return elems_; }
  std::uint32_t min() const { return elems_.front(); }
  std::uint32_t max() const { return elems_.back(); }
  std::size_t size() const { return elems_.size(); }
  bool contains(std::uint32_t x) const;

  /// Union; arguments need not be disjoint.
  static FinSet merged(const FinSet& a, const FinSet& b);

  std::string to_string() const;
  bool operator==(const FinSet& o) const { return elems_ == o.elems_; }
  bool operator<(const FinSet& o) const { return elems_ < o.elems_; }

 private:
  std::vector<std::uint32_t> elems_;
};

/// Truncation of an IP-set to its first k generators; eval(beta) is the
/// finite sum over the indices in beta, so disjoint index sets add.
class IPFragment {
 public:
  explicit IPFragment(std::vector<Int> gens);

  std::size_t size() const { return gens_.size(); }
  const Int& gen(std::size_t i1) const;  // 1-based
  const std::vector<Int>& gens() const { return gens_; }

  /// Sum of generators over beta; throws if beta reaches past size().
  Int eval(const FinSet& beta) const;

  std::string to_string() const;

 private:
  std::vector<Int> gens_;
};

}  // namespace ramsey
