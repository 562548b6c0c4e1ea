#pragma once

// Search results and bounds shared by every witness search.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ramsey/bigint.hpp"
#include "ramsey/finset.hpp"

namespace ramsey {

struct AuditEntry {
  int poly_id = 0;   // index into the searched family
  int frag_id = 0;   // index into the fragment list (-1 when not applicable)
  Int point;         // the evaluated argument
  Int value;         // the shifted value whose membership was checked
};

struct Witness {
  Int a;                        // shift (signed for the rational pipeline)
  std::optional<FinSet> beta;   // index set, when the search is IP-shaped
  std::optional<Int> d;         // evaluation point / common difference
  std::vector<AuditEntry> audit;
  bool verified = false;
};

struct SearchBounds {
  std::int64_t max_a = 1 << 20;
  std::int64_t max_d = 4096;
  unsigned max_subset_bits = 16;
  std::uint64_t time_budget_ms = 0;  // 0 = unlimited
  unsigned workers = 1;

  enum class Order { op_default, a_major, beta_major };
  Order order = Order::op_default;

  // a >= 0 for the J-style searches, >= 1 where 0 is excluded; -1 keeps the
  // per-operation default.
  std::int64_t a_min = -1;
};

enum class SearchStatus { found, exhausted };

struct SearchResult {
  SearchStatus status = SearchStatus::exhausted;
  std::optional<Witness> witness;
  std::optional<unsigned> color;  // coloring searches report the class
  std::uint64_t candidates_tried = 0;

  bool found() const { return status == SearchStatus::found; }
};

}  // namespace ramsey
