#pragma once

// Finite-depth construction and verification of the recursive witness
// system: over every nonempty subset F of a root family of sequences, a
// shift alpha(F) and an index set H(F) are produced so that (1) H separates
// strictly along the subset order and (2) every chain sum lands in the
// ground set. Ultrafilter membership is replaced by a computable surrogate:
// the shifted intersection of the ground set over all previously reachable
// chain values.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ramsey/finset.hpp"
#include "ramsey/groundset.hpp"
#include "ramsey/poly.hpp"
#include "ramsey/witness.hpp"

namespace ramsey::cst {

/// Named sequences truncated to [1..T]; values are positive integers.
struct SeqFamily {
  std::vector<std::string> names;
  std::vector<std::vector<Int>> values;  // values[i][t-1] = f_i(t)
  std::uint32_t trunc = 0;

  std::size_t size() const { return names.size(); }
  Int sum_over(std::size_t i, const FinSet& gamma) const;
};

struct CstNode {
  std::uint64_t subset = 0;  // bitmask over root sequences
  Int alpha;
  FinSet h = FinSet({1});
  std::uint32_t floor_index = 0;    // m at build time (max over K)
  std::uint64_t star_values = 0;    // |M| at build time
};

struct CstTree {
  std::uint32_t depth = 0;
  std::uint32_t trunc = 0;
  std::vector<std::string> seq_names;
  std::map<std::uint64_t, CstNode> nodes;  // keyed by subset mask

  const CstNode& node(std::uint64_t subset) const { return nodes.at(subset); }
};

struct BuildOutcome {
  std::optional<CstTree> tree;
  // Exhaustion is an expected outcome at finite scale, not an error.
  std::optional<std::uint64_t> exhausted_subset;
  std::string exhausted_reason;

  bool ok() const { return tree.has_value(); }
};

/// Processes subsets by cardinality then subset code. Each node searches
/// (a, gamma), min(gamma) above every index used by proper subsets, such
/// that a + P(f(gamma)) lies in the surrogate star set for every P in the
/// extended family and every f in the subset.
BuildOutcome cst_build(const GroundSet& g, const std::vector<Poly>& polys,
                       const SeqFamily& root, const SearchBounds& b);

struct CheckFailure {
  std::string kind;  // "separation" or "chain-membership"
  std::string detail;
};

struct VerifyReport {
  std::uint64_t separation_checks = 0;
  std::uint64_t chain_checks = 0;
  std::vector<CheckFailure> failures;

  bool passed() const { return failures.empty(); }
};

/// Re-checks both conclusions exhaustively over the finite lattice: strict
/// separation for every comparable pair, and membership of every chain sum
/// for every chain, selection, polynomial, and nonempty sub-chain.
VerifyReport cst_verify(const CstTree& t, const GroundSet& g,
                        const std::vector<Poly>& polys, const SeqFamily& root);

/// The set of chain values reachable through proper subsets of `subset`:
/// every strictly increasing chain, every selection f_i, every P; used as
/// the shift list for the surrogate star set. Exposed for the brute-force
/// cross-check in tests.
std::vector<Int> chain_values(const CstTree& t, const std::vector<Poly>& polys,
                              const SeqFamily& root, std::uint64_t subset);

nlohmann::json tree_to_json(const CstTree& t);
CstTree tree_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const VerifyReport& r);

}  // namespace ramsey::cst
