#include "ramsey/cst.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ramsey/jsonio.hpp"
#include "ramsey/search.hpp"

namespace ramsey::cst {

namespace {

std::vector<std::uint64_t> lattice_order(std::uint32_t depth) {
  std::vector<std::uint64_t> subsets;
  for (std::uint64_t s = 1; s < (std::uint64_t(1) << depth); ++s)
    subsets.push_back(s);
  std::sort(subsets.begin(), subsets.end(), [](std::uint64_t a, std::uint64_t b) {
    int pa = __builtin_popcountll(a), pb = __builtin_popcountll(b);
    if (pa != pb) return pa < pb;
    return a < b;
  });
  return subsets;
}

// Enumerates every (chain, selection) pair by DFS over the tree's nodes:
// chains are strictly increasing subset sequences inside `universe`
// (proper subsets only when `proper`), selections pick one sequence per
// chain element. The sink sees the per-element alphas and H-sums.
void walk_chains_over(const CstTree& t, const SeqFamily& root,
                      std::uint64_t universe, bool proper,
                      std::vector<Int>& alphas, std::vector<Int>& fsums,
                      std::uint64_t last,
                      const std::function<void(const std::vector<Int>&,
                                               const std::vector<Int>&)>& sink) {
  for (const auto& [sub, node] : t.nodes) {
    if ((sub & universe) != sub) continue;
    if (proper && sub == universe) continue;
    if (last != 0 && ((last & sub) != last || sub == last)) continue;
    if (last == 0 && sub == 0) continue;
    for (std::size_t fi = 0; fi < root.size(); ++fi) {
      if (!((sub >> fi) & 1)) continue;
      alphas.push_back(node.alpha);
      fsums.push_back(root.sum_over(fi, node.h));
      sink(alphas, fsums);
      walk_chains_over(t, root, universe, proper, alphas, fsums, sub, sink);
      alphas.pop_back();
      fsums.pop_back();
    }
  }
}

}  // namespace

Int SeqFamily::sum_over(std::size_t i, const FinSet& gamma) const {
  if (gamma.max() > trunc)
    throw std::out_of_range("index set exceeds the truncation length");
  Int sum = 0;
  for (std::uint32_t tindex : gamma.elems()) sum += values[i][tindex - 1];
  return sum;
}

std::vector<Int> chain_values(const CstTree& t, const std::vector<Poly>& polys,
                              const SeqFamily& root, std::uint64_t subset) {
  std::set<Int> vals;
  std::vector<Int> alphas, fsums;
  walk_chains_over(t, root, subset, /*proper=*/true, alphas, fsums, 0,
                   [&](const std::vector<Int>& as, const std::vector<Int>& fs) {
                     Int asum = 0, fsum = 0;
                     for (const Int& a : as) asum += a;
                     for (const Int& f : fs) fsum += f;
                     for (const Poly& p : polys) vals.insert(asum + p.eval_int(fsum));
                   });
  return {vals.begin(), vals.end()};
}

BuildOutcome cst_build(const GroundSet& g, const std::vector<Poly>& polys,
                       const SeqFamily& root, const SearchBounds& b) {
  if (root.size() == 0) throw std::invalid_argument("empty root family");
  if (root.size() > 16) throw std::invalid_argument("depth capped at 16");
  if (root.trunc < 1) throw std::invalid_argument("truncation must be >= 1");
  if (root.values.size() != root.size())
    throw std::invalid_argument("names and value rows disagree");
  for (const auto& row : root.values) {
    if (row.size() != root.trunc)
      throw std::invalid_argument("sequence length must equal the truncation");
    for (const Int& v : row)
      if (v < 1) throw std::invalid_argument("sequence values must be >= 1");
  }
  if (polys.empty()) throw std::invalid_argument("empty polynomial family");
  for (const Poly& p : polys)
    if (!p.integral() || !p.nat_valued())
      throw std::invalid_argument("family polynomials must be integral and "
                                  "nonnegative on positives");

  BuildOutcome out;
  CstTree tree;
  tree.depth = static_cast<std::uint32_t>(root.size());
  tree.trunc = root.trunc;
  tree.seq_names = root.names;

  for (std::uint64_t subset : lattice_order(tree.depth)) {
    // Floor index m: everything used by proper subsets must sit strictly
    // below the new index set.
    std::uint32_t m = 0;
    for (const auto& [sub, node] : tree.nodes)
      if ((sub & subset) == sub && sub != subset) m = std::max(m, node.h.max());
    if (m >= root.trunc) {
      out.exhausted_subset = subset;
      out.exhausted_reason = "truncation too small for a fresh index set";
      return out;
    }

    // Surrogate star set: the ground set intersected with every shift by a
    // reachable chain value.
    std::set<Int> shift_set;
    std::set<Int> fsum_set;
    {
      std::vector<Int> alphas, fsums;
      walk_chains_over(tree, root, subset, /*proper=*/true, alphas, fsums, 0,
                       [&](const std::vector<Int>& as, const std::vector<Int>& fs) {
                         Int asum = 0, fsum = 0;
                         for (const Int& a : as) asum += a;
                         for (const Int& f : fs) fsum += f;
                         fsum_set.insert(fsum);
                         for (const Poly& p : polys)
                           shift_set.insert(asum + p.eval_int(fsum));
                       });
    }
    std::vector<Int> star_shifts(shift_set.begin(), shift_set.end());
    GroundSet star = shifted_intersection(g, star_shifts);

    // Family extension: shifted differences of every P by every chain f-sum.
    std::vector<Poly> extended = polys;
    for (const Int& s : fsum_set) {
      for (const Poly& p : polys) {
        Poly phi = shift_difference(p, s);
        bool dup = false;
        for (const Poly& q : extended)
          if (q == phi) {
            dup = true;
            break;
          }
        if (!dup) extended.push_back(std::move(phi));
      }
    }

    std::vector<IPFragment> frags;
    for (std::size_t fi = 0; fi < root.size(); ++fi)
      if ((subset >> fi) & 1) frags.emplace_back(root.values[fi]);

    SearchResult res = signed_jp_search(star, extended, frags, m, b);
    if (!res.found()) {
      out.exhausted_subset = subset;
      out.exhausted_reason = "witness search exhausted within bounds";
      return out;
    }

    CstNode node;
    node.subset = subset;
    node.alpha = res.witness->a;
    node.h = *res.witness->beta;
    node.floor_index = m;
    node.star_values = star_shifts.size();
    tree.nodes.emplace(subset, std::move(node));
  }

  out.tree = std::move(tree);
  return out;
}

VerifyReport cst_verify(const CstTree& t, const GroundSet& g,
                        const std::vector<Poly>& polys, const SeqFamily& root) {
  VerifyReport report;

  // Conclusion (1): strict separation along the subset order.
  for (const auto& [sa, na] : t.nodes) {
    for (const auto& [sb, nb] : t.nodes) {
      if (sa == sb || (sa & sb) != sa) continue;
      ++report.separation_checks;
      if (na.h.max() >= nb.h.min()) {
        report.failures.push_back(
            {"separation", "max H(" + std::to_string(sa) + ") = " +
                               std::to_string(na.h.max()) + " >= min H(" +
                               std::to_string(sb) + ") = " +
                               std::to_string(nb.h.min())});
      }
    }
  }

  // Conclusion (2): every chain, every selection, every polynomial, every
  // nonempty sub-chain sums into the ground set.
  std::uint64_t universe = (std::uint64_t(1) << t.depth) - 1;
  std::vector<Int> alphas, fsums;
  walk_chains_over(t, root, universe, /*proper=*/false, alphas, fsums, 0,
                   [&](const std::vector<Int>& as, const std::vector<Int>& fs) {
                     std::size_t r = as.size();
                     for (std::uint64_t beta = 1; beta < (std::uint64_t(1) << r);
                          ++beta) {
                       Int asum = 0, fsum = 0;
                       for (std::size_t i = 0; i < r; ++i) {
                         if ((beta >> i) & 1) {
                           asum += as[i];
                           fsum += fs[i];
                         }
                       }
                       for (const Poly& p : polys) {
                         ++report.chain_checks;
                         Rat val = Rat(asum) + p.eval_monomial(fsum);
                         if (!is_integer(val) || !g.contains(numer(val))) {
                           if (report.failures.size() < 16)
                             report.failures.push_back(
                                 {"chain-membership",
                                  "sum " + val.str() + " outside the ground set (" +
                                      p.to_string() + ")"});
                         }
                       }
                     }
                   });
  return report;
}

nlohmann::json tree_to_json(const CstTree& t) {
  nlohmann::json j;
  j["depth"] = t.depth;
  j["trunc"] = t.trunc;
  j["sequences"] = t.seq_names;
  nlohmann::json nodes = nlohmann::json::array();
  for (std::uint64_t subset : lattice_order(t.depth)) {
    auto it = t.nodes.find(subset);
    if (it == t.nodes.end()) continue;
    const CstNode& n = it->second;
    nlohmann::json jn;
    std::vector<std::string> members;
    for (std::size_t fi = 0; fi < t.seq_names.size(); ++fi)
      if ((subset >> fi) & 1) members.push_back(t.seq_names[fi]);
    std::sort(members.begin(), members.end());
    jn["subset"] = members;
    jn["alpha"] = ramsey::int_to_json(n.alpha);
    nlohmann::json h = nlohmann::json::array();
    for (std::uint32_t e : n.h.elems()) h.push_back(e);
    jn["h"] = h;
    jn["floor"] = n.floor_index;
    jn["star_values"] = n.star_values;
    nodes.push_back(jn);
  }
  j["nodes"] = nodes;
  return j;
}

CstTree tree_from_json(const nlohmann::json& j) {
  CstTree t;
  t.depth = j.at("depth").get<std::uint32_t>();
  t.trunc = j.at("trunc").get<std::uint32_t>();
  t.seq_names = j.at("sequences").get<std::vector<std::string>>();
  for (const auto& jn : j.at("nodes")) {
    CstNode n;
    std::uint64_t subset = 0;
    for (const auto& name : jn.at("subset")) {
      auto it = std::find(t.seq_names.begin(), t.seq_names.end(),
                          name.get<std::string>());
      if (it == t.seq_names.end())
        throw std::invalid_argument("unknown sequence name in tree");
      subset |= std::uint64_t(1) << (it - t.seq_names.begin());
    }
    n.subset = subset;
    n.alpha = ramsey::int_from_json(jn.at("alpha"));
    std::vector<std::uint32_t> h;
    for (const auto& e : jn.at("h")) h.push_back(e.get<std::uint32_t>());
    n.h = FinSet(h);
    n.floor_index = jn.value("floor", 0u);
    n.star_values = jn.value("star_values", std::uint64_t(0));
    t.nodes.emplace(subset, std::move(n));
  }
  return t;
}

nlohmann::json report_to_json(const VerifyReport& r) {
  nlohmann::json j;
  j["separation_checks"] = r.separation_checks;
  j["chain_checks"] = r.chain_checks;
  j["passed"] = r.passed();
  nlohmann::json fails = nlohmann::json::array();
  for (const CheckFailure& f : r.failures) {
    nlohmann::json jf;
    jf["kind"] = f.kind;
    jf["detail"] = f.detail;
    fails.push_back(jf);
  }
  j["failures"] = fails;
  return j;
}

}  // namespace ramsey::cst
