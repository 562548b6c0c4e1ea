#include "ramsey/search.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>

#include "ramsey/parallel.hpp"

namespace ramsey {

namespace {

constexpr std::uint64_t kNoCode = ~std::uint64_t(0);

std::int64_t default_a_min(const SearchBounds& b, std::int64_t fallback) {
  return b.a_min >= 0 ? b.a_min : fallback;
}

// Coarse deadline taken from the time budget; candidates past it count as
// outside the bounds. Zero means unlimited.
struct Deadline {
  std::chrono::steady_clock::time_point at;
  bool enabled = false;

  explicit Deadline(std::uint64_t budget_ms) {
    if (budget_ms > 0) {
      enabled = true;
      at = std::chrono::steady_clock::now() + std::chrono::milliseconds(budget_ms);
    }
  }
  bool passed() const {
    return enabled && std::chrono::steady_clock::now() > at;
  }
};

// Admissible-shift mask over a in [a_min, a_hi]: bit (a - a_min) survives iff
// every value lands inside the window and the set. Built by ANDing shifted
// copies of the membership mask (the kernel path).
void admissible_mask(kernels::BitVec& mask, const GroundSet& g,
                     const std::vector<Int>& values, std::int64_t a_min,
                     std::int64_t a_hi) {
  std::size_t range = a_hi >= a_min ? static_cast<std::size_t>(a_hi - a_min + 1) : 0;
  mask = kernels::BitVec(range);
  if (range == 0) return;
  mask.fill_all();
  for (const Int& v : values) {
    Int shift = Int(a_min) + v - 1;
    if (shift >= g.window() || !fits_i64(shift)) {
      mask.clear_all();
      return;
    }
    kernels::and_shifted(mask, g.bits(), to_i64(shift));
  }
}

// One IP-style candidate: the values to shift by, already deduplicated.
struct Candidate {
  std::vector<Int> values;
  bool valid = false;
};

struct CodeHit {
  std::uint64_t code = kNoCode;
  std::int64_t a = 0;
};

// Scans subset codes in [1, code_end) against per-candidate admissible
// masks. beta_major returns the first code with any admissible shift;
// a_major returns the lexicographically minimal (a, code).
CodeHit scan_codes(const GroundSet& g, std::uint64_t code_end,
                   const std::function<void(std::uint64_t, Candidate&)>& make,
                   std::int64_t a_min, std::int64_t max_a, bool beta_major,
                   unsigned workers, std::uint64_t budget_ms = 0) {
  const std::int64_t n = g.window();
  unsigned nchunks = std::max(1u, workers);
  std::vector<CodeHit> hits(nchunks);
  std::atomic<std::uint64_t> best_code{kNoCode};
  std::atomic<std::int64_t> best_a{max_a + 1};
  Deadline deadline(budget_ms);

  parallel_chunks(1, code_end, workers, [&](unsigned w, std::uint64_t lo,
                                            std::uint64_t hi) {
    kernels::BitVec mask;
    Candidate cand;
    CodeHit local;
    for (std::uint64_t code = lo; code < hi; ++code) {
      if ((code & 255) == 0 && deadline.passed()) break;
      if (beta_major) {
        if (code >= best_code.load(std::memory_order_relaxed)) break;
      }
      cand.valid = false;
      cand.values.clear();
      make(code, cand);
      if (!cand.valid) continue;

      Int vmax = cand.values.front();
      for (const Int& v : cand.values) vmax = std::max(vmax, v);
      Int hi_bound = Int(n) - vmax;
      std::int64_t a_hi = max_a;
      if (hi_bound < a_hi) a_hi = fits_i64(hi_bound) ? to_i64(hi_bound) : a_min - 1;
      if (!beta_major) {
        // A later candidate only matters if it beats the best shift so far.
        std::int64_t cap = best_a.load(std::memory_order_relaxed);
        a_hi = std::min(a_hi, cap);
      }
      if (a_hi < a_min) continue;

      admissible_mask(mask, g, cand.values, a_min, a_hi);
      std::size_t bit = kernels::find_first(mask);
      if (bit == kernels::npos) continue;
      std::int64_t a = a_min + static_cast<std::int64_t>(bit);

      if (beta_major) {
        local.code = code;
        local.a = a;
        std::uint64_t prev = best_code.load(std::memory_order_relaxed);
        while (code < prev &&
               !best_code.compare_exchange_weak(prev, code,
                                                std::memory_order_relaxed)) {
        }
        break;  // codes ascend inside the chunk
      }
      if (local.code == kNoCode || a < local.a ||
          (a == local.a && code < local.code)) {
        local.code = code;
        local.a = a;
        std::int64_t prev = best_a.load(std::memory_order_relaxed);
        while (a < prev &&
               !best_a.compare_exchange_weak(prev, a, std::memory_order_relaxed)) {
        }
      }
    }
    hits[w] = local;
  });

  CodeHit best;
  for (const CodeHit& h : hits) {
    if (h.code == kNoCode) continue;
    if (best.code == kNoCode) {
      best = h;
      continue;
    }
    if (beta_major) {
      if (h.code < best.code) best = h;
    } else if (h.a < best.a || (h.a == best.a && h.code < best.code)) {
      best = h;
    }
  }
  return best;
}

void require_family(const std::vector<Poly>& polys, bool need_nat) {
  if (polys.empty()) throw std::invalid_argument("empty polynomial family");
  for (const Poly& p : polys) {
    if (!p.integral())
      throw std::invalid_argument("polynomial must have integer coefficients: " +
                                  p.to_string());
    if (need_nat && !p.nat_valued())
      throw std::invalid_argument("polynomial must be nonnegative on positives: " +
                                  p.to_string());
  }
}

std::size_t shared_index_length(const std::vector<IPFragment>& frags) {
  if (frags.empty()) throw std::invalid_argument("need at least one IP fragment");
  std::size_t k = frags.front().size();
  for (const IPFragment& f : frags) k = std::min(k, f.size());
  return k;
}

// Audit of a beta-shaped witness against a polynomial family; the
// verification path re-evaluates by monomial summation and direct lookups.
bool reverify_beta(const GroundSet& g, const std::vector<Poly>& polys,
                   const std::vector<IPFragment>& frags, Witness& w) {
  if (!w.beta) return false;
  std::size_t idx = 0;
  for (std::size_t pi = 0; pi < polys.size(); ++pi) {
    for (std::size_t fi = 0; fi < frags.size(); ++fi, ++idx) {
      if (idx >= w.audit.size()) return false;
      const AuditEntry& e = w.audit[idx];
      Int point = 0;
      for (std::uint32_t t : w.beta->elems()) point += frags[fi].gen(t);
      Rat value = Rat(w.a) + polys[pi].eval_monomial(point);
      if (!is_integer(value)) return false;
      Int vi = numer(value);
      if (e.point != point || e.value != vi) return false;
      if (!g.contains(vi)) return false;
    }
  }
  w.verified = idx == w.audit.size();
  return w.verified;
}

Witness build_beta_witness(const std::vector<Poly>& polys,
                           const std::vector<IPFragment>& frags,
                           std::uint64_t code, std::int64_t a) {
  Witness w;
  w.a = a;
  w.beta = FinSet::from_code(code);
  for (std::size_t pi = 0; pi < polys.size(); ++pi) {
    for (std::size_t fi = 0; fi < frags.size(); ++fi) {
      AuditEntry e;
      e.poly_id = static_cast<int>(pi);
      e.frag_id = static_cast<int>(fi);
      e.point = frags[fi].eval(*w.beta);
      e.value = Int(a) + polys[pi].eval_int(e.point);
      w.audit.push_back(std::move(e));
    }
  }
  return w;
}

SearchResult jp_engine(const GroundSet& g, const std::vector<Poly>& polys,
                       const std::vector<IPFragment>& frags,
                       std::uint32_t min_index, const SearchBounds& b) {
  std::size_t k = shared_index_length(frags);
  k = std::min<std::size_t>({k, b.max_subset_bits, 62});
  std::int64_t a_min = default_a_min(b, 0);
  std::int64_t max_a = b.max_a;

  SearchResult res;
  if (k == 0 || min_index >= k) return res;

  std::uint64_t code_end = std::uint64_t(1) << k;
  std::uint64_t low_mask = (std::uint64_t(1) << min_index) - 1;
  auto make = [&](std::uint64_t code, Candidate& cand) {
    if (code & low_mask) return;  // min(beta) must exceed min_index
    FinSet beta = FinSet::from_code(code);
    for (const IPFragment& f : frags) {
      Int x = f.eval(beta);
      for (const Poly& p : polys) cand.values.push_back(p.eval_int(x));
    }
    std::sort(cand.values.begin(), cand.values.end());
    cand.values.erase(std::unique(cand.values.begin(), cand.values.end()),
                      cand.values.end());
    cand.valid = true;
  };

  bool beta_major = b.order != SearchBounds::Order::a_major;
  CodeHit hit = scan_codes(g, code_end, make, a_min, max_a, beta_major, b.workers,
                           b.time_budget_ms);
  res.candidates_tried = code_end - 1;
  if (hit.code == kNoCode) return res;

  Witness w = build_beta_witness(polys, frags, hit.code, hit.a);
  if (!reverify_beta(g, polys, frags, w))
    throw std::logic_error("witness failed independent verification");
  res.status = SearchStatus::found;
  res.witness = std::move(w);
  return res;
}

}  // namespace

SearchResult jp_witness_search(const GroundSet& g, const std::vector<Poly>& polys,
                               const std::vector<IPFragment>& frags,
                               const SearchBounds& b) {
  require_family(polys, true);
  return jp_engine(g, polys, frags, 0, b);
}

SearchResult j_witness_search(const GroundSet& g,
                              const std::vector<IPFragment>& frags,
                              const SearchBounds& b) {
  return jp_witness_search(g, {Poly::identity()}, frags, b);
}

SearchResult signed_jp_search(const GroundSet& g, const std::vector<Poly>& polys,
                              const std::vector<IPFragment>& frags,
                              std::uint32_t min_index, const SearchBounds& b) {
  require_family(polys, false);
  return jp_engine(g, polys, frags, min_index, b);
}

SearchResult ip_vdw_search(const GroundSet& g, const std::vector<MultiPoly>& polys,
                           const std::vector<IPFragment>& frags,
                           const SearchBounds& b) {
  if (polys.empty()) throw std::invalid_argument("empty polynomial family");
  for (const MultiPoly& f : polys)
    if (f.arity() != frags.size())
      throw std::invalid_argument("arity mismatch between polynomials and fragments");

  std::size_t k = shared_index_length(frags);
  k = std::min<std::size_t>({k, b.max_subset_bits, 62});
  std::int64_t a_min = default_a_min(b, 1);
  std::int64_t max_a = b.max_a;

  SearchResult res;
  if (k == 0) return res;

  std::uint64_t code_end = std::uint64_t(1) << k;
  auto make = [&](std::uint64_t code, Candidate& cand) {
    FinSet beta = FinSet::from_code(code);
    std::vector<Int> xs;
    xs.reserve(frags.size());
    for (const IPFragment& f : frags) xs.push_back(f.eval(beta));
    for (const MultiPoly& f : polys) cand.values.push_back(f.eval(xs));
    std::sort(cand.values.begin(), cand.values.end());
    cand.values.erase(std::unique(cand.values.begin(), cand.values.end()),
                      cand.values.end());
    cand.valid = true;
  };

  bool beta_major = b.order == SearchBounds::Order::beta_major;
  CodeHit hit = scan_codes(g, code_end, make, a_min, max_a, beta_major, b.workers,
                           b.time_budget_ms);
  res.candidates_tried = code_end - 1;
  if (hit.code == kNoCode) return res;

  Witness w;
  w.a = hit.a;
  w.beta = FinSet::from_code(hit.code);
  std::vector<Int> xs;
  for (const IPFragment& f : frags) xs.push_back(f.eval(*w.beta));
  for (std::size_t fi = 0; fi < polys.size(); ++fi) {
    AuditEntry e;
    e.poly_id = static_cast<int>(fi);
    e.frag_id = -1;
    e.point = polys[fi].eval(xs);
    e.value = Int(hit.a) + e.point;
    if (!g.contains(e.value))
      throw std::logic_error("witness failed independent verification");
    w.audit.push_back(std::move(e));
  }
  w.verified = true;
  res.status = SearchStatus::found;
  res.witness = std::move(w);
  return res;
}

SearchResult reduce_and_search(const GroundSet& g, const std::vector<Poly>& polys,
                               const std::vector<IPFragment>& frags,
                               const SearchBounds& b) {
  require_family(polys, true);
  const std::size_t l = frags.size();
  std::vector<MultiPoly> family;
  family.reserve(polys.size() * l);
  for (const Poly& p : polys)
    for (std::size_t i = 1; i <= l; ++i)
      family.push_back(restrict_multi(p, static_cast<unsigned>(i),
                                      static_cast<unsigned>(l)));

  SearchBounds inner = b;
  inner.order = SearchBounds::Order::beta_major;
  if (inner.a_min < 0) inner.a_min = 0;
  SearchResult res = ip_vdw_search(g, family, frags, inner);
  if (!res.found()) return res;

  // Rebuild the audit in (polynomial, fragment) form so the two routes are
  // directly comparable.
  Witness w = build_beta_witness(polys, frags, res.witness->beta->code(),
                                 to_i64(res.witness->a));
  if (!reverify_beta(g, polys, frags, w))
    throw std::logic_error("witness failed independent verification");
  res.witness = std::move(w);
  return res;
}

SearchResult pvdw_search(const Coloring& c, const std::vector<Poly>& polys,
                         const SearchBounds& b) {
  require_family(polys, false);
  const std::int64_t n = c.window();

  struct Row {
    std::int64_t d;
    std::vector<std::int64_t> values;
    std::int64_t a_lo, a_hi;
  };
  std::vector<Row> rows;
  std::int64_t a_hi_global = 0;
  for (std::int64_t d = 1; d <= b.max_d; ++d) {
    Row row;
    row.d = d;
    Int vmin = 0, vmax = 0;
    bool first = true;
    bool representable = true;
    for (const Poly& p : polys) {
      Int v = p.eval_int(d);
      if (!fits_i64(v)) {
        representable = false;
        break;
      }
      if (first || v < vmin) vmin = v;
      if (first || v > vmax) vmax = v;
      first = false;
      row.values.push_back(to_i64(v));
    }
    if (!representable) continue;
    row.a_lo = std::max<std::int64_t>(1, 1 - to_i64(vmin));
    row.a_hi = n - to_i64(vmax);
    if (row.a_hi < row.a_lo) continue;
    a_hi_global = std::max(a_hi_global, row.a_hi);
    rows.push_back(std::move(row));
  }

  SearchResult res;
  std::int64_t a_end = std::min(b.max_a, a_hi_global);
  if (rows.empty() || a_end < 1) return res;

  struct Hit {
    std::int64_t a = -1, d = -1;
    unsigned color = 0;
  };
  unsigned nchunks = std::max(1u, b.workers);
  std::vector<Hit> hits(nchunks);
  std::atomic<std::int64_t> best_a{a_end + 1};
  Deadline deadline(b.time_budget_ms);

  parallel_chunks(1, static_cast<std::uint64_t>(a_end) + 1, b.workers,
                  [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
                    Hit local;
                    for (std::uint64_t au = lo; au < hi; ++au) {
                      std::int64_t a = static_cast<std::int64_t>(au);
                      if ((au & 255) == 0 && deadline.passed()) break;
                      if (a > best_a.load(std::memory_order_relaxed)) break;
                      for (const Row& row : rows) {
                        if (a < row.a_lo || a > row.a_hi) continue;
                        unsigned col = c.color_of(a + row.values.front());
                        bool mono = true;
                        for (std::int64_t v : row.values) {
                          if (c.color_of(a + v) != col) {
                            mono = false;
                            break;
                          }
                        }
                        if (mono) {
                          local = Hit{a, row.d, col};
                          std::int64_t prev = best_a.load(std::memory_order_relaxed);
                          while (a < prev && !best_a.compare_exchange_weak(
                                                 prev, a, std::memory_order_relaxed)) {
                          }
                          break;
                        }
                      }
                      if (local.a >= 0) break;
                    }
                    hits[w] = local;
                  });

  Hit best;
  for (const Hit& h : hits) {
    if (h.a < 0) continue;
    if (best.a < 0 || h.a < best.a || (h.a == best.a && h.d < best.d)) best = h;
  }
  if (best.a < 0) return res;

  Witness w;
  w.a = best.a;
  w.d = best.d;
  for (std::size_t pi = 0; pi < polys.size(); ++pi) {
    AuditEntry e;
    e.poly_id = static_cast<int>(pi);
    e.frag_id = -1;
    e.point = best.d;
    Rat val = Rat(best.a) + polys[pi].eval_monomial(best.d);
    if (!is_integer(val)) throw std::logic_error("non-integer progression value");
    e.value = numer(val);
    if (!fits_i64(e.value) || to_i64(e.value) < 1 || to_i64(e.value) > n ||
        c.color_of(to_i64(e.value)) != best.color)
      throw std::logic_error("witness failed independent verification");
    w.audit.push_back(std::move(e));
  }
  w.verified = true;
  res.status = SearchStatus::found;
  res.witness = std::move(w);
  res.color = best.color;
  return res;
}

SearchResult pp_rich_search(const GroundSet& g, const std::vector<Poly>& polys,
                            const SearchBounds& b) {
  require_family(polys, true);
  const std::int64_t n = g.window();
  std::int64_t a_min = default_a_min(b, 1);
  std::int64_t max_a = std::min(b.max_a, n);

  SearchResult res;
  std::int64_t x_end = b.max_d;
  if (x_end < 1 || max_a < a_min) return res;

  // Candidate "codes" are the evaluation points x themselves.
  auto make = [&](std::uint64_t code, Candidate& cand) {
    Int x = static_cast<std::int64_t>(code);
    for (const Poly& p : polys) cand.values.push_back(p.eval_int(x));
    std::sort(cand.values.begin(), cand.values.end());
    cand.values.erase(std::unique(cand.values.begin(), cand.values.end()),
                      cand.values.end());
    cand.valid = true;
  };
  bool beta_major = b.order == SearchBounds::Order::beta_major;
  CodeHit hit = scan_codes(g, static_cast<std::uint64_t>(x_end) + 1, make, a_min,
                           max_a, beta_major, b.workers, b.time_budget_ms);
  res.candidates_tried = static_cast<std::uint64_t>(x_end);
  if (hit.code == kNoCode) return res;

  Witness w;
  w.a = hit.a;
  w.d = Int(static_cast<std::int64_t>(hit.code));
  for (std::size_t pi = 0; pi < polys.size(); ++pi) {
    AuditEntry e;
    e.poly_id = static_cast<int>(pi);
    e.frag_id = -1;
    e.point = *w.d;
    Rat val = Rat(w.a) + polys[pi].eval_monomial(e.point);
    if (!is_integer(val)) throw std::logic_error("non-integer value");
    e.value = numer(val);
    if (!g.contains(e.value))
      throw std::logic_error("witness failed independent verification");
    w.audit.push_back(std::move(e));
  }
  w.verified = true;
  res.status = SearchStatus::found;
  res.witness = std::move(w);
  return res;
}

std::pair<IPFragment, std::vector<FinSet>> sub_ip_multiple_extract(
    const IPFragment& frag, const Int& m, std::size_t count) {
  if (m < 1) throw std::invalid_argument("modulus must be >= 1");
  if (count < 1) throw std::invalid_argument("need count >= 1");
  std::vector<FinSet> blocks = extract_shared_blocks({frag}, m, count);
  if (blocks.size() < count)
    throw InsufficientFragmentError(frag.size(), Int(count) * m);
  std::vector<Int> sums;
  sums.reserve(blocks.size());
  for (const FinSet& blk : blocks) sums.push_back(frag.eval(blk));
  return {IPFragment(std::move(sums)), std::move(blocks)};
}

std::vector<FinSet> extract_shared_blocks(const std::vector<IPFragment>& frags,
                                          const Int& m, std::size_t max_blocks) {
  if (frags.empty()) throw std::invalid_argument("need at least one fragment");
  if (m < 1) throw std::invalid_argument("modulus must be >= 1");
  std::size_t k = shared_index_length(frags);

  // Prefix-sum residue tuples; a repeat closes a block whose per-fragment
  // sums are all divisible by m. The base resets after each block.
  std::vector<FinSet> blocks;
  std::vector<Int> prefix(frags.size(), 0);
  std::map<std::vector<Int>, std::uint32_t> seen;
  std::vector<Int> residue(frags.size(), 0);
  seen[residue] = 0;
  for (std::uint32_t j = 1; j <= k && blocks.size() < max_blocks; ++j) {
    for (std::size_t fi = 0; fi < frags.size(); ++fi) {
      prefix[fi] += frags[fi].gen(j);
      residue[fi] = prefix[fi] % m;
    }
    auto it = seen.find(residue);
    if (it != seen.end()) {
      std::vector<std::uint32_t> elems;
      for (std::uint32_t t = it->second + 1; t <= j; ++t) elems.push_back(t);
      blocks.emplace_back(std::move(elems));
      seen.clear();
      seen[residue] = j;
    } else {
      seen[residue] = j;
    }
  }
  return blocks;
}

RationalSearchResult rational_search(const GroundSet& g,
                                     const std::vector<Poly>& polys,
                                     const std::vector<IPFragment>& frags,
                                     const SearchBounds& b) {
  if (polys.empty()) throw std::invalid_argument("empty polynomial family");
  for (const Poly& p : polys)
    if (!p.nat_valued())
      throw std::invalid_argument("polynomial must be nonnegative on positives: " +
                                  p.to_string());
  if (frags.empty()) throw std::invalid_argument("need at least one fragment");

  RationalSearchResult out;
  Int m = 1;
  for (const Poly& p : polys)
    for (const Rat& c : p.coeffs()) m = int_lcm(m, denom(c));
  out.scale = m;

  std::size_t max_blocks = std::min<std::size_t>(b.max_subset_bits, 62);
  out.blocks = extract_shared_blocks(frags, m, max_blocks);
  if (out.blocks.empty())
    throw InsufficientFragmentError(shared_index_length(frags),
                                    int_pow(m, static_cast<unsigned>(frags.size())));

  std::vector<IPFragment> reduced;
  reduced.reserve(frags.size());
  for (const IPFragment& f : frags) {
    std::vector<Int> gens;
    gens.reserve(out.blocks.size());
    for (const FinSet& blk : out.blocks) {
      Int sum = f.eval(blk);
      if (sum % m != 0) throw std::logic_error("block sum not divisible by scale");
      gens.push_back(sum / m);
    }
    reduced.emplace_back(std::move(gens));
  }

  std::vector<Poly> scaled;
  scaled.reserve(polys.size());
  for (const Poly& p : polys) scaled.push_back(scale_with(p, m));

  out.result = jp_witness_search(g, scaled, reduced, b);
  if (!out.result.found()) return out;

  // Map back: the returned index set is the union of the chosen blocks, and
  // the audit is recomputed against the original rational polynomials.
  const Witness& inner = *out.result.witness;
  std::vector<std::uint32_t> union_elems;
  for (std::uint32_t bi : inner.beta->elems())
    for (std::uint32_t t : out.blocks[bi - 1].elems()) union_elems.push_back(t);
  std::sort(union_elems.begin(), union_elems.end());
  FinSet beta(union_elems);

  Witness w;
  w.a = inner.a;
  w.beta = beta;
  for (std::size_t pi = 0; pi < polys.size(); ++pi) {
    for (std::size_t fi = 0; fi < frags.size(); ++fi) {
      AuditEntry e;
      e.poly_id = static_cast<int>(pi);
      e.frag_id = static_cast<int>(fi);
      e.point = frags[fi].eval(beta);
      Rat val = Rat(w.a) + polys[pi].eval_monomial(e.point);
      if (!is_integer(val))
        throw std::logic_error("rational audit produced a non-integer value");
      e.value = numer(val);
      if (!g.contains(e.value))
        throw std::logic_error("witness failed independent verification");
      w.audit.push_back(std::move(e));
    }
  }
  w.verified = true;
  out.result.witness = std::move(w);
  return out;
}

Witness dilate_witness(const Witness& w, const std::vector<Poly>& polys,
                       const std::vector<IPFragment>& frags, const GroundSet& g,
                       std::int64_t n) {
  if (n < 1) throw std::invalid_argument("dilation factor must be >= 1");
  if (!w.beta) throw std::invalid_argument("witness has no index set");
  GroundSet target = dilate(g, n);

  Witness out;
  out.a = w.a * n;
  out.beta = w.beta;
  for (std::size_t pi = 0; pi < polys.size(); ++pi) {
    for (std::size_t fi = 0; fi < frags.size(); ++fi) {
      AuditEntry e;
      e.poly_id = static_cast<int>(pi);
      e.frag_id = static_cast<int>(fi);
      e.point = frags[fi].eval(*w.beta);
      Rat val = Rat(out.a) + polys[pi].eval_monomial(e.point);
      if (!is_integer(val))
        throw std::invalid_argument("family must produce integer values");
      e.value = numer(val);
      if (!fits_i64(e.value) || to_i64(e.value) > g.window())
        throw WindowOverflow("dilated value " + e.value.str() +
                             " exceeds window " + std::to_string(g.window()));
      if (!target.contains(e.value))
        throw std::logic_error("dilated witness failed verification");
      out.audit.push_back(std::move(e));
    }
  }
  out.verified = true;
  return out;
}

bool verify_witness_against(const GroundSet& g, const Witness& w) {
  if (w.audit.empty()) return false;
  for (const AuditEntry& e : w.audit)
    if (!g.contains(e.value)) return false;
  return true;
}

namespace {

// Mixed-radix index over [0..grid]^dims.
std::uint64_t grid_size(std::int64_t grid, unsigned dims) {
  std::uint64_t total = 1;
  for (unsigned i = 0; i < dims; ++i) total *= static_cast<std::uint64_t>(grid + 1);
  return total;
}

}  // namespace

PartitionResult partition_experiment(const GroundSet& g, const GroundSet& part1,
                                     const GroundSet& part2,
                                     const std::vector<Poly>& polys,
                                     const SearchBounds& b,
                                     const PartitionOptions& opts) {
  require_family(polys, true);
  if (part1.window() != g.window() || part2.window() != g.window())
    throw std::invalid_argument("parts must share the window");
  // The split must cover G exactly.
  for (std::size_t i = 0; i < g.bits().words(); ++i) {
    std::uint64_t u = part1.bits().w[i] | part2.bits().w[i];
    if (u != g.bits().w[i])
      throw std::invalid_argument("parts do not union to the ground set");
  }

  PartitionResult out;

  unsigned n_deg = 0;
  Int l_coef = 0;
  bool nonneg = true;
  for (const Poly& p : polys) {
    n_deg = std::max<unsigned>(n_deg, static_cast<unsigned>(p.degree()));
    for (const Rat& c : p.coeffs()) {
      if (c < 0) nonneg = false;
      Int ci = numer(c);
      if (ci > l_coef) l_coef = ci;
    }
  }
  if (n_deg == 0) throw std::invalid_argument("family has no nonzero polynomial");

  auto run_fast = [&]() -> PartitionResult {
    PartitionResult r;
    r.trace.mode = "fast";
    SearchResult s1 = pp_rich_search(part1, polys, b);
    if (s1.found()) {
      r.status = SearchStatus::found;
      r.part = 1;
      r.witness = std::move(s1.witness);
      return r;
    }
    SearchResult s2 = pp_rich_search(part2, polys, b);
    if (s2.found()) {
      r.status = SearchStatus::found;
      r.part = 2;
      r.witness = std::move(s2.witness);
      return r;
    }
    r.trace.stage_failed = "fast_both_parts";
    return r;
  };

  bool proof_mode = !opts.force_fast && n_deg <= 2 && opts.grid <= 12 &&
                    part1.count() > 0 && part2.count() > 0;
  if (proof_mode && !nonneg)
    throw std::invalid_argument(
        "proof mode needs nonnegative coefficients; rerun in fast mode");
  if (!proof_mode) return run_fast();

  const std::int64_t grid = opts.grid;
  if (!fits_i64(l_coef) || to_i64(l_coef) < 1)
    throw std::invalid_argument("coefficient bound must be a small positive integer");
  const std::int64_t l = to_i64(l_coef);
  const std::uint64_t cells = grid_size(grid, n_deg);
  if (cells > opts.work_limit)
    throw std::invalid_argument("coefficient grid too large for the work limit; "
                                "lower --grid or use fast mode");

  out.trace.mode = "proof";
  out.trace.family_size = cells;

  // Stage 1: (x, y) with x + P_a(y) in G for every grid coefficient vector.
  const std::int64_t n = g.window();
  std::int64_t best_x = -1, best_y = -1;
  {
    auto make = [&](std::uint64_t code, Candidate& cand) {
      Int y = static_cast<std::int64_t>(code);
      std::vector<Int> ypow(n_deg + 1, 1);
      for (unsigned i = 1; i <= n_deg; ++i) ypow[i] = ypow[i - 1] * y;
      std::set<Int> vals;
      std::vector<std::int64_t> a_vec(n_deg, 0);
      while (true) {
        Int v = 0;
        for (unsigned i = 0; i < n_deg; ++i) v += a_vec[i] * ypow[i + 1];
        vals.insert(v);
        unsigned pos = 0;
        while (pos < n_deg && ++a_vec[pos] > grid) {
          a_vec[pos] = 0;
          ++pos;
        }
        if (pos == n_deg) break;
      }
      cand.values.assign(vals.begin(), vals.end());
      cand.valid = true;
    };
    CodeHit hit = scan_codes(g, static_cast<std::uint64_t>(b.max_d) + 1, make, 1,
                             std::min(b.max_a, n), false, b.workers);
    if (hit.code == kNoCode) {
      out.trace.stage_failed = "base_cover_search";
      return out;
    }
    best_x = hit.a;
    best_y = static_cast<std::int64_t>(hit.code);
  }
  out.trace.base_x = best_x;
  out.trace.base_y = best_y;

  // Stage 2: color the grid by which part x + P_a(y) lands in.
  std::vector<std::uint8_t> color(cells);
  {
    std::vector<Int> ypow(n_deg + 1, 1);
    for (unsigned i = 1; i <= n_deg; ++i) ypow[i] = ypow[i - 1] * best_y;
    std::vector<std::int64_t> a_vec(n_deg, 0);
    std::uint64_t idx = 0;
    while (true) {
      Int v = best_x;
      for (unsigned i = 0; i < n_deg; ++i) v += a_vec[i] * ypow[i + 1];
      color[idx] = part1.contains(v) ? 1 : 2;
      ++idx;
      unsigned pos = 0;
      while (pos < n_deg && ++a_vec[pos] > grid) {
        a_vec[pos] = 0;
        ++pos;
      }
      if (pos == n_deg) break;
    }
  }

  auto cell_color = [&](const std::vector<std::int64_t>& a_vec) -> std::uint8_t {
    std::uint64_t idx = 0;
    for (unsigned i = n_deg; i-- > 0;)
      idx = idx * static_cast<std::uint64_t>(grid + 1) +
            static_cast<std::uint64_t>(a_vec[i]);
    return color[idx];
  };

  // Stage 3: monochromatic pattern (z_k + j_k w^k), 0 <= j_k <= l.
  std::vector<std::int64_t> best_z;
  std::int64_t best_w = -1;
  std::uint8_t pattern_color = 0;
  for (std::int64_t wstep = 1; best_w < 0; ++wstep) {
    // Per-coordinate caps z_k <= grid - l * w^k; stop once the first
    // coordinate has no room.
    std::vector<Int> wpow(n_deg + 1, 1);
    for (unsigned i = 1; i <= n_deg; ++i) wpow[i] = wpow[i - 1] * wstep;
    std::vector<std::int64_t> cap(n_deg);
    bool feasible = true;
    for (unsigned i = 0; i < n_deg; ++i) {
      Int c = Int(grid) - Int(l) * wpow[i + 1];
      if (c < 1) {
        feasible = false;
        break;
      }
      cap[i] = to_i64(c);
    }
    if (!feasible) break;

    std::vector<std::int64_t> z(n_deg, 1);
    while (true) {
      std::uint8_t col = 0;
      bool mono = true;
      std::vector<std::int64_t> jvec(n_deg, 0), point(n_deg);
      while (mono) {
        for (unsigned i = 0; i < n_deg; ++i)
          point[i] = z[i] + jvec[i] * to_i64(wpow[i + 1]);
        std::uint8_t c = cell_color(point);
        if (col == 0) col = c;
        else if (c != col) mono = false;
        unsigned pos = 0;
        while (pos < n_deg && ++jvec[pos] > l) {
          jvec[pos] = 0;
          ++pos;
        }
        if (pos == n_deg) break;
      }
      if (mono) {
        best_z = z;
        best_w = wstep;
        pattern_color = col;
        break;
      }
      unsigned pos = 0;
      while (pos < n_deg && ++z[pos] > cap[pos]) {
        z[pos] = 1;
        ++pos;
      }
      if (pos == n_deg) break;
    }
  }
  if (best_w < 0) {
    out.trace.stage_failed = "grid_pattern_search";
    return out;
  }
  out.trace.z = best_z;
  out.trace.w = best_w;

  // Final witness: a = x + sum z_k y^k, common difference w*y; the
  // conclusion a + P(wy) in the part is checked directly, never assumed.
  Int a = best_x;
  {
    Int ypow = 1;
    for (unsigned i = 0; i < n_deg; ++i) {
      ypow *= best_y;
      a += best_z[i] * ypow;
    }
  }
  Int wy = Int(best_w) * best_y;
  const GroundSet& part = pattern_color == 1 ? part1 : part2;

  Witness w;
  w.a = a;
  w.d = wy;
  for (std::size_t pi = 0; pi < polys.size(); ++pi) {
    AuditEntry e;
    e.poly_id = static_cast<int>(pi);
    e.frag_id = -1;
    e.point = wy;
    Rat val = Rat(a) + polys[pi].eval_monomial(wy);
    if (!is_integer(val)) throw std::logic_error("non-integer value");
    e.value = numer(val);
    if (!part.contains(e.value)) {
      out.trace.stage_failed = "final_verification";
      return out;
    }
    w.audit.push_back(std::move(e));
  }
  w.verified = true;
  out.status = SearchStatus::found;
  out.part = pattern_color;
  out.witness = std::move(w);
  return out;
}

}  // namespace ramsey
