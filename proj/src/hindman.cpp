#include "ramsey/hindman.hpp"

#include <algorithm>

#include "ramsey/search.hpp"

namespace ramsey::hindman {

namespace {

std::uint64_t bitlen(const Int& x) {
  if (x == 0) return 0;
  return boost::multiprecision::msb(x) + 1;
}

}  // namespace

bool ratio_pow_le_half(unsigned n, std::uint64_t t) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  // ((2^n-1)/2^n)^t <= 1/2  <=>  2*(2^n-1)^t <= 2^(n*t)
  Int base = (Int(1) << n) - 1;
  Int lhs = 2 * int_pow(base, static_cast<unsigned>(t));
  Int rhs = Int(1) << static_cast<unsigned>(n * t);
  return lhs <= rhs;
}

std::uint64_t a_seq(unsigned n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  // Rational series bracket for t* = ln2 / -ln(1 - 2^-n), then certify the
  // bracket endpoints with the exact big-integer comparison. ln2 and the
  // denominator are bounded by partial sums of ln2 = sum 1/(i 2^i) and
  // -ln(1-x) = sum x^i/i with explicit tail bounds.
  constexpr unsigned terms = 48;
  Rat ln2_lo(0), a_lo(0);
  Rat x = Rat(1, Int(1) << n);
  Rat xp(1);
  for (unsigned i = 1; i <= terms; ++i) {
    ln2_lo += Rat(1, Int(i) * (Int(1) << i));
    xp *= x;
    a_lo += xp / i;
  }
  Rat ln2_hi = ln2_lo + Rat(1, Int(terms + 1) * (Int(1) << terms));
  Rat a_hi = a_lo + 2 * (xp * x) / (terms + 1);

  Int lo = rat_ceil(ln2_lo / a_hi);
  Int hi = rat_ceil(ln2_hi / a_lo);
  if (lo < 1) lo = 1;

  std::uint64_t t = static_cast<std::uint64_t>(lo);
  while (!ratio_pow_le_half(n, t)) ++t;
  while (t > 1 && ratio_pow_le_half(n, t - 1)) --t;
  (void)hi;
  return t;
}

BlockSystem BlockSystem::up_to_bits(std::uint64_t bits) {
  BlockSystem sys;
  sys.b_ = {0, 1};
  sys.grow_to(std::max<std::uint64_t>(bits, 64));
  return sys;
}

BlockSystem BlockSystem::up_to_block(std::size_t k) {
  BlockSystem sys;
  sys.b_ = {0, 1};
  while (sys.block_count() <= k) sys.grow_to(sys.b_.back() + 64);
  return sys;
}

void BlockSystem::grow_to(std::uint64_t bits) {
  if (s_.empty()) s_ = {0};
  while (b_.back() < bits) {
    std::uint64_t t = b_.size() - 1;  // b_{t+1} is defined next
    while (s_.back() <= t) {
      unsigned n = static_cast<unsigned>(a_.size() + 1);
      a_.push_back(a_seq(n));
      s_.push_back(s_.back() + a_.back());
    }
    // n with t in [S_n, S_{n+1}); b_1 itself is pinned to 1, so t >= 1 here.
    std::size_t n = 0;
    while (n + 1 < s_.size() && s_[n + 1] <= t) ++n;
    b_.push_back(b_.back() + n + 1);
  }
  full_masks_.clear();
  for (std::size_t k = 0; k + 1 < b_.size() && b_[k + 1] <= 64; ++k) {
    std::uint64_t width = b_[k + 1] - b_[k];
    std::uint64_t mask = (width >= 64 ? ~std::uint64_t(0)
                                      : ((std::uint64_t(1) << width) - 1))
                         << b_[k];
    full_masks_.push_back(mask);
  }
}

bool BlockSystem::member(std::uint64_t x) const {
  if (x == 0) return false;
  for (std::uint64_t m : full_masks_)
    if ((x & m) == m) return false;
  return true;
}

bool BlockSystem::member(const Int& x) const {
  if (x <= 0) return false;
  if (fits_i64(x) && x <= Int(std::numeric_limits<std::int64_t>::max()))
    if (bitlen(x) <= 64) return member(static_cast<std::uint64_t>(x));
  std::uint64_t len = bitlen(x);
  if (len > covered_bits())
    throw std::logic_error("BlockSystem does not cover the value's bits");
  for (std::size_t k = 0; k + 1 < b_.size() && b_[k + 1] <= len; ++k) {
    bool full = true;
    for (std::uint64_t p = b_[k]; p < b_[k + 1]; ++p) {
      if (!boost::multiprecision::bit_test(x, static_cast<unsigned>(p))) {
        full = false;
        break;
      }
    }
    if (full) return false;
  }
  return true;
}

GroundSet materialize_member_set(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("window must be >= 1");
  BlockSystem sys = BlockSystem::up_to_bits(64);
  kernels::BitVec out(static_cast<std::size_t>(n));
  for (std::int64_t v = 1; v <= n; ++v)
    if (sys.member(static_cast<std::uint64_t>(v)))
      out.set(static_cast<std::size_t>(v - 1));
  return GroundSet(n, std::move(out), "hindman");
}

std::vector<DensityPoint> density_report(std::int64_t n,
                                         const std::vector<std::int64_t>& lengths,
                                         unsigned workers) {
  GroundSet g = materialize_member_set(n);
  return upper_density_curve(g, lengths, workers);
}

namespace {

struct SeedValue {
  Int value;  // c + P(sigma_f), grows as greedy bits are added
};

bool all_member(const BlockSystem& sys, const std::vector<Int>& vals) {
  for (const Int& v : vals)
    if (!sys.member(v)) return false;
  return true;
}

}  // namespace

Witness greedy_witness(const std::vector<Poly>& polys,
                       const std::vector<IPFragment>& frags,
                       std::uint32_t m, GreedyTrace* trace) {
  if (polys.empty()) throw std::invalid_argument("empty polynomial family");
  if (frags.empty()) throw std::invalid_argument("need >= 1 fragment");
  for (const Poly& p : polys) {
    if (!p.integral()) throw std::invalid_argument("polynomials must be integral");
    if (!p.nat_valued()) throw std::invalid_argument("polynomials must be nat-valued");
  }

  const std::size_t r = polys.size() * frags.size();

  // Starting block: wider than the pair count, with its base bit above the
  // bit budget of the index bound.
  std::uint64_t m_bits = 0;
  for (std::uint32_t v = m; v != 0; v >>= 1) ++m_bits;
  BlockSystem sys = BlockSystem::up_to_bits(256);
  auto ensure_blocks = [&sys](std::size_t count) {
    if (sys.block_count() <= count) sys = BlockSystem::up_to_block(count + 1);
  };
  std::size_t k = 0;
  while (true) {
    ensure_blocks(k + 1);
    if (sys.block_size(k) > r && sys.b(k) > m_bits) break;
    ++k;
  }
  const Int c = Int(1) << sys.b(k);

  // H: first shared index block (indices > m) whose sums are divisible by
  // 2^{b_k}; with zero constant terms this forces every P(sum) divisible too.
  std::size_t min_len = frags[0].size();
  for (const auto& f : frags) min_len = std::min(min_len, f.size());
  if (min_len <= m)
    throw InsufficientFragment(min_len,
                               Int(m) + int_pow(c, static_cast<unsigned>(frags.size())));
  std::vector<IPFragment> suffixes;
  suffixes.reserve(frags.size());
  for (const auto& f : frags) {
    std::vector<Int> gens(f.gens().begin() + m, f.gens().end());
    suffixes.emplace_back(std::move(gens));
  }
  std::vector<FinSet> blocks = extract_shared_blocks(suffixes, c, 1);
  if (blocks.empty())
    throw InsufficientFragment(min_len,
                               Int(m) + int_pow(c, static_cast<unsigned>(frags.size())));
  std::vector<std::uint32_t> h_elems;
  for (std::uint32_t idx : blocks[0].elems()) h_elems.push_back(idx + m);
  FinSet h(h_elems);

  // Seed values c + P(sigma_f); all are positive multiples of 2^{b_k}.
  std::vector<Int> sigmas;
  sigmas.reserve(frags.size());
  for (const auto& f : frags) sigmas.push_back(f.eval(h));
  std::vector<Int> seeds;
  std::vector<std::pair<int, int>> pair_ids;  // (poly, frag)
  for (std::size_t pi = 0; pi < polys.size(); ++pi)
    for (std::size_t fi = 0; fi < frags.size(); ++fi) {
      Int val = c + polys[pi].eval_int(sigmas[fi]);
      if (val % c != 0) throw std::logic_error("seed value not divisible by 2^{b_k}");
      seeds.push_back(val);
      pair_ids.emplace_back(static_cast<int>(pi), static_cast<int>(fi));
    }

  std::uint64_t l_max = 0;
  for (const Int& v : seeds) l_max = std::max(l_max, bitlen(v) - 1);
  std::size_t j = k;
  while (true) {
    ensure_blocks(j + 2);
    if (sys.b(j) > l_max) break;
    ++j;
  }
  // Candidate values stay below 2^{b_{j+1}+1}; blocks through B_{j+1} exist.
  ensure_blocks(j + 2);

  // One bit per block B_k..B_j, chosen depth-first with backtracking; each
  // pick must leave every value a member (no block fully covered).
  const std::size_t depth_count = j - k + 1;
  std::vector<std::uint64_t> picks(depth_count);
  std::vector<std::vector<Int>> stack_vals;
  stack_vals.push_back(seeds);
  std::uint64_t backtracks = 0;
  std::size_t deepest_fail = k;

  std::size_t depth = 0;
  std::vector<std::uint64_t> next_try(depth_count, 0);
  while (depth < depth_count) {
    std::size_t blk = k + depth;
    std::uint64_t width = sys.block_size(blk);
    bool placed = false;
    for (std::uint64_t off = next_try[depth]; off < width; ++off) {
      std::uint64_t pos = sys.b(blk) + off;
      Int bit = Int(1) << pos;
      std::vector<Int> cand = stack_vals.back();
      for (Int& v : cand) v += bit;
      if (all_member(sys, cand)) {
        picks[depth] = pos;
        next_try[depth] = off + 1;
        stack_vals.push_back(std::move(cand));
        ++depth;
        if (depth < depth_count) next_try[depth] = 0;
        placed = true;
        break;
      }
    }
    if (!placed) {
      deepest_fail = std::max(deepest_fail, blk);
      if (depth == 0) throw GreedyExhausted(deepest_fail);
      ++backtracks;
      stack_vals.pop_back();
      --depth;
    }
  }

  Int d = c;
  for (std::uint64_t pos : picks) d += Int(1) << pos;

  Witness w;
  w.a = d;
  w.beta = h;
  const std::vector<Int>& final_vals = stack_vals.back();
  for (std::size_t idx = 0; idx < final_vals.size(); ++idx) {
    AuditEntry e;
    e.poly_id = pair_ids[idx].first;
    e.frag_id = pair_ids[idx].second;
    e.point = sigmas[static_cast<std::size_t>(e.frag_id)];
    e.value = final_vals[idx];
    w.audit.push_back(std::move(e));
  }

  // Audit check through member(), independently of the greedy bookkeeping.
  w.verified = true;
  for (const AuditEntry& e : w.audit) {
    Rat expect = Rat(d) + polys[static_cast<std::size_t>(e.poly_id)]
                               .eval_monomial(e.point);
    if (expect != Rat(e.value) || !sys.member_with_zero(e.value)) {
      w.verified = false;
      break;
    }
  }
  if (!w.verified) throw std::logic_error("greedy witness failed verification");

  if (trace) {
    trace->k = k;
    trace->c = c;
    trace->h = h;
    trace->l_max = l_max;
    trace->j = j;
    trace->picks = picks;
    trace->backtracks = backtracks;
  }
  return w;
}

}  // namespace ramsey::hindman
