#include "ramsey/groundset.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "ramsey/hindman.hpp"
#include "ramsey/parallel.hpp"

namespace ramsey {

namespace {

// SplitMix64 in counter mode: one independent draw per (seed, index).
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t draw(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ (index * 0x9e3779b97f4a7c15ULL));
}

// Acceptance threshold for density p/q: draw < floor(p * 2^64 / q).
bool accept_density(const Rat& rho, std::uint64_t seed, std::uint64_t index) {
  if (rho >= 1) return true;
  Int threshold = (numer(rho) << 64) / denom(rho);
  Int d = draw(seed, index);
  return d < threshold;
}

}  // namespace

std::string SetExpr::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::full: os << "full"; break;
    case Kind::multiples: os << "mult(" << m << ")"; break;
    case Kind::hindman: os << "hindman"; break;
    case Kind::random_density:
      os << "rand(" << numer(rho).str() << "/" << denom(rho).str() << ", " << seed
         << ")";
      break;
    case Kind::explicit_list: os << "file(" << path << ")"; break;
    case Kind::set_union:
      os << "union(" << kids[0].to_string() << "," << kids[1].to_string() << ")";
      break;
    case Kind::set_intersect:
      os << "inter(" << kids[0].to_string() << "," << kids[1].to_string() << ")";
      break;
    case Kind::complement: os << "compl(" << kids[0].to_string() << ")"; break;
    case Kind::shift: os << "shift(" << t << "," << kids[0].to_string() << ")"; break;
    case Kind::dilate: os << "dilate(" << m << "," << kids[0].to_string() << ")"; break;
    case Kind::dilate_inverse:
      os << "dilinv(" << m << "," << kids[0].to_string() << ")";
      break;
  }
  return os.str();
}

GroundSet::GroundSet(std::int64_t n, kernels::BitVec bits, std::string provenance)
    : n_(n), bits_(std::move(bits)), provenance_(std::move(provenance)) {
  if (n_ < 1) throw std::invalid_argument("window must be >= 1");
  if (bits_.nbits != static_cast<std::size_t>(n_))
    throw std::invalid_argument("mask size does not match window");
}

GroundSet GroundSet::full(std::int64_t n) {
  kernels::BitVec bits(static_cast<std::size_t>(n));
  bits.fill_all();
  return GroundSet(n, std::move(bits), "full");
}

GroundSet GroundSet::empty(std::int64_t n) {
  return GroundSet(n, kernels::BitVec(static_cast<std::size_t>(n)), "empty");
}

std::vector<std::int64_t> GroundSet::elements() const {
  std::vector<std::int64_t> out;
  for (std::int64_t v = 1; v <= n_; ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

namespace {

kernels::BitVec build_mask(const SetExpr& e, std::int64_t n, MaterializeStats* stats) {
  const std::size_t bits = static_cast<std::size_t>(n);
  kernels::BitVec out(bits);
  switch (e.kind) {
    case SetExpr::Kind::full:
      out.fill_all();
      break;
    case SetExpr::Kind::multiples: {
      if (e.m < 1) throw std::invalid_argument("mult() factor must be >= 1");
      for (std::int64_t v = e.m; v <= n; v += e.m)
        out.set(static_cast<std::size_t>(v - 1));
      break;
    }
    case SetExpr::Kind::hindman: {
      out = hindman::materialize_member_set(n).bits();
      break;
    }
    case SetExpr::Kind::random_density: {
      if (e.rho <= 0 || e.rho > 1)
        throw std::invalid_argument("rand() density must lie in (0,1]");
      for (std::int64_t v = 1; v <= n; ++v)
        if (accept_density(e.rho, e.seed, static_cast<std::uint64_t>(v)))
          out.set(static_cast<std::size_t>(v - 1));
      break;
    }
    case SetExpr::Kind::explicit_list: {
      std::ifstream in(e.path);
      if (!in) throw std::runtime_error("cannot open set file: " + e.path);
      std::string line;
      while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::int64_t v;
        while (ls >> v) {
          if (v >= 1 && v <= n) {
            out.set(static_cast<std::size_t>(v - 1));
          } else if (stats) {
            ++stats->out_of_window_ignored;
          }
        }
      }
      break;
    }
    case SetExpr::Kind::set_union: {
      out = build_mask(e.kids[0], n, stats);
      kernels::BitVec rhs = build_mask(e.kids[1], n, stats);
      for (std::size_t i = 0; i < out.w.size(); ++i) out.w[i] |= rhs.w[i];
      break;
    }
    case SetExpr::Kind::set_intersect: {
      out = build_mask(e.kids[0], n, stats);
      kernels::BitVec rhs = build_mask(e.kids[1], n, stats);
      for (std::size_t i = 0; i < out.w.size(); ++i) out.w[i] &= rhs.w[i];
      break;
    }
    case SetExpr::Kind::complement: {
      out = build_mask(e.kids[0], n, stats);
      for (auto& wdx : out.w) wdx = ~wdx;
      out.clear_tail();
      break;
    }
    case SetExpr::Kind::shift: {
      kernels::BitVec src = build_mask(e.kids[0], n, stats);
      // v in result iff v - t in operand.
      for (std::int64_t v = 1; v <= n; ++v) {
        std::int64_t u = v - e.t;
        if (u >= 1 && u <= n && src.get(static_cast<std::size_t>(u - 1)))
          out.set(static_cast<std::size_t>(v - 1));
      }
      break;
    }
    case SetExpr::Kind::dilate: {
      if (e.m < 1) throw std::invalid_argument("dilate() factor must be >= 1");
      kernels::BitVec src = build_mask(e.kids[0], n, stats);
      for (std::int64_t u = 1; u * e.m <= n; ++u)
        if (src.get(static_cast<std::size_t>(u - 1)))
          out.set(static_cast<std::size_t>(u * e.m - 1));
      break;
    }
    case SetExpr::Kind::dilate_inverse: {
      if (e.m < 1) throw std::invalid_argument("dilinv() factor must be >= 1");
      kernels::BitVec src = build_mask(e.kids[0], n, stats);
      for (std::int64_t v = 1; v * e.m <= n; ++v)
        if (src.get(static_cast<std::size_t>(v * e.m - 1)))
          out.set(static_cast<std::size_t>(v - 1));
      break;
    }
  }
  return out;
}

}  // namespace

GroundSet materialize(const SetExpr& e, std::int64_t n, MaterializeStats* stats) {
  if (n < 1) throw std::invalid_argument("window must be >= 1");
  return GroundSet(n, build_mask(e, n, stats), e.to_string());
}

std::vector<DensityPoint> upper_density_curve(const GroundSet& g,
                                              const std::vector<std::int64_t>& lengths,
                                              unsigned workers) {
  const std::int64_t n = g.window();
  const auto& bits = g.bits();

  // Word-prefix popcounts let any aligned range be counted in O(1); the two
  // edge words are patched with masked popcounts.
  std::vector<std::uint64_t> prefix(bits.words() + 1, 0);
  for (std::size_t i = 0; i < bits.words(); ++i)
    prefix[i + 1] = prefix[i] + static_cast<std::uint64_t>(__builtin_popcountll(bits.w[i]));

  // Count of members with value in (lo, hi], i.e. bit index in [lo, hi).
  auto range_count = [&](std::int64_t lo_bit, std::int64_t hi_bit) -> std::uint64_t {
    if (hi_bit <= lo_bit) return 0;
    std::size_t lw = static_cast<std::size_t>(lo_bit) >> 6;
    std::size_t hw = static_cast<std::size_t>(hi_bit) >> 6;
    unsigned lb = static_cast<unsigned>(lo_bit & 63);
    unsigned hb = static_cast<unsigned>(hi_bit & 63);
    if (lw == hw) {
      std::uint64_t m = (hb == 0 ? 0 : (~std::uint64_t(0) >> (64 - hb))) &
                        ~((std::uint64_t(1) << lb) - 1);
      return static_cast<std::uint64_t>(__builtin_popcountll(bits.w[lw] & m));
    }
    std::uint64_t cnt = prefix[hw] - prefix[lw + 1];
    cnt += static_cast<std::uint64_t>(
        __builtin_popcountll(bits.w[lw] & ~((std::uint64_t(1) << lb) - 1)));
    if (hb != 0)
      cnt += static_cast<std::uint64_t>(
          __builtin_popcountll(bits.w[hw] & (~std::uint64_t(0) >> (64 - hb))));
    return cnt;
  };

  std::vector<DensityPoint> out;
  out.reserve(lengths.size());
  for (std::int64_t len : lengths) {
    if (len < 1 || len > n)
      throw std::invalid_argument("window length outside [1, N]");
    const std::uint64_t starts = static_cast<std::uint64_t>(n - len + 1);
    std::vector<std::uint64_t> chunk_max(std::max(1u, workers), 0);
    parallel_chunks(0, starts, workers, [&](unsigned w, std::uint64_t lo,
                                            std::uint64_t hi) {
      std::uint64_t best = 0;
      for (std::uint64_t m = lo; m < hi; ++m) {
        std::uint64_t c = range_count(static_cast<std::int64_t>(m),
                                      static_cast<std::int64_t>(m) + len);
        if (c > best) best = c;
      }
      chunk_max[w] = best;
    });
    std::uint64_t best = 0;
    for (std::uint64_t c : chunk_max) best = std::max(best, c);
    out.push_back(DensityPoint{len, best});
  }
  return out;
}

bool piecewise_syndetic_probe(const GroundSet& g, std::int64_t gap,
                              std::int64_t block_len) {
  const std::int64_t n = g.window();
  if (block_len < 1 || block_len > n)
    throw std::invalid_argument("block length outside [1, N]");
  if (gap < 1) throw std::invalid_argument("gap must be >= 1");

  if (block_len <= gap) {
    // Degenerate: any window holding one member qualifies.
    return g.count() > 0;
  }

  // t is "good" when (t, t+gap] holds a member; a window (m, m+L] qualifies
  // iff every t in [m, m+L-gap] is good. Scan for a long enough good run.
  std::int64_t run = 0;
  const std::int64_t need = block_len - gap + 1;
  std::int64_t members_in = 0;
  for (std::int64_t v = 1; v <= gap && v <= n; ++v)
    members_in += g.contains(v) ? 1 : 0;
  for (std::int64_t t = 0; t + gap <= n; ++t) {
    if (t > 0) {
      members_in -= g.contains(t) ? 1 : 0;
      members_in += g.contains(t + gap) ? 1 : 0;
    }
    if (members_in > 0) {
      if (++run >= need) return true;
    } else {
      run = 0;
    }
  }
  return false;
}

GroundSet shifted_intersection(const GroundSet& g, const std::vector<Int>& shifts) {
  kernels::BitVec acc = g.bits();
  for (const Int& x : shifts) {
    if (x < 0) throw std::invalid_argument("shifts must be nonnegative");
    if (x == 0) continue;
    if (!fits_i64(x) || to_i64(x) >= g.window()) {
      acc.clear_all();
      break;
    }
    kernels::and_shifted(acc, g.bits(), to_i64(x));
  }
  return GroundSet(g.window(), std::move(acc),
                   "shifted_intersection(" + g.provenance() + ")");
}

GroundSet dilate(const GroundSet& g, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("dilation factor must be >= 1");
  kernels::BitVec out(static_cast<std::size_t>(g.window()));
  for (std::int64_t u = 1; u * n <= g.window(); ++u)
    if (g.contains(u)) out.set(static_cast<std::size_t>(u * n - 1));
  std::ostringstream os;
  os << "dilate(" << n << "," << g.provenance() << ")";
  return GroundSet(g.window(), std::move(out), os.str());
}

Coloring::Coloring(std::int64_t n, unsigned r, std::vector<std::uint16_t> color)
    : n_(n), r_(r), color_(std::move(color)) {
  if (n_ < 1) throw std::invalid_argument("window must be >= 1");
  if (r_ < 1) throw std::invalid_argument("need >= 1 color");
  if (color_.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("coloring must be total on [1..N]");
  for (std::uint16_t c : color_)
    if (c < 1 || c > r_) throw std::invalid_argument("color value out of range");
}

Coloring Coloring::parity(std::int64_t n) {
  std::vector<std::uint16_t> c(static_cast<std::size_t>(n));
  for (std::int64_t v = 1; v <= n; ++v)
    c[static_cast<std::size_t>(v - 1)] = (v % 2 == 1) ? 1 : 2;
  return Coloring(n, 2, std::move(c));
}

Coloring Coloring::monochrome(std::int64_t n) {
  return Coloring(n, 1, std::vector<std::uint16_t>(static_cast<std::size_t>(n), 1));
}

Coloring Coloring::from_set(const GroundSet& g) {
  std::vector<std::uint16_t> c(static_cast<std::size_t>(g.window()));
  for (std::int64_t v = 1; v <= g.window(); ++v)
    c[static_cast<std::size_t>(v - 1)] = g.contains(v) ? 1 : 2;
  return Coloring(g.window(), 2, std::move(c));
}

Coloring Coloring::from_code(std::int64_t n, unsigned r, std::uint64_t code) {
  std::vector<std::uint16_t> c(static_cast<std::size_t>(n));
  for (std::int64_t v = 1; v <= n; ++v) {
    c[static_cast<std::size_t>(v - 1)] = static_cast<std::uint16_t>(1 + code % r);
    code /= r;
  }
  return Coloring(n, r, std::move(c));
}

GroundSet Coloring::color_class(unsigned color) const {
  kernels::BitVec bits(static_cast<std::size_t>(n_));
  for (std::int64_t v = 1; v <= n_; ++v)
    if (color_of(v) == color) bits.set(static_cast<std::size_t>(v - 1));
  std::ostringstream os;
  os << "color_class(" << color << ")";
  return GroundSet(n_, std::move(bits), os.str());
}

}  // namespace ramsey
