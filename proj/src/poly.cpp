#include "ramsey/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "ramsey/finset.hpp"

namespace ramsey {

Poly::Poly(std::vector<Rat> coeffs, bool allow_zero)
    : coeffs_(std::move(coeffs)), allow_zero_(allow_zero) {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.empty() && !allow_zero_)
    throw std::invalid_argument("zero polynomial requires allow_zero");
}

Rat Poly::coeff(int k) const {
  if (k < 1 || k > degree()) return Rat(0);
  return coeffs_[static_cast<std::size_t>(k - 1)];
}

bool Poly::integral() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Rat& c) { return is_integer(c); });
}

bool Poly::nat_valued() const {
  if (is_zero()) return true;
  const Rat& lead = coeffs_.back();
  if (lead < 0) return false;
  Rat max_ratio(0);
  for (const Rat& c : coeffs_) {
    Rat r = boost::multiprecision::abs(c) / lead;
    if (r > max_ratio) max_ratio = r;
  }
  Int bound = rat_ceil(Rat(1) + max_ratio);
  for (Int x = 1; x <= bound; ++x)
    if (eval(x) < 0) return false;
  return true;
}

Rat Poly::eval(const Int& x) const {
  Rat acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc * x;
}

Rat Poly::eval_monomial(const Int& x) const {
  Rat acc(0);
  Int xp = 1;
  for (const Rat& c : coeffs_) {
    xp *= x;
    acc += c * xp;
  }
  return acc;
}

Int Poly::eval_int(const Int& x) const {
  if (!integral()) throw std::invalid_argument("eval_int on non-integral polynomial");
  Int acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * x + numer(*it);
  return acc * x;
}

std::string Poly::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 1; --k) {
    Rat c = coeff(k);
    if (c == 0) continue;
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    Rat ac = boost::multiprecision::abs(c);
    if (ac != 1 || k == 0) {
      os << numer(ac).str();
      if (denom(ac) != 1) os << "/" << denom(ac).str();
      os << "*";
    }
    os << "x";
    if (k != 1) os << "^" << k;
  }
  return os.str();
}

Poly shift_difference(const Poly& p, const Int& s) {
  if (!p.integral())
    throw std::invalid_argument("shift_difference requires integer coefficients");
  int d = p.degree();
  // Coefficient of y^j in p(y+s): sum over k >= j of c_k * C(k,j) * s^{k-j}.
  std::vector<Rat> out(static_cast<std::size_t>(std::max(d, 1)), Rat(0));
  for (int k = 1; k <= d; ++k) {
    Int ck = numer(p.coeff(k));
    if (ck == 0) continue;
    Int binom = 1;  // C(k, j), built incrementally from j = k down to 1
    Int spow = 1;   // s^{k-j}
    for (int j = k; j >= 1; --j) {
      out[static_cast<std::size_t>(j - 1)] += Rat(ck * binom * spow);
      binom = binom * j / (k - j + 1);
      spow *= s;
    }
  }
  return Poly(std::move(out), true);
}

std::pair<Poly, Int> scale_rational(const Poly& p) {
  Int m = 1;
  for (const Rat& c : p.coeffs()) m = int_lcm(m, denom(c));
  return {scale_with(p, m), m};
}

Poly scale_with(const Poly& p, const Int& m) {
  if (m < 1) throw std::invalid_argument("scale factor must be positive");
  std::vector<Rat> out;
  out.reserve(p.coeffs().size());
  Int mp = 1;
  for (const Rat& c : p.coeffs()) {
    mp *= m;
    out.push_back(c * Rat(mp));
  }
  return Poly(std::move(out), p.allow_zero() || p.is_zero());
}

MultiPoly::MultiPoly(unsigned arity, std::vector<Monomial> monomials)
    : arity_(arity), monomials_(std::move(monomials)) {
  if (arity_ < 1) throw std::invalid_argument("arity must be >= 1");
  for (const Monomial& mo : monomials_) {
    if (mo.exps.size() != arity_)
      throw std::invalid_argument("monomial exponent vector has wrong length");
    unsigned total = 0;
    for (unsigned e : mo.exps) total += e;
    if (total == 0 && mo.coef != 0)
      throw std::invalid_argument("constant monomial would not vanish at 0");
  }
}

Int MultiPoly::eval(std::span<const Int> xs) const {
  if (xs.size() != arity_) throw std::invalid_argument("arity mismatch");
  Int acc = 0;
  for (const Monomial& mo : monomials_) {
    Int term = mo.coef;
    for (unsigned v = 0; v < arity_; ++v)
      if (mo.exps[v] != 0) term *= int_pow(xs[v], mo.exps[v]);
    acc += term;
  }
  return acc;
}

std::string MultiPoly::to_string() const {
  if (monomials_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Monomial& mo : monomials_) {
    if (!first) os << " + ";
    first = false;
    os << mo.coef.str();
    for (unsigned v = 0; v < arity_; ++v) {
      if (mo.exps[v] == 0) continue;
      os << "*x" << (v + 1);
      if (mo.exps[v] != 1) os << "^" << mo.exps[v];
    }
  }
  return os.str();
}

MultiPoly restrict_multi(const Poly& p, unsigned i, unsigned l) {
  if (i < 1 || i > l) throw std::out_of_range("variable index out of range");
  if (!p.integral())
    throw std::invalid_argument("restrict_multi requires integer coefficients");
  std::vector<Monomial> ms;
  for (int k = 1; k <= p.degree(); ++k) {
    Int c = numer(p.coeff(k));
    if (c == 0) continue;
    Monomial mo;
    mo.coef = c;
    mo.exps.assign(l, 0);
    mo.exps[i - 1] = static_cast<unsigned>(k);
    ms.push_back(std::move(mo));
  }
  return MultiPoly(l, std::move(ms));
}

FinSet::FinSet(std::vector<std::uint32_t> elems) : elems_(std::move(elems)) {
  if (elems_.empty()) throw std::invalid_argument("FinSet must be nonempty");
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (elems_[i] < 1) throw std::invalid_argument("FinSet elements must be >= 1");
    if (i > 0 && elems_[i] <= elems_[i - 1])
      throw std::invalid_argument("FinSet must be strictly increasing");
  }
}

FinSet FinSet::from_code(std::uint64_t code) {
  if (code == 0) throw std::invalid_argument("empty subset code");
  std::vector<std::uint32_t> elems;
  for (std::uint32_t i = 0; code != 0; ++i, code >>= 1)
    if (code & 1) elems.push_back(i + 1);
  return FinSet(std::move(elems));
}

std::uint64_t FinSet::code() const {
  std::uint64_t c = 0;
  for (std::uint32_t e : elems_) {
    if (e > 64) throw std::overflow_error("element too large for subset code");
    c |= std::uint64_t(1) << (e - 1);
  }
  return c;
}

bool FinSet::contains(std::uint32_t x) const {
  return std::binary_search(elems_.begin(), elems_.end(), x);
}

FinSet FinSet::merged(const FinSet& a, const FinSet& b) {
  std::vector<std::uint32_t> out;
  std::set_union(a.elems_.begin(), a.elems_.end(), b.elems_.begin(),
                 b.elems_.end(), std::back_inserter(out));
  return FinSet(std::move(out));
}

std::string FinSet::to_string() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (i) os << ",";
    os << elems_[i];
  }
  os << "}";
  return os.str();
}

IPFragment::IPFragment(std::vector<Int> gens) : gens_(std::move(gens)) {
  if (gens_.empty()) throw std::invalid_argument("fragment needs >= 1 generator");
  for (const Int& g : gens_)
    if (g < 1) throw std::invalid_argument("generators must be >= 1");
}

const Int& IPFragment::gen(std::size_t i1) const {
  if (i1 < 1 || i1 > gens_.size()) throw std::out_of_range("generator index");
  return gens_[i1 - 1];
}

Int IPFragment::eval(const FinSet& beta) const {
  if (beta.max() > gens_.size())
    throw std::out_of_range("index set reaches past fragment length");
  Int sum = 0;
  for (std::uint32_t i : beta.elems()) sum += gens_[i - 1];
  return sum;
}

std::string IPFragment::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (i) os << ",";
    os << gens_[i].str();
  }
  return os.str();
}

}  // namespace ramsey
