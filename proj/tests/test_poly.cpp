#include <doctest.h>

#include <random>

#include "ramsey/finset.hpp"
#include "ramsey/parse.hpp"
#include "ramsey/poly.hpp"

using namespace ramsey;

namespace {

Poly make(std::vector<Rat> cs) { return Poly(std::move(cs)); }

}  // namespace

TEST_CASE("evaluation matches hand expansion") {
  Poly p = make({Rat(1), Rat(1)});  // x + x^2
  CHECK(p.eval(3) == Rat(12));
  CHECK(p.eval(0) == Rat(0));

  Poly half = make({Rat(1, 2), Rat(1, 2)});  // (x^2+x)/2
  CHECK(half.eval(5) == Rat(15));
  CHECK_FALSE(half.integral());
  CHECK(half.nat_valued());
}

TEST_CASE("horner and monomial summation agree") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> coef(-9, 9), deg(1, 5), num(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    int d = deg(rng);
    std::vector<Rat> cs;
    for (int k = 0; k < d; ++k) cs.emplace_back(coef(rng), num(rng));
    Poly p(cs, true);
    for (Int x = 0; x <= 20; ++x) CHECK(p.eval(x) == p.eval_monomial(x));
  }
}

TEST_CASE("shift_difference identities") {
  Poly sq = make({Rat(0), Rat(1)});  // x^2
  Poly r = shift_difference(sq, 3);  // y^2 + 6y
  CHECK(r.coeff(1) == Rat(6));
  CHECK(r.coeff(2) == Rat(1));
  CHECK(r.degree() == 2);

  Poly lin = make({Rat(1)});
  CHECK(shift_difference(lin, 17) == lin);

  Poly cubic = make({Rat(4), Rat(-4), Rat(1)});  // x^3 - 4x^2 + 4x
  Poly phi = shift_difference(cubic, 1);         // y^3 - y^2 - y
  CHECK(phi.coeff(1) == Rat(-1));
  CHECK(phi.coeff(2) == Rat(-1));
  CHECK(phi.coeff(3) == Rat(1));
  CHECK(phi.eval(1) == Rat(-1));  // takes a negative value on the positives
  CHECK_FALSE(phi.nat_valued());
}

TEST_CASE("shift_difference equals p(y+s) - p(s) on a grid") {
  std::vector<Poly> polys = {
      make({Rat(4), Rat(-4), Rat(1)}),
      make({Rat(0), Rat(1)}),
      make({Rat(1), Rat(2), Rat(0), Rat(3)}),
  };
  for (const Poly& p : polys) {
    for (Int s = 0; s <= 64; ++s) {
      Poly d = shift_difference(p, s);
      for (Int y = 0; y <= 64; y += 7)
        CHECK(d.eval(y) == p.eval(y + s) - p.eval(s));
    }
  }
}

TEST_CASE("restrict_multi pins one variable") {
  Poly sq = make({Rat(0), Rat(1)});
  MultiPoly m = restrict_multi(sq, 2, 3);
  CHECK(m.arity() == 3);
  std::vector<Int> xs = {Int(5), Int(7), Int(11)};
  CHECK(m.eval(xs) == 49);

  MultiPoly id = restrict_multi(Poly::identity(), 1, 1);
  std::vector<Int> one = {Int(42)};
  CHECK(id.eval(one) == 42);

  Poly p = make({Rat(2), Rat(1)});  // x^2 + 2x
  MultiPoly m2 = restrict_multi(p, 1, 2);
  std::vector<Int> pt = {Int(3), Int(99)};
  CHECK(m2.eval(pt) == 15);
  CHECK(m2.eval(pt) == p.eval_int(3));

  CHECK_THROWS_AS(restrict_multi(sq, 4, 3), std::out_of_range);
}

TEST_CASE("fragment evaluation is additive") {
  IPFragment frag({Int(1), Int(2), Int(4)});
  CHECK(frag.eval(FinSet({1, 3})) == 5);
  CHECK(IPFragment({Int(7)}).eval(FinSet({1})) == 7);

  IPFragment ab({Int(3), Int(5)});
  CHECK(ab.eval(FinSet({1})) == 3);
  CHECK(ab.eval(FinSet({2})) == 5);
  CHECK(ab.eval(FinSet({1, 2})) == 8);

  CHECK_THROWS_AS(frag.eval(FinSet({4})), std::out_of_range);
}

TEST_CASE("fragment additivity, exhaustive to 8 generators") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> gen(1, 50);
  for (std::size_t k = 1; k <= 8; ++k) {
    std::vector<Int> gens;
    for (std::size_t i = 0; i < k; ++i) gens.emplace_back(gen(rng));
    IPFragment frag(gens);
    std::uint64_t all = (std::uint64_t(1) << k) - 1;
    for (std::uint64_t b = 1; b <= all; ++b) {
      for (std::uint64_t c = 1; c <= all; ++c) {
        if (b & c) continue;
        CHECK(frag.eval(FinSet::from_code(b | c)) ==
              frag.eval(FinSet::from_code(b)) + frag.eval(FinSet::from_code(c)));
      }
    }
  }
}

TEST_CASE("rational scaling clears denominators") {
  auto [p1, m1] = scale_rational(Poly({Rat(1, 2), Rat(1, 2)}));
  CHECK(m1 == 2);
  CHECK(p1.coeff(1) == Rat(1));
  CHECK(p1.coeff(2) == Rat(2));

  auto [p2, m2] = scale_rational(Poly({Rat(0), Rat(1)}));
  CHECK(m2 == 1);
  CHECK(p2.coeff(2) == Rat(1));

  auto [p3, m3] = scale_rational(Poly({Rat(1, 3), Rat(1, 6)}));
  CHECK(m3 == 6);
  CHECK(p3.coeff(1) == Rat(2));
  CHECK(p3.coeff(2) == Rat(6));
}

TEST_CASE("scaled polynomial equals the original at stretched points") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> coef(-9, 9), num(1, 6), deg(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rat> cs;
    int d = deg(rng);
    for (int k = 0; k < d; ++k) cs.emplace_back(coef(rng), num(rng));
    Poly p(cs, true);
    auto [scaled, m] = scale_rational(p);
    CHECK(scaled.integral());
    for (Int t = 0; t <= 64; t += 5) CHECK(scaled.eval(t) == p.eval(m * t));
  }
}

TEST_CASE("nat_valued agrees with a brute-force sign scan") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> coef(-9, 9), deg(1, 5);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Rat> cs;
    int d = deg(rng);
    for (int k = 0; k < d; ++k) cs.emplace_back(coef(rng));
    Poly p(cs, true);
    bool brute = true;
    for (Int x = 1; x <= 10000; ++x) {
      if (p.eval(x) < 0) {
        brute = false;
        break;
      }
    }
    // The exact decision covers all of [1, inf); the scan covers [1, 1e4],
    // beyond every Cauchy bound reachable with these coefficients.
    CHECK(p.nat_valued() == brute);
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("zero polynomial is gated") {
  CHECK_THROWS_AS(Poly({}, false), std::invalid_argument);
  Poly z = Poly::zero();
  CHECK(z.is_zero());
  CHECK(z.nat_valued());
  CHECK(z.eval(123) == Rat(0));
}

TEST_CASE("polynomial text grammar") {
  Poly p = parse_poly("1/2*x^2 + 1/2*x");
  CHECK(p.coeff(1) == Rat(1, 2));
  CHECK(p.coeff(2) == Rat(1, 2));

  CHECK(parse_poly("x") == Poly::identity());
  CHECK(parse_poly("2*x").coeff(1) == Rat(2));
  CHECK(parse_poly("2x").coeff(1) == Rat(2));
  CHECK(parse_poly("x^3 - 4*x^2 + 4*x").coeff(2) == Rat(-4));
  CHECK(parse_poly("0", true).is_zero());
  CHECK(parse_poly(" 3 * x ^ 2 ").coeff(2) == Rat(3));

  CHECK_THROWS_AS(parse_poly("0"), ParseError);      // zero needs the flag
  CHECK_THROWS_AS(parse_poly("x + 1"), ParseError);  // constant term
  CHECK_THROWS_AS(parse_poly("x^0"), ParseError);
  CHECK_THROWS_AS(parse_poly("y"), ParseError);
  try {
    parse_poly("x^2 + $");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.col() > 1);
  }

  auto list = parse_poly_list("x; x^2;; ");
  CHECK(list.size() == 2);
  auto with_zero = parse_poly_list("0; x; 2*x", true);
  CHECK(with_zero.size() == 3);
  CHECK(with_zero[0].is_zero());
}

TEST_CASE("fragment text grammar") {
  auto frags = parse_fragments("1,2,4; 3,5");
  REQUIRE(frags.size() == 2);
  CHECK(frags[0].gens() == std::vector<Int>{1, 2, 4});
  CHECK(frags[1].gens() == std::vector<Int>{3, 5});
  CHECK_THROWS_AS(parse_fragments("1,0"), ParseError);
  CHECK_THROWS_AS(parse_fragments("1,,2"), ParseError);
}
