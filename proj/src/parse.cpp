#include "ramsey/parse.hpp"

#include <cctype>
#include <sstream>

#include "ramsey/groundset.hpp"

namespace ramsey {

namespace {

// Cursor over a one-line input keeping 1-based line/column for diagnostics.
class Cursor {
 public:
  explicit Cursor(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      advance();
  }
  bool eof() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  char get() {
    skip_ws();
    char c = pos_ < s_.size() ? s_[pos_] : '\0';
    advance();
    return c;
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }
  bool try_take(char c) {
    if (peek() == c) {
      get();
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      advance();
    if (start == pos_) fail("expected identifier");
    return s_.substr(start, pos_ - start);
  }

  Int integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) advance();
    std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      advance();
    if (pos_ == digits) fail("expected integer");
    return Int(s_.substr(start, pos_ - start));
  }

  Rat rational() {
    Int num = integer();
    if (try_take('/')) {
      Int den = integer();
      if (den == 0) fail("zero denominator");
      return Rat(num, den);
    }
    return Rat(num);
  }

  // Raw text until the next top-level ')' (for file paths).
  std::string until_close() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ')') advance();
    std::string out = s_.substr(start, pos_ - start);
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back())))
      out.pop_back();
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col_);
  }

 private:
  void advance() {
    if (pos_ < s_.size()) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// One polynomial term: [coef][*]x[^k] or a bare rational (only valid as the
// literal zero polynomial).
struct Term {
  Rat coef;
  int power = 0;  // 0 marks a bare constant
};

Term parse_term(Cursor& cur, int sign) {
  Term t;
  t.coef = Rat(sign);
  bool saw_coef = false;
  char c = cur.peek();
  if (std::isdigit(static_cast<unsigned char>(c))) {
    t.coef *= cur.rational();
    saw_coef = true;
    cur.try_take('*');
  }
  if (cur.peek() == 'x' || cur.peek() == 'X') {
    cur.get();
    t.power = 1;
    if (cur.try_take('^')) {
      Int k = cur.integer();
      if (k < 1 || k > 64) cur.fail("exponent must lie in [1, 64]");
      t.power = static_cast<int>(k);
    }
  } else if (!saw_coef) {
    cur.fail("expected coefficient or 'x'");
  }
  return t;
}

Poly parse_poly_cursor(Cursor& cur, bool allow_zero) {
  std::vector<Term> terms;
  int sign = 1;
  if (cur.try_take('-')) sign = -1;
  terms.push_back(parse_term(cur, sign));
  while (!cur.eof()) {
    char c = cur.peek();
    if (c == '+') {
      cur.get();
      terms.push_back(parse_term(cur, 1));
    } else if (c == '-') {
      cur.get();
      terms.push_back(parse_term(cur, -1));
    } else {
      break;
    }
  }

  // The only admissible constant is the literal 0 denoting the zero
  // polynomial; any other constant would not vanish at 0.
  int max_pow = 0;
  for (const Term& t : terms) max_pow = std::max(max_pow, t.power);
  std::vector<Rat> coeffs(static_cast<std::size_t>(max_pow), Rat(0));
  for (const Term& t : terms) {
    if (t.power == 0) {
      if (t.coef != 0) cur.fail("constant terms are not allowed");
      continue;
    }
    coeffs[static_cast<std::size_t>(t.power - 1)] += t.coef;
  }
  bool all_zero = true;
  for (const Rat& c : coeffs)
    if (c != 0) all_zero = false;
  if (all_zero && !allow_zero)
    cur.fail("zero polynomial requires --allow-zero");
  return Poly(std::move(coeffs), allow_zero || all_zero);
}

SetExpr parse_expr_cursor(Cursor& cur) {
  std::string name = cur.ident();
  SetExpr e;
  if (name == "full") {
    e.kind = SetExpr::Kind::full;
    return e;
  }
  if (name == "hindman") {
    e.kind = SetExpr::Kind::hindman;
    return e;
  }
  if (name == "mult") {
    e.kind = SetExpr::Kind::multiples;
    cur.expect('(');
    Int m = cur.integer();
    if (m < 1 || !fits_i64(m)) cur.fail("mult() factor must be a positive integer");
    e.m = to_i64(m);
    cur.expect(')');
    return e;
  }
  if (name == "rand") {
    e.kind = SetExpr::Kind::random_density;
    cur.expect('(');
    e.rho = cur.rational();
    if (e.rho <= 0 || e.rho > 1) cur.fail("rand() density must lie in (0,1]");
    cur.expect(',');
    Int seed = cur.integer();
    if (seed < 0) cur.fail("seed must be nonnegative");
    e.seed = static_cast<std::uint64_t>(seed);
    cur.expect(')');
    return e;
  }
  if (name == "file") {
    e.kind = SetExpr::Kind::explicit_list;
    cur.expect('(');
    e.path = cur.until_close();
    if (e.path.empty()) cur.fail("file() needs a path");
    cur.expect(')');
    return e;
  }
  if (name == "union" || name == "inter") {
    e.kind = name == "union" ? SetExpr::Kind::set_union : SetExpr::Kind::set_intersect;
    cur.expect('(');
    e.kids.push_back(parse_expr_cursor(cur));
    cur.expect(',');
    e.kids.push_back(parse_expr_cursor(cur));
    cur.expect(')');
    return e;
  }
  if (name == "compl") {
    e.kind = SetExpr::Kind::complement;
    cur.expect('(');
    e.kids.push_back(parse_expr_cursor(cur));
    cur.expect(')');
    return e;
  }
  if (name == "shift" || name == "dilate" || name == "dilinv") {
    cur.expect('(');
    Int v = cur.integer();
    if (!fits_i64(v)) cur.fail("factor out of range");
    if (name == "shift") {
      e.kind = SetExpr::Kind::shift;
      e.t = to_i64(v);
    } else {
      if (v < 1) cur.fail("dilation factor must be >= 1");
      e.kind = name == "dilate" ? SetExpr::Kind::dilate : SetExpr::Kind::dilate_inverse;
      e.m = to_i64(v);
    }
    cur.expect(',');
    e.kids.push_back(parse_expr_cursor(cur));
    cur.expect(')');
    return e;
  }
  cur.fail("unknown set primitive '" + name + "'");
}

}  // namespace

Poly parse_poly(const std::string& text, bool allow_zero) {
  Cursor cur(text);
  Poly p = parse_poly_cursor(cur, allow_zero);
  if (!cur.eof()) cur.fail("trailing input after polynomial");
  return p;
}

std::vector<Poly> parse_poly_list(const std::string& text, bool allow_zero) {
  std::vector<Poly> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t semi = text.find(';', start);
    std::string piece = text.substr(
        start, semi == std::string::npos ? std::string::npos : semi - start);
    bool blank = piece.find_first_not_of(" \t\r\n") == std::string::npos;
    if (!blank) out.push_back(parse_poly(piece, allow_zero));
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  if (out.empty()) throw ParseError("empty polynomial list", 1, 1);
  return out;
}

SetExpr parse_set_expr(const std::string& text) {
  Cursor cur(text);
  SetExpr e = parse_expr_cursor(cur);
  if (!cur.eof()) cur.fail("trailing input after set expression");
  return e;
}

std::vector<IPFragment> parse_fragments(const std::string& text) {
  std::vector<IPFragment> out;
  Cursor cur(text);
  while (true) {
    std::vector<Int> gens;
    gens.push_back(cur.integer());
    while (cur.try_take(',')) gens.push_back(cur.integer());
    for (const Int& g : gens)
      if (g < 1) cur.fail("generators must be >= 1");
    out.emplace_back(std::move(gens));
    if (!cur.try_take(';')) break;
  }
  if (!cur.eof()) cur.fail("trailing input after fragments");
  return out;
}

}  // namespace ramsey
