#include "iqv/exprparse.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "iqv/udouble.hpp"

namespace iqv {

namespace {

// Guard against runaway inputs: exponents and divided-power orders beyond
// this are certainly mistakes (the engine's degree budget sits far below).
constexpr long kMaxExponent = 4096;

std::string format_message(std::size_t position, const std::string& detail,
                           const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << "parse error at position " << position << ": " << detail;
  if (!expected.empty()) {
    os << "; expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) os << (i + 1 == expected.size() ? " or " : ", ");
      os << expected[i];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
  kEnd,
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kCaret,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kInteger,     // nonnegative literal
  kQ,           // the indeterminate q
  kGen,         // B/k/F/E/K letter with node index (and K-prime flag)
  kIB,          // head of the parity divided-power sugar
  kScalarLit,   // "(num:[...];den:[...])" serialization literal
};

struct Token {
  Tok kind = Tok::kEnd;
  std::size_t pos = 0;     // 1-based column of the first character
  long value = 0;          // kInteger: the literal; kGen/kIB: 1-based index
  char letter = 0;         // kGen: 'B', 'k', 'F', 'E' or 'K'
  bool primed = false;     // kGen with letter 'K': true for K'
  Scalar scalar;           // kScalarLit
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_ws();
    Token t;
    t.pos = i_ + 1;
    if (i_ >= text_.size()) {
      t.kind = Tok::kEnd;
      return t;
    }
    const char c = text_[i_];
    switch (c) {
      case '+': ++i_; t.kind = Tok::kPlus; return t;
      case '-': ++i_; t.kind = Tok::kMinus; return t;
      case '*': ++i_; t.kind = Tok::kStar; return t;
      case '/': ++i_; t.kind = Tok::kSlash; return t;
      case '^': ++i_; t.kind = Tok::kCaret; return t;
      case ')': ++i_; t.kind = Tok::kRParen; return t;
      case '[': ++i_; t.kind = Tok::kLBracket; return t;
      case ']': ++i_; t.kind = Tok::kRBracket; return t;
      case '(':
        if (text_.compare(i_ + 1, 4, "num:") == 0) return scalar_literal(t);
        ++i_;
        t.kind = Tok::kLParen;
        return t;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::kInteger;
      t.value = read_integer();
      return t;
    }
    if (c == 'q') {
      ++i_;
      t.kind = Tok::kQ;
      return t;
    }
    if (c == 'i') {
      if (i_ + 1 < text_.size() && text_[i_ + 1] == 'B') {
        i_ += 2;
        t.kind = Tok::kIB;
        t.value = read_index(t.pos, "iB");
        return t;
      }
      throw ParseError(t.pos, "unexpected character 'i'",
                       {"a generator", "an integer", "'q'", "'('"});
    }
    if (c == 'B' || c == 'k' || c == 'F' || c == 'E' || c == 'K') {
      ++i_;
      t.kind = Tok::kGen;
      t.letter = c;
      t.value = read_index(t.pos, std::string(1, c));
      if (c == 'K' && i_ < text_.size() && text_[i_] == '\'') {
        ++i_;
        t.primed = true;
      }
      return t;
    }
    throw ParseError(t.pos, std::string("unexpected character '") + c + "'",
                     {"a generator", "an integer", "'q'", "'('"});
  }

 private:
  void skip_ws() {
    while (i_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[i_])))
      ++i_;
  }

  long read_integer() {
    long v = 0;
    const std::size_t start = i_;
    while (i_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[i_]))) {
      v = v * 10 + (text_[i_] - '0');
      if (v > 1000000000L)
        throw ParseError(start + 1, "integer literal too large");
      ++i_;
    }
    return v;
  }

  long read_index(std::size_t tok_pos, const std::string& head) {
    if (i_ >= text_.size() ||
        !std::isdigit(static_cast<unsigned char>(text_[i_])))
      throw ParseError(tok_pos, "generator '" + head + "' needs a node index",
                       {head + "<i>"});
    return read_integer();
  }

  // Scans "(num:[...];den:[...])" as one token. The bracketed Laurent texts
  // may contain parentheses, so the scan is bracket-directed.
  Token scalar_literal(Token t) {
    const std::size_t open = i_;
    std::size_t p = text_.find("];den:[", open);
    if (p != std::string::npos) p = text_.find(']', p + 7);
    if (p == std::string::npos || p + 1 >= text_.size() || text_[p + 1] != ')')
      throw ParseError(t.pos, "unterminated scalar literal");
    const std::string body = text_.substr(open + 1, p - open);
    try {
      t.scalar = Scalar::from_text(body);
    } catch (const std::exception& e) {
      throw ParseError(t.pos,
                       std::string("malformed scalar literal: ") + e.what());
    }
    t.kind = Tok::kScalarLit;
    i_ = p + 2;
    return t;
  }

  const std::string& text_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------
// Parser

// Every parsed subexpression carries its expansion over the double's
// alphabet; while it stays inside the coideal surface it also carries the
// free coideal polynomial.
struct Value {
  bool pure = true;
  NCPoly ip{ialpha::tag()};
  NCPoly up{ualpha::tag()};
};

// What shape the most recent atom had, for the power postfix rules.
enum class Shape { kGeneral, kScalar, kBGen, kKGen, kUK, kUKp, kUF, kUE };

struct Atom {
  Value v;
  Shape shape = Shape::kGeneral;
  std::size_t node = 0;  // 0-based, for generator shapes
};

class Parser {
 public:
  Parser(const CartanDatum& datum, const std::string& text, bool full)
      : datum_(datum), lex_(text), full_(full) {
    images_ = embedding_images();
    advance();
  }

  Value run() {
    Value v = expression();
    if (cur_.kind != Tok::kEnd)
      throw ParseError(cur_.pos, "trailing input",
                       {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
    return v;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void fail_atom() {
    std::vector<std::string> exp = {"an integer", "'q'", "'('",
                                    "B<i>",       "k<i>", "iB<i>[parity]"};
    if (full_) {
      exp.insert(exp.end(), {"F<i>", "E<i>", "K<i>", "K<i>'"});
    }
    throw ParseError(cur_.pos, "expected an operand", std::move(exp));
  }

  std::size_t node_index(const Token& t) const {
    const long rank = static_cast<long>(datum_.rank());
    if (t.value < 1 || t.value > rank)
      throw ParseError(t.pos, "node index " + std::to_string(t.value) +
                                  " outside rank " + std::to_string(rank));
    return static_cast<std::size_t>(t.value - 1);
  }

  std::map<GenSym, NCPoly> embedding_images() const {
    std::map<GenSym, NCPoly> m;
    const std::string& u = ualpha::tag();
    for (std::size_t i = 0; i < datum_.rank(); ++i) {
      const int ii = static_cast<int>(i);
      const int ti = static_cast<int>(datum_.tau(i));
      NCPoly b = NCPoly::letter(u, ualpha::F(ii)) +
                 NCPoly::monomial(u, Word{ualpha::E(ti), ualpha::Kp(ii)});
      m.emplace(ialpha::B(ii), std::move(b));
      for (int s : {+1, -1}) {
        m.emplace(ialpha::k(ii, s),
                  NCPoly::monomial(u, Word{ualpha::K(ii, s),
                                           ualpha::Kp(ti, s)}));
      }
    }
    return m;
  }

  Value from_iexpr(const IExpression& x) const {
    Value v;
    v.ip = x.poly();
    v.up = substitute(x.poly(), ualpha::tag(), images_);
    return v;
  }

  Value from_scalar(const Scalar& c) const {
    Value v;
    v.ip = NCPoly::monomial(ialpha::tag(), Word{}, c);
    v.up = NCPoly::monomial(ualpha::tag(), Word{}, c);
    return v;
  }

  Value from_uletter(const GenSym& s) const {
    Value v;
    v.pure = false;
    v.up = NCPoly::letter(ualpha::tag(), s);
    return v;
  }

  static Value combine(const Value& a, const Value& b, char op) {
    Value v;
    v.pure = a.pure && b.pure;
    if (v.pure)
      v.ip = op == '+' ? a.ip + b.ip : op == '-' ? a.ip - b.ip : a.ip * b.ip;
    v.up = op == '+' ? a.up + b.up : op == '-' ? a.up - b.up : a.up * b.up;
    return v;
  }

  static Value negate(const Value& a) {
    Value v;
    v.pure = a.pure;
    if (v.pure) v.ip = -a.ip;
    v.up = -a.up;
    return v;
  }

  static std::optional<Scalar> as_scalar(const Value& v) {
    if (v.up.is_zero()) return Scalar(0);
    if (v.up.term_count() != 1) return std::nullopt;
    const auto& [w, c] = *v.up.terms().begin();
    if (!w.empty()) return std::nullopt;
    return c;
  }

  Value expression() {
    bool neg = false;
    if (cur_.kind == Tok::kMinus) {
      neg = true;
      advance();
    }
    Value v = term();
    if (neg) v = negate(v);
    while (cur_.kind == Tok::kPlus || cur_.kind == Tok::kMinus) {
      const char op = cur_.kind == Tok::kPlus ? '+' : '-';
      advance();
      v = combine(v, term(), op);
    }
    return v;
  }

  Value term() {
    Value v = power();
    while (cur_.kind == Tok::kStar || cur_.kind == Tok::kSlash) {
      const bool div = cur_.kind == Tok::kSlash;
      const std::size_t op_pos = cur_.pos;
      advance();
      Value rhs = power();
      if (div) {
        const auto c = as_scalar(rhs);
        if (!c)
          throw ParseError(op_pos, "division requires a scalar divisor");
        if (c->is_zero()) throw ParseError(op_pos, "division by zero");
        rhs = from_scalar(c->inverse());
      }
      v = combine(v, rhs, '*');
    }
    return v;
  }

  Value power() {
    Atom a = atom();
    if (cur_.kind != Tok::kCaret) return a.v;
    const std::size_t caret_pos = cur_.pos;
    advance();
    if (cur_.kind == Tok::kLParen) return divided_power_sugar(a, caret_pos);
    bool neg = false;
    if (cur_.kind == Tok::kMinus) {
      neg = true;
      advance();
    }
    if (cur_.kind != Tok::kInteger)
      throw ParseError(cur_.pos, "expected an exponent",
                       {"an integer", "'('"});
    long e = cur_.value;
    if (e > kMaxExponent)
      throw ParseError(cur_.pos, "exponent out of range");
    if (neg) e = -e;
    advance();
    return apply_power(a, e, caret_pos);
  }

  Value divided_power_sugar(const Atom& a, std::size_t caret_pos) {
    advance();  // consume '('
    bool neg = false;
    if (cur_.kind == Tok::kMinus) {
      neg = true;
      advance();
    }
    if (cur_.kind != Tok::kInteger)
      throw ParseError(cur_.pos, "expected a divided-power order",
                       {"an integer"});
    const std::size_t m_pos = cur_.pos;
    long m = cur_.value;
    advance();
    if (cur_.kind != Tok::kRParen)
      throw ParseError(cur_.pos, "unclosed divided-power order", {"')'"});
    advance();
    if (neg)
      throw ParseError(m_pos, "divided-power order must be nonnegative");
    if (m > kMaxExponent) throw ParseError(m_pos, "exponent out of range");
    if (a.shape == Shape::kBGen)
      return from_iexpr(divided_power(datum_, a.node, m));
    throw ParseError(caret_pos,
                     "divided-power sugar applies to B generators only");
  }

  Value apply_power(const Atom& a, long e, std::size_t caret_pos) {
    if (e >= 0) {
      Value v = from_scalar(Scalar(1));
      for (long t = 0; t < e; ++t) v = combine(v, a.v, '*');
      return v;
    }
    if (const auto c = as_scalar(a.v)) {
      if (c->is_zero())
        throw ParseError(caret_pos, "negative power of zero");
      return from_scalar(c->pow(e));
    }
    GenSym inv;
    switch (a.shape) {
      case Shape::kKGen: inv = ialpha::k(static_cast<int>(a.node), -1); break;
      case Shape::kUK: inv = ualpha::K(static_cast<int>(a.node), -1); break;
      case Shape::kUKp: inv = ualpha::Kp(static_cast<int>(a.node), -1); break;
      default:
        throw ParseError(caret_pos,
                         "negative power of a non-invertible expression");
    }
    Value letter = a.shape == Shape::kKGen
                       ? from_iexpr(IExpression::k(a.node, -1))
                       : from_uletter(inv);
    Value v = from_scalar(Scalar(1));
    for (long t = 0; t < -e; ++t) v = combine(v, letter, '*');
    return v;
  }

  Atom atom() {
    Atom a;
    switch (cur_.kind) {
      case Tok::kInteger:
        a.v = from_scalar(Scalar(cur_.value));
        a.shape = Shape::kScalar;
        advance();
        return a;
      case Tok::kQ:
        a.v = from_scalar(Scalar::q_power(1));
        a.shape = Shape::kScalar;
        advance();
        return a;
      case Tok::kScalarLit:
        if (!full_)
          throw ParseError(cur_.pos,
                           "scalar literals belong to the extended language");
        a.v = from_scalar(cur_.scalar);
        a.shape = Shape::kScalar;
        advance();
        return a;
      case Tok::kLParen: {
        advance();
        Value v = expression();
        if (cur_.kind != Tok::kRParen)
          throw ParseError(cur_.pos, "unclosed parenthesis",
                           {"')'", "'+'", "'-'", "'*'", "'/'", "'^'"});
        advance();
        a.v = std::move(v);
        a.shape = as_scalar(a.v) ? Shape::kScalar : Shape::kGeneral;
        return a;
      }
      case Tok::kGen:
        return generator_atom();
      case Tok::kIB:
        return ib_atom();
      default:
        fail_atom();
    }
  }

  Atom generator_atom() {
    Atom a;
    const Token t = cur_;
    a.node = node_index(t);
    const int n = static_cast<int>(a.node);
    switch (t.letter) {
      case 'B':
        a.v = from_iexpr(IExpression::B(a.node));
        a.shape = Shape::kBGen;
        break;
      case 'k':
        a.v = from_iexpr(IExpression::k(a.node, +1));
        a.shape = Shape::kKGen;
        break;
      case 'F':
        require_full(t, "F");
        a.v = from_uletter(ualpha::F(n));
        a.shape = Shape::kUF;
        break;
      case 'E':
        require_full(t, "E");
        a.v = from_uletter(ualpha::E(n));
        a.shape = Shape::kUE;
        break;
      case 'K':
        require_full(t, t.primed ? "K'" : "K");
        a.v = from_uletter(t.primed ? ualpha::Kp(n) : ualpha::K(n));
        a.shape = t.primed ? Shape::kUKp : Shape::kUK;
        break;
      default:
        fail_atom();
    }
    advance();
    return a;
  }

  void require_full(const Token& t, const std::string& head) const {
    if (!full_)
      throw ParseError(t.pos, "letter '" + head +
                                  "' belongs to the double, not the coideal "
                                  "surface language");
  }

  Atom ib_atom() {
    const Token head = cur_;
    const std::size_t node = node_index(head);
    advance();
    if (cur_.kind != Tok::kLBracket)
      throw ParseError(cur_.pos, "expected a parity bracket", {"'['"});
    advance();
    if (cur_.kind != Tok::kInteger || cur_.value > 1)
      throw ParseError(cur_.pos, "expected a parity", {"0", "1"});
    const int parity = static_cast<int>(cur_.value);
    advance();
    if (cur_.kind != Tok::kRBracket)
      throw ParseError(cur_.pos, "unclosed parity bracket", {"']'"});
    advance();
    if (cur_.kind != Tok::kCaret)
      throw ParseError(cur_.pos, "iB needs a divided-power order", {"'^'"});
    advance();
    if (cur_.kind != Tok::kLParen)
      throw ParseError(cur_.pos, "iB needs a divided-power order", {"'('"});
    advance();
    bool neg = false;
    if (cur_.kind == Tok::kMinus) {
      neg = true;
      advance();
    }
    if (cur_.kind != Tok::kInteger)
      throw ParseError(cur_.pos, "expected a divided-power order",
                       {"an integer"});
    const std::size_t m_pos = cur_.pos;
    const long m = cur_.value;
    advance();
    if (cur_.kind != Tok::kRParen)
      throw ParseError(cur_.pos, "unclosed divided-power order", {"')'"});
    advance();
    if (neg)
      throw ParseError(m_pos, "divided-power order must be nonnegative");
    if (m > kMaxExponent) throw ParseError(m_pos, "exponent out of range");
    Atom a;
    a.node = node;
    a.shape = Shape::kGeneral;
    try {
      a.v = from_iexpr(idivided_power(datum_, node, m, parity));
    } catch (const std::invalid_argument& e) {
      throw ParseError(head.pos, e.what());
    }
    return a;
  }

  const CartanDatum& datum_;
  Lexer lex_;
  bool full_;
  std::map<GenSym, NCPoly> images_;
  Token cur_;
};

// ---------------------------------------------------------------------------
// Printing

std::string rational_text(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// Body of a Laurent polynomial in grammar form, e.g. "q^-2 - 2 + q^2".
std::string laurent_body(const LaurentPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  p.each_term([&](long e, const Rational& c) {
    const bool neg = c < 0;
    const Rational mag = neg ? Rational(-c) : c;
    if (first)
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    first = false;
    const bool unit = mag == 1;
    if (e == 0) {
      s += rational_text(mag);
    } else {
      if (!unit) s += rational_text(mag) + "*";
      s += "q";
      if (e != 1) s += "^" + std::to_string(e);
    }
  });
  return s;
}

}  // namespace

ParseError::ParseError(std::size_t position, const std::string& detail,
                       std::vector<std::string> expected)
    : std::runtime_error(format_message(position, detail, expected)),
      position_(position),
      expected_(std::move(expected)) {}

IExpression parse_expression(const CartanDatum& datum,
                             const std::string& text) {
  datum.require_valid();
  Parser p(datum, text, /*full=*/false);
  return IExpression(p.run().ip);
}

NCPoly parse_double_expression(const CartanDatum& datum,
                               const std::string& text) {
  datum.require_valid();
  Parser p(datum, text, /*full=*/true);
  return p.run().up;
}

std::string print_scalar(const Scalar& c) {
  if (c.is_zero()) return "0";
  const std::string num = "(" + laurent_body(c.num()) + ")";
  if (c.is_polynomial()) return num;
  return num + "/(" + laurent_body(c.den()) + ")";
}

std::string print_expression(const CartanDatum& datum, const IExpression& x) {
  (void)datum;
  if (x.is_zero()) return "0";
  std::string s;
  bool first_term = true;
  for (const auto& [w, c] : x.poly().terms()) {
    if (!first_term) s += " + ";
    first_term = false;
    std::string word;
    for (std::size_t a = 0; a < w.size();) {
      std::size_t b = a;
      while (b < w.size() && w[b] == w[a]) ++b;
      const long run = static_cast<long>(b - a);
      const GenSym& g = w[a];
      if (!word.empty()) word += "*";
      word += (g.kind == ialpha::kB ? "B" : "k") + std::to_string(g.index + 1);
      const long e = g.sign < 0 ? -run : run;
      if (e != 1) word += "^" + std::to_string(e);
      a = b;
    }
    if (word.empty()) {
      s += print_scalar(c);
    } else {
      if (c.is_one())
        s += word;
      else
        s += print_scalar(c) + "*" + word;
    }
  }
  return s;
}

}  // namespace iqv
