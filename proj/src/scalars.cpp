#include "iqv/scalars.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <utility>

namespace iqv {

namespace {

Integer int_gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(a, b);
}

Integer int_lcm(const Integer& a, const Integer& b) {
  return boost::multiprecision::lcm(a, b);
}

}  // namespace

// ---------------------------------------------------------------------------
// LaurentPoly

void LaurentPoly::trim() {
  std::size_t lead = 0;
  while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
  std::size_t tail = coeffs_.size();
  while (tail > lead && coeffs_[tail - 1] == 0) --tail;
  if (lead > 0 || tail < coeffs_.size()) {
    coeffs_ = std::vector<Rational>(coeffs_.begin() + lead,
                                    coeffs_.begin() + tail);
    min_ += static_cast<long>(lead);
  }
  if (coeffs_.empty()) min_ = 0;
}

LaurentPoly LaurentPoly::constant(const Rational& c) {
  return monomial(0, c);
}

LaurentPoly LaurentPoly::monomial(long exp, const Rational& c) {
  LaurentPoly p;
  if (c != 0) {
    p.min_ = exp;
    p.coeffs_.push_back(c);
  }
  return p;
}

bool LaurentPoly::is_one() const {
  return coeffs_.size() == 1 && min_ == 0 && coeffs_[0] == 1;
}

long LaurentPoly::min_exp() const {
  if (is_zero()) throw std::logic_error("min_exp of zero polynomial");
  return min_;
}

long LaurentPoly::max_exp() const {
  if (is_zero()) throw std::logic_error("max_exp of zero polynomial");
  return min_ + static_cast<long>(coeffs_.size()) - 1;
}

Rational LaurentPoly::coeff(long exp) const {
  if (exp < min_ || exp >= min_ + static_cast<long>(coeffs_.size())) return 0;
  return coeffs_[static_cast<std::size_t>(exp - min_)];
}

void LaurentPoly::set_coeff(long exp, const Rational& c) {
  if (is_zero()) {
    if (c == 0) return;
    min_ = exp;
    coeffs_.assign(1, c);
    return;
  }
  if (exp < min_) {
    coeffs_.insert(coeffs_.begin(), static_cast<std::size_t>(min_ - exp),
                   Rational(0));
    min_ = exp;
  } else if (exp >= min_ + static_cast<long>(coeffs_.size())) {
    coeffs_.resize(static_cast<std::size_t>(exp - min_) + 1, Rational(0));
  }
  coeffs_[static_cast<std::size_t>(exp - min_)] = c;
  trim();
}

void LaurentPoly::each_term(
    const std::function<void(long, const Rational&)>& fn) const {
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] != 0) fn(min_ + static_cast<long>(k), coeffs_[k]);
  }
}

std::size_t LaurentPoly::term_count() const {
  std::size_t n = 0;
  for (const auto& c : coeffs_)
    if (c != 0) ++n;
  return n;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r(*this);
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  long lo = std::min(min_, o.min_);
  long hi = std::max(max_exp(), o.max_exp());
  LaurentPoly r;
  r.min_ = lo;
  r.coeffs_.assign(static_cast<std::size_t>(hi - lo) + 1, Rational(0));
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    r.coeffs_[static_cast<std::size_t>(min_ - lo) + k] += coeffs_[k];
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k)
    r.coeffs_[static_cast<std::size_t>(o.min_ - lo) + k] += o.coeffs_[k];
  r.trim();
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  return *this + (-o);
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  if (is_zero() || o.is_zero()) return LaurentPoly();
  LaurentPoly r;
  r.min_ = min_ + o.min_;
  r.coeffs_.assign(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (std::size_t a = 0; a < coeffs_.size(); ++a) {
    if (coeffs_[a] == 0) continue;
    for (std::size_t b = 0; b < o.coeffs_.size(); ++b) {
      if (o.coeffs_[b] == 0) continue;
      r.coeffs_[a + b] += coeffs_[a] * o.coeffs_[b];
    }
  }
  r.trim();
  return r;
}

bool LaurentPoly::operator==(const LaurentPoly& o) const {
  return min_ == o.min_ && coeffs_ == o.coeffs_;
}

LaurentPoly LaurentPoly::shifted(long k) const {
  if (is_zero()) return *this;
  LaurentPoly r(*this);
  r.min_ += k;
  return r;
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
  if (c == 0) return LaurentPoly();
  LaurentPoly r(*this);
  for (auto& x : r.coeffs_) x *= c;
  return r;
}

LaurentPoly LaurentPoly::bar() const {
  if (is_zero()) return *this;
  LaurentPoly r;
  r.min_ = -max_exp();
  r.coeffs_.assign(coeffs_.rbegin(), coeffs_.rend());
  return r;
}

Rational LaurentPoly::content() const {
  if (is_zero()) return 0;
  Integer g = 0, l = 1;
  for (const auto& c : coeffs_) {
    if (c == 0) continue;
    g = int_gcd(g, boost::multiprecision::numerator(c));
    l = int_lcm(l, boost::multiprecision::denominator(c));
  }
  if (g < 0) g = -g;
  return Rational(g, l);
}

bool LaurentPoly::has_integer_coeffs() const {
  for (const auto& c : coeffs_) {
    if (boost::multiprecision::denominator(c) != 1) return false;
  }
  return true;
}

std::uint64_t LaurentPoly::eval_mod(std::uint64_t q_image,
                                    std::uint64_t prime) const {
  if (is_zero()) return 0;
  // Horner over the plain polynomial part, then multiply by q^{min}.
  std::uint64_t acc = 0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    acc = modarith::mul(acc, q_image % prime, prime);
    acc = modarith::add(acc, modarith::reduce_rational(coeffs_[k], prime),
                        prime);
  }
  if (min_ > 0) {
    acc = modarith::mul(
        acc, modarith::pow(q_image % prime, static_cast<std::uint64_t>(min_),
                           prime),
        prime);
  } else if (min_ < 0) {
    std::uint64_t qi = modarith::inv(q_image % prime, prime);
    acc = modarith::mul(
        acc, modarith::pow(qi, static_cast<std::uint64_t>(-min_), prime),
        prime);
  }
  return acc;
}

std::string LaurentPoly::to_text() const {
  std::ostringstream os;
  os << "[";
  bool first = true;
  each_term([&](long e, const Rational& c) {
    if (!first) os << ",";
    first = false;
    os << "(" << e << "," << c << ")";
  });
  os << "]";
  return os.str();
}

namespace {

// Minimal recursive-descent helpers for the bracketed term-list text form.
struct TextCursor {
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("malformed scalar text at offset " +
                                std::to_string(pos) + ": " + why);
  }
  char peek() const { return pos < s.size() ? s[pos] : '\0'; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string take_signed_digits() {
    std::size_t start = pos;
    if (peek() == '-' || peek() == '+') ++pos;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
    if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
      fail("expected integer");
    return s.substr(start, pos - start);
  }
  long take_long() {
    return std::stol(take_signed_digits());
  }
  Rational take_rational() {
    Integer num(take_signed_digits());
    if (accept('/')) {
      Integer den(take_signed_digits());
      if (den == 0) fail("zero denominator in coefficient");
      return Rational(num, den);
    }
    return Rational(num);
  }
};

LaurentPoly parse_poly(TextCursor& c) {
  LaurentPoly p;
  c.expect('[');
  if (c.accept(']')) return p;
  while (true) {
    c.expect('(');
    long e = c.take_long();
    c.expect(',');
    Rational v = c.take_rational();
    c.expect(')');
    p.set_coeff(e, p.coeff(e) + v);
    if (c.accept(']')) break;
    c.expect(',');
  }
  return p;
}

}  // namespace

LaurentPoly LaurentPoly::from_text(const std::string& s) {
  TextCursor c{s};
  LaurentPoly p = parse_poly(c);
  if (c.pos != s.size()) c.fail("trailing characters");
  return p;
}

// ---------------------------------------------------------------------------
// Integer polynomial gcd: subresultant (fraction-free) PRS.

namespace {

// Plain integer polynomials, coeffs[k] = coefficient of x^k, trailing (back)
// entry nonzero unless empty (= zero polynomial).
using IPoly = std::vector<Integer>;

void ipoly_trim(IPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Integer ipoly_content(const IPoly& p) {
  Integer g = 0;
  for (const auto& c : p) g = int_gcd(g, c);
  if (g < 0) g = -g;
  return g;
}

void ipoly_div_int(IPoly& p, const Integer& d) {
  for (auto& c : p) {
    Integer q = c / d;
    if (q * d != c) throw std::logic_error("inexact integer poly division");
    c = q;
  }
}

// Pseudo-remainder: returns lc(b)^{deg a - deg b + 1} * a mod b.
IPoly ipoly_prem(IPoly a, const IPoly& b) {
  const Integer& lb = b.back();
  long e = static_cast<long>(a.size()) - static_cast<long>(b.size()) + 1;
  while (!a.empty() && a.size() >= b.size()) {
    Integer la = a.back();
    std::size_t shift = a.size() - b.size();
    for (auto& c : a) c *= lb;
    for (std::size_t k = 0; k < b.size(); ++k)
      a[shift + k] -= la * b[k];
    ipoly_trim(a);
    --e;
  }
  if (e > 0) {
    Integer f = boost::multiprecision::pow(lb, static_cast<unsigned>(e));
    for (auto& c : a) c *= f;
  }
  return a;
}

// Primitive gcd of two integer polynomials via the subresultant PRS.
// Result has positive leading coefficient; gcd(p, 0) = primitive(p).
IPoly ipoly_gcd(IPoly a, IPoly b) {
  ipoly_trim(a);
  ipoly_trim(b);
  if (a.empty()) std::swap(a, b);
  if (b.empty()) {
    if (a.empty()) return a;
    Integer ca = ipoly_content(a);
    ipoly_div_int(a, a.back() < 0 ? -ca : ca);
    return a;
  }
  if (a.size() < b.size()) std::swap(a, b);
  Integer ca = ipoly_content(a), cb = ipoly_content(b);
  Integer d = int_gcd(ca, cb);
  ipoly_div_int(a, ca);
  ipoly_div_int(b, cb);
  Integer g = 1, h = 1;
  while (true) {
    long delta = static_cast<long>(a.size()) - static_cast<long>(b.size());
    IPoly r = ipoly_prem(a, b);
    if (r.empty()) break;
    if (r.size() == 1) {
      return IPoly{d};
    }
    a = std::move(b);
    Integer div = g * boost::multiprecision::pow(h, static_cast<unsigned>(delta));
    ipoly_div_int(r, div);
    b = std::move(r);
    g = a.back();
    if (delta > 0) {
      Integer gd = boost::multiprecision::pow(g, static_cast<unsigned>(delta));
      if (delta == 1) {
        h = gd;
      } else {
        Integer hd = boost::multiprecision::pow(h, static_cast<unsigned>(delta - 1));
        h = gd / hd;
        if (h * hd != gd) throw std::logic_error("subresultant h not integral");
      }
    }
  }
  Integer cres = ipoly_content(b);
  ipoly_div_int(b, b.back() < 0 ? -cres : cres);
  if (d != 1) {
    for (auto& c : b) c *= d;
  }
  return b;
}

// Exact division a / b of integer polynomials (throws if not exact).
IPoly ipoly_div_exact(const IPoly& a, const IPoly& b) {
  if (b.empty()) throw std::logic_error("integer poly division by zero");
  if (a.empty()) return {};
  if (a.size() < b.size()) throw std::logic_error("inexact poly division");
  IPoly rem = a;
  IPoly quot(a.size() - b.size() + 1, Integer(0));
  for (std::size_t k = quot.size(); k-- > 0;) {
    std::size_t top = k + b.size() - 1;
    if (top >= rem.size()) continue;
    Integer c = rem[top] / b.back();
    if (c * b.back() != rem[top]) throw std::logic_error("inexact poly division");
    quot[k] = c;
    if (c != 0) {
      for (std::size_t j = 0; j < b.size(); ++j) rem[k + j] -= c * b[j];
    }
  }
  ipoly_trim(rem);
  if (!rem.empty()) throw std::logic_error("inexact poly division");
  return quot;
}

IPoly to_ipoly(const LaurentPoly& p) {
  // Caller guarantees integer coefficients and min_exp() == 0.
  IPoly v(static_cast<std::size_t>(p.max_exp()) + 1, Integer(0));
  p.each_term([&](long e, const Rational& c) {
    v[static_cast<std::size_t>(e)] = boost::multiprecision::numerator(c);
  });
  return v;
}

LaurentPoly from_ipoly(const IPoly& v) {
  LaurentPoly p;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] != 0) p.set_coeff(static_cast<long>(k), Rational(v[k]));
  }
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(long v)
    : num_(LaurentPoly::constant(v)), den_(LaurentPoly::constant(1)) {}

Scalar::Scalar(const Rational& v)
    : num_(LaurentPoly::constant(v)), den_(LaurentPoly::constant(1)) {}

Scalar Scalar::from_poly(const LaurentPoly& p) {
  return Scalar(p, LaurentPoly::constant(1));
}

Scalar Scalar::q_power(long e) {
  return Scalar(LaurentPoly::monomial(e, 1), LaurentPoly::constant(1));
}

Scalar Scalar::ratio_coprime(const LaurentPoly& num, const LaurentPoly& den) {
  if (den.is_zero()) throw std::domain_error("division by zero");
  if (num.is_zero()) return Scalar();
  Rational cd = den.content();
  long b = den.min_exp();
  LaurentPoly d = den.scaled(1 / cd).shifted(-b);
  LaurentPoly n = num.scaled(1 / cd).shifted(-b);
  if (d.coeff(0) < 0) {
    d = -d;
    n = -n;
  }
  return Scalar(std::move(n), std::move(d));
}

Scalar Scalar::ratio(const LaurentPoly& num, const LaurentPoly& den) {
  if (den.is_zero()) throw std::domain_error("division by zero");
  if (num.is_zero()) return Scalar();
  if (den.term_count() == 1) return ratio_coprime(num, den);
  Rational cn = num.content();
  Rational cd = den.content();
  long a = num.min_exp(), b = den.min_exp();
  IPoly nv = to_ipoly(num.scaled(1 / cn).shifted(-a));
  IPoly dv = to_ipoly(den.scaled(1 / cd).shifted(-b));
  IPoly g = ipoly_gcd(nv, dv);
  if (g.size() > 1 || g[0] != 1) {
    nv = ipoly_div_exact(nv, g);
    dv = ipoly_div_exact(dv, g);
  }
  if (dv[0] < 0) {
    for (auto& c : nv) c = -c;
    for (auto& c : dv) c = -c;
  }
  LaurentPoly n = from_ipoly(nv).scaled(cn / cd).shifted(a - b);
  LaurentPoly d = from_ipoly(dv);
  if (d.coeff(0) < 0) {
    d = -d;
    n = -n;
  }
  return Scalar(std::move(n), std::move(d));
}

bool Scalar::is_one() const { return den_.is_one() && num_.is_one(); }

Scalar Scalar::operator-() const { return Scalar(-num_, den_); }

Scalar Scalar::operator+(const Scalar& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (den_ == o.den_) return ratio(num_ + o.num_, den_);
  return ratio(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  if (is_zero() || o.is_zero()) return Scalar();
  // Cross-cancel so the final product needs no gcd: each factor is coprime
  // to both denominators by construction.
  Scalar t1 = ratio(num_, o.den_);
  Scalar t2 = ratio(o.num_, den_);
  return Scalar(t1.num_ * t2.num_, t1.den_ * t2.den_);
}

Scalar Scalar::operator/(const Scalar& o) const {
  if (o.is_zero()) throw std::domain_error("division by zero");
  if (is_zero()) return Scalar();
  Scalar t1 = ratio(num_, o.num_);
  Scalar t2 = ratio(o.den_, den_);
  return Scalar(t1.num_ * t2.num_, t1.den_ * t2.den_);
}

bool Scalar::operator==(const Scalar& o) const {
  return num_ == o.num_ && den_ == o.den_;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  return ratio_coprime(den_, num_);
}

Scalar Scalar::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  Scalar acc(1);
  Scalar base = *this;
  unsigned long n = static_cast<unsigned long>(e);
  while (n > 0) {
    if (n & 1) acc *= base;
    base = (n >>= 1) ? base * base : base;
  }
  return acc;
}

Scalar Scalar::bar() const {
  if (is_zero()) return *this;
  return ratio_coprime(num_.bar(), den_.bar());
}

std::string Scalar::to_text() const {
  return "num:" + num_.to_text() + ";den:" + den_.to_text();
}

Scalar Scalar::from_text(const std::string& s) {
  TextCursor c{s};
  auto expect_str = [&](const char* lit) {
    for (const char* p = lit; *p; ++p) c.expect(*p);
  };
  expect_str("num:");
  LaurentPoly n = parse_poly(c);
  expect_str(";den:");
  LaurentPoly d = parse_poly(c);
  if (c.pos != s.size()) c.fail("trailing characters");
  return ratio(n, d);
}

// ---------------------------------------------------------------------------
// Quantum combinatorics

Scalar qint(long n, long k) {
  if (n < 0) return -qint(-n, k);
  LaurentPoly p;
  for (long j = 0; j < n; ++j) {
    long e = k * (n - 1 - 2 * j);
    p.set_coeff(e, p.coeff(e) + 1);
  }
  return Scalar::from_poly(p);
}

Scalar qfact(long m, long k) {
  if (m < 0) throw std::domain_error("quantum factorial of negative integer");
  Scalar r(1);
  for (long j = 2; j <= m; ++j) r *= qint(j, k);
  return r;
}

Scalar qbinom(long n, long d, long k) {
  if (d < 0) return Scalar(0);
  Scalar r(1);
  for (long t = 1; t <= d; ++t) r *= qint(n - t + 1, k);
  return r / qfact(d, k);
}

Scalar pochhammer(const Scalar& a, const Scalar& x, long n) {
  if (n < 0) throw std::domain_error("negative q-Pochhammer length");
  Scalar r(1);
  Scalar xp(1);
  for (long j = 0; j < n; ++j) {
    r *= Scalar(1) - a * xp;
    xp *= x;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Modular arithmetic

namespace modarith {

std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  if (s >= p || s < a) s -= p;
  return s;
}

std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e > 0) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw BadSampleError();
  return pow(a, p - 2, p);
}

std::uint64_t reduce_integer(const Integer& v, std::uint64_t p) {
  Integer m = v % Integer(p);
  if (m < 0) m += Integer(p);
  return m.convert_to<std::uint64_t>();
}

std::uint64_t reduce_rational(const Rational& v, std::uint64_t p) {
  std::uint64_t n = reduce_integer(boost::multiprecision::numerator(v), p);
  std::uint64_t d = reduce_integer(boost::multiprecision::denominator(v), p);
  if (d == 0) throw BadSampleError();
  return mul(n, inv(d, p), p);
}

}  // namespace modarith

// ---------------------------------------------------------------------------
// ModularScalar

namespace {

void check_compatible(const ModularScalar& a, const ModularScalar& b) {
  if (a.prime != b.prime || a.q_image != b.q_image)
    throw std::invalid_argument("modular scalars from different sample points");
}

}  // namespace

ModularScalar ModularScalar::operator+(const ModularScalar& o) const {
  check_compatible(*this, o);
  return {modarith::add(value, o.value, prime), prime, q_image};
}

ModularScalar ModularScalar::operator-(const ModularScalar& o) const {
  check_compatible(*this, o);
  return {modarith::sub(value, o.value, prime), prime, q_image};
}

ModularScalar ModularScalar::operator*(const ModularScalar& o) const {
  check_compatible(*this, o);
  return {modarith::mul(value, o.value, prime), prime, q_image};
}

ModularScalar ModularScalar::operator/(const ModularScalar& o) const {
  check_compatible(*this, o);
  if (o.value == 0) throw std::domain_error("division by zero");
  return {modarith::mul(value, modarith::inv(o.value, prime), prime), prime,
          q_image};
}

bool ModularScalar::operator==(const ModularScalar& o) const {
  return prime == o.prime && q_image == o.q_image && value == o.value;
}

ModularScalar eval_mod(const Scalar& x, std::uint64_t q_image,
                       std::uint64_t prime) {
  std::uint64_t n = x.num().eval_mod(q_image, prime);
  std::uint64_t d = x.den().eval_mod(q_image, prime);
  if (d == 0) throw BadSampleError();
  return {modarith::mul(n, modarith::inv(d, prime), prime), prime, q_image};
}

}  // namespace iqv
