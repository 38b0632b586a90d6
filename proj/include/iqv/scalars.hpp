#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Exact scalar arithmetic over the field Q(q): Laurent polynomials with
// rational coefficients, canonical rational functions, quantum integers,
// and a modular evaluation companion for fast probabilistic zero tests.

namespace iqv {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Thrown by eval_mod and the modular field when a sample point hits a pole
// (denominator evaluates to 0 mod p). Callers resample.
struct BadSampleError : std::runtime_error {
  BadSampleError() : std::runtime_error("bad sample, resample") {}
};

// Laurent polynomial in q with rational coefficients, dense representation.
// Invariant: coeffs_ is empty iff the polynomial is zero; otherwise the
// first and last entries are nonzero and coeffs_[k] is the coefficient of
// q^(min_ + k).
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly constant(const Rational& c);
  static LaurentPoly monomial(long exp, const Rational& c);

  bool is_zero() const { return coeffs_.empty(); }
  bool is_one() const;

  // Lowest/highest exponent with nonzero coefficient. Zero polynomial has
  // neither; calling these on it is a bug, guarded by logic_error.
  long min_exp() const;
  long max_exp() const;

  Rational coeff(long exp) const;
  void set_coeff(long exp, const Rational& c);

  // Visits nonzero terms in ascending exponent order.
  void each_term(const std::function<void(long, const Rational&)>& fn) const;
  std::size_t term_count() const;

  LaurentPoly operator-() const;
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  bool operator==(const LaurentPoly& o) const;
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

  LaurentPoly shifted(long k) const;          // multiply by q^k
  LaurentPoly scaled(const Rational& c) const;
  LaurentPoly bar() const;                    // q -> q^{-1}

  // Positive rational c such that (*this)/c has coprime integer coefficients.
  // Zero polynomial has content 0.
  Rational content() const;
  bool has_integer_coeffs() const;

  // Evaluation at q = q_image modulo prime. Throws BadSampleError when a
  // coefficient denominator vanishes mod prime.
  std::uint64_t eval_mod(std::uint64_t q_image, std::uint64_t prime) const;

  // Text form "[(e1,c1),(e2,c2),...]" ascending exponents, "[]" for zero.
  std::string to_text() const;
  static LaurentPoly from_text(const std::string& s);

 private:
  void trim();

  long min_ = 0;
  std::vector<Rational> coeffs_;
};

// Canonical element of Q(q), stored as num/den with:
//   - den has integer coefficients with content 1,
//   - den's lowest exponent is 0 and its constant term is positive,
//   - gcd(num, den) = 1 as polynomials (den = 1 when num = 0).
// num may carry rational coefficients and q-power shifts; den is the unique
// canonical denominator, so operator== is plain field equality.
class Scalar {
 public:
  Scalar() : num_(), den_(LaurentPoly::constant(1)) {}
  Scalar(long v);
  explicit Scalar(const Rational& v);

  static Scalar from_poly(const LaurentPoly& p);
  // General constructor: reduces num/den to canonical form.
  // Throws std::domain_error on zero denominator.
  static Scalar ratio(const LaurentPoly& num, const LaurentPoly& den);
  static Scalar q_power(long e);

  const LaurentPoly& num() const { return num_; }
  const LaurentPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_polynomial() const { return den_.is_one(); }

  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;  // throws on zero divisor
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  Scalar inverse() const;    // throws std::domain_error on zero
  Scalar pow(long e) const;  // negative e requires nonzero base
  Scalar bar() const;        // bar involution q -> q^{-1}

  // Canonical serialization "num:[...];den:[...]", bit-exact.
  std::string to_text() const;
  static Scalar from_text(const std::string& s);

 private:
  Scalar(LaurentPoly num, LaurentPoly den)
      : num_(std::move(num)), den_(std::move(den)) {}
  // Like ratio() but assumes gcd(num, den) = 1 already; only redistributes
  // q-shifts, content and sign. Used by inverse/bar where coprimality is
  // preserved.
  static Scalar ratio_coprime(const LaurentPoly& num, const LaurentPoly& den);

  LaurentPoly num_;
  LaurentPoly den_;
};

// Quantum integer [n] in base q^k: (q^{kn} - q^{-kn}) / (q^k - q^{-k}).
// [0] = 0, [-n] = -[n].
Scalar qint(long n, long k = 1);

// Quantum factorial [m]^! in base q^k; throws std::domain_error for m < 0.
Scalar qfact(long m, long k = 1);

// Gaussian binomial [n; d] in base q^k for arbitrary integer n and d >= 0;
// returns 0 for d < 0.
Scalar qbinom(long n, long d, long k = 1);

// q-Pochhammer (a; x)_n = prod_{j=0}^{n-1} (1 - a x^j); n >= 0 required.
Scalar pochhammer(const Scalar& a, const Scalar& x, long n);

// Default prime for modular evaluation: 2^61 - 1 (Mersenne).
inline constexpr std::uint64_t kModularPrime = 2305843009213693951ULL;

// Value of a Scalar at a sample point q = q_image in F_prime. Arithmetic
// requires matching (prime, q_image) pairs.
struct ModularScalar {
  std::uint64_t value = 0;
  std::uint64_t prime = kModularPrime;
  std::uint64_t q_image = 1;

  ModularScalar operator+(const ModularScalar& o) const;
  ModularScalar operator-(const ModularScalar& o) const;
  ModularScalar operator*(const ModularScalar& o) const;
  ModularScalar operator/(const ModularScalar& o) const;
  bool operator==(const ModularScalar& o) const;
};

// Evaluates x at q = q_image mod prime. Throws BadSampleError when the
// denominator vanishes at the sample point.
ModularScalar eval_mod(const Scalar& x, std::uint64_t q_image,
                       std::uint64_t prime = kModularPrime);

namespace modarith {
std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t inv(std::uint64_t a, std::uint64_t p);  // throws on a = 0
std::uint64_t reduce_integer(const Integer& v, std::uint64_t p);
// Throws BadSampleError when the denominator of v is divisible by p.
std::uint64_t reduce_rational(const Rational& v, std::uint64_t p);
}  // namespace modarith

}  // namespace iqv
