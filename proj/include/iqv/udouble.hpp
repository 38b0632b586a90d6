#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "iqv/cartan.hpp"
#include "iqv/ncalg.hpp"
#include "iqv/scalars.hpp"

// The Drinfeld double quantum group: straightening of free expressions into
// triangular F-word * K-monomial * E-word form, and canonical per-weight
// reduction modulo the q-Serre ideals on each one-sign half. reduce() is the
// arbiter of equality for the whole verification harness: an identity holds
// iff its difference reduces to the empty element.

namespace iqv {

// Generator alphabet of the double, tag "u". Fixed symbol order
// F < K < K' < E, then by index; K and K' letters carry sign ±1 since they
// are invertible.
namespace ualpha {

inline constexpr int kF = 0;
inline constexpr int kK = 1;
inline constexpr int kKp = 2;
inline constexpr int kE = 3;

inline const std::string& tag() {
  static const std::string t = "u";
  return t;
}

inline GenSym F(int i) { return GenSym{kF, i, +1}; }
inline GenSym K(int i, int sign = +1) { return GenSym{kK, i, sign}; }
inline GenSym Kp(int i, int sign = +1) { return GenSym{kKp, i, sign}; }
inline GenSym E(int i) { return GenSym{kE, i, +1}; }

// wt(E_i) = alpha_i, wt(F_i) = -alpha_i, wt(K) = wt(K') = 0.
Weight letter_weight(const CartanDatum& datum, const GenSym& s);

}  // namespace ualpha

// Single letter as a polynomial over the double's alphabet.
NCPoly uletter(const GenSym& s);

// Thrown when a reduction would need a one-sign word longer than the
// configured degree budget.
class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical key of a triangular term: F-word and E-word as node-index
// sequences, K-part as the exponent vector over the 2n symbols with K_i at
// slot 2i and K'_i at slot 2i+1 (exponents may be negative).
struct TriKey {
  std::vector<std::int32_t> f;
  std::vector<std::int32_t> k;
  std::vector<std::int32_t> e;

  bool operator==(const TriKey& o) const {
    return f == o.f && k == o.k && e == o.e;
  }
  bool operator!=(const TriKey& o) const { return !(*this == o); }
  // F-word degree-lex, then K-part lex, then E-word degree-lex.
  bool operator<(const TriKey& o) const;
};

// One straightened term F-word * K-monomial * E-word with its coefficient.
struct TriangularTerm {
  Word fpart;                 // F-letters
  std::vector<long> kpart;    // exponents, K_i at 2i, K'_i at 2i+1
  Word epart;                 // E-letters
  Scalar coeff;
};

// Basis of one weight component of a one-sign half modulo the q-Serre ideal:
// the full monomial list in ascending degree-lex order, the subset of
// standard (basis) monomials, and for every non-standard monomial its
// expansion over the standard ones. Reduction rows are exact and computed on
// demand; all accessors are safe for concurrent use.
class WeightBasis {
 public:
  using WordVec = std::vector<std::int32_t>;

  Weight weight() const;           // signed weight of the component
  const Weight& multiset() const;  // nonnegative letter multiplicities
  int sign() const;                // +1 for the E-half, -1 for the F-half

  const std::vector<WordVec>& monomials() const;  // ascending degree-lex
  std::size_t monomial_count() const;
  bool is_standard(std::size_t idx) const;
  std::size_t dimension() const;  // number of standard monomials
  std::size_t index_of(const WordVec& w) const;  // throws if absent

  // Expansion of a non-standard monomial over standard monomial indices;
  // calling this on a standard monomial is a logic error.
  const std::map<std::size_t, Scalar>& reduction_row(std::size_t idx) const;

  // Forces every reduction row into memory (used before persisting).
  void materialize_all_rows() const;

  struct Impl;
  explicit WeightBasis(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

 private:
  std::shared_ptr<Impl> impl_;
};

// Canonical element of the double: finite map from triangular keys with
// standard F- and E-words to nonzero coefficients. Two elements of the same
// algebra are equal iff their maps are equal.
class UElement {
 public:
  UElement() = default;  // zero

  static UElement from_terms(std::uint64_t datum_hash,
                             std::map<TriKey, Scalar> terms);

  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  const std::map<TriKey, Scalar>& terms() const { return terms_; }
  Scalar coeff(const TriKey& k) const;
  std::uint64_t datum_hash() const { return datum_hash_; }

  // Canonical form: elements are equal iff their term maps are equal.
  bool operator==(const UElement& o) const { return terms_ == o.terms_; }
  bool operator!=(const UElement& o) const { return !(*this == o); }

  // Human-readable form "(coeff)*F1*K1^2*K2'^-1*E2 + ...",1-based indices,
  // "0" for the zero element; deterministic term order.
  std::string to_text(const CartanDatum& datum) const;

 private:
  std::map<TriKey, Scalar> terms_;
  std::uint64_t datum_hash_ = 0;
};

struct UEngineOptions {
  // Maximum letters per one-sign word.
  long degree_budget = 12;
  // When nonempty, weight bases are persisted here and reloaded bit-exactly.
  std::string cache_dir;
};

// Reduction engine for one Cartan datum. Thread-safe: weight bases are
// computed once per key and shared; independent reductions may run in
// parallel.
class UEngine {
 public:
  explicit UEngine(CartanDatum datum, UEngineOptions opts = {});
  ~UEngine();
  UEngine(const UEngine&) = delete;
  UEngine& operator=(const UEngine&) = delete;

  const CartanDatum& datum() const;
  const UEngineOptions& options() const;

  // Rewrites p into triangular form, exactly congruent to p modulo the
  // defining relations; terms in canonical key order. The E- and F-words of
  // the result are not yet reduced modulo the Serre ideals.
  std::vector<TriangularTerm> straighten(const NCPoly& p) const;

  // Weight-component basis of the sign-half; the weight carries the sign
  // (nonnegative coordinates for +, nonpositive for -). Cached per key,
  // computed at most once.
  std::shared_ptr<const WeightBasis> serre_basis(const Weight& weight,
                                                 int sign);

  UElement reduce(const NCPoly& p);
  UElement zero() const;
  UElement unit() const;
  UElement uadd(const UElement& x, const UElement& y) const;
  UElement uscale(const Scalar& c, const UElement& x) const;
  UElement umul(const UElement& x, const UElement& y);

  bool is_zero(const NCPoly& p);

  // Runs the whole pipeline with coefficients evaluated at `trials` random
  // sample points mod a 61-bit prime; false on any nonzero witness, true
  // otherwise. Deterministic given the seed; bad sample points are redrawn a
  // bounded number of times.
  bool is_zero_modular(const NCPoly& p, int trials, std::uint64_t seed);

  // Number of weight bases built from scratch (excludes cache loads).
  std::size_t basis_compute_count() const;

  // Keys (letter multiset, sign) of every weight basis resident in this
  // engine, in deterministic order. Lets harnesses cross-check exactly the
  // components the reduction relied on.
  std::vector<std::pair<Weight, int>> basis_keys() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

// The q-Serre polynomial for the ordered pair (i, j) in the E-letters
// (sign +1) or F-letters (sign -1), with divided-power coefficients.
NCPoly serre_element(const CartanDatum& datum, std::size_t i, std::size_t j,
                     int sign);

// Independent zero-test for a homogeneous one-sign polynomial via the
// standard bilinear form on the free half: true iff the input pairs to zero
// against every word of its weight, i.e. lies in the radical, i.e. vanishes
// in the Serre quotient. The weight is signed as in serre_basis.
bool form_radical_oracle(const CartanDatum& datum, const NCPoly& p,
                         const Weight& weight);

// Batch variant of form_radical_oracle: one instance shares its pairing
// memo across all queries on the same datum, which matters when many
// elements of the same weight are cross-checked. Safe for concurrent use.
class FormOracle {
 public:
  explicit FormOracle(CartanDatum datum);
  bool in_radical(const NCPoly& p, const Weight& weight) const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace iqv
