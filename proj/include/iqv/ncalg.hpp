#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iqv/cartan.hpp"
#include "iqv/scalars.hpp"

// Free noncommutative polynomials over Scalar in a tagged generator alphabet,
// with reversal, multiplicative substitution, weight grading, and word
// enumeration. Shared substrate for the quantum-group modules.

namespace iqv {

// One letter. `kind` enumerates the letter family (the declaring module fixes
// the meaning), `index` picks the node of the index set, `sign` distinguishes
// a letter from its formal inverse where invertibility applies.
struct GenSym {
  int kind = 0;
  int index = 0;
  int sign = +1;

  bool operator==(const GenSym& o) const {
    return kind == o.kind && index == o.index && sign == o.sign;
  }
  bool operator!=(const GenSym& o) const { return !(*this == o); }
  // Lexicographic on (kind, index, sign).
  bool operator<(const GenSym& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (index != o.index) return index < o.index;
    return sign < o.sign;
  }
};

using Word = std::vector<GenSym>;

// Degree first, then lexicographic on the symbols.
struct WordLess {
  bool operator()(const Word& a, const Word& b) const;
};

// Free noncommutative polynomial. Every polynomial carries an alphabet tag;
// binary operations insist both operands agree, so expressions living in
// different algebras cannot be combined silently.
class NCPoly {
 public:
  using TermMap = std::map<Word, Scalar, WordLess>;

  NCPoly() = default;
  explicit NCPoly(std::string alphabet) : alphabet_(std::move(alphabet)) {}

  static NCPoly monomial(std::string alphabet, Word w, Scalar c = Scalar(1));
  static NCPoly letter(std::string alphabet, const GenSym& s);
  static NCPoly one(std::string alphabet) {
    return monomial(std::move(alphabet), Word{});
  }

  const std::string& alphabet() const { return alphabet_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  // Terms in ascending degree-lexicographic word order.
  const TermMap& terms() const { return terms_; }
  Scalar coeff(const Word& w) const;

  // Accumulates c onto the coefficient of w, dropping the term if the sum
  // vanishes.
  void add_term(const Word& w, const Scalar& c);

  NCPoly operator-() const;
  NCPoly operator+(const NCPoly& o) const;
  NCPoly operator-(const NCPoly& o) const;
  NCPoly operator*(const NCPoly& o) const;
  NCPoly& operator+=(const NCPoly& o);
  NCPoly& operator-=(const NCPoly& o) { return *this += -o; }
  bool operator==(const NCPoly& o) const {
    return alphabet_ == o.alphabet_ && terms_ == o.terms_;
  }
  bool operator!=(const NCPoly& o) const { return !(*this == o); }

  // Deterministic serialization "{tag}<k.i.s ...>coeff|..." with terms in
  // word order; round-trips bit-exactly.
  std::string to_text() const;
  static NCPoly from_text(const std::string& s);

 private:
  std::string alphabet_;
  TermMap terms_;
};

NCPoly add(const NCPoly& p, const NCPoly& q);
NCPoly scale(const Scalar& c, const NCPoly& p);
NCPoly mul(const NCPoly& p, const NCPoly& q);
inline NCPoly operator*(const Scalar& c, const NCPoly& p) { return scale(c, p); }

// Reverses every word, keeping coefficients; an algebra anti-involution.
NCPoly reverse(const NCPoly& p);

// Multiplicative extension of symbol -> polynomial. Every image must carry
// `target_alphabet`; a symbol of p without an image is an error. With
// bar_coefficients the coefficients are bar-conjugated first (the semilinear
// extension). Callers substituting for invertible letters are responsible for
// sending a letter and its inverse to mutually inverse images.
NCPoly substitute(const NCPoly& p, const std::string& target_alphabet,
                  const std::map<GenSym, NCPoly>& images,
                  bool bar_coefficients = false);

// Sum of letter weights if all words agree, nullopt otherwise. The zero
// polynomial is homogeneous of weight zero (hence the explicit rank).
std::optional<Weight> weight(const NCPoly& p, std::size_t rank,
                             const std::function<Weight(const GenSym&)>& wt);

// All words containing letters[t] exactly multiplicity.v[t] times, ascending
// lexicographically with respect to the order of `letters`. Any negative
// multiplicity yields the empty list; the count is the multinomial
// coefficient of the multiplicities.
std::vector<Word> enumerate_words(const std::vector<GenSym>& letters,
                                  const Weight& multiplicity);

}  // namespace iqv
