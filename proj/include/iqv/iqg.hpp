#pragma once

#include <string>
#include <vector>

#include "iqv/cartan.hpp"
#include "iqv/ncalg.hpp"
#include "iqv/scalars.hpp"
#include "iqv/udouble.hpp"

// Expression layer for the coideal subalgebra of the double: free
// polynomials in the generators B_i and the invertible k_i, the ordinary and
// parity-decorated divided powers, the bar and flip involutions, the higher
// Serre families, and the defining relation set — together with the faithful
// evaluation map into the double (B_i = F_i + E_{tau i} K'_i,
// k_i = K_i K'_{tau i}), through which every identity is zero-tested.

namespace iqv {

// Letters of the coideal expression alphabet, tag "i". Symbol order B < k,
// then node index; k letters carry sign +-1 since they are invertible.
namespace ialpha {

inline constexpr int kB = 0;
inline constexpr int kK = 1;

inline const std::string& tag() {
  static const std::string t = "i";
  return t;
}

inline GenSym B(int i) { return GenSym{kB, i, +1}; }
inline GenSym k(int i, int sign = +1) { return GenSym{kK, i, sign}; }

}  // namespace ialpha

// A free expression in B_i and k_i^{+-1} whose words eagerly cancel adjacent
// k_i^{+1} k_i^{-1} pairs (in both orders). No other rewriting happens at
// this layer — the k-B commutation holds in the quotient, not in the free
// algebra — so semantic equality always goes through embed().
class IExpression {
 public:
  IExpression() : poly_(ialpha::tag()) {}
  // Validates letters and normalizes every word.
  explicit IExpression(const NCPoly& p);

  static IExpression zero() { return IExpression(); }
  static IExpression one();
  static IExpression B(std::size_t i);
  static IExpression k(std::size_t i, int sign = +1);
  static IExpression constant(const Scalar& c);

  const NCPoly& poly() const { return poly_; }
  bool is_zero() const { return poly_.is_zero(); }

  IExpression operator-() const;
  IExpression operator+(const IExpression& o) const;
  IExpression operator-(const IExpression& o) const;
  IExpression operator*(const IExpression& o) const;
  bool operator==(const IExpression& o) const { return poly_ == o.poly_; }
  bool operator!=(const IExpression& o) const { return !(*this == o); }

 private:
  NCPoly poly_;
};

IExpression operator*(const Scalar& c, const IExpression& x);

// Multiplicative, linear evaluation into the double: B_i maps to
// F_i + E_{tau i} K'_i and k_i^{+-1} to (K_i K'_{tau i})^{+-1}. The coideal
// subalgebra embeds in the double, so x is zero there iff embed(x) is zero.
UElement embed(UEngine& engine, const IExpression& x);

// B_i^m / [m]!_{q_i}; m < 0 yields the zero expression.
IExpression divided_power(const CartanDatum& datum, std::size_t i, long m);

// Parity-decorated divided power for a tau-fixed node, parity in {0, 1}:
// the alternating products of B_i^2 - q_i k_i [x]^2 with x running over odd
// (parity 1) or even (parity 0) quantum integers, divided by [m]!_{q_i}.
// Throws std::invalid_argument when tau(i) != i; m < 0 yields zero.
IExpression idivided_power(const CartanDatum& datum, std::size_t i, long m,
                           int parity);

// Anti-automorphism: reverses words, fixes B_i and coefficients, and sends
// k_i to k_{tau i}. An involution.
IExpression sigma(const CartanDatum& datum, const IExpression& x);

// Bar involution: conjugates coefficients (q -> q^{-1}), fixes B_i, and
// sends k_i^{+-1} to q_i^{+-c_{i,tau i}} k_{tau i}^{+-1}. An involution.
IExpression psi(const CartanDatum& datum, const IExpression& x);

// The degree-m member of the higher Serre family attached to a node with
// tau(i) != i and e in {+1,-1}: the alternating sum of
// q_i^{er(1-c-m)} B_i^{(r)} B_{tau i} B_i^{(s)} over r+s = m minus its
// k-correction term, with the empty-product convention for small m.
// Requires m >= 1 (the correction is 0/0 at m = 0) and tau(i) != i.
IExpression ytilde(const CartanDatum& datum, std::size_t i, long m, int e);

// sigma-image of ytilde (the mirrored family).
IExpression ytilde_prime(const CartanDatum& datum, std::size_t i, long m,
                         int e);

// Recursion defect of the family: -q_i^{-e(2m+c)} B_i y_m + y_m B_i
// - [m+1]_{q_i} y_{m+1} for the plain family, and the mirrored version
// (B_i on the other side) when primed. Embeds to zero when the recursion
// holds.
IExpression recursion_defect(const CartanDatum& datum, std::size_t i, long m,
                             int e, bool primed);

// Reduced single-k form of the degree-m higher Serre identity, valid for
// m > 1 - c_{i,tau i}; returns LHS - RHS. sign +1 pairs the exponent
// q_i^{+r(1-c-m)} with the k_{tau i} right-hand side, sign -1 pairs
// q_i^{-r(1-c-m)} with k_i.
IExpression higher_serre_identity(const CartanDatum& datum, std::size_t i,
                                  long m, int sign);

// Right-hand side of the BKL relation in its two printed forms: the
// presentation form with q-Pochhammer coefficients, and the reformulated
// form with quantum factorials. They are equal as expressions; verifying
// that equality checks the Pochhammer closed forms.
IExpression bkl_rhs_presentation(const CartanDatum& datum, std::size_t i);
IExpression bkl_rhs_factorial(const CartanDatum& datum, std::size_t i);

// Alternating-sum side of the BKL relation (shared by both printed forms).
IExpression bkl_lhs(const CartanDatum& datum, std::size_t i);

// Divided-power commutation identity for c_{i,tau i} = 0, as LHS - RHS.
// form 1: B_{tau i}^{(N)} B_i^{(M)} expanded over B_i^{(M-t)} (...)
// B_{tau i}^{(N-t)}; form 2 the mirrored identity (i and tau i exchanged).
IExpression dp_commutation_identity(const CartanDatum& datum, std::size_t i,
                                    long N, long M, int form);

// The higher Serre family attached to a plain Serre pair (i, tau i, j all
// distinct). The printed exponent uses er(-c_ij - m + 1) (variant literal);
// the recursion it is meant to satisfy wants er(-n c_ij - m + 1) (variant
// n_corrected). The variants coincide at n = 1; both are provided and the
// harness records which one vanishes where.
enum class YgenVariant { literal, n_corrected };
IExpression ygen(const CartanDatum& datum, std::size_t i, std::size_t j,
                 long n, long m, int e, YgenVariant variant);
IExpression ygen_prime(const CartanDatum& datum, std::size_t i, std::size_t j,
                       long n, long m, int e, YgenVariant variant);

// One defining relation of the coideal subalgebra, as LHS - RHS. Labels:
//   relation1a.l<a>.i<b>        k-commutation, a < b
//   relation1b.l<a>.i<b>        k_a B_b crossing with its q-coefficient
//   relation2.i<a>.j<b>         plain B-commutation (c_ab = 0, tau a != b)
//   relation3.i<a>.j<b>         Serre relation (b != tau a != a)
//   relation5.i<a>               deformed Serre / BKL (tau a != a)
//   relation6.i<a>.j<b>.p<0|1>  parity-decorated Serre (tau a = a, b != a)
// Indices in labels are 1-based.
struct IRelation {
  std::string label;
  IExpression expr;
};

// Exactly the defining relations applicable to the datum, in label order.
std::vector<IRelation> relation_set(const CartanDatum& datum);

// One deliberately corrupted relation per family present in the datum: the
// coefficient of one word is multiplied by q. Each mutant must evaluate
// nonzero under embed while every unmutated relation still vanishes; this
// is the sensitivity control for the whole harness.
struct IMutant {
  std::string target;  // label of the corrupted relation
  IExpression expr;
};
std::vector<IMutant> mutated_relations(const CartanDatum& datum);

}  // namespace iqv
