#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "iqv/cartan.hpp"
#include "iqv/iqg.hpp"
#include "iqv/udouble.hpp"

// Candidate braid-style operators on the coideal algebra. Each operator is
// given by explicit generator images; this module builds the image tables,
// extends them multiplicatively, and tests whether the candidates respect
// the defining relations, the two involutions, and the weight grading.

namespace iqv {

// A candidate endomorphism described by generator images. The table holds
// an image for every B_j, k_j, and k_j^{-1}; `node`, `e`, and `doubleprime`
// record which family member produced it.
struct GeneratorMap {
  std::string label;
  std::size_t node = 0;
  int e = +1;
  bool doubleprime = false;
  std::map<GenSym, IExpression> table;
};

// The two candidate families T'_{i,e} and T''_{i,e}. Both are defined only
// for tau(i) != i with c_{i,tau i} = 0; other nodes throw an
// "outside conjecture's hypothesis" error. e must be +1 or -1.
GeneratorMap tprime(const CartanDatum& datum, std::size_t i, int e);
GeneratorMap tdoubleprime(const CartanDatum& datum, std::size_t i, int e);

// Multiplicative extension of the generator table to an arbitrary element.
// Throws if some letter of x has no image in the table.
IExpression apply(const GeneratorMap& map, const IExpression& x);

// Image of one defining relation under the map, reduced in the double.
struct HomCheck {
  std::string relation;  // label from relation_set
  bool zero = false;     // embed(apply(map, relation)) == 0
  UElement residue;      // the reduced image; nonzero exactly when !zero
};

// One entry per defining relation of the engine's datum, in relation_set
// order. The map extends to an algebra endomorphism iff every entry is zero.
std::vector<HomCheck> check_hom(UEngine& engine, const GeneratorMap& map);

// Conjugation identities tying the two families together through the
// involutions:
//   sigma . T'_{i,e} . sigma = T''_{i,-e}
//   psi   . T'_{i,e} . psi   = T'_{i,-e}
//   psi   . T''_{i,e} . psi  = T''_{i,-e}
enum class Conjugation { sigma_swaps_families, psi_prime, psi_doubleprime };

struct GeneratorComparison {
  GenSym generator;
  bool equal = false;    // both sides agree after embedding into the double
  UElement difference;   // embedded LHS minus RHS; zero exactly when equal
};

// Evaluates the selected identity on every generator of the engine's datum
// and reports the per-generator outcome.
std::vector<GeneratorComparison> conjugation_check(UEngine& engine,
                                                   Conjugation kind,
                                                   std::size_t i, int e);

// Weight covariance. Embedded generators are supported in a single coset of
// the sublattice spanned by {alpha_a + alpha_{tau a}}; a candidate operator
// at node i should shift that coset by the restricted reflection at i. Each
// entry reports whether every graded component of the embedded image lies
// in the reflected coset of its source generator.
struct WeightCheck {
  GenSym generator;
  bool consistent = false;
};
std::vector<WeightCheck> weight_consistency(UEngine& engine,
                                            const GeneratorMap& map);

}  // namespace iqv
