#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "iqv/braid.hpp"
#include "iqv/cartan.hpp"
#include "iqv/iqg.hpp"
#include "iqv/presets.hpp"
#include "iqv/scalars.hpp"
#include "iqv/udouble.hpp"

using namespace iqv;

namespace {

Scalar qp(long n) { return Scalar::q_power(n); }

IExpression iB(std::size_t i) { return IExpression::B(i); }
IExpression ik(std::size_t i, int sign = +1) { return IExpression::k(i, sign); }

const CartanDatum& preset(const std::string& name) {
  const CartanDatum* d = find_preset(name);
  REQUIRE(d != nullptr);
  return *d;
}

// Shared engines so the memoized weight bases amortize across test cases.
UEngine& a1_engine() {
  static UEngine eng(preset("a1xa1-swap"));
  return eng;
}

UEngine& a3_engine() {
  static UEngine eng(preset("a3-tau13"));
  return eng;
}

bool throws_with(const std::function<void()>& f, const std::string& needle) {
  try {
    f();
  } catch (const std::invalid_argument& ex) {
    return std::string(ex.what()).find(needle) != std::string::npos;
  }
  return false;
}

IExpression random_iexpr(std::mt19937& rng, std::size_t rank,
                         int max_letters) {
  std::uniform_int_distribution<int> nterms(1, 2);
  std::uniform_int_distribution<int> nlett(0, max_letters);
  std::uniform_int_distribution<int> node(0, static_cast<int>(rank) - 1);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<long> num(-3, 3);
  std::uniform_int_distribution<long> pw(-2, 2);
  IExpression out = IExpression::zero();
  const int t = nterms(rng);
  for (int a = 0; a < t; ++a) {
    IExpression term = Scalar(num(rng)) * (qp(pw(rng)) * IExpression::one());
    const int l = nlett(rng);
    for (int b = 0; b < l; ++b) {
      const std::size_t j = static_cast<std::size_t>(node(rng));
      switch (kind(rng)) {
        case 0: term = term * iB(j); break;
        case 1: term = term * ik(j, +1); break;
        default: term = term * ik(j, -1); break;
      }
    }
    out = out + term;
  }
  return out;
}

}  // namespace

TEST_CASE("hypothesis and argument validation") {
  const CartanDatum& a2 = preset("a2-swap");
  const CartanDatum& aff = preset("a1aff-swap");
  const CartanDatum& a3 = preset("a3-tau13");
  const CartanDatum& a1 = preset("a1xa1-swap");

  // Nodes with c_{i,tau i} != 0 are rejected, including tau-fixed ones.
  CHECK(throws_with([&] { tprime(a2, 0, +1); },
                    "outside conjecture's hypothesis"));
  CHECK(throws_with([&] { tprime(aff, 0, -1); },
                    "outside conjecture's hypothesis"));
  CHECK(throws_with([&] { tdoubleprime(a2, 1, +1); },
                    "outside conjecture's hypothesis"));
  CHECK(throws_with([&] { tdoubleprime(a3, 1, +1); },
                    "outside conjecture's hypothesis"));

  CHECK_THROWS_AS(tprime(a3, 7, +1), std::invalid_argument);
  CHECK_THROWS_AS(tprime(a1, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(tdoubleprime(a1, 0, 2), std::invalid_argument);

  // Applying a map with a missing image fails; letter-free input is fine.
  GeneratorMap empty;
  empty.label = "empty";
  CHECK(throws_with([&] { apply(empty, iB(0)); }, "no image"));
  CHECK(apply(empty, qp(3) * IExpression::one()) == qp(3) * IExpression::one());
  CHECK(apply(empty, IExpression::zero()) == IExpression::zero());
}

TEST_CASE("frozen generator images in rank one") {
  const CartanDatum& d = preset("a1xa1-swap");

  const GeneratorMap tp_m = tprime(d, 0, -1);
  const GeneratorMap tp_p = tprime(d, 0, +1);
  const GeneratorMap td_p = tdoubleprime(d, 0, +1);
  const GeneratorMap td_m = tdoubleprime(d, 0, -1);

  CHECK(tp_m.label == "Tprime.i1.e-1");
  CHECK(tp_p.label == "Tprime.i1.e+1");
  CHECK(td_p.label == "Tdoubleprime.i1.e+1");
  CHECK(td_m.label == "Tdoubleprime.i1.e-1");
  CHECK(tp_m.node == 0);
  CHECK(tp_m.e == -1);
  CHECK_FALSE(tp_m.doubleprime);
  CHECK(td_p.doubleprime);

  CHECK(tp_m.table.at(ialpha::B(0)) == -(iB(1) * ik(1, -1)));
  CHECK(tp_m.table.at(ialpha::B(1)) == -(ik(0, -1) * iB(0)));
  CHECK(tp_p.table.at(ialpha::B(0)) == -(iB(1) * ik(0, -1)));
  CHECK(tp_p.table.at(ialpha::B(1)) == -(ik(1, -1) * iB(0)));
  CHECK(td_p.table.at(ialpha::B(0)) == -(ik(0, -1) * iB(1)));
  CHECK(td_p.table.at(ialpha::B(1)) == -(iB(0) * ik(1, -1)));
  CHECK(td_m.table.at(ialpha::B(0)) == -(ik(1, -1) * iB(1)));
  CHECK(td_m.table.at(ialpha::B(1)) == -(iB(0) * ik(0, -1)));

  // k_j images k_i^{-c_ij} k_{tau i}^{-c_{tau i,j}} k_j collapse to k_j^{-1}
  // here, identically for all four operators.
  for (const GeneratorMap* m : {&tp_m, &tp_p, &td_p, &td_m}) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(m->table.at(ialpha::k(j, +1)) == ik(j, -1));
      CHECK(m->table.at(ialpha::k(j, -1)) == ik(j, +1));
    }
  }
}

TEST_CASE("frozen higher-rank images on the three-node chain") {
  const CartanDatum& d = preset("a3-tau13");

  // Term layers u=0 (four words) and u=1 (one word), five terms in total.
  const IExpression td_expected =
      iB(2) * iB(1) * iB(0) + iB(0) * iB(1) * iB(2) -
      qp(1) * (iB(0) * iB(2) * iB(1)) - qp(-1) * (iB(1) * iB(2) * iB(0)) +
      iB(1) * ik(2);
  const GeneratorMap td_p = tdoubleprime(d, 0, +1);
  CHECK(td_p.table.at(ialpha::B(1)) == td_expected);
  CHECK(td_p.table.at(ialpha::B(1)).poly().terms().size() == 5);

  const IExpression tp_expected =
      iB(0) * iB(1) * iB(2) + iB(2) * iB(1) * iB(0) -
      qp(1) * (iB(1) * iB(2) * iB(0)) - qp(-1) * (iB(0) * iB(2) * iB(1)) +
      ik(0) * iB(1);
  const GeneratorMap tp_m = tprime(d, 0, -1);
  CHECK(tp_m.table.at(ialpha::B(1)) == tp_expected);

  // The mirrored family is the sigma-conjugate of the first one.
  CHECK(sigma(d, tp_expected) == td_expected);

  // k_1 sits in no tau-orbit with node 1, so its image picks up both
  // neighbors: k_0^{-c_01} k_2^{-c_21} k_1 with c_01 = c_21 = -1.
  CHECK(td_p.table.at(ialpha::k(1, +1)) == ik(0) * ik(2) * ik(1));
  CHECK(td_p.table.at(ialpha::k(1, -1)) ==
        ik(0, -1) * ik(2, -1) * ik(1, -1));
  CHECK(td_p.table.at(ialpha::k(0, +1)) == ik(0, -1));
}

TEST_CASE("inverse pair images cancel in the double") {
  for (UEngine* eng : {&a1_engine(), &a3_engine()}) {
    const CartanDatum& d = eng->datum();
    for (int e : {+1, -1}) {
      for (bool dbl : {false, true}) {
        const GeneratorMap m =
            dbl ? tdoubleprime(d, 0, e) : tprime(d, 0, e);
        for (std::size_t j = 0; j < d.rank(); ++j) {
          const IExpression& plus = m.table.at(ialpha::k(j, +1));
          const IExpression& minus = m.table.at(ialpha::k(j, -1));
          CHECK(embed(*eng, plus * minus) == eng->unit());
          CHECK(embed(*eng, minus * plus) == eng->unit());
        }
      }
    }
  }
}

TEST_CASE("the maps respect the defining relations") {
  // Rank-one preset: all four operators against all seven relations.
  {
    UEngine& eng = a1_engine();
    const CartanDatum& d = eng.datum();
    for (int e : {+1, -1}) {
      for (bool dbl : {false, true}) {
        const GeneratorMap m = dbl ? tdoubleprime(d, 0, e) : tprime(d, 0, e);
        const std::vector<HomCheck> checks = check_hom(eng, m);
        CHECK(checks.size() == 7);
        for (const HomCheck& h : checks) {
          CAPTURE(m.label);
          CAPTURE(h.relation);
          CHECK(h.zero);
          CHECK(h.residue.is_zero());
        }
      }
    }
  }
  // Three-node chain: one operator from each family; the remaining two are
  // their conjugates under the involutions, checked separately.
  {
    UEngine& eng = a3_engine();
    const CartanDatum& d = eng.datum();
    for (const GeneratorMap& m : {tprime(d, 0, -1), tdoubleprime(d, 0, +1)}) {
      const std::vector<HomCheck> checks = check_hom(eng, m);
      CHECK(checks.size() == 20);
      for (const HomCheck& h : checks) {
        CAPTURE(m.label);
        CAPTURE(h.relation);
        CHECK(h.zero);
      }
    }
  }
}

TEST_CASE("a corrupted image violates a relation") {
  UEngine& eng = a1_engine();
  const CartanDatum& d = eng.datum();
  GeneratorMap m = tprime(d, 0, +1);
  // Drop the sign of one image. The k-conjugation relations are linear in
  // that image and survive, but the Serre-type relation pins the sign.
  m.table[ialpha::B(0)] = iB(1) * ik(0, -1);

  std::set<std::string> violated;
  for (const HomCheck& h : check_hom(eng, m)) {
    if (!h.zero) {
      violated.insert(h.relation);
      CHECK_FALSE(h.residue.is_zero());
    } else {
      CHECK(h.relation.rfind("relation5", 0) != 0);
    }
  }
  CHECK(violated == std::set<std::string>{"relation5.i1", "relation5.i2"});
}

TEST_CASE("conjugation identities on generators") {
  for (UEngine* eng : {&a1_engine(), &a3_engine()}) {
    const CartanDatum& d = eng->datum();
    for (int e : {+1, -1}) {
      for (Conjugation kind :
           {Conjugation::sigma_swaps_families, Conjugation::psi_prime,
            Conjugation::psi_doubleprime}) {
        const std::vector<GeneratorComparison> cmp =
            conjugation_check(*eng, kind, 0, e);
        CHECK(cmp.size() == 3 * d.rank());
        for (const GeneratorComparison& c : cmp) {
          CAPTURE(d.name());
          CAPTURE(static_cast<int>(kind));
          CAPTURE(e);
          CHECK(c.equal);
        }
      }
    }
  }

  // One instance frozen at the expression level: conjugating the first
  // family by sigma lands exactly on the second family's image.
  const CartanDatum& d = preset("a1xa1-swap");
  const GeneratorMap tp = tprime(d, 0, -1);
  const GeneratorMap td = tdoubleprime(d, 0, +1);
  CHECK(sigma(d, apply(tp, sigma(d, iB(0)))) == td.table.at(ialpha::B(0)));
  CHECK(sigma(d, apply(tp, sigma(d, iB(1)))) == td.table.at(ialpha::B(1)));
}

TEST_CASE("weight covariance of generator images") {
  for (UEngine* eng : {&a1_engine(), &a3_engine()}) {
    const CartanDatum& d = eng->datum();
    for (int e : {+1, -1}) {
      for (bool dbl : {false, true}) {
        const GeneratorMap m = dbl ? tdoubleprime(d, 0, e) : tprime(d, 0, e);
        const std::vector<WeightCheck> checks = weight_consistency(*eng, m);
        CHECK(checks.size() == 3 * d.rank());
        for (const WeightCheck& w : checks) {
          CAPTURE(d.name());
          CAPTURE(m.label);
          CHECK(w.consistent);
        }
      }
    }
  }

  // Negative control: the identity image of B_0 lives in the wrong coset.
  UEngine& eng = a1_engine();
  GeneratorMap m = tprime(eng.datum(), 0, +1);
  m.table[ialpha::B(0)] = iB(0);
  bool found = false;
  for (const WeightCheck& w : weight_consistency(eng, m)) {
    if (w.generator == ialpha::B(0)) {
      found = true;
      CHECK_FALSE(w.consistent);
    } else {
      CHECK(w.consistent);
    }
  }
  CHECK(found);
}

TEST_CASE("multiplicative extension") {
  UEngine& eng = a1_engine();
  const CartanDatum& d = eng.datum();
  const GeneratorMap m = tprime(d, 0, +1);

  CHECK(apply(m, IExpression::one()) == IExpression::one());
  CHECK(apply(m, IExpression::zero()) == IExpression::zero());
  CHECK(apply(m, qp(-2) * IExpression::one()) == qp(-2) * IExpression::one());

  std::mt19937 rng(20260817u);
  for (int t = 0; t < 20; ++t) {
    const IExpression x = random_iexpr(rng, d.rank(), 2);
    const IExpression y = random_iexpr(rng, d.rank(), 2);
    const UElement lhs = embed(eng, apply(m, x * y));
    const UElement rhs =
        eng.umul(embed(eng, apply(m, x)), embed(eng, apply(m, y)));
    CHECK(lhs == rhs);
    CHECK(embed(eng, apply(m, x + y)) ==
          eng.uadd(embed(eng, apply(m, x)), embed(eng, apply(m, y))));
  }

  // On the chain the k-images only cancel after embedding: the expression
  // product of the two images is a genuine six-letter word, yet the image
  // of the (already normalized) product k_1 k_1^{-1} is the unit.
  UEngine& eng3 = a3_engine();
  const CartanDatum& d3 = eng3.datum();
  const GeneratorMap m3 = tdoubleprime(d3, 0, +1);
  const IExpression prod =
      m3.table.at(ialpha::k(1, +1)) * m3.table.at(ialpha::k(1, -1));
  CHECK(prod != IExpression::one());
  CHECK(apply(m3, ik(1) * ik(1, -1)) == IExpression::one());
  CHECK(embed(eng3, prod) == eng3.unit());
}

TEST_CASE("rank-one composites fix the generators") {
  // Informational: on the rank-one preset the two families compose to the
  // identity on generators, in both orders.
  UEngine& eng = a1_engine();
  const CartanDatum& d = eng.datum();
  for (int e : {+1, -1}) {
    const GeneratorMap tp = tprime(d, 0, e);
    const GeneratorMap td = tdoubleprime(d, 0, -e);
    for (const auto& [g, img] : tp.table) {
      IExpression gexpr = g.kind == ialpha::kB
                              ? iB(static_cast<std::size_t>(g.index))
                              : ik(static_cast<std::size_t>(g.index), g.sign);
      CHECK(embed(eng, apply(td, img)) == embed(eng, gexpr));
      CHECK(embed(eng, apply(tp, td.table.at(g))) == embed(eng, gexpr));
    }
  }
}
