#include "iqv/braid.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "iqv/scalars.hpp"

namespace iqv {

namespace {

void check_node(const CartanDatum& d, std::size_t i) {
  if (i >= d.rank()) {
    throw std::invalid_argument("braid: node index out of range");
  }
}

void check_hypothesis(const CartanDatum& d, std::size_t i, int e) {
  check_node(d, i);
  if (e != 1 && e != -1) {
    throw std::invalid_argument("braid: e must be +1 or -1");
  }
  if (d.tau(i) == i || d.c(i, d.tau(i)) != 0) {
    throw std::invalid_argument(
        "braid: node " + std::to_string(i + 1) +
        " is outside conjecture's hypothesis (need tau(i) != i and "
        "c_{i,tau i} = 0)");
  }
}

int parity_sign(long n) { return ((n % 2) + 2) % 2 == 0 ? 1 : -1; }

// q_i^n, the deformation parameter attached to node i.
Scalar vpow(const CartanDatum& d, std::size_t i, long n) {
  return Scalar::q_power(d.eps(i) * n);
}

// k_a^n as a word; n may be negative or zero.
IExpression kpow(std::size_t a, long n) {
  IExpression x = IExpression::one();
  const int sign = n >= 0 ? +1 : -1;
  for (long t = 0; t < (n >= 0 ? n : -n); ++t) {
    x = x * IExpression::k(a, sign);
  }
  return x;
}

IExpression gen_expr(const GenSym& g) {
  if (g.kind == ialpha::kB) {
    return IExpression::B(static_cast<std::size_t>(g.index));
  }
  return IExpression::k(static_cast<std::size_t>(g.index), g.sign);
}

GeneratorMap build_map(const CartanDatum& d, std::size_t i, int e, bool dbl) {
  check_hypothesis(d, i, e);
  GeneratorMap m;
  m.node = i;
  m.e = e;
  m.doubleprime = dbl;
  m.label = std::string(dbl ? "Tdoubleprime" : "Tprime") + ".i" +
            std::to_string(i + 1) + ".e" + (e > 0 ? "+1" : "-1");

  const std::size_t ti = d.tau(i);
  const std::size_t n = d.rank();

  // Images of k_j and k_j^{-1}: k_i^{-c_ij} k_{tau i}^{-c_{tau i,j}} k_j,
  // the same for both families and both signs of e. The inverse generator
  // maps to the word with all exponents negated, so the two images multiply
  // to 1 once the k-letters are commuted together in the double.
  for (std::size_t j = 0; j < n; ++j) {
    const long cij = d.c(i, j);
    const long ctj = d.c(ti, j);
    m.table[ialpha::k(j, +1)] =
        kpow(i, -cij) * kpow(ti, -ctj) * IExpression::k(j, +1);
    m.table[ialpha::k(j, -1)] =
        kpow(i, cij) * kpow(ti, ctj) * IExpression::k(j, -1);
  }

  // Rank-one part: images of B_i and B_{tau i}.
  const IExpression Bi = IExpression::B(i);
  const IExpression Bt = IExpression::B(ti);
  const IExpression ki_inv = IExpression::k(i, -1);
  const IExpression kt_inv = IExpression::k(ti, -1);
  if (!dbl) {
    if (e == -1) {
      m.table[ialpha::B(i)] = -(Bt * kt_inv);
      m.table[ialpha::B(ti)] = -(ki_inv * Bi);
    } else {
      m.table[ialpha::B(i)] = -(Bt * ki_inv);
      m.table[ialpha::B(ti)] = -(kt_inv * Bi);
    }
  } else {
    if (e == 1) {
      m.table[ialpha::B(i)] = -(ki_inv * Bt);
      m.table[ialpha::B(ti)] = -(Bi * kt_inv);
    } else {
      m.table[ialpha::B(i)] = -(kt_inv * Bt);
      m.table[ialpha::B(ti)] = -(Bi * ki_inv);
    }
  }

  // Higher-rank part: for j outside {i, tau i}, a triple sum over u, r, s
  // of divided-power words, with exponent x = r - s + (-c_ij - r - s - u)u
  // on the parameter q_i. The exponent enters positively for T'_{i,-1} and
  // T''_{i,+1} and negatively for the other two; the k^u factor uses k_i
  // when e = -1 and k_{tau i} when e = +1, leading for T' and trailing
  // for T''; the divided-power word of T'' mirrors the one of T'.
  const std::size_t ku = (e == -1) ? i : ti;
  const bool positive_exponent = dbl == (e == 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i || j == ti) {
      continue;
    }
    const long cij = d.c(i, j);
    const long ctj = d.c(ti, j);
    const long umax = -std::max(cij, ctj);
    IExpression total = IExpression::zero();
    for (long u = 0; u <= umax; ++u) {
      for (long r = 0; r + u <= -cij; ++r) {
        for (long s = 0; s + u <= -ctj; ++s) {
          const long x = r - s + (-cij - r - s - u) * u;
          const Scalar coeff = Scalar(parity_sign(r + s)) *
                               vpow(d, i, positive_exponent ? x : -x);
          IExpression word;
          if (!dbl) {
            word = kpow(ku, u) * divided_power(d, i, -cij - r - u) *
                   divided_power(d, ti, s) * IExpression::B(j) *
                   divided_power(d, ti, -ctj - u - s) * divided_power(d, i, r);
          } else {
            word = divided_power(d, i, r) * divided_power(d, ti, -ctj - u - s) *
                   IExpression::B(j) * divided_power(d, ti, s) *
                   divided_power(d, i, -cij - r - u) * kpow(ku, u);
          }
          total = total + coeff * word;
        }
      }
    }
    m.table[ialpha::B(j)] = total;
  }
  return m;
}

// The root-lattice weight of one straightened term: E-letters count
// positively, F-letters negatively, the K-part not at all.
Weight trikey_weight(const CartanDatum& d, const TriKey& t) {
  Weight w = Weight::zero(d.rank());
  for (std::int32_t a : t.e) {
    w.v[static_cast<std::size_t>(a)] += 1;
  }
  for (std::int32_t a : t.f) {
    w.v[static_cast<std::size_t>(a)] -= 1;
  }
  return w;
}

// Membership in the sublattice spanned by {alpha_a + alpha_{tau a}}: equal
// coordinates along each two-element tau-orbit, even coordinate at each
// fixed node.
bool in_involution_lattice(const CartanDatum& d, const Weight& w) {
  for (std::size_t a = 0; a < d.rank(); ++a) {
    const std::size_t ta = d.tau(a);
    if (ta == a) {
      if (w.v[a] % 2 != 0) {
        return false;
      }
    } else if (w.v[a] != w.v[ta]) {
      return false;
    }
  }
  return true;
}

}  // namespace

GeneratorMap tprime(const CartanDatum& datum, std::size_t i, int e) {
  return build_map(datum, i, e, false);
}

GeneratorMap tdoubleprime(const CartanDatum& datum, std::size_t i, int e) {
  return build_map(datum, i, e, true);
}

IExpression apply(const GeneratorMap& map, const IExpression& x) {
  IExpression out = IExpression::zero();
  for (const auto& [w, c] : x.poly().terms()) {
    IExpression t = c * IExpression::one();
    for (const GenSym& g : w) {
      auto it = map.table.find(g);
      if (it == map.table.end()) {
        throw std::invalid_argument(
            "braid: a letter of the argument has no image under " + map.label);
      }
      t = t * it->second;
    }
    out = out + t;
  }
  return out;
}

std::vector<HomCheck> check_hom(UEngine& engine, const GeneratorMap& map) {
  std::vector<HomCheck> out;
  for (const IRelation& r : relation_set(engine.datum())) {
    HomCheck h;
    h.relation = r.label;
    h.residue = embed(engine, apply(map, r.expr));
    h.zero = h.residue.is_zero();
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<GeneratorComparison> conjugation_check(UEngine& engine,
                                                   Conjugation kind,
                                                   std::size_t i, int e) {
  const CartanDatum& d = engine.datum();
  GeneratorMap inner;
  GeneratorMap target;
  switch (kind) {
    case Conjugation::sigma_swaps_families:
      inner = tprime(d, i, e);
      target = tdoubleprime(d, i, -e);
      break;
    case Conjugation::psi_prime:
      inner = tprime(d, i, e);
      target = tprime(d, i, -e);
      break;
    case Conjugation::psi_doubleprime:
      inner = tdoubleprime(d, i, e);
      target = tdoubleprime(d, i, -e);
      break;
  }
  std::vector<GeneratorComparison> out;
  for (const auto& [g, img] : target.table) {
    const IExpression gexpr = gen_expr(g);
    IExpression lhs;
    if (kind == Conjugation::sigma_swaps_families) {
      lhs = sigma(d, apply(inner, sigma(d, gexpr)));
    } else {
      lhs = psi(d, apply(inner, psi(d, gexpr)));
    }
    GeneratorComparison cmp;
    cmp.generator = g;
    cmp.difference = engine.uadd(embed(engine, lhs),
                                 engine.uscale(Scalar(-1), embed(engine, img)));
    cmp.equal = cmp.difference.is_zero();
    out.push_back(cmp);
  }
  return out;
}

std::vector<WeightCheck> weight_consistency(UEngine& engine,
                                            const GeneratorMap& map) {
  const CartanDatum& d = engine.datum();
  const RestrictedReflection refl = d.restricted_generator(map.node);
  std::vector<WeightCheck> out;
  for (const auto& [g, img] : map.table) {
    Weight source = Weight::zero(d.rank());
    if (g.kind == ialpha::kB) {
      source = -d.alpha(static_cast<std::size_t>(g.index));
    }
    const Weight target = refl(source);
    const UElement u = embed(engine, img);
    bool ok = true;
    for (const auto& [key, coeff] : u.terms()) {
      (void)coeff;
      if (!in_involution_lattice(d, trikey_weight(d, key) - target)) {
        ok = false;
        break;
      }
    }
    out.push_back(WeightCheck{g, ok});
  }
  return out;
}

}  // namespace iqv
