#include "iqv/iqg.hpp"

#include <stdexcept>

namespace iqv {

namespace {

void check_node(const CartanDatum& d, std::size_t i) {
  if (i >= d.rank()) {
    throw std::invalid_argument("iqg: node index out of range");
  }
}

// Cancels adjacent k_i^{+1} k_i^{-1} pairs (both orders) with a stack pass.
Word normalize_word(const Word& w) {
  Word st;
  st.reserve(w.size());
  for (const GenSym& g : w) {
    if (g.kind == ialpha::kK && !st.empty() &&
        st.back().kind == ialpha::kK && st.back().index == g.index &&
        st.back().sign == -g.sign) {
      st.pop_back();
    } else {
      st.push_back(g);
    }
  }
  return st;
}

void check_letter(const GenSym& g) {
  if (g.kind == ialpha::kB) {
    if (g.sign != +1) {
      throw std::invalid_argument("iqg: B letters are not invertible");
    }
    return;
  }
  if (g.kind == ialpha::kK) {
    if (g.sign != +1 && g.sign != -1) {
      throw std::invalid_argument("iqg: k letter sign must be +-1");
    }
    return;
  }
  throw std::invalid_argument("iqg: unknown letter kind");
}

Scalar qi_pow(const CartanDatum& d, std::size_t i, long e) {
  return Scalar::q_power(d.eps(i) * e);
}

Scalar qi_diff(const CartanDatum& d, std::size_t i) {
  return qi_pow(d, i, 1) - qi_pow(d, i, -1);
}

Scalar parity_sign(long n) { return ((n % 2 + 2) % 2 == 0) ? Scalar(1) : Scalar(-1); }

}  // namespace

IExpression::IExpression(const NCPoly& p) : poly_(ialpha::tag()) {
  if (p.alphabet() != ialpha::tag()) {
    throw std::invalid_argument("iqg: expected the 'i' alphabet");
  }
  for (const auto& [w, c] : p.terms()) {
    for (const GenSym& g : w) check_letter(g);
    poly_.add_term(normalize_word(w), c);
  }
}

IExpression IExpression::one() {
  IExpression x;
  x.poly_.add_term({}, Scalar(1));
  return x;
}

IExpression IExpression::B(std::size_t i) {
  IExpression x;
  x.poly_.add_term({ialpha::B(int(i))}, Scalar(1));
  return x;
}

IExpression IExpression::k(std::size_t i, int sign) {
  if (sign != +1 && sign != -1) {
    throw std::invalid_argument("iqg: k letter sign must be +-1");
  }
  IExpression x;
  x.poly_.add_term({ialpha::k(int(i), sign)}, Scalar(1));
  return x;
}

IExpression IExpression::constant(const Scalar& c) {
  IExpression x;
  x.poly_.add_term({}, c);
  return x;
}

IExpression IExpression::operator-() const {
  IExpression x;
  x.poly_ = -poly_;
  return x;
}

IExpression IExpression::operator+(const IExpression& o) const {
  IExpression x;
  x.poly_ = poly_ + o.poly_;
  return x;
}

IExpression IExpression::operator-(const IExpression& o) const {
  IExpression x;
  x.poly_ = poly_ - o.poly_;
  return x;
}

IExpression IExpression::operator*(const IExpression& o) const {
  // Concatenation can create a cancelling pair at the seam; renormalize.
  NCPoly prod = poly_ * o.poly_;
  IExpression x;
  for (const auto& [w, c] : prod.terms()) {
    x.poly_.add_term(normalize_word(w), c);
  }
  return x;
}

IExpression operator*(const Scalar& c, const IExpression& x) {
  return IExpression(c * x.poly());
}

UElement embed(UEngine& engine, const IExpression& x) {
  const CartanDatum& d = engine.datum();
  std::map<GenSym, UElement> images;
  auto image = [&](const GenSym& g) -> const UElement& {
    auto it = images.find(g);
    if (it != images.end()) return it->second;
    std::size_t i = std::size_t(g.index);
    check_node(d, i);
    NCPoly p(ualpha::tag());
    if (g.kind == ialpha::kB) {
      p.add_term({ualpha::F(g.index)}, Scalar(1));
      p.add_term({ualpha::E(int(d.tau(i))), ualpha::Kp(g.index)}, Scalar(1));
    } else {
      p.add_term({ualpha::K(g.index, g.sign),
                  ualpha::Kp(int(d.tau(i)), g.sign)},
                 Scalar(1));
    }
    return images.emplace(g, engine.reduce(p)).first->second;
  };

  UElement acc = engine.zero();
  for (const auto& [w, c] : x.poly().terms()) {
    UElement t = engine.uscale(c, engine.unit());
    for (const GenSym& g : w) t = engine.umul(t, image(g));
    acc = engine.uadd(acc, t);
  }
  return acc;
}

IExpression divided_power(const CartanDatum& d, std::size_t i, long m) {
  check_node(d, i);
  if (m < 0) return IExpression::zero();
  Word w(std::size_t(m), ialpha::B(int(i)));
  return IExpression(
      NCPoly::monomial(ialpha::tag(), w, qfact(m, d.eps(i)).inverse()));
}

IExpression idivided_power(const CartanDatum& d, std::size_t i, long m,
                           int parity) {
  check_node(d, i);
  if (d.tau(i) != i) {
    throw std::invalid_argument(
        "iqg: parity-decorated divided powers require a tau-fixed node");
  }
  if (parity != 0 && parity != 1) {
    throw std::invalid_argument("iqg: parity must be 0 or 1");
  }
  if (m < 0) return IExpression::zero();
  long k = m / 2;
  bool odd = (m % 2 == 1);
  IExpression acc = odd ? IExpression::B(i) : IExpression::one();
  for (long j = 1; j <= k; ++j) {
    long x = parity == 1 ? 2 * j - 1 : (odd ? 2 * j : 2 * j - 2);
    Scalar cf = qi_pow(d, i, 1) * qint(x, d.eps(i)) * qint(x, d.eps(i));
    IExpression factor =
        IExpression::B(i) * IExpression::B(i) - cf * IExpression::k(i);
    acc = acc * factor;
  }
  return qfact(m, d.eps(i)).inverse() * acc;
}

IExpression sigma(const CartanDatum& d, const IExpression& x) {
  NCPoly out(ialpha::tag());
  for (const auto& [w, c] : x.poly().terms()) {
    Word rw;
    rw.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      const GenSym& g = *it;
      check_node(d, std::size_t(g.index));
      if (g.kind == ialpha::kB) {
        rw.push_back(g);
      } else {
        rw.push_back(ialpha::k(int(d.tau(std::size_t(g.index))), g.sign));
      }
    }
    out.add_term(rw, c);
  }
  return IExpression(out);
}

IExpression psi(const CartanDatum& d, const IExpression& x) {
  NCPoly out(ialpha::tag());
  for (const auto& [w, c] : x.poly().terms()) {
    Word nw;
    nw.reserve(w.size());
    long shift = 0;
    for (const GenSym& g : w) {
      std::size_t i = std::size_t(g.index);
      check_node(d, i);
      if (g.kind == ialpha::kB) {
        nw.push_back(g);
      } else {
        shift += g.sign * d.eps(i) * d.c(i, d.tau(i));
        nw.push_back(ialpha::k(int(d.tau(i)), g.sign));
      }
    }
    out.add_term(nw, c.bar() * Scalar::q_power(shift));
  }
  return IExpression(out);
}

IExpression ytilde(const CartanDatum& d, std::size_t i, long m, int e) {
  check_node(d, i);
  if (d.tau(i) == i) {
    throw std::invalid_argument(
        "iqg: the higher Serre family needs tau(i) != i");
  }
  if (m < 1) {
    throw std::invalid_argument("iqg: m = 0 is ill-defined for this family");
  }
  if (e != +1 && e != -1) {
    throw std::invalid_argument("iqg: e must be +-1");
  }
  std::size_t ti = d.tau(i);
  long c = d.c(i, ti);

  IExpression sum;
  for (long r = 0; r <= m; ++r) {
    long s = m - r;
    Scalar cf =
        parity_sign(r + c) * qi_pow(d, i, e * r * (1 - c - m));
    sum = sum + cf * (divided_power(d, i, r) * IExpression::B(ti) *
                      divided_power(d, i, s));
  }

  Scalar front = qfact(1 - c, d.eps(i)) * qint(m, d.eps(i)).inverse() *
                 qi_diff(d, i).pow(-c - 1);
  Scalar prod_ki(1), prod_kti(1);
  for (long j = 0; j <= c + m - 2; ++j) {
    long ex = e * (2 * j - c - 2 * m + 2);
    prod_ki *= -qi_pow(d, i, ex) + qi_pow(d, i, c - 2);
    prod_kti *= -qi_pow(d, i, ex) + qi_pow(d, i, 2 - c);
  }
  IExpression dpk = divided_power(d, i, m - 1);
  IExpression corr =
      (prod_ki * qi_pow(d, i, (-c * c + 3 * c) / 2)) * (dpk * IExpression::k(i)) -
      (parity_sign(c) * prod_kti * qi_pow(d, i, (c * c - c) / 2)) *
          (dpk * IExpression::k(ti));
  return sum - front * corr;
}

IExpression ytilde_prime(const CartanDatum& d, std::size_t i, long m, int e) {
  return sigma(d, ytilde(d, i, m, e));
}

IExpression recursion_defect(const CartanDatum& d, std::size_t i, long m,
                             int e, bool primed) {
  check_node(d, i);
  long c = d.c(i, d.tau(i));
  Scalar lead = -qi_pow(d, i, -e * (2 * m + c));
  Scalar qm1 = qint(m + 1, d.eps(i));
  IExpression Bi = IExpression::B(i);
  if (!primed) {
    IExpression ym = ytilde(d, i, m, e);
    IExpression ym1 = ytilde(d, i, m + 1, e);
    return lead * (Bi * ym) + ym * Bi - qm1 * ym1;
  }
  IExpression ym = ytilde_prime(d, i, m, e);
  IExpression ym1 = ytilde_prime(d, i, m + 1, e);
  return lead * (ym * Bi) + Bi * ym - qm1 * ym1;
}

IExpression higher_serre_identity(const CartanDatum& d, std::size_t i, long m,
                                  int sign) {
  check_node(d, i);
  if (d.tau(i) == i) {
    throw std::invalid_argument(
        "iqg: the higher Serre family needs tau(i) != i");
  }
  if (sign != +1 && sign != -1) {
    throw std::invalid_argument("iqg: sign must be +-1");
  }
  std::size_t ti = d.tau(i);
  long c = d.c(i, ti);
  if (m <= 1 - c) {
    throw std::invalid_argument(
        "iqg: the reduced higher Serre form requires m > 1 - c");
  }

  IExpression lhs;
  for (long r = 0; r <= m; ++r) {
    long s = m - r;
    Scalar cf = parity_sign(r + c) * qi_pow(d, i, sign * r * (1 - c - m));
    lhs = lhs + cf * (divided_power(d, i, r) * IExpression::B(ti) *
                      divided_power(d, i, s));
  }

  Scalar common = qfact(m - 1, d.eps(i)) * qi_diff(d, i).pow(m - 2);
  IExpression dpk = divided_power(d, i, m - 1);
  IExpression rhs;
  if (sign == +1) {
    Scalar cf = parity_sign(1 - c) * common *
                qi_pow(d, i, (1 - m) * (m - 2 + 2 * c) / 2);
    rhs = cf * (dpk * IExpression::k(ti));
  } else {
    Scalar cf = parity_sign(m + c + 1) * common *
                qi_pow(d, i, (m - 1) * (m - 2 + 2 * c) / 2 + c);
    rhs = cf * (dpk * IExpression::k(i));
  }
  return lhs - rhs;
}

IExpression bkl_lhs(const CartanDatum& d, std::size_t i) {
  check_node(d, i);
  if (d.tau(i) == i) {
    throw std::invalid_argument("iqg: the BKL relation needs tau(i) != i");
  }
  std::size_t ti = d.tau(i);
  long c = d.c(i, ti);
  IExpression lhs;
  for (long n = 0; n <= 1 - c; ++n) {
    Scalar cf = parity_sign(n + c);
    lhs = lhs + cf * (divided_power(d, i, n) * IExpression::B(ti) *
                      divided_power(d, i, 1 - c - n));
  }
  return lhs;
}

IExpression bkl_rhs_presentation(const CartanDatum& d, std::size_t i) {
  check_node(d, i);
  if (d.tau(i) == i) {
    throw std::invalid_argument("iqg: the BKL relation needs tau(i) != i");
  }
  std::size_t ti = d.tau(i);
  long c = d.c(i, ti);
  Scalar inv = qi_diff(d, i).inverse();
  Scalar poch_minus =
      pochhammer(qi_pow(d, i, -2), qi_pow(d, i, -2), -c);
  Scalar poch_plus = pochhammer(qi_pow(d, i, 2), qi_pow(d, i, 2), -c);
  IExpression dpc = divided_power(d, i, -c);
  return inv * ((qi_pow(d, i, c) * poch_minus) * (dpc * IExpression::k(i)) -
                poch_plus * (dpc * IExpression::k(ti)));
}

IExpression bkl_rhs_factorial(const CartanDatum& d, std::size_t i) {
  check_node(d, i);
  if (d.tau(i) == i) {
    throw std::invalid_argument("iqg: the BKL relation needs tau(i) != i");
  }
  std::size_t ti = d.tau(i);
  long c = d.c(i, ti);
  Scalar front = qfact(-c, d.eps(i)) * qi_diff(d, i).pow(-c - 1);
  IExpression dpc = divided_power(d, i, -c);
  IExpression inner =
      qi_pow(d, i, (-c * c + 3 * c) / 2) * (dpc * IExpression::k(i)) -
      (parity_sign(c) * qi_pow(d, i, (c * c - c) / 2)) *
          (dpc * IExpression::k(ti));
  return front * inner;
}

IExpression dp_commutation_identity(const CartanDatum& d, std::size_t i,
                                    long N, long M, int form) {
  check_node(d, i);
  std::size_t ti = d.tau(i);
  if (ti == i || d.c(i, ti) != 0) {
    throw std::invalid_argument(
        "iqg: the divided-power commutation identity needs c_{i,tau i} = 0");
  }
  if (N < 0 || M < 0) {
    throw std::invalid_argument("iqg: divided-power orders must be >= 0");
  }
  if (form == 2) return dp_commutation_identity(d, ti, N, M, 1);
  if (form != 1) {
    throw std::invalid_argument("iqg: form must be 1 or 2");
  }

  IExpression lhs = divided_power(d, ti, N) * divided_power(d, i, M);
  IExpression rhs;
  for (long t = 0; t <= std::min(N, M); ++t) {
    IExpression mid = IExpression::one();
    for (long s = 1; s <= t; ++s) {
      Scalar den = (qi_pow(d, i, s) - qi_pow(d, i, -s)).inverse();
      IExpression num =
          qi_pow(d, i, 2 * t - N - M - s + 1) * IExpression::k(i) -
          qi_pow(d, i, -2 * t + N + M + s - 1) * IExpression::k(ti);
      mid = mid * (den * num);
    }
    rhs = rhs + divided_power(d, i, M - t) * mid * divided_power(d, ti, N - t);
  }
  return lhs - rhs;
}

IExpression ygen(const CartanDatum& d, std::size_t i, std::size_t j, long n,
                 long m, int e, YgenVariant variant) {
  check_node(d, i);
  check_node(d, j);
  std::size_t ti = d.tau(i);
  if (ti == i || j == i || j == ti) {
    throw std::invalid_argument(
        "iqg: this family needs i, tau(i), j pairwise distinct");
  }
  if (n < 1 || m < 0) {
    throw std::invalid_argument("iqg: need n >= 1 and m >= 0");
  }
  if (e != +1 && e != -1) {
    throw std::invalid_argument("iqg: e must be +-1");
  }
  long cij = d.c(i, j);
  long x = variant == YgenVariant::literal ? (-cij - m + 1)
                                           : (-n * cij - m + 1);
  IExpression mid = divided_power(d, j, n);
  IExpression sum;
  for (long r = 0; r <= m; ++r) {
    long s = m - r;
    Scalar cf = parity_sign(r) * qi_pow(d, i, e * r * x);
    sum = sum + cf * (divided_power(d, i, r) * mid * divided_power(d, i, s));
  }
  return sum;
}

IExpression ygen_prime(const CartanDatum& d, std::size_t i, std::size_t j,
                       long n, long m, int e, YgenVariant variant) {
  return sigma(d, ygen(d, i, j, n, m, e, variant));
}

std::vector<IRelation> relation_set(const CartanDatum& d) {
  d.require_valid();
  const std::size_t nn = d.rank();
  std::vector<IRelation> out;
  auto lbl = [](std::size_t v) { return std::to_string(v + 1); };

  // k-commutation.
  for (std::size_t a = 0; a < nn; ++a) {
    for (std::size_t b = a + 1; b < nn; ++b) {
      IExpression ka = IExpression::k(a), kb = IExpression::k(b);
      out.push_back({"relation1a.l" + lbl(a) + ".i" + lbl(b),
                     ka * kb - kb * ka});
    }
  }
  // k B crossing.
  for (std::size_t l = 0; l < nn; ++l) {
    for (std::size_t i = 0; i < nn; ++i) {
      Scalar cf = qi_pow(d, i, d.c(d.tau(l), i) - d.c(l, i));
      IExpression kl = IExpression::k(l), Bi = IExpression::B(i);
      out.push_back(
          {"relation1b.l" + lbl(l) + ".i" + lbl(i), kl * Bi - cf * (Bi * kl)});
    }
  }
  // Plain commutation.
  for (std::size_t a = 0; a < nn; ++a) {
    for (std::size_t b = a + 1; b < nn; ++b) {
      if (d.c(a, b) != 0 || d.tau(a) == b) continue;
      IExpression Ba = IExpression::B(a), Bb = IExpression::B(b);
      out.push_back(
          {"relation2.i" + lbl(a) + ".j" + lbl(b), Ba * Bb - Bb * Ba});
    }
  }
  // Serre relation for b != tau(a) != a.
  for (std::size_t a = 0; a < nn; ++a) {
    if (d.tau(a) == a) continue;
    for (std::size_t b = 0; b < nn; ++b) {
      if (b == a || b == d.tau(a)) continue;
      long cab = d.c(a, b);
      IExpression sum;
      for (long t = 0; t <= 1 - cab; ++t) {
        sum = sum +
              parity_sign(t) * (divided_power(d, a, t) * IExpression::B(b) *
                                divided_power(d, a, 1 - cab - t));
      }
      out.push_back({"relation3.i" + lbl(a) + ".j" + lbl(b), sum});
    }
  }
  // Deformed Serre relation.
  for (std::size_t a = 0; a < nn; ++a) {
    if (d.tau(a) == a) continue;
    out.push_back({"relation5.i" + lbl(a),
                   bkl_lhs(d, a) - bkl_rhs_presentation(d, a)});
  }
  // Parity-decorated Serre relation for tau-fixed nodes.
  for (std::size_t a = 0; a < nn; ++a) {
    if (d.tau(a) != a) continue;
    for (std::size_t b = 0; b < nn; ++b) {
      if (b == a) continue;
      long cab = d.c(a, b);
      for (int p = 0; p <= 1; ++p) {
        int p2 = int(((p + cab) % 2 + 2) % 2);
        IExpression sum;
        for (long r = 0; r <= 1 - cab; ++r) {
          sum = sum + parity_sign(r) *
                          (idivided_power(d, a, r, p) * IExpression::B(b) *
                           idivided_power(d, a, 1 - cab - r, p2));
        }
        out.push_back({"relation6.i" + lbl(a) + ".j" + lbl(b) + ".p" +
                           std::to_string(p),
                       sum});
      }
    }
  }
  return out;
}

std::vector<IMutant> mutated_relations(const CartanDatum& d) {
  std::vector<IMutant> out;
  std::string seen_family;
  for (const IRelation& r : relation_set(d)) {
    std::string family = r.label.substr(0, r.label.find('.'));
    if (family == seen_family) continue;
    seen_family = family;
    // Multiply the coefficient of the first word by q.
    const auto& [w, c] = *r.expr.poly().terms().begin();
    IExpression bump(NCPoly::monomial(
        ialpha::tag(), w, (Scalar::q_power(1) - Scalar(1)) * c));
    out.push_back({r.label, r.expr + bump});
  }
  return out;
}

}  // namespace iqv
