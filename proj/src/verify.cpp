#include "iqv/verify.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iqv/braid.hpp"
#include "iqv/iqg.hpp"
#include "iqv/ncalg.hpp"
#include "iqv/scalars.hpp"

namespace iqv {

namespace {

constexpr const char* kPass = "pass";
constexpr const char* kFail = "fail";
constexpr const char* kNonzeroOk = "nonzero-as-expected";
constexpr const char* kFinding = "finding";

constexpr const char* kExpectPass = "pass";
constexpr const char* kExpectNonzero = "nonzero";
constexpr const char* kExpectFinding = "finding";

int parity_sign(long n) { return ((n % 2) + 2) % 2 == 0 ? 1 : -1; }

std::string ts(long v) { return std::to_string(v); }

std::string strip_spaces(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  return s;
}

// Record fields are space-separated, so embedded whitespace is replaced.
std::string sanitize(std::string s) {
  for (char& c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) c = '_';
  }
  return s;
}

std::string esign_text(int e) { return e > 0 ? "+1" : "-1"; }

std::string igen_text(const GenSym& g) {
  if (g.kind == ialpha::kB) return "B" + ts(g.index + 1);
  std::string s = "k" + ts(g.index + 1);
  if (g.sign < 0) s += "^-1";
  return s;
}

long ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

// Unreduced image of a coideal expression in the double's free algebra;
// this is what the modular zero test consumes.
NCPoly embed_raw(const CartanDatum& d, const IExpression& x) {
  const std::string& alph = ualpha::tag();
  NCPoly out = NCPoly::monomial(alph, {}, Scalar(0));
  for (const auto& [w, c] : x.poly().terms()) {
    NCPoly t = NCPoly::monomial(alph, {}, c);
    for (const GenSym& g : w) {
      const int ti =
          static_cast<int>(d.tau(static_cast<std::size_t>(g.index)));
      NCPoly img = NCPoly::monomial(alph, {}, Scalar(0));
      if (g.kind == ialpha::kB) {
        img = NCPoly::monomial(alph, {ualpha::F(g.index)}) +
              NCPoly::monomial(alph, {ualpha::E(ti), ualpha::Kp(g.index)});
      } else {
        img = NCPoly::monomial(
            alph, {ualpha::K(g.index, g.sign), ualpha::Kp(ti, g.sign)});
      }
      t = t * img;
    }
    out += t;
  }
  return out;
}

struct Runner {
  UEngine& eng;
  const CartanDatum& d;
  const SuiteSpec& spec;
  std::string datum_name;
  std::vector<CheckRecord>& out;

  struct Params {
    std::string i = "-";
    std::string j = "-";
    std::string m = "-";
    std::string n = "-";
    std::string e = "-";
    std::string parity = "-";
    std::string variant = "-";
  };

  std::vector<int> esigns() const {
    if (spec.e_set == +1) return {+1};
    if (spec.e_set == -1) return {-1};
    return {+1, -1};
  }

  // Orbit representatives moved by the involution.
  std::vector<std::size_t> swap_reps() const {
    std::vector<std::size_t> v;
    for (std::size_t i : d.orbit_representatives()) {
      if (d.tau(i) != i) v.push_back(i);
    }
    return v;
  }

  CheckRecord base(const std::string& suite, const std::string& label,
                   const std::string& expected, const Params& p) const {
    CheckRecord r;
    r.suite = suite;
    r.case_label = label;
    r.datum = datum_name;
    r.i = p.i;
    r.j = p.j;
    r.m = p.m;
    r.n = p.n;
    r.e = p.e;
    r.parity = p.parity;
    r.variant = p.variant;
    r.expected = expected;
    return r;
  }

  // Turns a computed outcome into a record. `extra` is an optional note
  // token; findings additionally record which way the computation went.
  void finish(CheckRecord r, bool zero, const UElement& residue,
              std::string extra, long ms) {
    if (r.expected == kExpectFinding) {
      r.status = kFinding;
      std::string note = zero ? "zero" : "nonzero";
      if (!extra.empty()) note += "," + extra;
      r.note = note;
    } else {
      if (r.expected == kExpectPass) {
        r.status = zero ? kPass : kFail;
      } else {
        r.status = zero ? kFail : kNonzeroOk;
      }
      if (!extra.empty()) r.note = extra;
    }
    if (!zero && !residue.is_zero()) {
      r.witness = strip_spaces(residue.to_text(d));
    }
    r.elapsed_ms = ms;
    out.push_back(std::move(r));
  }

  void push_budget_overflow(CheckRecord r, long ms) {
    r.status = r.expected == kExpectFinding ? kFinding : kFail;
    r.note = "budget-exceeded";
    r.elapsed_ms = ms;
    out.push_back(std::move(r));
  }

  // Core pipeline: reduce the embedded expression exactly, optionally after
  // a modular prepass whose agreement is recorded.
  void add_expr(const std::string& suite, const std::string& label,
                const std::string& expected, const IExpression& x,
                const Params& p) {
    CheckRecord r = base(suite, label, expected, p);
    r.method = spec.fast ? "fast" : "exact";
    const auto t0 = std::chrono::steady_clock::now();
    std::string extra;
    bool zero = false;
    UElement residue;
    try {
      if (spec.fast) {
        const std::uint64_t cseed = fnv1a(ts(static_cast<long>(spec.seed)) + label);
        const bool modular_zero = eng.is_zero_modular(embed_raw(d, x), 2, cseed);
        residue = embed(eng, x);
        zero = residue.is_zero();
        if (modular_zero != zero) extra = "modular-prepass-disagreed";
      } else {
        residue = embed(eng, x);
        zero = residue.is_zero();
      }
    } catch (const BudgetExceededError&) {
      push_budget_overflow(std::move(r), ms_since(t0));
      return;
    }
    finish(std::move(r), zero, residue, extra, ms_since(t0));
  }

  void add_scalar(const std::string& label, const Scalar& lhs,
                  const Scalar& rhs, const Params& p) {
    CheckRecord r = base("scalars", label, kExpectPass, p);
    r.method = "exact";
    const auto t0 = std::chrono::steady_clock::now();
    const bool zero = lhs == rhs;
    r.status = zero ? kPass : kFail;
    if (!zero) r.witness = strip_spaces((lhs - rhs).to_text());
    r.elapsed_ms = ms_since(t0);
    out.push_back(std::move(r));
  }

  // ---- suites ------------------------------------------------------------

  // Exact scalar-layer identities: the two q-Pochhammer closed forms and
  // bar-invariance of the balanced quantum integers and factorials, at
  // every length scale the datum uses.
  void run_scalars() {
    std::set<long> scales;
    for (std::size_t i = 0; i < d.rank(); ++i) scales.insert(d.eps(i));
    for (long k : scales) {
      const Scalar diff = Scalar::q_power(k) - Scalar::q_power(-k);
      for (long n = 0; n <= 6; ++n) {
        Params p;
        p.n = ts(n);
        add_scalar("scalars.poch-minus.k" + ts(k) + ".n" + ts(n),
                   pochhammer(Scalar::q_power(-2 * k), Scalar::q_power(-2 * k),
                              n),
                   Scalar::q_power(-k * n * (n + 1) / 2) * diff.pow(n) *
                       qfact(n, k),
                   p);
        add_scalar("scalars.poch-plus.k" + ts(k) + ".n" + ts(n),
                   pochhammer(Scalar::q_power(2 * k), Scalar::q_power(2 * k),
                              n),
                   Scalar(parity_sign(n)) * Scalar::q_power(k * n * (n + 1) / 2) *
                       diff.pow(n) * qfact(n, k),
                   p);
        add_scalar("scalars.bar-qint.k" + ts(k) + ".n" + ts(n),
                   qint(n, k).bar(), qint(n, k), p);
        add_scalar("scalars.bar-qfact.k" + ts(k) + ".n" + ts(n),
                   qfact(n, k).bar(), qfact(n, k), p);
      }
    }
  }

  // Soundness of the presentation: every defining relation embeds to zero,
  // and every member of the built-in mutation set is detected as nonzero.
  void run_presentation() {
    for (const IRelation& rel : relation_set(d)) {
      add_expr("presentation", "presentation." + rel.label, kExpectPass,
               rel.expr, Params{});
    }
    for (const IMutant& mu : mutated_relations(d)) {
      add_expr("presentation", "presentation.mutation." + mu.target,
               kExpectNonzero, mu.expr, Params{});
    }
  }

  // The two involutions send every defining relation to the span of the
  // relations: their images embed to zero.
  void run_involutions() {
    for (const IRelation& rel : relation_set(d)) {
      add_expr("involutions", "involutions.sigma." + rel.label, kExpectPass,
               sigma(d, rel.expr), Params{});
      add_expr("involutions", "involutions.psi." + rel.label, kExpectPass,
               psi(d, rel.expr), Params{});
    }
  }

  // One check per moved orbit: the deformed Serre relation holds in the
  // double AND its two printed right-hand sides agree after scalar
  // normalization.
  void run_bkl() {
    for (std::size_t i : swap_reps()) {
      Params p;
      p.i = ts(static_cast<long>(i) + 1);
      CheckRecord r =
          base("bkl", "bkl.i" + ts(static_cast<long>(i) + 1), kExpectPass, p);
      r.method = "exact";
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const IExpression pres = bkl_rhs_presentation(d, i);
        const IExpression fact = bkl_rhs_factorial(d, i);
        const bool forms_ok = (pres - fact).is_zero();
        const UElement residue = embed(eng, bkl_lhs(d, i) - pres);
        const bool rel_zero = residue.is_zero();
        finish(std::move(r), forms_ok && rel_zero, residue,
               forms_ok ? std::string() : std::string("printed-forms-disagree"),
               ms_since(t0));
      } catch (const BudgetExceededError&) {
        push_budget_overflow(std::move(r), ms_since(t0));
      }
    }
  }

  // The first-order recursion on the deformed Serre family, both the plain
  // and the mirrored form. Default range: m up to 1 - c + 2 per orbit.
  void run_recursion() {
    for (std::size_t i : swap_reps()) {
      const long c = d.c(i, d.tau(i));
      const long mmax = spec.max_m > 0 ? spec.max_m : 1 - c + 2;
      for (long m = 1; m <= mmax; ++m) {
        for (int e : esigns()) {
          for (int form : {1, 2}) {
            Params p;
            p.i = ts(static_cast<long>(i) + 1);
            p.m = ts(m);
            p.e = esign_text(e);
            p.variant = form == 1 ? "RR1" : "RR2";
            add_expr("recursion",
                     "recursion.RR" + ts(form) + ".i" +
                         ts(static_cast<long>(i) + 1) + ".m" + ts(m) + ".e" +
                         esign_text(e),
                     kExpectPass, recursion_defect(d, i, m, e, form == 2), p);
          }
        }
      }
    }
  }

  // Vanishing of the deformed Serre family at and above the threshold
  // 1 - c, nonzero controls below it, and the reduced single-k identities
  // strictly above it. Default range: m up to 1 - c + 3 per orbit.
  void run_serre_lusztig() {
    for (std::size_t i : swap_reps()) {
      const long c = d.c(i, d.tau(i));
      const long mmax = spec.max_m > 0 ? spec.max_m : 1 - c + 3;
      const std::string it = ts(static_cast<long>(i) + 1);
      for (int e : esigns()) {
        for (long m = 1; m <= mmax; ++m) {
          const std::string expected =
              m >= 1 - c ? kExpectPass : kExpectNonzero;
          Params p;
          p.i = it;
          p.m = ts(m);
          p.e = esign_text(e);
          p.variant = "y";
          add_expr("serre_lusztig",
                   "serre_lusztig.vanish.y.i" + it + ".m" + ts(m) + ".e" +
                       esign_text(e),
                   expected, ytilde(d, i, m, e), p);
          p.variant = "yprime";
          add_expr("serre_lusztig",
                   "serre_lusztig.vanish.yprime.i" + it + ".m" + ts(m) + ".e" +
                       esign_text(e),
                   expected, ytilde_prime(d, i, m, e), p);
        }
        for (long m = 1 - c + 1; m <= mmax; ++m) {
          Params p;
          p.i = it;
          p.m = ts(m);
          p.e = esign_text(e);
          p.variant = "reduced";
          add_expr("serre_lusztig",
                   "serre_lusztig.reduced.i" + it + ".m" + ts(m) + ".e" +
                       esign_text(e),
                   kExpectPass, higher_serre_identity(d, i, m, e), p);
        }
      }
    }
  }

  // Divided-power commutation identity on orbits with c_{i,tau i} = 0, both
  // printed forms, N and M up to max_nm.
  void run_rank1() {
    for (std::size_t i : swap_reps()) {
      if (d.c(i, d.tau(i)) != 0) continue;
      const std::string it = ts(static_cast<long>(i) + 1);
      for (long N = 0; N <= spec.max_nm; ++N) {
        for (long M = 0; M <= spec.max_nm; ++M) {
          for (int form : {1, 2}) {
            Params p;
            p.i = it;
            p.n = ts(N);
            p.m = ts(M);
            p.variant = std::string("form") + ts(form);
            add_expr("rank1",
                     "rank1.form" + ts(form) + ".i" + it + ".N" + ts(N) +
                         ".M" + ts(M),
                     kExpectPass, dp_commutation_identity(d, i, N, M, form),
                     p);
          }
        }
      }
    }
  }

  // Three-node deformed Serre family. n = 1 is the proved vanishing range
  // plus nonzero controls below it; n >= 2 records, as findings, which of
  // the two printed exponent variants vanishes where.
  void run_higher_serre() {
    for (std::size_t i : swap_reps()) {
      const std::size_t ti = d.tau(i);
      const std::string it = ts(static_cast<long>(i) + 1);
      for (std::size_t j = 0; j < d.rank(); ++j) {
        if (j == i || j == ti) continue;
        const long cij = d.c(i, j);
        const std::string jt = ts(static_cast<long>(j) + 1);
        const long m1max = spec.max_m > 0 ? spec.max_m : -cij + 3;
        for (int e : esigns()) {
          for (long m = 1; m <= m1max; ++m) {
            const std::string expected =
                m > -cij ? kExpectPass : kExpectNonzero;
            for (bool prime : {false, true}) {
              Params p;
              p.i = it;
              p.j = jt;
              p.m = ts(m);
              p.n = "1";
              p.e = esign_text(e);
              p.variant = "literal";
              const IExpression x =
                  prime ? ygen_prime(d, i, j, 1, m, e, YgenVariant::literal)
                        : ygen(d, i, j, 1, m, e, YgenVariant::literal);
              add_expr("higher_serre",
                       std::string("higher_serre.n1.") +
                           (prime ? "yprime" : "y") + ".i" + it + ".j" + jt +
                           ".m" + ts(m) + ".e" + esign_text(e),
                       expected, x, p);
            }
          }
        }
        for (long n = 2; n <= spec.max_n; ++n) {
          const long mmax = spec.max_m > 0 ? spec.max_m : -n * cij + 2;
          for (int e : esigns()) {
            for (long m = 1; m <= mmax; ++m) {
              for (YgenVariant v :
                   {YgenVariant::literal, YgenVariant::n_corrected}) {
                const std::string vname =
                    v == YgenVariant::literal ? "literal" : "n_corrected";
                Params p;
                p.i = it;
                p.j = jt;
                p.m = ts(m);
                p.n = ts(n);
                p.e = esign_text(e);
                p.variant = vname;
                add_expr("higher_serre",
                         "higher_serre.n" + ts(n) + "." + vname + ".y.i" + it +
                             ".j" + jt + ".m" + ts(m) + ".e" + esign_text(e),
                         kExpectFinding, ygen(d, i, j, n, m, e, v), p);
              }
            }
          }
        }
      }
    }
  }

  void kinv_record(const GeneratorMap& map, const Params& p) {
    CheckRecord r =
        base("braid_conjecture", "braid.kinv." + map.label, kExpectPass, p);
    r.method = "exact";
    const auto t0 = std::chrono::steady_clock::now();
    try {
      bool zero = true;
      UElement wit;
      std::string extra;
      for (std::size_t j = 0; j < d.rank() && zero; ++j) {
        const IExpression& plus = map.table.at(ialpha::k(j, +1));
        const IExpression& minus = map.table.at(ialpha::k(j, -1));
        for (const IExpression& prod : {plus * minus, minus * plus}) {
          const UElement u = embed(eng, prod);
          if (!(u == eng.unit())) {
            zero = false;
            extra = "k" + ts(static_cast<long>(j) + 1);
            wit = eng.uadd(u, eng.uscale(Scalar(-1), eng.unit()));
            break;
          }
        }
      }
      finish(std::move(r), zero, wit, extra, ms_since(t0));
    } catch (const BudgetExceededError&) {
      push_budget_overflow(std::move(r), ms_since(t0));
    }
  }

  void weight_record(const GeneratorMap& map, const Params& p) {
    CheckRecord r =
        base("braid_conjecture", "braid.weight." + map.label, kExpectPass, p);
    r.method = "exact";
    const auto t0 = std::chrono::steady_clock::now();
    try {
      bool zero = true;
      std::string extra;
      for (const WeightCheck& w : weight_consistency(eng, map)) {
        if (!w.consistent) {
          zero = false;
          extra = igen_text(w.generator);
          break;
        }
      }
      finish(std::move(r), zero, UElement(), extra, ms_since(t0));
    } catch (const BudgetExceededError&) {
      push_budget_overflow(std::move(r), ms_since(t0));
    }
  }

  void conj_record(Conjugation kind, const std::string& kname, std::size_t i,
                   int e, const Params& p) {
    CheckRecord r = base("braid_conjecture",
                         "braid.conj." + kname + ".i" +
                             ts(static_cast<long>(i) + 1) + ".e" +
                             esign_text(e),
                         kExpectFinding, p);
    r.method = "exact";
    const auto t0 = std::chrono::steady_clock::now();
    try {
      bool zero = true;
      UElement wit;
      std::string extra;
      for (const GeneratorComparison& c : conjugation_check(eng, kind, i, e)) {
        if (!c.equal) {
          zero = false;
          wit = c.difference;
          extra = igen_text(c.generator);
          break;
        }
      }
      finish(std::move(r), zero, wit, extra, ms_since(t0));
    } catch (const BudgetExceededError&) {
      push_budget_overflow(std::move(r), ms_since(t0));
    }
  }

  // Candidate braid operators: relation images and conjugation identities
  // are conjecture findings; the inverse-pair and weight-covariance checks
  // are structural and must pass.
  void run_braid() {
    for (std::size_t i : swap_reps()) {
      if (d.c(i, d.tau(i)) != 0) continue;
      const std::string it = ts(static_cast<long>(i) + 1);
      for (int e : esigns()) {
        for (bool dbl : {false, true}) {
          const GeneratorMap map =
              dbl ? tdoubleprime(d, i, e) : tprime(d, i, e);
          Params p;
          p.i = it;
          p.e = esign_text(e);
          p.variant = dbl ? "Tdoubleprime" : "Tprime";
          for (const IRelation& rel : relation_set(d)) {
            add_expr("braid_conjecture",
                     "braid.hom." + map.label + "." + rel.label,
                     kExpectFinding, apply(map, rel.expr), p);
          }
          kinv_record(map, p);
          weight_record(map, p);
        }
        Params p;
        p.i = it;
        p.e = esign_text(e);
        conj_record(Conjugation::sigma_swaps_families, "sigma", i, e, p);
        conj_record(Conjugation::psi_prime, "psiprime", i, e, p);
        conj_record(Conjugation::psi_doubleprime, "psidouble", i, e, p);
      }
    }
  }

  void dispatch(const std::string& name) {
    if (name == "scalars") {
      run_scalars();
    } else if (name == "presentation") {
      run_presentation();
    } else if (name == "involutions") {
      run_involutions();
    } else if (name == "bkl") {
      run_bkl();
    } else if (name == "recursion") {
      run_recursion();
    } else if (name == "serre_lusztig") {
      run_serre_lusztig();
    } else if (name == "rank1") {
      run_rank1();
    } else if (name == "higher_serre") {
      run_higher_serre();
    } else {
      run_braid();
    }
  }
};

}  // namespace

std::string record_line(const CheckRecord& r) {
  std::ostringstream os;
  os << "suite=" << r.suite << " case=" << r.case_label
     << " datum=" << r.datum << " i=" << r.i << " j=" << r.j << " m=" << r.m
     << " n=" << r.n << " e=" << r.e << " parity=" << r.parity
     << " variant=" << r.variant << " status=" << r.status
     << " expected=" << r.expected << " method=" << r.method
     << " note=" << r.note << " witness=" << r.witness
     << " elapsed_ms=" << r.elapsed_ms;
  return os.str();
}

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  const auto digit = [](char c) {
    return std::isdigit(static_cast<unsigned char>(c)) != 0;
  };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t i2 = i;
      std::size_t j2 = j;
      while (i2 < a.size() && digit(a[i2])) ++i2;
      while (j2 < b.size() && digit(b[j2])) ++j2;
      std::size_t pi = i;
      std::size_t pj = j;
      while (pi < i2 - 1 && a[pi] == '0') ++pi;
      while (pj < j2 - 1 && b[pj] == '0') ++pj;
      const std::size_t la = i2 - pi;
      const std::size_t lb = j2 - pj;
      if (la != lb) return la < lb;
      const int cmp = a.compare(pi, la, b, pj, lb);
      if (cmp != 0) return cmp < 0;
      if (i2 - i != j2 - j) return i2 - i < j2 - j;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) {
        return static_cast<unsigned char>(a[i]) <
               static_cast<unsigned char>(b[j]);
      }
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

bool VerificationReport::all_theorems_pass() const {
  for (const CheckRecord& r : records) {
    if (r.status == kFail) return false;
  }
  return true;
}

std::string VerificationReport::to_records() const {
  std::string s;
  for (const CheckRecord& r : records) {
    s += record_line(r);
    s += '\n';
  }
  return s;
}

std::string VerificationReport::to_table() const {
  struct Counts {
    long total = 0, pass = 0, fail = 0, nonzero = 0, finding = 0;
  };
  std::vector<std::pair<std::string, Counts>> rows;
  const auto row_for = [&](const std::string& suite) -> Counts& {
    for (auto& [name, c] : rows) {
      if (name == suite) return c;
    }
    rows.emplace_back(suite, Counts{});
    return rows.back().second;
  };
  Counts total;
  for (const CheckRecord& r : records) {
    Counts& c = row_for(r.suite);
    ++c.total;
    ++total.total;
    if (r.status == kPass) {
      ++c.pass;
      ++total.pass;
    } else if (r.status == kFail) {
      ++c.fail;
      ++total.fail;
    } else if (r.status == kNonzeroOk) {
      ++c.nonzero;
      ++total.nonzero;
    } else {
      ++c.finding;
      ++total.finding;
    }
  }
  std::ostringstream os;
  os << std::left << std::setw(20) << "suite" << std::right << std::setw(8)
     << "checks" << std::setw(8) << "pass" << std::setw(8) << "fail"
     << std::setw(10) << "nonzero" << std::setw(10) << "finding" << '\n';
  const auto emit = [&](const std::string& name, const Counts& c) {
    os << std::left << std::setw(20) << name << std::right << std::setw(8)
       << c.total << std::setw(8) << c.pass << std::setw(8) << c.fail
       << std::setw(10) << c.nonzero << std::setw(10) << c.finding << '\n';
  };
  for (const auto& [name, c] : rows) emit(name, c);
  if (rows.size() > 1) emit("total", total);
  for (const CheckRecord& r : records) {
    if (r.status == kFail) {
      os << "FAIL " << r.case_label << " note=" << r.note
         << " witness=" << r.witness << '\n';
    }
  }
  os << "result: "
     << (all_theorems_pass() ? "all theorem-class checks pass"
                             : "theorem-class check failures present")
     << '\n';
  return os.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "scalars",       "presentation", "involutions",
      "bkl",           "recursion",    "serre_lusztig",
      "rank1",         "higher_serre", "braid_conjecture",
      "all"};
  return names;
}

VerificationReport run_suite(UEngine& engine, const SuiteSpec& spec) {
  if (!(engine.datum() == spec.datum)) {
    throw std::invalid_argument(
        "verify: engine datum differs from the spec datum");
  }
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), spec.suite) == names.end()) {
    throw std::invalid_argument("verify: unknown suite '" + spec.suite + "'");
  }
  if (spec.e_set != 0 && spec.e_set != 1 && spec.e_set != -1) {
    throw std::invalid_argument("verify: e_set must be 0, +1 or -1");
  }
  if (spec.max_n < 1) {
    throw std::invalid_argument("verify: max_n must be at least 1");
  }
  if (spec.max_nm < 0) {
    throw std::invalid_argument("verify: max_nm must be nonnegative");
  }
  VerificationReport report;
  Runner runner{engine, engine.datum(), spec, sanitize(spec.datum.name()),
                report.records};
  if (spec.suite == "all") {
    for (const std::string& name : names) {
      if (name != "all") runner.dispatch(name);
    }
  } else {
    runner.dispatch(spec.suite);
  }
  std::sort(report.records.begin(), report.records.end(),
            [](const CheckRecord& x, const CheckRecord& y) {
              if (x.case_label != y.case_label) {
                return natural_less(x.case_label, y.case_label);
              }
              return x.suite < y.suite;
            });
  return report;
}

VerificationReport run_suite(const SuiteSpec& spec,
                             const UEngineOptions& options) {
  UEngine engine(spec.datum, options);
  return run_suite(engine, spec);
}

}  // namespace iqv
