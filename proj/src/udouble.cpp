#include "iqv/udouble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>

namespace iqv {

namespace ualpha {

Weight letter_weight(const CartanDatum& datum, const GenSym& s) {
  Weight w = Weight::zero(datum.rank());
  if (s.kind == kE) w.v[std::size_t(s.index)] = 1;
  if (s.kind == kF) w.v[std::size_t(s.index)] = -1;
  return w;
}

}  // namespace ualpha

NCPoly uletter(const GenSym& s) { return NCPoly::letter(ualpha::tag(), s); }

namespace {

using WordVec = WeightBasis::WordVec;

bool deg_lex_less(const std::vector<std::int32_t>& a,
                  const std::vector<std::int32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// All words with letter t appearing m[t] times, ascending lexicographic.
std::vector<WordVec> words_of(const std::vector<long>& m) {
  WordVec start;
  for (std::size_t t = 0; t < m.size(); ++t)
    for (long r = 0; r < m[t]; ++r) start.push_back(std::int32_t(t));
  std::vector<WordVec> out;
  do {
    out.push_back(start);
  } while (std::next_permutation(start.begin(), start.end()));
  return out;
}

long degree_of(const std::vector<long>& m) {
  long s = 0;
  for (long x : m) s += x;
  return s;
}

[[noreturn]] void budget_error() {
  throw BudgetExceededError("degree budget exceeded");
}

// ---------------------------------------------------------------------------
// Integer Laurent polynomials: the coefficient domain of the fraction-free
// echelon. Dense, trimmed, empty <=> zero.

struct IPoly {
  long min = 0;
  std::vector<Integer> c;
  bool is_zero() const { return c.empty(); }
};

void ip_trim(IPoly& p) {
  std::size_t lo = 0, hi = p.c.size();
  while (hi > lo && p.c[hi - 1] == 0) --hi;
  while (lo < hi && p.c[lo] == 0) ++lo;
  if (lo == hi) {
    p.c.clear();
    p.min = 0;
    return;
  }
  if (hi < p.c.size()) p.c.resize(hi);
  if (lo > 0) {
    p.c.erase(p.c.begin(), p.c.begin() + long(lo));
    p.min += long(lo);
  }
}

IPoly ip_add_scaled(const IPoly& a, const IPoly& b, bool negate_b) {
  if (a.is_zero() && b.is_zero()) return {};
  long lo = a.is_zero() ? b.min : (b.is_zero() ? a.min : std::min(a.min, b.min));
  long hia = a.is_zero() ? lo : a.min + long(a.c.size());
  long hib = b.is_zero() ? lo : b.min + long(b.c.size());
  long hi = std::max(hia, hib);
  IPoly r;
  r.min = lo;
  r.c.assign(std::size_t(hi - lo), Integer(0));
  for (std::size_t t = 0; t < a.c.size(); ++t)
    r.c[std::size_t(a.min - lo) + t] += a.c[t];
  for (std::size_t t = 0; t < b.c.size(); ++t) {
    if (negate_b)
      r.c[std::size_t(b.min - lo) + t] -= b.c[t];
    else
      r.c[std::size_t(b.min - lo) + t] += b.c[t];
  }
  ip_trim(r);
  return r;
}

IPoly ip_add(const IPoly& a, const IPoly& b) { return ip_add_scaled(a, b, false); }
IPoly ip_sub(const IPoly& a, const IPoly& b) { return ip_add_scaled(a, b, true); }

IPoly ip_mul(const IPoly& a, const IPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  IPoly r;
  r.min = a.min + b.min;
  r.c.assign(a.c.size() + b.c.size() - 1, Integer(0));
  for (std::size_t s = 0; s < a.c.size(); ++s) {
    if (a.c[s] == 0) continue;
    for (std::size_t t = 0; t < b.c.size(); ++t) r.c[s + t] += a.c[s] * b.c[t];
  }
  ip_trim(r);
  return r;
}

IPoly ip_neg(IPoly p) {
  for (auto& x : p.c) x = -x;
  return p;
}

Integer ip_content(const IPoly& p) {
  Integer g = 0;
  for (const auto& x : p.c) g = boost::multiprecision::gcd(g, x);
  return g < 0 ? Integer(-g) : g;
}

void ip_div_int(IPoly& p, const Integer& g) {
  for (auto& x : p.c) x /= g;
}

LaurentPoly ip_to_laurent(const IPoly& p) {
  LaurentPoly r;
  for (std::size_t t = 0; t < p.c.size(); ++t) {
    if (p.c[t] != 0) r.set_coeff(p.min + long(t), Rational(p.c[t]));
  }
  return r;
}

// Requires an integer-coefficient polynomial Scalar (e.g. a Gaussian
// binomial).
IPoly ip_from_scalar(const Scalar& s) {
  if (!s.is_polynomial() || !s.num().has_integer_coeffs()) {
    throw std::logic_error("udouble: expected an integer polynomial scalar");
  }
  IPoly r;
  if (s.num().is_zero()) return r;
  r.min = s.num().min_exp();
  r.c.assign(std::size_t(s.num().max_exp() - r.min) + 1, Integer(0));
  s.num().each_term([&](long e, const Rational& co) {
    r.c[std::size_t(e - r.min)] = boost::multiprecision::numerator(co);
  });
  return r;
}

std::uint64_t ip_eval_mod(const IPoly& p, std::uint64_t qhat, std::uint64_t P) {
  // Horner from the top, then shift by qhat^min.
  std::uint64_t acc = 0;
  for (std::size_t t = p.c.size(); t-- > 0;) {
    acc = modarith::mul(acc, qhat, P);
    acc = modarith::add(acc, modarith::reduce_integer(p.c[t], P), P);
  }
  if (acc == 0 || p.min == 0) return acc;
  std::uint64_t sh = p.min > 0 ? modarith::pow(qhat, std::uint64_t(p.min), P)
                               : modarith::pow(modarith::inv(qhat, P),
                                               std::uint64_t(-p.min), P);
  return modarith::mul(acc, sh, P);
}

// ---------------------------------------------------------------------------
// Exact weight basis internals.

using ERow = std::map<std::size_t, IPoly, std::greater<std::size_t>>;

void erow_normalize(ERow& r) {
  if (r.empty()) return;
  Integer g = 0;
  long sh = 0;
  bool first = true;
  for (const auto& [j, p] : r) {
    g = boost::multiprecision::gcd(g, ip_content(p));
    sh = first ? p.min : std::min(sh, p.min);
    first = false;
  }
  bool flip = r.begin()->second.c.back() < 0;
  for (auto& [j, p] : r) {
    if (g > 1) ip_div_int(p, g);
    p.min -= sh;
    if (flip) p = ip_neg(std::move(p));
  }
}

}  // namespace

struct WeightBasis::Impl {
  Weight mset;  // nonnegative multiplicities
  int sign = +1;
  std::vector<WordVec> monomials;
  std::vector<char> standard_;
  std::map<std::size_t, ERow> erows;  // pivot index -> echelon row
  bool loaded = false;                // red is complete, erows absent

  mutable std::mutex mu;
  mutable std::map<std::size_t, std::map<std::size_t, Scalar>> red;

  void insert_row(ERow r) {
    erow_normalize(r);
    while (!r.empty()) {
      std::size_t pv = r.begin()->first;
      auto it = erows.find(pv);
      if (it == erows.end()) {
        erows.emplace(pv, std::move(r));
        return;
      }
      const ERow& p = it->second;
      IPoly lr = r.begin()->second;
      const IPoly& lp = p.begin()->second;
      ERow nr;
      for (const auto& [j, pol] : r) {
        if (j != pv) nr.emplace(j, ip_mul(lp, pol));
      }
      for (const auto& [j, pol] : p) {
        if (j == pv) continue;
        auto jt = nr.find(j);
        IPoly v = ip_sub(jt == nr.end() ? IPoly{} : jt->second,
                         ip_mul(lr, pol));
        if (v.is_zero()) {
          if (jt != nr.end()) nr.erase(jt);
        } else if (jt != nr.end()) {
          jt->second = std::move(v);
        } else {
          nr.emplace(j, std::move(v));
        }
      }
      erow_normalize(nr);
      r = std::move(nr);
    }
  }

  // Fully reduced expansion of pivot pv over standard monomials; mu held.
  const std::map<std::size_t, Scalar>& ensure_red(std::size_t pv) const {
    auto it = red.find(pv);
    if (it != red.end()) return it->second;
    if (loaded) throw std::logic_error("weight basis: missing cached row");
    const ERow& row = erows.at(pv);
    LaurentPoly lead = ip_to_laurent(row.begin()->second);
    std::map<std::size_t, Scalar> acc;
    auto accumulate = [&acc](std::size_t j, const Scalar& s) {
      auto [at, ins] = acc.emplace(j, s);
      if (!ins) {
        at->second += s;
        if (at->second.is_zero()) acc.erase(at);
      }
    };
    for (auto jt = std::next(row.begin()); jt != row.end(); ++jt) {
      Scalar c = Scalar::ratio(ip_to_laurent(ip_neg(jt->second)), lead);
      if (standard_[jt->first]) {
        accumulate(jt->first, c);
      } else {
        for (const auto& [sj, sc] : ensure_red(jt->first))
          accumulate(sj, c * sc);
      }
    }
    return red.emplace(pv, std::move(acc)).first->second;
  }
};

Weight WeightBasis::weight() const {
  Weight w = impl_->mset;
  if (impl_->sign < 0)
    for (auto& x : w.v) x = -x;
  return w;
}

const Weight& WeightBasis::multiset() const { return impl_->mset; }
int WeightBasis::sign() const { return impl_->sign; }
const std::vector<WordVec>& WeightBasis::monomials() const {
  return impl_->monomials;
}
std::size_t WeightBasis::monomial_count() const {
  return impl_->monomials.size();
}
bool WeightBasis::is_standard(std::size_t idx) const {
  return impl_->standard_.at(idx) != 0;
}
std::size_t WeightBasis::dimension() const {
  std::size_t n = 0;
  for (char f : impl_->standard_) n += (f != 0);
  return n;
}

std::size_t WeightBasis::index_of(const WordVec& w) const {
  const auto& ms = impl_->monomials;
  auto it = std::lower_bound(ms.begin(), ms.end(), w);
  if (it == ms.end() || *it != w) {
    throw std::invalid_argument("weight basis: word not in this component");
  }
  return std::size_t(it - ms.begin());
}

const std::map<std::size_t, Scalar>& WeightBasis::reduction_row(
    std::size_t idx) const {
  if (is_standard(idx)) {
    throw std::logic_error("weight basis: standard monomials have no row");
  }
  std::lock_guard<std::mutex> lk(impl_->mu);
  return impl_->ensure_red(idx);
}

void WeightBasis::materialize_all_rows() const {
  std::lock_guard<std::mutex> lk(impl_->mu);
  if (impl_->loaded) return;
  for (const auto& [pv, row] : impl_->erows) impl_->ensure_red(pv);
}

namespace {

// ---------------------------------------------------------------------------
// Exact basis construction: span the weight slice of the two-sided q-Serre
// ideal by monomial sandwiches u * S_ab * v and echelonize fraction-free.

std::shared_ptr<WeightBasis::Impl> build_basis_impl(const CartanDatum& d,
                                                    const std::vector<long>& m,
                                                    int sign, long budget) {
  if (degree_of(m) > budget) budget_error();
  auto impl = std::make_shared<WeightBasis::Impl>();
  impl->mset = Weight(m);
  impl->sign = sign;
  impl->monomials = words_of(m);
  const std::size_t n = d.rank();

  auto index_of = [&impl](const WordVec& w) {
    auto it = std::lower_bound(impl->monomials.begin(), impl->monomials.end(), w);
    return std::size_t(it - impl->monomials.begin());
  };

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      long N = 1 - d.c(a, b);
      std::vector<long> rest = m;
      rest[a] -= N;
      rest[b] -= 1;
      if (!std::all_of(rest.begin(), rest.end(), [](long x) { return x >= 0; }))
        continue;
      std::vector<IPoly> coeff(std::size_t(N) + 1);
      for (long t = 0; t <= N; ++t) {
        Scalar s = qbinom(N, t, d.eps(a));
        if (t % 2) s = -s;
        coeff[std::size_t(t)] = ip_from_scalar(s);
      }
      // All splits of `rest` into a left multiset and its complement.
      std::vector<long> um(n, 0);
      for (;;) {
        std::vector<long> vm = rest;
        for (std::size_t t = 0; t < n; ++t) vm[t] -= um[t];
        for (const WordVec& u : words_of(um)) {
          for (const WordVec& v : words_of(vm)) {
            ERow row;
            for (long t = 0; t <= N; ++t) {
              WordVec w = u;
              for (long r = 0; r < t; ++r) w.push_back(std::int32_t(a));
              w.push_back(std::int32_t(b));
              for (long r = t; r < N; ++r) w.push_back(std::int32_t(a));
              w.insert(w.end(), v.begin(), v.end());
              std::size_t idx = index_of(w);
              auto it = row.find(idx);
              if (it == row.end()) {
                row.emplace(idx, coeff[std::size_t(t)]);
              } else {
                it->second = ip_add(it->second, coeff[std::size_t(t)]);
                if (it->second.is_zero()) row.erase(it);
              }
            }
            impl->insert_row(std::move(row));
          }
        }
        // Odometer over um <= rest.
        std::size_t t = 0;
        while (t < n && um[t] == rest[t]) um[t++] = 0;
        if (t == n) break;
        ++um[t];
      }
    }
  }

  impl->standard_.assign(impl->monomials.size(), 1);
  for (const auto& [pv, row] : impl->erows) impl->standard_[pv] = 0;
  return impl;
}

// ---------------------------------------------------------------------------
// Persistent cache of weight bases.

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string cache_file(const std::string& dir, std::uint64_t hash,
                       const std::vector<long>& m, int sign) {
  std::string name = "wb_" + hash_hex(hash) + (sign > 0 ? "_p" : "_m");
  for (long x : m) name += "_" + std::to_string(x);
  return (std::filesystem::path(dir) / (name + ".txt")).string();
}

void store_basis(const WeightBasis::Impl& impl, const std::string& path,
                 std::uint64_t datum_hash) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write basis cache: " + tmp);
    out << "iqv-weight-basis v1\n";
    out << "datum " << hash_hex(datum_hash) << "\n";
    out << "sign " << (impl.sign > 0 ? "+" : "-") << "\n";
    out << "weight";
    for (long x : impl.mset.v) out << " " << x;
    out << "\n";
    out << "monomials " << impl.monomials.size() << "\n";
    out << "rows " << impl.red.size() << "\n";
    for (const auto& [pv, row] : impl.red) {
      out << "row " << pv << " " << row.size();
      for (const auto& [j, s] : row) out << " " << j << ":" << s.to_text();
      out << "\n";
    }
    out << "end\n";
    if (!out) throw std::runtime_error("failed writing basis cache: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::shared_ptr<WeightBasis::Impl> try_load_basis(const std::string& path,
                                                  std::uint64_t datum_hash,
                                                  const std::vector<long>& m,
                                                  int sign) {
  std::ifstream in(path);
  if (!in) return nullptr;
  try {
    std::string tok, ver;
    in >> tok >> ver;
    if (tok != "iqv-weight-basis" || ver != "v1") return nullptr;
    in >> tok;
    std::string hex;
    in >> hex;
    if (tok != "datum" || hex != hash_hex(datum_hash)) return nullptr;
    in >> tok;
    std::string sg;
    in >> sg;
    if (tok != "sign" || sg != (sign > 0 ? "+" : "-")) return nullptr;
    in >> tok;
    if (tok != "weight") return nullptr;
    std::vector<long> fm(m.size());
    for (auto& x : fm) in >> x;
    if (!in || fm != m) return nullptr;
    std::size_t nmono = 0, nrows = 0;
    in >> tok >> nmono;
    if (tok != "monomials") return nullptr;
    in >> tok >> nrows;
    if (tok != "rows") return nullptr;

    auto impl = std::make_shared<WeightBasis::Impl>();
    impl->mset = Weight(m);
    impl->sign = sign;
    impl->monomials = words_of(m);
    if (impl->monomials.size() != nmono) return nullptr;
    impl->standard_.assign(nmono, 1);
    for (std::size_t r = 0; r < nrows; ++r) {
      std::size_t pv = 0, cnt = 0;
      in >> tok >> pv >> cnt;
      if (!in || tok != "row" || pv >= nmono) return nullptr;
      std::map<std::size_t, Scalar> row;
      for (std::size_t t = 0; t < cnt; ++t) {
        std::string entry;
        in >> entry;
        auto colon = entry.find(':');
        if (colon == std::string::npos) return nullptr;
        std::size_t j = std::stoul(entry.substr(0, colon));
        if (j >= nmono) return nullptr;
        row.emplace(j, Scalar::from_text(entry.substr(colon + 1)));
      }
      impl->standard_[pv] = 0;
      impl->red.emplace(pv, std::move(row));
    }
    in >> tok;
    if (!in || tok != "end") return nullptr;
    // Stored rows must be expansions over standard monomials.
    for (const auto& [pv, row] : impl->red) {
      for (const auto& [j, s] : row) {
        if (!impl->standard_[j]) return nullptr;
      }
    }
    impl->loaded = true;
    return impl;
  } catch (const std::exception&) {
    return nullptr;
  }
}

// ---------------------------------------------------------------------------
// Modular weight basis: same construction with coefficients evaluated at a
// sample point, rows kept monic and fully reduced.

struct ModBasis {
  std::vector<WordVec> monomials;
  std::vector<char> standard_;
  std::map<std::size_t, std::map<std::size_t, std::uint64_t>> red;

  std::size_t index_of(const WordVec& w) const {
    auto it = std::lower_bound(monomials.begin(), monomials.end(), w);
    return std::size_t(it - monomials.begin());
  }
};

std::shared_ptr<const ModBasis> build_mod_basis(const CartanDatum& d,
                                                const std::vector<long>& m,
                                                long budget, std::uint64_t qhat,
                                                std::uint64_t P) {
  if (degree_of(m) > budget) budget_error();
  auto mb = std::make_shared<ModBasis>();
  mb->monomials = words_of(m);
  const std::size_t n = d.rank();
  std::map<std::size_t, std::map<std::size_t, std::uint64_t, std::greater<std::size_t>>>
      rows;

  auto insert_row =
      [&rows, P](std::map<std::size_t, std::uint64_t, std::greater<std::size_t>> r) {
        while (!r.empty()) {
          std::size_t pv = r.begin()->first;
          auto it = rows.find(pv);
          if (it == rows.end()) {
            // Make monic.
            std::uint64_t inv = modarith::inv(r.begin()->second, P);
            for (auto& [j, v] : r) v = modarith::mul(v, inv, P);
            rows.emplace(pv, std::move(r));
            return;
          }
          std::uint64_t c = r.begin()->second;
          r.erase(r.begin());
          for (const auto& [j, v] : it->second) {
            if (j == pv) continue;
            auto jt = r.find(j);
            std::uint64_t nv = modarith::sub(jt == r.end() ? 0 : jt->second,
                                             modarith::mul(c, v, P), P);
            if (nv == 0) {
              if (jt != r.end()) r.erase(jt);
            } else if (jt != r.end()) {
              jt->second = nv;
            } else {
              r.emplace(j, nv);
            }
          }
        }
      };

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      long N = 1 - d.c(a, b);
      std::vector<long> rest = m;
      rest[a] -= N;
      rest[b] -= 1;
      if (!std::all_of(rest.begin(), rest.end(), [](long x) { return x >= 0; }))
        continue;
      std::vector<std::uint64_t> coeff(std::size_t(N) + 1);
      for (long t = 0; t <= N; ++t) {
        Scalar s = qbinom(N, t, d.eps(a));
        if (t % 2) s = -s;
        coeff[std::size_t(t)] = ip_eval_mod(ip_from_scalar(s), qhat, P);
      }
      std::vector<long> um(n, 0);
      for (;;) {
        std::vector<long> vm = rest;
        for (std::size_t t = 0; t < n; ++t) vm[t] -= um[t];
        for (const WordVec& u : words_of(um)) {
          for (const WordVec& v : words_of(vm)) {
            std::map<std::size_t, std::uint64_t, std::greater<std::size_t>> row;
            for (long t = 0; t <= N; ++t) {
              if (coeff[std::size_t(t)] == 0) continue;
              WordVec w = u;
              for (long r = 0; r < t; ++r) w.push_back(std::int32_t(a));
              w.push_back(std::int32_t(b));
              for (long r = t; r < N; ++r) w.push_back(std::int32_t(a));
              w.insert(w.end(), v.begin(), v.end());
              std::size_t idx = mb->index_of(w);
              std::uint64_t nv =
                  modarith::add(row.count(idx) ? row[idx] : 0,
                                coeff[std::size_t(t)], P);
              if (nv == 0)
                row.erase(idx);
              else
                row[idx] = nv;
            }
            insert_row(std::move(row));
          }
        }
        std::size_t t = 0;
        while (t < n && um[t] == rest[t]) um[t++] = 0;
        if (t == n) break;
        ++um[t];
      }
    }
  }

  mb->standard_.assign(mb->monomials.size(), 1);
  for (const auto& [pv, row] : rows) mb->standard_[pv] = 0;
  // Back-substitute ascending so every expansion is over standard monomials:
  // a row's tail indices are all below its pivot, hence already processed.
  for (auto it = rows.begin(); it != rows.end(); ++it) {
    std::size_t pv = it->first;
    std::map<std::size_t, std::uint64_t> acc;
    for (const auto& [j, v] : it->second) {
      if (j == pv) continue;
      std::uint64_t neg = modarith::sub(0, v, P);
      if (mb->standard_[j]) {
        std::uint64_t nv = modarith::add(acc.count(j) ? acc[j] : 0, neg, P);
        if (nv == 0)
          acc.erase(j);
        else
          acc[j] = nv;
      } else {
        for (const auto& [sj, sv] : mb->red.at(j)) {
          std::uint64_t nv = modarith::add(acc.count(sj) ? acc[sj] : 0,
                                           modarith::mul(neg, sv, P), P);
          if (nv == 0)
            acc.erase(sj);
          else
            acc[sj] = nv;
        }
      }
    }
    mb->red.emplace(pv, std::move(acc));
  }
  return mb;
}

// ---------------------------------------------------------------------------
// Coefficient-field policies shared by the exact and modular pipelines.

struct ExactOps {
  using V = Scalar;
  const CartanDatum* d;

  static bool is_zero(const V& v) { return v.is_zero(); }
  static V one() { return Scalar(1); }
  static V add(const V& a, const V& b) { return a + b; }
  static V mul(const V& a, const V& b) { return a * b; }
  static V neg(const V& a) { return -a; }
  V from_scalar(const Scalar& s) const { return s; }
  static V q_pow(long e) { return Scalar::q_power(e); }
  V qdiff_inv(std::size_t a) const {
    long k = d->eps(a);
    return (Scalar::q_power(k) - Scalar::q_power(-k)).inverse();
  }
};

struct ModOps {
  using V = std::uint64_t;
  const CartanDatum* d;
  std::uint64_t P = kModularPrime;
  std::uint64_t qhat = 1;
  std::uint64_t qinv = 1;

  bool is_zero(V v) const { return v == 0; }
  V one() const { return 1; }
  V add(V a, V b) const { return modarith::add(a, b, P); }
  V mul(V a, V b) const { return modarith::mul(a, b, P); }
  V neg(V a) const { return modarith::sub(0, a, P); }
  V from_scalar(const Scalar& s) const { return eval_mod(s, qhat, P).value; }
  V q_pow(long e) const {
    return e >= 0 ? modarith::pow(qhat, std::uint64_t(e), P)
                  : modarith::pow(qinv, std::uint64_t(-e), P);
  }
  V qdiff_inv(std::size_t a) const {
    long k = d->eps(a);
    return modarith::inv(modarith::sub(q_pow(k), q_pow(-k), P), P);
  }
};

// ---------------------------------------------------------------------------
// Straightening core: right multiplication of triangular terms by letters.

template <class Ops>
struct Core {
  using V = typename Ops::V;
  using TMap = std::map<TriKey, V>;

  const CartanDatum& d;
  const Ops& ops;
  long budget;

  void add(TMap& m, TriKey k, V v) const {
    if (ops.is_zero(v)) return;
    auto it = m.find(k);
    if (it == m.end()) {
      m.emplace(std::move(k), std::move(v));
      return;
    }
    it->second = ops.add(it->second, v);
    if (ops.is_zero(it->second)) m.erase(it);
  }

  // term * K_a^n (primed = false) or K'_a^n (primed = true): the letter
  // crosses the E-word picking up q_a^{-+ n c_{a,e_j}} per letter.
  void mul_K(TMap& out, TriKey t, V c, std::size_t a, bool primed,
             long n) const {
    long sum = 0;
    for (auto j : t.e) sum += d.c(a, std::size_t(j));
    long ex = (primed ? +1 : -1) * n * d.eps(a) * sum;
    if (ex) c = ops.mul(c, ops.q_pow(ex));
    t.k[2 * a + (primed ? 1 : 0)] += std::int32_t(n);
    add(out, std::move(t), std::move(c));
  }

  // term * E_a: appends to the E-word.
  void mul_E(TMap& out, TriKey t, V c, std::size_t a) const {
    t.e.push_back(std::int32_t(a));
    if (long(t.e.size()) > budget) budget_error();
    add(out, std::move(t), std::move(c));
  }

  // term * F_a: crosses the E-word right-to-left; each crossing of E_a
  // spawns the (K_a - K'_a)/(q_a - q_a^{-1}) branch, and crossing the
  // K-monomial contributes q^{sum_i eps_i c_{ia} (k'_i - k_i)}.
  void mul_F(TMap& out, const TriKey& t, const V& c, std::size_t a) const {
    if (t.e.empty()) {
      long ex = 0;
      for (std::size_t i = 0; i < d.rank(); ++i)
        ex += d.eps(i) * d.c(i, a) * (t.k[2 * i + 1] - t.k[2 * i]);
      V c2 = ex ? ops.mul(c, ops.q_pow(ex)) : c;
      TriKey t2 = t;
      t2.f.push_back(std::int32_t(a));
      if (long(t2.f.size()) > budget) budget_error();
      add(out, std::move(t2), std::move(c2));
      return;
    }
    TriKey head = t;
    std::int32_t b = head.e.back();
    head.e.pop_back();
    TMap sub;
    mul_F(sub, head, c, a);
    for (auto& [kk, vv] : sub) {
      TriKey k2 = kk;
      k2.e.push_back(b);
      add(out, std::move(k2), vv);
    }
    if (std::size_t(b) == a) {
      V cc = ops.mul(c, ops.qdiff_inv(a));
      mul_K(out, head, cc, a, false, +1);
      mul_K(out, head, ops.neg(cc), a, true, +1);
    }
  }

  void mul_letter(TMap& out, const TriKey& t, const V& c,
                  const GenSym& g) const {
    if (g.kind == ualpha::kK || g.kind == ualpha::kKp) {
      if (g.sign != 1 && g.sign != -1)
        throw std::invalid_argument("udouble: K-letter sign must be +-1");
      mul_K(out, t, c, std::size_t(g.index), g.kind == ualpha::kKp, g.sign);
      return;
    }
    if (g.sign != 1) {
      throw std::invalid_argument("udouble: E/F letters are not invertible");
    }
    if (g.kind == ualpha::kE) {
      mul_E(out, t, c, std::size_t(g.index));
    } else if (g.kind == ualpha::kF) {
      mul_F(out, t, c, std::size_t(g.index));
    } else {
      throw std::invalid_argument("udouble: unknown letter kind");
    }
  }

  TriKey identity_key() const {
    return TriKey{{}, std::vector<std::int32_t>(2 * d.rank(), 0), {}};
  }

  TMap straighten_poly(const NCPoly& p) const {
    if (p.alphabet() != ualpha::tag()) {
      throw std::invalid_argument("udouble: expected the 'u' alphabet, got '" +
                                  p.alphabet() + "'");
    }
    TMap total;
    for (const auto& [w, sc] : p.terms()) {
      long ne = 0, nf = 0;
      for (const GenSym& g : w) {
        ne += (g.kind == ualpha::kE);
        nf += (g.kind == ualpha::kF);
      }
      if (ne > budget || nf > budget) budget_error();
      TMap acc;
      add(acc, identity_key(), ops.from_scalar(sc));
      for (const GenSym& g : w) {
        TMap next;
        for (const auto& [t, v] : acc) mul_letter(next, t, v, g);
        acc = std::move(next);
      }
      for (auto& [t, v] : acc) add(total, t, v);
    }
    return total;
  }

  // x * (one triangular monomial), coefficient applied up front.
  TMap mul_by_trikey(const TMap& x, const TriKey& t, const V& c) const {
    TMap acc;
    for (const auto& [k, v] : x) add(acc, k, ops.mul(v, c));
    for (auto a : t.f) {
      TMap nx;
      for (const auto& [k, v] : acc) mul_F(nx, k, v, std::size_t(a));
      acc = std::move(nx);
    }
    for (std::size_t i = 0; i < d.rank(); ++i) {
      for (int pr = 0; pr < 2; ++pr) {
        long n = t.k[2 * i + std::size_t(pr)];
        if (!n) continue;
        TMap nx;
        for (const auto& [k, v] : acc) mul_K(nx, k, v, i, pr == 1, n);
        acc = std::move(nx);
      }
    }
    for (auto b : t.e) {
      TMap nx;
      for (const auto& [k, v] : acc) mul_E(nx, k, v, std::size_t(b));
      acc = std::move(nx);
    }
    return acc;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Engine.

struct UEngine::Impl {
  CartanDatum d;
  UEngineOptions opt;

  using BKey = std::pair<std::vector<long>, int>;
  std::mutex bmu;
  std::map<BKey, std::shared_future<std::shared_ptr<const WeightBasis>>> bcache;
  std::atomic<std::size_t> computes{0};

  using MKey = std::tuple<std::uint64_t, std::vector<long>, int>;
  std::mutex mmu;
  std::map<MKey, std::shared_future<std::shared_ptr<const ModBasis>>> mcache;

  template <class K, class M, class Make>
  static auto single_flight(std::mutex& mu, M& cache, const K& key,
                            Make make) {
    using Ptr = decltype(make());
    std::promise<Ptr> pr;
    std::shared_future<Ptr> fut;
    bool owner = false;
    {
      std::lock_guard<std::mutex> lk(mu);
      auto it = cache.find(key);
      if (it == cache.end()) {
        fut = pr.get_future().share();
        cache.emplace(key, fut);
        owner = true;
      } else {
        fut = it->second;
      }
    }
    if (owner) {
      try {
        pr.set_value(make());
      } catch (...) {
        pr.set_exception(std::current_exception());
        std::lock_guard<std::mutex> lk(mu);
        cache.erase(key);
      }
    }
    return fut.get();
  }

  std::shared_ptr<const WeightBasis> basis(const std::vector<long>& m,
                                           int sign) {
    BKey key{m, sign};
    return single_flight(bmu, bcache, key,
                         [&]() -> std::shared_ptr<const WeightBasis> {
      if (!opt.cache_dir.empty()) {
        std::string path = cache_file(opt.cache_dir, d.hash(), m, sign);
        if (auto impl = try_load_basis(path, d.hash(), m, sign)) {
          return std::make_shared<const WeightBasis>(std::move(impl));
        }
        auto impl = build_basis_impl(d, m, sign, opt.degree_budget);
        computes.fetch_add(1);
        auto wb = std::make_shared<const WeightBasis>(impl);
        wb->materialize_all_rows();
        store_basis(*impl, path, d.hash());
        return std::shared_ptr<const WeightBasis>(wb);
      }
      auto impl = build_basis_impl(d, m, sign, opt.degree_budget);
      computes.fetch_add(1);
      return std::make_shared<const WeightBasis>(std::move(impl));
    });
  }

  std::shared_ptr<const ModBasis> mod_basis(std::uint64_t qhat,
                                            const std::vector<long>& m,
                                            int sign) {
    {
      std::lock_guard<std::mutex> lk(mmu);
      if (mcache.size() > 256) mcache.clear();
    }
    MKey key{qhat, m, sign};
    return single_flight(mmu, mcache, key,
                         [&]() -> std::shared_ptr<const ModBasis> {
      return build_mod_basis(d, m, opt.degree_budget, qhat, kModularPrime);
    });
  }
};

namespace {

// Expansion provider in terms of weight bases; exact flavor.
struct ExactProvider {
  UEngine::Impl* eng;
  using V = Scalar;

  void expand(const WordVec& w, int sign,
              std::vector<std::pair<WordVec, V>>& out) {
    out.clear();
    if (w.empty()) {
      out.emplace_back(w, Scalar(1));
      return;
    }
    std::vector<long> m(eng->d.rank(), 0);
    for (auto j : w) ++m[std::size_t(j)];
    auto wb = eng->basis(m, sign);
    std::size_t idx = wb->index_of(w);
    if (wb->is_standard(idx)) {
      out.emplace_back(w, Scalar(1));
      return;
    }
    for (const auto& [j, s] : wb->reduction_row(idx))
      out.emplace_back(wb->monomials()[j], s);
  }
};

struct ModProvider {
  UEngine::Impl* eng;
  std::uint64_t qhat;
  using V = std::uint64_t;

  void expand(const WordVec& w, int sign,
              std::vector<std::pair<WordVec, V>>& out) {
    out.clear();
    if (w.empty()) {
      out.emplace_back(w, 1);
      return;
    }
    std::vector<long> m(eng->d.rank(), 0);
    for (auto j : w) ++m[std::size_t(j)];
    auto mb = eng->mod_basis(qhat, m, sign);
    std::size_t idx = mb->index_of(w);
    if (mb->standard_[idx]) {
      out.emplace_back(w, 1);
      return;
    }
    for (const auto& [j, v] : mb->red.at(idx))
      out.emplace_back(mb->monomials[j], v);
  }
};

template <class Ops, class Prov>
std::map<TriKey, typename Ops::V> reduce_parts(
    const std::map<TriKey, typename Ops::V>& in, const Ops& ops, Prov& prov) {
  using V = typename Ops::V;
  std::map<TriKey, V> out;
  auto accumulate = [&out, &ops](TriKey k, V v) {
    if (ops.is_zero(v)) return;
    auto it = out.find(k);
    if (it == out.end()) {
      out.emplace(std::move(k), std::move(v));
      return;
    }
    it->second = ops.add(it->second, v);
    if (ops.is_zero(it->second)) out.erase(it);
  };
  std::vector<std::pair<WordVec, V>> fex, eex;
  for (const auto& [t, v] : in) {
    prov.expand(t.f, -1, fex);
    prov.expand(t.e, +1, eex);
    for (const auto& [fw, fc] : fex) {
      V vf = ops.mul(v, fc);
      for (const auto& [ew, ec] : eex) {
        accumulate(TriKey{fw, t.k, ew}, ops.mul(vf, ec));
      }
    }
  }
  return out;
}

}  // namespace

bool TriKey::operator<(const TriKey& o) const {
  if (f.size() != o.f.size() || f != o.f)
    return deg_lex_less(f, o.f);
  if (k != o.k) return k < o.k;
  return deg_lex_less(e, o.e);
}

UElement UElement::from_terms(std::uint64_t datum_hash,
                              std::map<TriKey, Scalar> terms) {
  UElement u;
  u.datum_hash_ = datum_hash;
  for (auto it = terms.begin(); it != terms.end();) {
    if (it->second.is_zero())
      it = terms.erase(it);
    else
      ++it;
  }
  u.terms_ = std::move(terms);
  return u;
}

Scalar UElement::coeff(const TriKey& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Scalar() : it->second;
}

std::string UElement::to_text(const CartanDatum& datum) const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [t, c] : terms_) {
    if (!first) s += " + ";
    first = false;
    s += "(" + c.to_text() + ")";
    for (auto a : t.f) s += "*F" + std::to_string(a + 1);
    for (std::size_t i = 0; i < datum.rank(); ++i) {
      long k1 = t.k[2 * i], k2 = t.k[2 * i + 1];
      if (k1) {
        s += "*K" + std::to_string(i + 1);
        if (k1 != 1) s += "^" + std::to_string(k1);
      }
      if (k2) {
        s += "*K" + std::to_string(i + 1) + "'";
        if (k2 != 1) s += "^" + std::to_string(k2);
      }
    }
    for (auto b : t.e) s += "*E" + std::to_string(b + 1);
  }
  return s;
}

UEngine::UEngine(CartanDatum datum, UEngineOptions opts)
    : impl_(std::make_unique<Impl>()) {
  datum.require_valid();
  if (opts.degree_budget < 1) {
    throw std::invalid_argument("udouble: degree budget must be positive");
  }
  if (!opts.cache_dir.empty()) {
    std::filesystem::create_directories(opts.cache_dir);
  }
  impl_->d = std::move(datum);
  impl_->opt = std::move(opts);
}

UEngine::~UEngine() = default;

const CartanDatum& UEngine::datum() const { return impl_->d; }
const UEngineOptions& UEngine::options() const { return impl_->opt; }

std::vector<TriangularTerm> UEngine::straighten(const NCPoly& p) const {
  ExactOps ops{&impl_->d};
  Core<ExactOps> core{impl_->d, ops, impl_->opt.degree_budget};
  auto tm = core.straighten_poly(p);
  std::vector<TriangularTerm> out;
  out.reserve(tm.size());
  for (auto& [t, c] : tm) {
    TriangularTerm term;
    for (auto a : t.f) term.fpart.push_back(ualpha::F(int(a)));
    term.kpart.assign(t.k.begin(), t.k.end());
    for (auto b : t.e) term.epart.push_back(ualpha::E(int(b)));
    term.coeff = c;
    out.push_back(std::move(term));
  }
  return out;
}

std::shared_ptr<const WeightBasis> UEngine::serre_basis(const Weight& weight,
                                                        int sign) {
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("udouble: sign must be +-1");
  }
  if (weight.rank() != impl_->d.rank()) {
    throw std::invalid_argument("udouble: weight rank mismatch");
  }
  std::vector<long> m(weight.rank());
  for (std::size_t i = 0; i < weight.rank(); ++i) {
    long x = weight.v[i];
    if ((sign > 0 && x < 0) || (sign < 0 && x > 0)) {
      throw std::invalid_argument(
          "udouble: weight coordinates disagree with the sign");
    }
    m[i] = x < 0 ? -x : x;
  }
  return impl_->basis(m, sign);
}

UElement UEngine::reduce(const NCPoly& p) {
  ExactOps ops{&impl_->d};
  Core<ExactOps> core{impl_->d, ops, impl_->opt.degree_budget};
  auto tm = core.straighten_poly(p);
  ExactProvider prov{impl_.get()};
  return UElement::from_terms(impl_->d.hash(), reduce_parts(tm, ops, prov));
}

UElement UEngine::zero() const {
  return UElement::from_terms(impl_->d.hash(), {});
}

UElement UEngine::unit() const {
  ExactOps ops{&impl_->d};
  Core<ExactOps> core{impl_->d, ops, impl_->opt.degree_budget};
  std::map<TriKey, Scalar> terms;
  terms.emplace(core.identity_key(), Scalar(1));
  return UElement::from_terms(impl_->d.hash(), std::move(terms));
}

UElement UEngine::uadd(const UElement& x, const UElement& y) const {
  if (!x.is_zero() && !y.is_zero() && x.datum_hash() != y.datum_hash()) {
    throw std::invalid_argument("udouble: elements of different algebras");
  }
  std::map<TriKey, Scalar> terms = x.terms();
  for (const auto& [k, v] : y.terms()) {
    auto [it, ins] = terms.emplace(k, v);
    if (!ins) {
      it->second += v;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  return UElement::from_terms(x.is_zero() ? y.datum_hash() : x.datum_hash(),
                              std::move(terms));
}

UElement UEngine::uscale(const Scalar& c, const UElement& x) const {
  std::map<TriKey, Scalar> terms;
  if (!c.is_zero()) {
    for (const auto& [k, v] : x.terms()) terms.emplace(k, c * v);
  }
  return UElement::from_terms(x.datum_hash(), std::move(terms));
}

UElement UEngine::umul(const UElement& x, const UElement& y) {
  if (!x.is_zero() && !y.is_zero() && x.datum_hash() != y.datum_hash()) {
    throw std::invalid_argument("udouble: elements of different algebras");
  }
  ExactOps ops{&impl_->d};
  Core<ExactOps> core{impl_->d, ops, impl_->opt.degree_budget};
  std::map<TriKey, Scalar> total;
  for (const auto& [ty, cy] : y.terms()) {
    auto part = core.mul_by_trikey(x.terms(), ty, cy);
    for (auto& [k, v] : part) core.add(total, k, v);
  }
  ExactProvider prov{impl_.get()};
  return UElement::from_terms(impl_->d.hash(),
                              reduce_parts(total, ops, prov));
}

bool UEngine::is_zero(const NCPoly& p) { return reduce(p).is_zero(); }

bool UEngine::is_zero_modular(const NCPoly& p, int trials,
                              std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("udouble: trials must be positive");
  }
  std::mt19937_64 rng(seed);
  const std::uint64_t P = kModularPrime;
  for (int t = 0; t < trials; ++t) {
    int attempts = 0;
    for (;;) {
      std::uint64_t qhat = 2 + rng() % (P - 3);
      try {
        ModOps ops{&impl_->d, P, qhat, modarith::inv(qhat, P)};
        Core<ModOps> core{impl_->d, ops, impl_->opt.degree_budget};
        auto tm = core.straighten_poly(p);
        ModProvider prov{impl_.get(), qhat};
        auto red = reduce_parts(tm, ops, prov);
        if (!red.empty()) return false;
        break;
      } catch (const BadSampleError&) {
        if (++attempts > 64) throw;
      }
    }
  }
  return true;
}

std::vector<std::pair<Weight, int>> UEngine::basis_keys() const {
  std::vector<std::pair<Weight, int>> out;
  std::lock_guard<std::mutex> lk(impl_->bmu);
  for (const auto& [key, fut] : impl_->bcache) {
    if (fut.wait_for(std::chrono::seconds(0)) == std::future_status::ready) {
      out.emplace_back(Weight(key.first), key.second);
    }
  }
  return out;
}

std::size_t UEngine::basis_compute_count() const {
  return impl_->computes.load();
}

NCPoly serre_element(const CartanDatum& datum, std::size_t i, std::size_t j,
                     int sign) {
  datum.require_valid();
  if (i >= datum.rank() || j >= datum.rank() || i == j) {
    throw std::invalid_argument("udouble: serre_element needs distinct nodes");
  }
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("udouble: sign must be +-1");
  }
  long N = 1 - datum.c(i, j);
  NCPoly p(ualpha::tag());
  for (long t = 0; t <= N; ++t) {
    Scalar c = (qfact(t, datum.eps(i)) * qfact(N - t, datum.eps(i))).inverse();
    if (t % 2) c = -c;
    Word w;
    auto letter = [&](std::size_t idx) {
      return sign > 0 ? ualpha::E(int(idx)) : ualpha::F(int(idx));
    };
    for (long r = 0; r < t; ++r) w.push_back(letter(i));
    w.push_back(letter(j));
    for (long r = t; r < N; ++r) w.push_back(letter(i));
    p.add_term(w, c);
  }
  return p;
}

namespace {

// Memoized standard bilinear form on one-sign words.
struct FormCalc {
  const CartanDatum& d;
  std::map<std::pair<WordVec, WordVec>, Scalar> memo;
  std::vector<Scalar> theta;  // (theta_a, theta_a) = (1 - q_a^{-2})^{-1}

  explicit FormCalc(const CartanDatum& datum) : d(datum) {
    for (std::size_t a = 0; a < d.rank(); ++a) {
      theta.push_back(
          (Scalar(1) - Scalar::q_power(-2 * d.eps(a))).inverse());
    }
  }

  Scalar form(const WordVec& x, const WordVec& y) {
    if (x.empty()) return Scalar(1);
    auto key = std::make_pair(x, y);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::int32_t a = x.front();
    WordVec x0(x.begin() + 1, x.end());
    Scalar total(0);
    long dot = 0;  // exponent of q accumulated over the passed prefix
    for (std::size_t t = 0; t < y.size(); ++t) {
      if (y[t] == a) {
        WordVec y1;
        y1.reserve(y.size() - 1);
        y1.insert(y1.end(), y.begin(), y.begin() + long(t));
        y1.insert(y1.end(), y.begin() + long(t) + 1, y.end());
        total += Scalar::q_power(dot) * theta[std::size_t(a)] * form(x0, y1);
      }
      dot += d.eps(std::size_t(y[t])) * d.c(std::size_t(y[t]), std::size_t(a));
    }
    memo.emplace(std::move(key), total);
    return total;
  }
};

}  // namespace

struct FormOracle::Impl {
  CartanDatum d;
  std::mutex mu;
  FormCalc calc;

  explicit Impl(CartanDatum datum) : d(std::move(datum)), calc(d) {}
};

FormOracle::FormOracle(CartanDatum datum) {
  datum.require_valid();
  impl_ = std::make_shared<Impl>(std::move(datum));
}

bool FormOracle::in_radical(const NCPoly& p, const Weight& weight) const {
  const CartanDatum& datum = impl_->d;
  if (p.alphabet() != ualpha::tag()) {
    throw std::invalid_argument("udouble: expected the 'u' alphabet");
  }
  if (weight.rank() != datum.rank()) {
    throw std::invalid_argument("udouble: weight rank mismatch");
  }
  bool pos = weight.nonnegative();
  bool neg = (-weight).nonnegative();
  if (!pos && !neg) {
    throw std::invalid_argument("udouble: weight must be single-sign");
  }
  int kind = pos ? ualpha::kE : ualpha::kF;
  std::vector<long> m(datum.rank());
  for (std::size_t i = 0; i < m.size(); ++i)
    m[i] = weight.v[i] < 0 ? -weight.v[i] : weight.v[i];

  // Collect coefficients over words, checking homogeneity.
  std::map<WordVec, Scalar> coeffs;
  for (const auto& [w, c] : p.terms()) {
    std::vector<long> cnt(datum.rank(), 0);
    WordVec wv;
    for (const GenSym& g : w) {
      if (g.kind != kind || g.sign != 1) {
        throw std::invalid_argument(
            "udouble: form oracle needs a homogeneous one-sign input");
      }
      ++cnt[std::size_t(g.index)];
      wv.push_back(std::int32_t(g.index));
    }
    if (cnt != m) {
      throw std::invalid_argument(
          "udouble: form oracle input is inhomogeneous");
    }
    coeffs.emplace(std::move(wv), c);
  }
  if (coeffs.empty()) return true;

  std::lock_guard<std::mutex> lk(impl_->mu);
  for (const WordVec& w : words_of(m)) {
    Scalar s(0);
    for (const auto& [u, c] : coeffs) s += c * impl_->calc.form(u, w);
    if (!s.is_zero()) return false;
  }
  return true;
}

bool form_radical_oracle(const CartanDatum& datum, const NCPoly& p,
                         const Weight& weight) {
  return FormOracle(datum).in_radical(p, weight);
}

}  // namespace iqv
