#include "iqv/cartan.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace iqv {

Weight Weight::unit(std::size_t n, std::size_t i) {
  Weight w = zero(n);
  w.v.at(i) = 1;
  return w;
}

long Weight::degree() const {
  return std::accumulate(v.begin(), v.end(), 0L);
}

bool Weight::is_zero() const {
  return std::all_of(v.begin(), v.end(), [](long c) { return c == 0; });
}

bool Weight::nonnegative() const {
  return std::all_of(v.begin(), v.end(), [](long c) { return c >= 0; });
}

namespace {

void check_same_rank(const Weight& a, const Weight& b) {
  if (a.rank() != b.rank())
    throw std::invalid_argument("weights of different rank");
}

}  // namespace

Weight Weight::operator+(const Weight& o) const {
  check_same_rank(*this, o);
  Weight r(*this);
  for (std::size_t k = 0; k < v.size(); ++k) r.v[k] += o.v[k];
  return r;
}

Weight Weight::operator-(const Weight& o) const {
  check_same_rank(*this, o);
  Weight r(*this);
  for (std::size_t k = 0; k < v.size(); ++k) r.v[k] -= o.v[k];
  return r;
}

Weight Weight::operator-() const {
  Weight r(*this);
  for (auto& c : r.v) c = -c;
  return r;
}

std::string Weight::to_text() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) os << ",";
    os << v[k];
  }
  os << ")";
  return os.str();
}

CartanDatum::CartanDatum(std::string name,
                         std::vector<std::vector<long>> cartan,
                         std::vector<long> symmetrizer,
                         std::vector<std::size_t> tau)
    : name_(std::move(name)),
      cartan_(std::move(cartan)),
      eps_(std::move(symmetrizer)),
      tau_(std::move(tau)) {}

std::vector<std::string> CartanDatum::validate() const {
  std::vector<std::string> out;
  const std::size_t n = cartan_.size();
  auto label = [](std::size_t i) { return std::to_string(i + 1); };

  if (n == 0) out.push_back("empty index set");
  bool square = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (cartan_[i].size() != n) square = false;
  }
  if (!square) {
    out.push_back("cartan matrix is not square");
    return out;
  }
  if (eps_.size() != n) out.push_back("symmetrizer size differs from rank");
  if (tau_.size() != n) out.push_back("tau size differs from rank");
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < n; ++i) {
    if (cartan_[i][i] != 2)
      out.push_back("diagonal entry c_ii != 2 at i=" + label(i));
    if (eps_[i] <= 0)
      out.push_back("symmetrizer entry not positive at i=" + label(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (cartan_[i][j] > 0)
        out.push_back("off-diagonal entry positive at (i,j)=(" + label(i) +
                      "," + label(j) + ")");
      if ((cartan_[i][j] == 0) != (cartan_[j][i] == 0))
        out.push_back("zero pattern asymmetric, c_ij = 0 but c_ji != 0 at "
                      "(i,j)=(" + label(i) + "," + label(j) + ")");
      if (eps_[i] * cartan_[i][j] != eps_[j] * cartan_[j][i])
        out.push_back("DC not symmetric, eps_i c_ij != eps_j c_ji at (i,j)=(" +
                      label(i) + "," + label(j) + ")");
    }
  }

  std::vector<bool> seen(n, false);
  bool perm = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (tau_[i] >= n || seen[tau_[i]]) {
      perm = false;
      break;
    }
    seen[tau_[i]] = true;
  }
  if (!perm) {
    out.push_back("tau is not a permutation of the index set");
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (tau_[tau_[i]] != i)
      out.push_back("tau is not an involution at i=" + label(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (cartan_[tau_[i]][tau_[j]] != cartan_[i][j])
        out.push_back("cartan not tau-invariant, c_{tau i,tau j} != c_ij at "
                      "(i,j)=(" + label(i) + "," + label(j) + ")");
    }
  }
  return out;
}

void CartanDatum::require_valid() const {
  std::vector<std::string> bad = validate();
  if (bad.empty()) return;
  std::string msg = "invalid cartan datum";
  if (!name_.empty()) msg += " '" + name_ + "'";
  for (const auto& b : bad) msg += "; " + b;
  throw std::invalid_argument(msg);
}

void CartanDatum::check_index(std::size_t i) const {
  if (i >= rank()) throw std::out_of_range("node index out of range");
}

Weight CartanDatum::alpha(std::size_t i) const {
  check_index(i);
  return Weight::unit(rank(), i);
}

Weight CartanDatum::apply_tau(const Weight& w) const {
  if (w.rank() != rank()) throw std::invalid_argument("weight rank mismatch");
  Weight r = Weight::zero(rank());
  for (std::size_t j = 0; j < rank(); ++j) r.v[tau_[j]] = w.v[j];
  return r;
}

Weight CartanDatum::simple_reflection(std::size_t i, const Weight& w) const {
  check_index(i);
  if (w.rank() != rank()) throw std::invalid_argument("weight rank mismatch");
  long pairing = 0;
  for (std::size_t j = 0; j < rank(); ++j) pairing += cartan_[i][j] * w.v[j];
  Weight r(w);
  r.v[i] -= pairing;
  return r;
}

std::vector<std::size_t> CartanDatum::orbit_representatives() const {
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (i <= tau_[i]) reps.push_back(i);
  }
  return reps;
}

std::vector<std::size_t> CartanDatum::ibar_tau() const {
  std::vector<std::size_t> out;
  for (std::size_t i : orbit_representatives()) {
    long c = cartan_[i][tau_[i]];
    if (c == -1 || c == 0 || c == 2) out.push_back(i);
  }
  return out;
}

RestrictedReflection CartanDatum::restricted_generator(std::size_t i) const {
  check_index(i);
  std::vector<std::size_t> bar = ibar_tau();
  if (std::find(bar.begin(), bar.end(), i) == bar.end())
    throw std::invalid_argument("node " + std::to_string(i + 1) +
                                " is not a restricted-reflection representative");
  std::size_t ti = tau_[i];
  if (ti == i) return RestrictedReflection(*this, {i});
  if (cartan_[i][ti] == 0) return RestrictedReflection(*this, {i, ti});
  return RestrictedReflection(*this, {i, ti, i});
}

std::string CartanDatum::canonical_text() const {
  std::ostringstream os;
  os << "n=" << rank() << ";C=";
  for (const auto& row : cartan_) {
    for (long c : row) os << c << ",";
    os << ";";
  }
  os << "D=";
  for (long e : eps_) os << e << ",";
  os << ";tau=";
  for (std::size_t t : tau_) os << t + 1 << ",";
  return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t CartanDatum::hash() const { return fnv1a(canonical_text()); }

bool CartanDatum::operator==(const CartanDatum& o) const {
  return cartan_ == o.cartan_ && eps_ == o.eps_ && tau_ == o.tau_;
}

Weight RestrictedReflection::operator()(const Weight& w) const {
  Weight r = w;
  for (std::size_t k = seq_.size(); k-- > 0;)
    r = datum_->simple_reflection(seq_[k], r);
  return r;
}

}  // namespace iqv
