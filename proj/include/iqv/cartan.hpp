#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// Cartan data with diagram involution, root-lattice combinatorics, and the
// restricted Weyl group generators.

namespace iqv {

// Element of the root lattice in simple-root coordinates.
struct Weight {
  std::vector<long> v;

  Weight() = default;
  explicit Weight(std::vector<long> coords) : v(std::move(coords)) {}
  static Weight zero(std::size_t n) { return Weight(std::vector<long>(n, 0)); }
  static Weight unit(std::size_t n, std::size_t i);

  std::size_t rank() const { return v.size(); }
  long degree() const;  // coordinate sum
  bool is_zero() const;
  bool nonnegative() const;

  Weight operator+(const Weight& o) const;
  Weight operator-(const Weight& o) const;
  Weight operator-() const;
  bool operator==(const Weight& o) const { return v == o.v; }
  bool operator!=(const Weight& o) const { return v != o.v; }
  bool operator<(const Weight& o) const { return v < o.v; }

  std::string to_text() const;  // "(1,0,2)"
};

class RestrictedReflection;

// Symmetrizable generalized Cartan matrix with symmetrizer and diagram
// involution. Indices are 0-based internally; 1-based labels appear only at
// I/O boundaries. Construction never throws: validate() reports violations
// as data, and the algebraic accessors assume a valid datum.
class CartanDatum {
 public:
  CartanDatum() = default;
  CartanDatum(std::string name, std::vector<std::vector<long>> cartan,
              std::vector<long> symmetrizer, std::vector<std::size_t> tau);

  const std::string& name() const { return name_; }
  std::size_t rank() const { return cartan_.size(); }
  long c(std::size_t i, std::size_t j) const { return cartan_[i][j]; }
  long eps(std::size_t i) const { return eps_[i]; }
  std::size_t tau(std::size_t i) const { return tau_[i]; }
  const std::vector<std::vector<long>>& cartan() const { return cartan_; }
  const std::vector<long>& symmetrizer() const { return eps_; }
  const std::vector<std::size_t>& tau_perm() const { return tau_; }

  // All violated invariants, empty iff valid.
  std::vector<std::string> validate() const;
  bool is_valid() const { return validate().empty(); }
  void require_valid() const;  // throws std::invalid_argument listing violations

  Weight alpha(std::size_t i) const;
  Weight apply_tau(const Weight& w) const;
  // s_i(w) = w - (sum_j c_ij w_j) alpha_i.
  Weight simple_reflection(std::size_t i, const Weight& w) const;

  // Smallest label of each tau-orbit, ascending.
  std::vector<std::size_t> orbit_representatives() const;
  // Orbit representatives whose c_{i,tau i} lies in {-1, 0, 2}.
  std::vector<std::size_t> ibar_tau() const;
  // Restricted Weyl group generator for i in ibar_tau; throws otherwise.
  RestrictedReflection restricted_generator(std::size_t i) const;

  // Deterministic serialization of (cartan, symmetrizer, tau); the name is
  // excluded so equal data hash equally regardless of labeling.
  std::string canonical_text() const;
  std::uint64_t hash() const;  // FNV-1a of canonical_text

  bool operator==(const CartanDatum& o) const;

 private:
  void check_index(std::size_t i) const;

  std::string name_;
  std::vector<std::vector<long>> cartan_;
  std::vector<long> eps_;
  std::vector<std::size_t> tau_;
};

// Action of a composite reflection bs_i on the root lattice: s_i for a
// tau-fixed node, s_i s_{tau i} when c_{i,tau i} = 0, s_i s_{tau i} s_i when
// c_{i,tau i} = -1.
class RestrictedReflection {
 public:
  RestrictedReflection(const CartanDatum& datum, std::vector<std::size_t> seq)
      : datum_(&datum), seq_(std::move(seq)) {}

  // Reflection indices; operator() applies the rightmost first.
  const std::vector<std::size_t>& sequence() const { return seq_; }
  Weight operator()(const Weight& w) const;

 private:
  const CartanDatum* datum_;
  std::vector<std::size_t> seq_;
};

std::uint64_t fnv1a(const std::string& s);

}  // namespace iqv
