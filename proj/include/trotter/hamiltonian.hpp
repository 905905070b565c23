#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "trotter/errors.hpp"

namespace trotter {

/// Sparse two-body coefficient tensor h_pqrs, stored as a sorted flat
/// vector over packed ordered quartets.  Orbital indices are 0-based and
/// must fit in 8 bits.  Immutable once built.
class TwoBodyTensor {
 public:
  using Key = std::uint32_t;

  static Key pack(int p, int q, int r, int s) {
    return (static_cast<Key>(p) << 24) | (static_cast<Key>(q) << 16) |
           (static_cast<Key>(r) << 8) | static_cast<Key>(s);
  }
  static std::array<int, 4> unpack(Key k) {
    return {static_cast<int>(k >> 24), static_cast<int>((k >> 16) & 0xFF),
            static_cast<int>((k >> 8) & 0xFF), static_cast<int>(k & 0xFF)};
  }

  TwoBodyTensor() = default;
  /// Builds from (possibly unsorted) entries; duplicate keys keep the last
  /// value; exact zeros are dropped.
  static TwoBodyTensor from_entries(std::vector<std::pair<Key, double>> entries);

  const std::vector<std::pair<Key, double>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Value at quartet, 0.0 if absent.
  double at(int p, int q, int r, int s) const;
  bool contains(Key k) const;

 private:
  std::vector<std::pair<Key, double>> entries_;  // sorted by key
};

/// A second-quantized molecular Hamiltonian over N spin orbitals:
///   H = sum_pq h_pq c+_p c_q + sum_pqrs h_pqrs c+_p c+_q c_r c_s + core.
/// All coefficients are real (Hartree).  validate() enforces
///   h_pq = h_qp,  h_pqrs = h_qpsr  and  h_pqrs = h_srqp,
/// that stored two-body entries are nonzero and have p!=q, r!=s.
struct SpinOrbitalHamiltonian {
  int n_orbitals = 0;
  Eigen::MatrixXd one_body;  // N x N, symmetric
  TwoBodyTensor two_body;
  double core_energy = 0.0;
  int n_electrons = -1;  // -1 when not known (e.g. generated ensembles)

  void validate() const;  // throws InputError on any broken invariant
};

enum class TermClass : int {
  OneBodyDiag = 0,    // H_pp
  OneBodyOffDiag = 1, // H_pq
  NumberNumber = 2,   // H_pqqp
  ThreeIndex = 3,     // H_prrq
  FourIndex = 4,      // H_pqrs, all indices distinct
};

const char* term_class_name(TermClass c);

/// One Hermitian monomial bundle inside a Term.
///
///   Diag1   idx=(p)        coeff * n_p
///   Hop     idx=(u,v) u<v  coeff * (c+_u c_v + c+_v c_u)
///   NumNum  idx=(x,y) x<y  coeff * n_x n_y
///   NumHop  idx=(u,v,x)    coeff * n_x (c+_u c_v + c+_v c_u),  u<v
///   Quartic idx=(i,j,k,l)  coeff * (c+_i c+_j c_k c_l + h.c.),
///           i<j, k<l, (i,j) < (k,l) lexicographically
enum class MonoKind : int { Diag1, Hop, NumNum, NumHop, Quartic };

struct Mono {
  MonoKind kind;
  std::array<int, 4> idx;
  double coeff;
};

/// A canonical Hermitian Hamiltonian summand.  FourIndex terms group every
/// quartic monomial living on the same unordered orbital set; `monos` holds
/// the surviving Hermitian directions.  `norm` is the grouped upper bound
/// sum_d |a_d| (exact for a single direction).
struct Term {
  TermClass cls;
  std::vector<int> indices;  // canonical id tuple, see term_key()
  double coefficient;
  double norm;
  std::vector<Mono> monos;

  bool diagonal() const {
    return cls == TermClass::OneBodyDiag || cls == TermClass::NumberNumber;
  }
};

/// Stable printable identity, e.g. "H[0,1,2,3]" for a FourIndex group.
std::string term_key(const Term& t);

/// A permutation of term ids (positions into the owning term list).
using TermOrder = std::vector<int>;

/// h_pqrs <- (h_pqrs + h_qpsr)/2 for every stored quartet; exact zeros
/// produced by the averaging are dropped.
TwoBodyTensor symmetrize_two_body(const TwoBodyTensor& raw);

/// Splits H into canonical Hermitian terms.  Every nonzero coefficient is
/// assigned to exactly one term; terms whose bundled directions cancel to
/// the zero operator are dropped.  Deterministic order: by class then
/// canonical indices.
std::vector<Term> enumerate_terms(const SpinOrbitalHamiltonian& h);

/// Grouped operator-norm convention: sum over bundled Hermitian directions
/// of |direction coefficient|.
double term_norm(const Term& t);

/// Conservative commutation predicate: true only when [A,B]=0 is
/// guaranteed (disjoint index sets, identical terms, or both diagonal in
/// the occupation basis).
bool terms_commute(const Term& a, const Term& b);

/// Interleaved execution order: (1) all H_pp and H_pqqp, (2) each H_pq
/// immediately followed by the H_prrq sharing its exterior pair, (3) all
/// H_pqrs; lexicographic within groups.
TermOrder interleaved_order(const std::vector<Term>& terms);

/// Sum of |h_pqrs| over stored two-body quartets.
double sum_abs_coefficients(const SpinOrbitalHamiltonian& h);

}  // namespace trotter
