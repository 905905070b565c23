#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "trotter/bounds_types.hpp"
#include "trotter/hamiltonian.hpp"

namespace trotter {

/// Commutation geometry of a term list: per-term non-commuting neighbor
/// counts and norm sums, the maximum neighbor count K, and the total
/// triple count L = sum_a K_a^2.  Aggregates are evaluated by
/// inclusion-exclusion over index subsets; explicit neighbor lists are
/// materialized on demand from per-orbital posting lists.
class CommutationStructure {
 public:
  static CommutationStructure build(const std::vector<Term>& terms);

  int term_count() const { return m_; }
  int k_max() const { return k_max_; }
  std::uint64_t triple_count() const { return l_; }  // L
  int neighbor_count(int alpha) const { return k_alpha_[alpha]; }
  double neighbor_norm_sum(int alpha) const { return s_alpha_[alpha]; }
  double norm(int alpha) const { return norms_[alpha]; }
  const std::vector<double>& norms() const { return norms_; }

  struct Scratch {
    std::vector<int> stamp;
    int epoch = 0;
  };
  /// Appends the non-commuting neighbors of alpha to out (cleared first).
  /// Deterministic order; scratch makes concurrent calls safe.
  void neighbors(int alpha, Scratch& scratch, std::vector<int>& out) const;

 private:
  int m_ = 0;
  int k_max_ = 0;
  std::uint64_t l_ = 0;
  std::vector<double> norms_;
  std::vector<int> k_alpha_;
  std::vector<double> s_alpha_;
  std::vector<std::vector<int>> orbital_terms_;
  std::vector<std::vector<int>> term_indices_;
  std::vector<bool> diagonal_;
};

CommutationStructure commutation_structure(const std::vector<Term>& terms);

/// Exact evaluation of the restricted triangle-inequality bound
///   prefactor = 4 sum_a ||H_a|| (sum_{b in nbr(a)} ||H_b||)^2.
BoundReport triangle_bound_exact(const std::vector<Term>& terms,
                                 const CommutationStructure& cs,
                                 double target_error = 1e-3);

/// Monte-Carlo estimate of the same sum over the L valid triples
/// (a; b, b' in nbr(a)): (L/M) sum_k |h_a||h_b||h_b'| times the shared
/// constant 4.  samples == 0 requests exhaustive enumeration through the
/// posting-list path (equal to triangle_bound_exact up to rounding).
/// L == 0 yields a zero bound without sampling.
BoundReport triangle_bound_mc(const std::vector<Term>& terms,
                              const CommutationStructure& cs,
                              std::size_t samples, std::uint64_t seed,
                              double target_error = 1e-3);

/// Optional refinement hook for the Cauchy-Schwarz indicator: return true
/// when the triple (a, b, b') is known to not contribute (e.g. by
/// ground-state symmetry).  Evaluated only for triples the commutation
/// predicate keeps.
using TripleExclusion =
    std::function<bool(const Term&, const Term&, const Term&)>;

/// Cauchy-Schwarz bound: 4 (sum_a ||H_a||^2)^{3/2} sqrt(N_W), N_W counting
/// ordered triples whose double commutator [[H_b,H_a],H_b'] is not excluded
/// by the conservative commutation predicate (or by `exclude`).
BoundReport cauchy_schwarz_bound(const std::vector<Term>& terms,
                                 const CommutationStructure& cs,
                                 double target_error = 1e-3,
                                 const TripleExclusion& exclude = nullptr);

/// sqrt(sum ||H_a||^2 / m); throws InputError on an empty list.
double rms_term_norm(const std::vector<Term>& terms);

}  // namespace trotter
