#pragma once

#include <limits>
#include <string>
#include <vector>

#include "trotter/coalescing_types.hpp"
#include "trotter/hamiltonian.hpp"

namespace trotter {

/// Importance of infinitely-degenerate transitions (Delta = 0); sorts
/// above every finite importance.
inline constexpr double kMaximalImportance =
    std::numeric_limits<double>::infinity();

/// omega_p = t_pp + sum_{q in occ} V_pqqp, with V read from the
/// number-number coefficients of H.
Eigen::VectorXd orbital_energies(const SpinOrbitalHamiltonian& h,
                                 const std::vector<int>& occupied);

/// Default Hartree-Fock filling: the n_electrons orbitals with the lowest
/// bare diagonal t_pp (ties toward lower index).  Falls back to half
/// filling when the electron count is unknown.
std::vector<int> default_occupied(const SpinOrbitalHamiltonian& h);

/// min over the three bipartitions {a,b|c,d} of |w_a + w_b - w_c - w_d|.
double delta_denominator(const Eigen::VectorXd& omega,
                         const std::array<int, 4>& indices);

/// Maximum magnitude of the four combined Pauli strengths
/// (xxxx+yyyy, xxyy+yyxx, yxyx+xyxy, yxxy+xyyx) of the grouped term's
/// Jordan-Wigner image on its four active modes.
double representative_magnitude(const Term& t);

/// I = representative^2 / Delta; Delta = 0 gives kMaximalImportance.
double importance(double representative, double delta);

/// True when every bundled monomial of the grouped term annihilates the
/// occupation-basis state selected by `occupied`.
bool hf_annihilates(const Term& t, const std::vector<int>& occupied);

struct ImportanceEntry {
  int term_id;
  double delta;
  double representative;
  double importance;  // may be +inf
  bool annihilates_hf;
};

struct ImportanceTable {
  std::vector<ImportanceEntry> entries;  // one per FourIndex term
  std::vector<int> occupied;
  double log10_mean = 0.0;  // over finite, nonzero importances
  double log10_std = 0.0;   // population std
};

ImportanceTable build_importance_table(const SpinOrbitalHamiltonian& h,
                                       const std::vector<Term>& terms,
                                       const std::vector<int>& occupied);

/// Cutoff-based repetition periods: log C_U = mean + 3 std,
/// log C_L = mean + 1.2 std (base-10 statistics of log I);
///   I >= C_U            -> n = 1
///   C_L <= I < C_U      -> n = 1 unless the term annihilates HF, else 16
///   I < C_L             -> top 25% by importance 16, next 37.5% 32,
///                          remaining 37.5% 64 (floor counts, remainder to
///                          the largest bucket, ties toward smaller n).
/// Non-FourIndex terms always get n = 1.
struct PeriodAssignment {
  std::vector<int> periods;  // per term id
  std::vector<char> region;  // 'A'..'E' per FourIndex term id, '-' others
  double log10_cu = 0.0;
  double log10_cl = 0.0;
};

PeriodAssignment assign_periods(const ImportanceTable& table,
                                const std::vector<Term>& terms);

/// First-order multi-resolution cycle; periods must be powers of two.
CoalescingSchedule build_schedule(const std::vector<Term>& terms,
                                  const std::vector<int>& periods,
                                  double base_step, const TermOrder& order);

/// Average term executions per sub-step: sum_a 1/n_a.
double work_per_cycle(const CoalescingSchedule& schedule);

}  // namespace trotter
