#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "trotter/coalescing_types.hpp"
#include "trotter/hamiltonian.hpp"

namespace trotter {

/// Occupation-number basis, optionally restricted to a particle sector.
/// Bit k of a state mask is the occupation of spin orbital k; the
/// Jordan-Wigner sign of c_k on |mask> is (-1)^(number of occupied
/// orbitals below k).  Hard cap N <= 16.
class Basis {
 public:
  static constexpr int kMaxOrbitals = 16;

  static Basis full(int n_orbitals);
  static Basis sector(int n_orbitals, int n_electrons);

  int n_orbitals() const { return n_; }
  int dim() const { return static_cast<int>(states_.size()); }
  std::uint32_t state(int i) const { return states_[i]; }
  const std::vector<std::uint32_t>& states() const { return states_; }
  /// Position of a mask, -1 when outside the basis.
  int find(std::uint32_t mask) const;
  std::optional<int> n_electrons() const { return n_elec_; }

 private:
  int n_ = 0;
  std::optional<int> n_elec_;
  bool full_ = false;
  std::vector<std::uint32_t> states_;
};

/// A term's matrix in a basis: sparse diagonal plus disjoint symmetric
/// 2x2 couplings.  Every Hamiltonian term class reduces to this shape,
/// so per-term exponentials are exactly unitary closed forms.
struct TermBlocks {
  std::vector<std::pair<int, double>> diag;
  struct Pair {
    int i, j;
    double v;
  };
  std::vector<Pair> pairs;
};

TermBlocks build_term_blocks(const Term& t, const Basis& basis);

/// Dense real symmetric matrix of a term list (core energy excluded).
Eigen::MatrixXd build_dense(const std::vector<Term>& terms, const Basis& basis);

/// Sparse version for iterative methods.
Eigen::SparseMatrix<double> build_sparse(const std::vector<Term>& terms,
                                         const Basis& basis);

/// 2^N-dimensional realization with complex entries (occupation basis).
struct DenseOperator {
  std::shared_ptr<const Basis> basis;
  Eigen::MatrixXcd mat;
};

DenseOperator jw_build(const Term& t, int n_orbitals);
DenseOperator jw_build(const SpinOrbitalHamiltonian& h, int n_orbitals);

/// Lowest eigenpair of a Hermitian operator, optionally restricted to a
/// particle-number sector of the full basis.  Throws on non-Hermitian
/// input.
std::pair<double, Eigen::VectorXcd> ground_state(
    const DenseOperator& op, std::optional<int> particle_sector = {});

/// Largest |eigenvalue| of a real symmetric sparse operator by Lanczos
/// with full reorthogonalization; relative accuracy ~1e-6.
double spectral_norm(const Eigen::SparseMatrix<double>& a,
                     int max_iterations = 300);

enum class TsOrder { First, Second };

using UnitaryMatrix =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic,
                  Eigen::RowMajor>;

/// Product of exact per-term exponentials in the prescribed sequence.
/// First order: U = U_{a_m}(dt) ... U_{a_1}(dt); second order is the
/// palindromic product with the first term of `order` at full step.  The
/// first factor of the sequence acts first on states.
UnitaryMatrix trotter_unitary(const std::vector<Term>& terms,
                              const TermOrder& order, double dt,
                              TsOrder ts_order, const Basis& basis);

/// One cycle of a coalescing schedule: sub-steps executed first to last,
/// each a first-order product of exp(-i n_a H_a dt) over its active terms.
UnitaryMatrix trotter_unitary(const std::vector<Term>& terms,
                              const CoalescingSchedule& schedule,
                              const Basis& basis);

/// Hermitian (i/t) log U on the principal branch (Schur-based).
Eigen::MatrixXcd matrix_log_unitary(const UnitaryMatrix& u, double t);

/// Shared per-sector data: the dense Hamiltonian, its ground state and
/// spectral norm.  Errors are energy differences, so the scalar core
/// offset is left out everywhere.
struct OracleContext {
  std::shared_ptr<const Basis> basis;
  Eigen::MatrixXd h_dense;
  double e_exact = 0.0;
  Eigen::VectorXd ground_vec;
  double h_norm = 0.0;
};

/// Sector selection: the Hamiltonian's electron count when known,
/// otherwise the sector holding the global ground state.
OracleContext make_oracle_context(const SpinOrbitalHamiltonian& h,
                                  const std::vector<Term>& terms,
                                  std::optional<int> sector = {});

/// Signed ground-energy error E_eff - E_exact of one product-formula step,
/// with E_eff from the principal-branch logarithm.  Rejects
/// ||H|| * dt >= pi (branch ambiguity).
double measured_energy_error(const OracleContext& ctx,
                             const std::vector<Term>& terms,
                             const TermOrder& order, double dt,
                             TsOrder ts_order);

/// Same for one coalescing cycle (evolution time = K * base_step).
double measured_energy_error(const OracleContext& ctx,
                             const std::vector<Term>& terms,
                             const CoalescingSchedule& schedule);

/// Ground eigenpair of the effective evolution (for response studies).
std::pair<double, Eigen::VectorXcd> effective_ground(
    const OracleContext& ctx, const std::vector<Term>& terms,
    const CoalescingSchedule& schedule);

/// Second-order BCH effective Hamiltonian
///   H + (dt^2/12) sum_b [P_{b-1} + H_b/2, [H_b, P_{b-1}]],
/// P_{b-1} = sum of the terms preceding b in the order.  This is the exact
/// dt^2 coefficient of the palindromic product, evaluated in O(m) dense
/// commutators.
Eigen::MatrixXd bch_effective_hamiltonian(const OracleContext& ctx,
                                          const std::vector<Term>& terms,
                                          const TermOrder& order, double dt);

/// <psi0| (H_bch - H) |psi0>: the perturbative ground-energy error.
double perturbative_energy_error(const OracleContext& ctx,
                                 const std::vector<Term>& terms,
                                 const TermOrder& order, double dt);

struct OrderExperiment {
  std::vector<double> errors;  // signed, per sample
  double mean = 0.0;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;  // central moments
  std::optional<double> kurtosis_ratio;   // m4 / m2^2
  std::optional<double> skewness_ratio;   // m3 / m2^(3/2)
  std::optional<double> width_over_mean;  // sqrt(m2) / |mean|
  std::vector<double> bin_edges;
  std::vector<int> counts;
};

/// Randomized term-order experiment: the H_pp, H_pqqp, H_pq, H_prrq prefix
/// of the interleaved order stays fixed while the H_pqrs tail is shuffled
/// per sample (second-order product).  Samples run in parallel with
/// per-sample counter-derived shuffles, so results are seed-deterministic.
OrderExperiment randomized_order_experiment(const OracleContext& ctx,
                                            const std::vector<Term>& terms,
                                            int n_samples, double dt,
                                            std::uint64_t seed,
                                            int n_bins = 40);

}  // namespace trotter
