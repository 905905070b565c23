#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "trotter/errors.hpp"

namespace trotter {

/// A Hermitian free-fermion (quadratic) operator G = sum_pq g_pq c+_p c_q.
///
/// The coefficient matrix is stored complex Hermitian.  Operators built
/// from molecular data are real symmetric, but the algebra does not close
/// over that class: commutator generators i[A,B] and the skew parts of the
/// completed-square construction carry imaginary antisymmetric components.
class FreeFermionOp {
 public:
  FreeFermionOp() = default;
  explicit FreeFermionOp(Eigen::MatrixXcd g);
  explicit FreeFermionOp(const Eigen::MatrixXd& g_real_symmetric);

  int n() const { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return g_; }
  bool is_zero(double tol = 0.0) const;

 private:
  Eigen::MatrixXcd g_;
};

/// The Hermitian generator i[A,B], with coefficient matrix i[g_a, g_b].
/// Its operator norm equals ||[A,B]||.
FreeFermionOp ff_commutator(const FreeFermionOp& a, const FreeFermionOp& b);

/// ||G|| = max{E+, -E-} with E+ (E-) the sum of positive (negative)
/// eigenvalues of the coefficient matrix.
double ff_norm(const FreeFermionOp& a);

struct FfEigen {
  Eigen::MatrixXcd basis_change;  // w with w g w^H = diag(values)
  Eigen::VectorXd values;
};

/// Single-particle diagonalization; basis_change is unitary (orthogonal
/// for real symmetric input).
FfEigen ff_diagonalize(const FreeFermionOp& a);

struct GivensRotation {
  int p, q;      // plane, p < q
  double angle;  // radians
};

struct GivensDecomposition {
  std::vector<GivensRotation> rotations;
  Eigen::VectorXd signs;  // diagonal +-1 correction
  int rotation_count() const { return static_cast<int>(rotations.size()); }
};

/// Decomposes a real orthogonal u into at most N(N-1)/2 plane rotations and
/// a diagonal sign correction with u = R_1 R_2 ... R_K diag(signs).
/// Throws NotOrthogonal (InputError) when u fails the 1e-10 check.
GivensDecomposition givens_decompose(const Eigen::MatrixXd& u);

/// Reassembles the ordered product R_1 ... R_K diag(signs).
Eigen::MatrixXd givens_reconstruct(const GivensDecomposition& d, int n);

}  // namespace trotter
