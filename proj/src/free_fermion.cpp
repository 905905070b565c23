#include "trotter/free_fermion.hpp"

#include <cmath>

namespace trotter {

namespace {
constexpr std::complex<double> kImag{0.0, 1.0};
}

FreeFermionOp::FreeFermionOp(Eigen::MatrixXcd g) : g_(std::move(g)) {
  if (g_.rows() != g_.cols())
    throw InputError("free-fermion coefficient matrix must be square");
  const double scale = std::max(1.0, g_.norm());
  if ((g_ - g_.adjoint()).norm() > 1e-12 * scale)
    throw InputError("free-fermion coefficient matrix must be Hermitian");
  // exact hermitization removes rounding asymmetry
  g_ = 0.5 * (g_ + g_.adjoint()).eval();
}

FreeFermionOp::FreeFermionOp(const Eigen::MatrixXd& g)
    : FreeFermionOp(Eigen::MatrixXcd(g.cast<std::complex<double>>())) {}

bool FreeFermionOp::is_zero(double tol) const { return g_.norm() <= tol; }

FreeFermionOp ff_commutator(const FreeFermionOp& a, const FreeFermionOp& b) {
  if (a.n() != b.n())
    throw InputError("free-fermion commutator dimension mismatch");
  Eigen::MatrixXcd c =
      kImag * (a.matrix() * b.matrix() - b.matrix() * a.matrix());
  return FreeFermionOp(std::move(c));
}

double ff_norm(const FreeFermionOp& a) {
  if (a.n() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix(),
                                                     Eigen::EigenvaluesOnly);
  double pos = 0.0, neg = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    const double e = es.eigenvalues()[i];
    if (e > 0)
      pos += e;
    else
      neg += e;
  }
  return std::max(pos, -neg);
}

FfEigen ff_diagonalize(const FreeFermionOp& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.matrix());
  FfEigen out;
  out.basis_change = es.eigenvectors().adjoint();
  out.values = es.eigenvalues();
  return out;
}

GivensDecomposition givens_decompose(const Eigen::MatrixXd& u) {
  const int n = static_cast<int>(u.rows());
  if (u.cols() != n) throw InputError("givens_decompose: matrix not square");
  const double ortho_err =
      (u.transpose() * u - Eigen::MatrixXd::Identity(n, n)).norm();
  if (ortho_err > 1e-10)
    throw InputError("givens_decompose: matrix is not orthogonal (residual " +
                     std::to_string(ortho_err) + ")");

  // Classic QR sweep: zero subdiagonal entries column by column.  For an
  // orthogonal input the triangular remainder is a +-1 diagonal.
  Eigen::MatrixXd w = u;
  std::vector<GivensRotation> applied;  // G_k ... G_1 w = diag
  for (int col = 0; col < n - 1; ++col) {
    for (int row = n - 1; row > col; --row) {
      const double a = w(row - 1, col);
      const double b = w(row, col);
      if (std::abs(b) < 1e-15) continue;
      const double theta = std::atan2(b, a);
      const double c = std::cos(theta), s = std::sin(theta);
      // rows (row-1, row) <- [[c, s], [-s, c]] * rows
      for (int j = 0; j < n; ++j) {
        const double x = w(row - 1, j), y = w(row, j);
        w(row - 1, j) = c * x + s * y;
        w(row, j) = -s * x + c * y;
      }
      applied.push_back({row - 1, row, theta});
    }
  }

  GivensDecomposition d;
  d.signs = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < n; ++i) d.signs[i] = w(i, i) < 0 ? -1.0 : 1.0;
  // u = G_1^T G_2^T ... G_K^T diag(signs); transposing a plane rotation
  // negates its angle.
  d.rotations.reserve(applied.size());
  for (const auto& g : applied)
    d.rotations.push_back({g.p, g.q, -g.angle});
  return d;
}

Eigen::MatrixXd givens_reconstruct(const GivensDecomposition& d, int n) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (auto it = d.rotations.rbegin(); it != d.rotations.rend(); ++it) {
    const double c = std::cos(it->angle), s = std::sin(it->angle);
    // m <- R(p,q,angle) * m with R acting on rows p,q as [[c, s], [-s, c]]
    for (int j = 0; j < n; ++j) {
      const double x = m(it->p, j), y = m(it->q, j);
      m(it->p, j) = c * x + s * y;
      m(it->q, j) = -s * x + c * y;
    }
  }
  return m * d.signs.asDiagonal();
}

}  // namespace trotter
