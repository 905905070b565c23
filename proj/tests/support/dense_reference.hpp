#pragma once

// Test-only dense fermionic algebra, independent of the library's
// occupation-basis builders: creation operators are assembled as explicit
// Kronecker products of 2x2 blocks, and Hamiltonians by multiplying those
// matrices.  Slow and obvious on purpose.

#include <Eigen/Dense>
#include <complex>

#include "trotter/hamiltonian.hpp"

namespace trotter::testsupport {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

// Jordan-Wigner convention matching the library: bit k of the basis index
// is the occupation of mode k, and c_k picks up the parity of modes below
// k.  kron ordering: qubit 0 is the least significant bit.
inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Mat creation_op(int mode, int n) {
  Mat z = Mat::Zero(2, 2), cdag = Mat::Zero(2, 2), id = Mat::Identity(2, 2);
  z(0, 0) = 1;
  z(1, 1) = -1;
  cdag(1, 0) = 1;  // |1><0|
  Mat out = Mat::Identity(1, 1);
  // factor for qubit k sits at stride 2^k: build from high qubit down so
  // qubit 0 is least significant
  for (int k = n - 1; k >= 0; --k) {
    if (k == mode)
      out = kron(out, cdag);
    else if (k < mode)
      out = kron(out, z);
    else
      out = kron(out, id);
  }
  return out;
}

inline Mat annihilation_op(int mode, int n) {
  return creation_op(mode, n).adjoint();
}

inline Mat dense_hamiltonian(const SpinOrbitalHamiltonian& h, bool with_core) {
  const int n = h.n_orbitals;
  const int dim = 1 << n;
  Mat out = Mat::Zero(dim, dim);
  std::vector<Mat> cd(n), c(n);
  for (int k = 0; k < n; ++k) {
    cd[k] = creation_op(k, n);
    c[k] = annihilation_op(k, n);
  }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      if (h.one_body(p, q) != 0.0) out += h.one_body(p, q) * cd[p] * c[q];
  for (const auto& [key, value] : h.two_body.entries()) {
    const auto [p, q, r, s] = TwoBodyTensor::unpack(key);
    out += value * cd[p] * cd[q] * c[r] * c[s];
  }
  if (with_core) out += h.core_energy * Mat::Identity(dim, dim);
  return out;
}

// Dense build of a single quadratic operator sum g_pq c+_p c_q.
inline Mat dense_quadratic(const Eigen::MatrixXcd& g) {
  const int n = static_cast<int>(g.rows());
  const int dim = 1 << n;
  Mat out = Mat::Zero(dim, dim);
  for (int p = 0; p < n; ++p) {
    const Mat cp = creation_op(p, n);
    for (int q = 0; q < n; ++q)
      if (g(p, q) != Cplx(0.0))
        out += g(p, q) * cp * annihilation_op(q, n);
  }
  return out;
}

inline Mat dense_term(const Term& t, int n) {
  const int dim = 1 << n;
  Mat out = Mat::Zero(dim, dim);
  const auto cd = [&](int k) { return creation_op(k, n); };
  const auto cc = [&](int k) { return annihilation_op(k, n); };
  for (const auto& m : t.monos) {
    switch (m.kind) {
      case MonoKind::Diag1:
        out += m.coeff * cd(m.idx[0]) * cc(m.idx[0]);
        break;
      case MonoKind::Hop:
        out += m.coeff * (cd(m.idx[0]) * cc(m.idx[1]) +
                          cd(m.idx[1]) * cc(m.idx[0]));
        break;
      case MonoKind::NumNum:
        out += m.coeff * cd(m.idx[0]) * cc(m.idx[0]) * cd(m.idx[1]) *
               cc(m.idx[1]);
        break;
      case MonoKind::NumHop:
        out += m.coeff * cd(m.idx[2]) * cc(m.idx[2]) *
               (cd(m.idx[0]) * cc(m.idx[1]) + cd(m.idx[1]) * cc(m.idx[0]));
        break;
      case MonoKind::Quartic: {
        const Mat a =
            cd(m.idx[0]) * cd(m.idx[1]) * cc(m.idx[2]) * cc(m.idx[3]);
        out += m.coeff * (a + Mat(a.adjoint()));
        break;
      }
    }
  }
  return out;
}

inline double operator_norm(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()[0]),
                  std::abs(es.eigenvalues()[es.eigenvalues().size() - 1]));
}

}  // namespace trotter::testsupport
