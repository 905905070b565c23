#include <doctest.h>

#include <cmath>

#include "support/dense_reference.hpp"
#include "trotter/free_fermion.hpp"
#include "trotter/philox.hpp"

using namespace trotter;
namespace ts = trotter::testsupport;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  const Philox rng(seed);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const auto b = rng.block(1, static_cast<std::uint32_t>(i),
                               static_cast<std::uint32_t>(j), 0);
      m(i, j) = m(j, i) = 2.0 * Philox::to_unit(b[0], b[1]) - 1.0;
    }
  return m;
}

Eigen::MatrixXd random_orthogonal(int n, std::uint64_t seed) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_symmetric(n, seed));
  return qr.householderQ();
}

}  // namespace

TEST_CASE("ff_commutator basics") {
  const FreeFermionOp a(random_symmetric(3, 1));
  const auto zero = ff_commutator(a, a);
  CHECK(zero.matrix().norm() <= 1e-14);

  Eigen::MatrixXd sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  const auto c = ff_commutator(FreeFermionOp(sx), FreeFermionOp(sz));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c.matrix());
  CHECK(es.eigenvalues()[0] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(es.eigenvalues()[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("ff_commutator dimension mismatch") {
  CHECK_THROWS_AS(ff_commutator(FreeFermionOp(random_symmetric(3, 1)),
                                FreeFermionOp(random_symmetric(4, 2))),
                  InputError);
}

TEST_CASE("ff_norm examples") {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
  g(0, 0) = 1;
  g(1, 1) = -2;
  CHECK(ff_norm(FreeFermionOp(g)) == doctest::Approx(2.0).epsilon(1e-14));
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(3, 3);
  CHECK(ff_norm(FreeFermionOp(zero)) == 0.0);
}

TEST_CASE("ff_norm and ff_commutator match the dense oracle at N=4") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const FreeFermionOp a(random_symmetric(4, 100 + seed));
    const FreeFermionOp b(random_symmetric(4, 200 + seed));
    // norm
    const ts::Mat da = ts::dense_quadratic(a.matrix());
    CHECK(ff_norm(a) ==
          doctest::Approx(ts::operator_norm(da)).epsilon(1e-12));
    // commutator: dense i[A,B] vs quadratic build of the result
    const ts::Mat db = ts::dense_quadratic(b.matrix());
    const ts::Mat lhs =
        std::complex<double>(0, 1) * (da * db - db * da);
    const auto c = ff_commutator(a, b);
    const ts::Mat rhs = ts::dense_quadratic(c.matrix());
    CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, lhs.norm()));
    CHECK(ff_norm(c) ==
          doctest::Approx(ts::operator_norm(lhs)).epsilon(1e-12));
  }
}

TEST_CASE("jacobi identity holds on random triples") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const FreeFermionOp a(random_symmetric(5, 300 + seed));
    const FreeFermionOp b(random_symmetric(5, 400 + seed));
    const FreeFermionOp c(random_symmetric(5, 500 + seed));
    // with the Hermitian-generator convention, i[.,.] twice flips a sign:
    // [a,[b,c]] + [b,[c,a]] + [c,[a,b]] = -( J(a,J(b,c)) + ... ) with
    // J = ff_commutator; the cyclic sum must still vanish.
    const Eigen::MatrixXcd sum =
        ff_commutator(a, ff_commutator(b, c)).matrix() +
        ff_commutator(b, ff_commutator(c, a)).matrix() +
        ff_commutator(c, ff_commutator(a, b)).matrix();
    CHECK(sum.norm() <= 1e-12);
  }
}

TEST_CASE("ff_diagonalize examples and reconstruction") {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
  g(0, 1) = g(1, 0) = 1.0;
  const auto d = ff_diagonalize(FreeFermionOp(g));
  CHECK(d.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(d.values[1] == doctest::Approx(1.0).epsilon(1e-14));

  const FreeFermionOp a(random_symmetric(8, 9));
  const auto e = ff_diagonalize(a);
  const Eigen::MatrixXcd rebuilt = e.basis_change.adjoint() *
                                   e.values.asDiagonal().toDenseMatrix() *
                                   e.basis_change;
  CHECK((rebuilt - a.matrix()).norm() <= 1e-12);
  CHECK((e.basis_change * e.basis_change.adjoint() -
         Eigen::MatrixXcd::Identity(8, 8))
            .norm() <= 1e-12);
}

TEST_CASE("givens: identity gives an empty rotation list") {
  const auto d = givens_decompose(Eigen::MatrixXd::Identity(5, 5));
  CHECK(d.rotations.empty());
  CHECK((givens_reconstruct(d, 5) - Eigen::MatrixXd::Identity(5, 5)).norm() <=
        1e-14);
}

TEST_CASE("givens: a plane rotation decomposes into one rotation") {
  const double theta = 0.37;
  Eigen::MatrixXd u(2, 2);
  u << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  const auto d = givens_decompose(u);
  CHECK(d.rotations.size() == 1);
  CHECK((givens_reconstruct(d, 2) - u).norm() <= 1e-12);
}

TEST_CASE("givens reconstructs random orthogonals at N=6") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Eigen::MatrixXd u = random_orthogonal(6, 600 + seed);
    const auto d = givens_decompose(u);
    CHECK(d.rotations.size() <= 15);  // N(N-1)/2
    CHECK((givens_reconstruct(d, 6) - u).norm() <= 1e-10);
  }
}

TEST_CASE("givens rejects non-orthogonal input") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
  m(0, 1) = 0.5;
  CHECK_THROWS_AS(givens_decompose(m), InputError);
}
