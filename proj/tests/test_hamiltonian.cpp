#include <doctest.h>

#include <algorithm>
#include <set>

#include "support/dense_reference.hpp"
#include "trotter/hamiltonian.hpp"
#include "trotter/io.hpp"
#include "trotter/oracle.hpp"

using namespace trotter;
namespace ts = trotter::testsupport;

namespace {

TwoBodyTensor tensor(std::vector<std::pair<std::array<int, 4>, double>> es) {
  std::vector<std::pair<TwoBodyTensor::Key, double>> packed;
  for (const auto& [idx, v] : es)
    packed.emplace_back(TwoBodyTensor::pack(idx[0], idx[1], idx[2], idx[3]),
                        v);
  return TwoBodyTensor::from_entries(std::move(packed));
}

SpinOrbitalHamiltonian empty_h(int n) {
  SpinOrbitalHamiltonian h;
  h.n_orbitals = n;
  h.one_body = Eigen::MatrixXd::Zero(n, n);
  return h;
}

// Hermitian closure: value on the full symmetry orbit of (p,q,r,s).
void put_orbit(std::vector<std::pair<std::array<int, 4>, double>>& es, int p,
               int q, int r, int s, double v) {
  es.push_back({{p, q, r, s}, v});
  es.push_back({{q, p, s, r}, v});
  es.push_back({{s, r, q, p}, v});
  es.push_back({{r, s, p, q}, v});
}

}  // namespace

TEST_CASE("symmetrize_two_body averages qpsr partners") {
  const auto raw = tensor({{{1, 2, 3, 4}, 0.4}, {{2, 1, 4, 3}, 0.2}});
  const auto sym = symmetrize_two_body(raw);
  CHECK(sym.at(1, 2, 3, 4) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(sym.at(2, 1, 4, 3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(sym.size() == 2);
}

TEST_CASE("symmetrize_two_body is a fixed point on symmetric input") {
  const auto raw = tensor({{{0, 1, 2, 3}, 0.25}, {{1, 0, 3, 2}, 0.25}});
  const auto sym = symmetrize_two_body(raw);
  CHECK(sym.at(0, 1, 2, 3) == 0.25);
  CHECK(sym.at(1, 0, 3, 2) == 0.25);
  CHECK(sym.size() == 2);
}

TEST_CASE("symmetrize_two_body drops exact cancellations") {
  const auto raw = tensor({{{1, 2, 3, 4}, 0.4}, {{2, 1, 4, 3}, -0.4}});
  CHECK(symmetrize_two_body(raw).empty());
}

TEST_CASE("one-body coefficient becomes a single hopping term") {
  auto h = empty_h(4);
  h.one_body(1, 2) = h.one_body(2, 1) = 0.5;
  const auto terms = enumerate_terms(h);
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].cls == TermClass::OneBodyOffDiag);
  CHECK(terms[0].indices == std::vector<int>{1, 2});
  CHECK(terms[0].coefficient == 0.5);
  CHECK(terms[0].norm == 0.5);
}

TEST_CASE("h_pqqp orbit becomes a single number-number term") {
  auto h = empty_h(4);
  h.two_body = tensor({{{1, 2, 2, 1}, 0.3}, {{2, 1, 1, 2}, 0.3}});
  h.validate();
  const auto terms = enumerate_terms(h);
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].cls == TermClass::NumberNumber);
  CHECK(terms[0].indices == std::vector<int>{1, 2});
  CHECK(terms[0].coefficient == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("quartic monomials on one orbital set group into one term") {
  auto h = empty_h(6);
  std::vector<std::pair<std::array<int, 4>, double>> es;
  put_orbit(es, 1, 2, 3, 4, 0.4);
  put_orbit(es, 1, 3, 2, 4, -0.15);  // second direction, same set
  h.two_body = tensor(es);
  h.validate();
  const auto terms = enumerate_terms(h);
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].cls == TermClass::FourIndex);
  CHECK(terms[0].indices == std::vector<int>{1, 2, 3, 4});
  CHECK(terms[0].monos.size() == 2);
  // grouping is exact: the dense build of the single term reproduces H
  const ts::Mat lhs = ts::dense_term(terms[0], 6);
  const ts::Mat rhs = ts::dense_hamiltonian(h, false);
  CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
}

TEST_CASE("term_norm examples") {
  auto h = empty_h(6);
  std::vector<std::pair<std::array<int, 4>, double>> es;
  put_orbit(es, 1, 2, 3, 4, -0.15);
  h.two_body = tensor(es);
  const auto terms = enumerate_terms(h);
  REQUIRE(terms.size() == 1);
  // single independent coefficient: coefficient is signed, norm = |.|
  CHECK(terms[0].coefficient == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK(terms[0].norm == doctest::Approx(0.3).epsilon(1e-15));
  // and the grouped norm equals the dense operator norm here
  CHECK(ts::operator_norm(ts::dense_term(terms[0], 6)) ==
        doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("grouped four-index norm upper-bounds and matches dense at N=8") {
  EnsembleSpec spec;
  spec.n_orbitals = 8;
  spec.fraction = 1.0;
  spec.seed = 11;
  const auto h = generate_ensemble(spec);
  const auto terms = enumerate_terms(h);
  // four-index groups sit at the end of the enumeration order
  int checked = 0, single = 0;
  for (auto it = terms.rbegin(); it != terms.rend() && checked < 16; ++it) {
    const double dense = ts::operator_norm(ts::dense_term(*it, 8));
    CHECK(it->norm >= dense - 1e-10);
    if (it->monos.size() == 1) {
      CHECK(it->norm == doctest::Approx(dense).epsilon(1e-10));
      ++single;
    }
    ++checked;
  }
  CHECK(checked == 16);
}

TEST_CASE("terms_commute examples") {
  auto h = empty_h(10);
  std::vector<std::pair<std::array<int, 4>, double>> es;
  put_orbit(es, 1, 2, 3, 4, 0.1);
  put_orbit(es, 5, 6, 7, 8, 0.2);
  put_orbit(es, 1, 5, 6, 7, 0.3);
  h.two_body = tensor(es);
  const auto terms = enumerate_terms(h);
  REQUIRE(terms.size() == 3);
  const auto find = [&](std::vector<int> idx) -> const Term& {
    for (const auto& t : terms)
      if (t.indices == idx) return t;
    REQUIRE(false);
    return terms[0];
  };
  const Term& a = find({1, 2, 3, 4});
  const Term& b = find({5, 6, 7, 8});
  const Term& c = find({1, 5, 6, 7});
  CHECK(terms_commute(a, b));        // disjoint
  CHECK(!terms_commute(a, c));       // shared index
  CHECK(terms_commute(a, a));        // a term with itself
}

TEST_CASE("terms_commute is conservative: commutators vanish at N=8") {
  EnsembleSpec spec;
  spec.n_orbitals = 8;
  spec.fraction = 0.35;
  spec.seed = 3;
  const auto h = generate_ensemble(spec);
  const auto terms = enumerate_terms(h);
  const Basis basis = Basis::full(8);
  std::vector<Eigen::SparseMatrix<double>> mats;
  mats.reserve(terms.size());
  for (const auto& t : terms) mats.push_back(build_sparse({t}, basis));
  std::size_t commuting_pairs = 0;
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i; j < terms.size(); ++j) {
      if (!terms_commute(terms[i], terms[j])) continue;
      ++commuting_pairs;
      const Eigen::SparseMatrix<double> comm =
          mats[i] * mats[j] - mats[j] * mats[i];
      CHECK(comm.norm() <= 1e-12 * std::max(1.0, mats[i].norm() *
                                                     mats[j].norm()));
    }
  CHECK(commuting_pairs > 100);  // the predicate is exercised for real
}

TEST_CASE("interleaved_order phases and bijectivity") {
  auto h = empty_h(6);
  h.one_body(0, 0) = -1.0;
  h.one_body(0, 1) = h.one_body(1, 0) = 0.5;
  std::vector<std::pair<std::array<int, 4>, double>> es;
  es.push_back({{0, 1, 1, 0}, 0.3});
  es.push_back({{1, 0, 0, 1}, 0.3});
  put_orbit(es, 0, 2, 2, 1, 0.2);  // three-index, exterior (0,1)
  put_orbit(es, 0, 1, 2, 3, 0.1);
  h.two_body = tensor(es);
  const auto terms = enumerate_terms(h);
  const auto order = interleaved_order(terms);

  // permutation
  std::set<int> seen(order.begin(), order.end());
  CHECK(seen.size() == terms.size());

  // phase structure: diag+numnum, then hop followed by its three-index
  // group, then four-index
  std::vector<TermClass> classes;
  for (int id : order) classes.push_back(terms[id].cls);
  REQUIRE(classes.size() == 5);
  CHECK(classes[0] == TermClass::OneBodyDiag);
  CHECK(classes[1] == TermClass::NumberNumber);
  CHECK(classes[2] == TermClass::OneBodyOffDiag);
  CHECK(classes[3] == TermClass::ThreeIndex);
  CHECK(classes[4] == TermClass::FourIndex);

  // the three-index term follows the hop with its exterior pair
  CHECK(terms[order[2]].indices == std::vector<int>{0, 1});
  CHECK(terms[order[3]].indices == std::vector<int>{0, 1, 2});
}

TEST_CASE("interleaved_order trivial cases") {
  CHECK(interleaved_order({}).empty());
  auto h = empty_h(8);
  std::vector<std::pair<std::array<int, 4>, double>> es;
  put_orbit(es, 0, 1, 2, 3, 0.1);
  put_orbit(es, 4, 5, 6, 7, 0.1);
  put_orbit(es, 0, 2, 4, 6, 0.1);
  h.two_body = tensor(es);
  const auto terms = enumerate_terms(h);
  const auto order = interleaved_order(terms);
  std::vector<std::vector<int>> seq;
  for (int id : order) seq.push_back(terms[id].indices);
  const std::vector<std::vector<int>> want = {
      {0, 1, 2, 3}, {0, 2, 4, 6}, {4, 5, 6, 7}};
  CHECK(seq == want);  // lexicographic within the four-index phase
}

TEST_CASE("sum_abs_coefficients") {
  auto h = empty_h(6);
  CHECK(sum_abs_coefficients(h) == 0.0);
  h.two_body = tensor({{{1, 2, 3, 4}, 0.3}, {{2, 1, 4, 3}, 0.3}});
  CHECK(sum_abs_coefficients(h) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("reconstruction: terms rebuild H densely for both ensembles") {
  for (const double fraction : {1.0, 0.3}) {
    for (const int n : {5, 6}) {
      EnsembleSpec spec;
      spec.n_orbitals = n;
      spec.fraction = fraction;
      spec.seed = 1000 + n;
      const auto h = generate_ensemble(spec);
      const auto terms = enumerate_terms(h);
      const ts::Mat ref = ts::dense_hamiltonian(h, false);
      ts::Mat sum = ts::Mat::Zero(ref.rows(), ref.cols());
      for (const auto& t : terms) sum += ts::dense_term(t, n);
      CHECK((sum - ref).norm() <= 1e-10 * std::max(1.0, ref.norm()));
    }
  }
}

TEST_CASE("validate rejects broken symmetry") {
  auto h = empty_h(4);
  h.two_body = tensor({{{1, 2, 3, 0}, 0.4}});  // missing qpsr partner
  CHECK_THROWS_AS(h.validate(), InputError);
}
