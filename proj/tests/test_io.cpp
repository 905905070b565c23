#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support/dense_reference.hpp"
#include "trotter/io.hpp"

using namespace trotter;
namespace ts = trotter::testsupport;

TEST_CASE("ensemble determinism and fraction sensitivity") {
  EnsembleSpec spec;
  spec.n_orbitals = 10;
  spec.fraction = 0.25;
  spec.seed = 42;
  const auto a = generate_ensemble(spec);
  const auto b = generate_ensemble(spec);
  CHECK(serialize(a) == serialize(b));
  spec.fraction = 0.008;
  const auto sparse = generate_ensemble(spec);
  CHECK(sparse.two_body.size() < a.two_body.size());
}

TEST_CASE("ensemble magnitudes follow the class distributions") {
  EnsembleSpec spec;
  spec.n_orbitals = 16;  // 6*C(16,4) = 10920 four-index candidates
  spec.fraction = 1.0;
  spec.seed = 7;
  const auto h = generate_ensemble(spec);

  double four_sum = 0.0;
  std::size_t four_count = 0;
  for (const auto& [key, value] : h.two_body.entries()) {
    const auto [p, q, r, s] = TwoBodyTensor::unpack(key);
    const bool p_in = (p == r || p == s), q_in = (q == r || q == s);
    if (p_in && q_in) {
      CHECK(std::abs(value) <= 0.5);  // Uniform(0, 0.5)
    } else if (!p_in && !q_in) {
      four_sum += std::abs(value);
      ++four_count;
    }
  }
  CHECK(four_count >= 4 * 10000);  // each draw is stored on its 4-entry orbit
  const double mean = four_sum / static_cast<double>(four_count);
  CHECK(mean == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("achieved sparsity is within 3 sigma of F over quartet candidates") {
  EnsembleSpec spec;
  spec.n_orbitals = 14;
  spec.fraction = 0.1;
  spec.seed = 77;
  const auto h = generate_ensemble(spec);
  std::size_t four_entries = 0;
  for (const auto& [key, value] : h.two_body.entries()) {
    const auto [p, q, r, s] = TwoBodyTensor::unpack(key);
    if (p != r && p != s && q != r && q != s) ++four_entries;
  }
  const double achieved = static_cast<double>(four_entries) / 4.0;
  const double candidates = 6.0 * 1001.0;  // 6 * C(14,4)
  const double expect = candidates * spec.fraction;
  const double sigma =
      std::sqrt(candidates * spec.fraction * (1.0 - spec.fraction));
  CHECK(std::abs(achieved - expect) <= 3.0 * sigma);
}

TEST_CASE("serialize round-trips bit-exactly") {
  EnsembleSpec spec;
  spec.n_orbitals = 8;
  spec.fraction = 0.5;
  spec.seed = 5;
  const auto h = generate_ensemble(spec);
  const std::string text = serialize(h);
  const auto back = deserialize(text);
  CHECK(serialize(back) == text);
  CHECK(back.n_orbitals == h.n_orbitals);
  CHECK(back.two_body.size() == h.two_body.size());
}

TEST_CASE("empty hamiltonian round-trips") {
  SpinOrbitalHamiltonian h;
  h.n_orbitals = 1;
  h.one_body = Eigen::MatrixXd::Zero(1, 1);
  const auto back = deserialize(serialize(h));
  CHECK(back.n_orbitals == 1);
  CHECK(back.two_body.empty());
}

TEST_CASE("deserialize rejects a hand-broken symmetry") {
  SpinOrbitalHamiltonian h;
  h.n_orbitals = 5;
  h.one_body = Eigen::MatrixXd::Zero(5, 5);
  std::vector<std::pair<TwoBodyTensor::Key, double>> es;
  for (const auto& [a, b, c, d] :
       std::vector<std::array<int, 4>>{{0, 1, 2, 3}, {1, 0, 3, 2},
                                       {3, 2, 1, 0}, {2, 3, 0, 1}})
    es.emplace_back(TwoBodyTensor::pack(a, b, c, d), 0.25);
  h.two_body = TwoBodyTensor::from_entries(std::move(es));
  std::string text = serialize(h);
  const auto pos = text.find("0.25");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 4, "0.26");
  CHECK_THROWS_AS(deserialize(text), InputError);
}

TEST_CASE("deserialize rejects version and schema violations") {
  CHECK_THROWS_AS(deserialize("nonsense"), InputError);
  CHECK_THROWS_AS(deserialize("trotter-hamiltonian v9\n"), InputError);
}

namespace {

FcidumpFile parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_fcidump(in);
}

}  // namespace

TEST_CASE("fcidump: header fields and simple records") {
  const auto f = parse_text(
      "&FCI NORB=2,NELEC=2,MS2=0,\n"
      " ORBSYM=1,1,\n"
      " ISYM=1,\n"
      "&END\n"
      " 0.5   1 1 0 0\n"
      " -1.1  0 0 0 0\n");
  CHECK(f.n_spatial == 2);
  CHECK(f.n_electrons == 2);
  CHECK(f.core_energy == -1.1);
  REQUIRE(f.records.size() == 1);
  CHECK(f.records[0].value == 0.5);

  const auto h = to_spin_orbital(f);
  CHECK(h.n_orbitals == 4);
  CHECK(h.one_body(0, 0) == 0.5);  // spin-up of spatial orbital 1
  CHECK(h.one_body(1, 1) == 0.5);  // spin-down
  CHECK(h.two_body.empty());
}

TEST_CASE("fcidump: slash-terminated header and D exponents") {
  const auto f = parse_text(
      "&FCI NORB=1,NELEC=2\n"
      "/\n"
      " 6.75D-1 1 1 1 1\n");
  REQUIRE(f.records.size() == 1);
  CHECK(f.records[0].value == doctest::Approx(0.675).epsilon(1e-15));
}

TEST_CASE("fcidump parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_text("&FCI NELEC=2 &END\n"), ParseError);  // no NORB
  CHECK_THROWS_AS(parse_text("&FCI NORB=2,NELEC=2 &END\nabc 1 1 0 0\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_text("&FCI NORB=2,NELEC=2 &END\n0.5 3 1 0 0\n"),
                  ParseError);
  try {
    parse_text("&FCI NORB=2,NELEC=2 &END\n0.5 1 1 0 0\nbad 1 1 0 0\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("fcidump duplicate records: last one wins") {
  const auto f = parse_text(
      "&FCI NORB=2,NELEC=2 &END\n"
      "0.5 1 1 0 0\n"
      "0.7 1 1 0 0\n");
  const auto h = to_spin_orbital(f);
  CHECK(h.one_body(0, 0) == 0.7);
}

TEST_CASE("single (11|11) integral gives the on-site repulsion") {
  const auto f = parse_text(
      "&FCI NORB=1,NELEC=2 &END\n"
      " 0.675 1 1 1 1\n");
  const auto h = to_spin_orbital(f);
  CHECK(h.n_orbitals == 2);
  // H = 0.675 n_up n_down; two-electron sector energy = 0.675
  const ts::Mat dense = ts::dense_hamiltonian(h, false);
  CHECK(dense(3, 3).real() == doctest::Approx(0.675).epsilon(1e-12));
  CHECK(dense.norm() == doctest::Approx(0.675).epsilon(1e-12));
}

TEST_CASE("spin conservation holds for every produced quartet at NORB=3") {
  std::ostringstream text;
  text << "&FCI NORB=3,NELEC=4 &END\n";
  int counter = 1;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 3; ++l)
          text << 0.01 * (counter++) << ' ' << i << ' ' << j << ' ' << k
               << ' ' << l << "\n";
  const auto h = to_spin_orbital(parse_text(text.str()));
  for (const auto& [key, value] : h.two_body.entries()) {
    const auto [p, q, r, s] = TwoBodyTensor::unpack(key);
    CHECK((p & 1) == (s & 1));
    CHECK((q & 1) == (r & 1));
  }
  CHECK(!h.two_body.empty());
}

TEST_CASE("parse -> expand -> serialize -> deserialize is lossless") {
  const auto f = parse_text(
      "&FCI NORB=2,NELEC=2 &END\n"
      " 0.675 1 1 1 1\n"
      " 0.664 2 2 2 2\n"
      " 0.181 2 1 2 1\n"
      " 0.663 1 1 2 2\n"
      " -1.25 1 1 0 0\n"
      " -0.47 2 2 0 0\n"
      " 0.71 0 0 0 0\n");
  const auto h = to_spin_orbital(f);
  const auto back = deserialize(serialize(h));
  CHECK(serialize(back) == serialize(h));
}
