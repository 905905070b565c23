#include "trotter/sos.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "trotter/philox.hpp"

namespace trotter {

SosDecomposition build_sos(const SpinOrbitalHamiltonian& h) {
  h.validate();
  const int n = h.n_orbitals;
  const int n2 = n * n;
  const auto idx = [n](int a, int b) { return a * n + b; };

  // Pair matrix W[(r,p),(q,s)] = h_pqrs.  Hermiticity h_pqrs = h_srqp makes
  // it symmetric, giving the interaction as sum_g d_g K_g^dag K_g after the
  // exact reordering
  //   c+_p c+_q c_r c_s = delta_qr c+_p c_s - (c+_r c_p)^dag (c+_q c_s).
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n2, n2);
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(n, n);  // sum_q h_pqqs
  for (const auto& [key, value] : h.two_body.entries()) {
    const auto [p, q, r, s] = TwoBodyTensor::unpack(key);
    w(idx(r, p), idx(q, s)) = value;
    if (q == r) h1(p, s) += value;
  }
  if ((w - w.transpose()).norm() > 1e-12 * std::max(1.0, w.norm()))
    throw InternalError("pair matrix lost its symmetry");

  SosDecomposition out;
  out.n_orbitals = n;
  out.scalar_offset = h.core_energy;

  Eigen::MatrixXd h0 = h.one_body + h1;

  if (w.norm() == 0.0) {
    out.free_part = FreeFermionOp(h0);
    return out;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
  const double dmax = es.eigenvalues().cwiseAbs().maxCoeff();
  const double cutoff = 1e-12 * dmax;

  Eigen::MatrixXd commutator_correction = Eigen::MatrixXd::Zero(n, n);
  for (int g = 0; g < n2; ++g) {
    const double d = es.eigenvalues()[g];
    if (std::abs(d) <= cutoff) continue;
    // K_g = sum_qs k[q,s] c+_q c_s from the eigenvector reshaped over (q,s)
    Eigen::MatrixXd k(n, n);
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s) k(q, s) = es.eigenvectors()(idx(q, s), g);
    const Eigen::MatrixXd khat = 0.5 * (k + k.transpose());
    const Eigen::MatrixXd kskew = 0.5 * (k - k.transpose());  // = i * ktilde
    // K^dag K = Khat^2 + Ktilde^2 + i[Khat, Ktilde]; the commutator piece
    // i[Khat, Ktilde] has real symmetric single-particle matrix
    // [khat, kskew], and enters H0 with the -d prefactor.
    commutator_correction -= d * (khat * kskew - kskew * khat);

    const double scale = std::sqrt(std::abs(d));
    const int sign = d > 0 ? 1 : -1;
    if (khat.norm() > 1e-14) {
      const Eigen::MatrixXd g = scale * khat;
      out.squares.push_back({sign, FreeFermionOp(g)});
    }
    if (kskew.norm() > 1e-14) {
      const Eigen::MatrixXcd ktilde =
          std::complex<double>(0.0, -scale) *
          kskew.cast<std::complex<double>>();
      out.squares.push_back({sign, FreeFermionOp(ktilde)});
    }
  }
  h0 += commutator_correction;
  out.free_part = FreeFermionOp(h0);
  return out;
}

namespace {

struct SosSummand {
  double weight;  // 2||G|| for squares, ||H0|| for the free part
  const FreeFermionOp* op;
};

double triple_value(const std::vector<SosSummand>& xs, std::size_t a,
                    std::size_t b, std::size_t bp) {
  const FreeFermionOp inner = ff_commutator(*xs[a].op, *xs[b].op);
  if (inner.is_zero(1e-300)) return 0.0;
  const FreeFermionOp outer = ff_commutator(inner, *xs[bp].op);
  return xs[a].weight * xs[b].weight * xs[bp].weight * ff_norm(outer);
}

}  // namespace

BoundReport sos_bound_mc(const SosDecomposition& d, std::size_t samples,
                         std::uint64_t seed, double target_error) {
  if (d.squares.empty())
    throw InputError("sos_bound_mc: decomposition has no squares");

  // Summand list: H0 first, then every square generator.  The double-
  // commutator bound for [G^2, .] contributes a factor 2||G|| per squared
  // operator; H0 itself enters linearly with weight ||H0||.
  std::vector<SosSummand> xs;
  xs.push_back({ff_norm(d.free_part), &d.free_part});
  for (const auto& sq : d.squares)
    xs.push_back({2.0 * ff_norm(sq.generator), &sq.generator});
  const std::size_t m = xs.size();

  // Triples (alpha; beta, beta' > alpha).
  std::vector<double> counts(m, 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < m; ++a) {
    const double tail = static_cast<double>(m - 1 - a);
    counts[a] = tail * tail;
    total += counts[a];
  }

  BoundReport rep;
  rep.method = BoundMethod::SumOfSquaresMC;
  rep.samples = samples;
  rep.seed = seed;
  rep.target_error = target_error;

  if (total == 0.0) {
    rep.statistical_error = 0.0;
    rep.steps_for_unit_accuracy = 0.0;
    return rep;
  }

  double sum = 0.0, sumsq = 0.0;
  std::size_t used = 0;
  if (samples == 0) {
    // exhaustive enumeration
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        for (std::size_t bp = a + 1; bp < m; ++bp) {
          sum += triple_value(xs, a, b, bp);
          ++used;
        }
    rep.prefactor = sum;
    rep.statistical_error = 0.0;
  } else {
    std::vector<double> cdf(m);
    double acc = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      acc += counts[a];
      cdf[a] = acc;
    }
    const Philox rng(seed);
    std::vector<double> values(samples);
    for (std::size_t kidx = 0; kidx < samples; ++kidx) {
      const auto blk = rng.block(
          static_cast<std::uint32_t>(PhiloxDomain::SosMc),
          static_cast<std::uint32_t>(kidx >> 32),
          static_cast<std::uint32_t>(kidx), 0);
      const double u0 = Philox::to_unit(blk[0], blk[1]) * total;
      std::size_t a = static_cast<std::size_t>(
          std::lower_bound(cdf.begin(), cdf.end(), u0) - cdf.begin());
      if (a >= m) a = m - 1;
      const std::size_t tail = m - 1 - a;
      const std::size_t b =
          a + 1 + static_cast<std::size_t>(static_cast<double>(blk[2]) *
                                           0x1.0p-32 * tail);
      const std::size_t bp =
          a + 1 + static_cast<std::size_t>(static_cast<double>(blk[3]) *
                                           0x1.0p-32 * tail);
      values[kidx] = triple_value(xs, a, std::min(b, m - 1), std::min(bp, m - 1));
    }
    for (double v : values) {
      sum += v;
      sumsq += v * v;
    }
    used = samples;
    const double mean = sum / samples;
    rep.prefactor = total * mean;
    if (samples > 1 && mean > 0.0) {
      const double var =
          (sumsq - samples * mean * mean) / (samples - 1.0);
      rep.statistical_error =
          std::sqrt(std::max(var, 0.0)) / (mean * std::sqrt(double(samples)));
    } else {
      rep.statistical_error = 0.0;
    }
  }
  (void)used;
  rep.prefactor *= 8.0;
  rep.energy_prefactor = rep.prefactor;
  rep.steps_for_unit_accuracy =
      steps_for_accuracy(rep.energy_prefactor, target_error);
  return rep;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_complex_matrix(std::ostringstream& out, const Eigen::MatrixXcd& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << fmt(m(i, j).real()) << ' ' << fmt(m(i, j).imag());
    }
    out << "\n";
  }
}

Eigen::MatrixXcd read_complex_matrix(std::istringstream& in, int n) {
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double re, im;
      in >> re >> im;
      if (!in) throw InputError("schema violation: truncated sos matrix");
      m(i, j) = {re, im};
    }
  return m;
}

}  // namespace

std::string serialize_sos(const SosDecomposition& d) {
  std::ostringstream out;
  out << "trotter-sos v1\n";
  out << "n_orbitals " << d.n_orbitals << "\n";
  out << "scalar_offset " << fmt(d.scalar_offset) << "\n";
  out << "free_part\n";
  write_complex_matrix(out, d.free_part.matrix());
  out << "squares " << d.squares.size() << "\n";
  for (const auto& sq : d.squares) {
    out << "eta " << sq.sign << "\n";
    write_complex_matrix(out, sq.generator.matrix());
  }
  out << "end\n";
  return out.str();
}

SosDecomposition deserialize_sos(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  in >> word;
  if (word != "trotter-sos") throw InputError("not a sos file");
  in >> word;
  if (word != "v1") throw InputError("sos version mismatch: " + word);
  auto expect = [&](const char* key) {
    in >> word;
    if (word != key)
      throw InputError(std::string("sos schema violation: expected ") + key);
  };
  SosDecomposition d;
  expect("n_orbitals");
  in >> d.n_orbitals;
  if (!in || d.n_orbitals <= 0) throw InputError("sos schema violation: n");
  expect("scalar_offset");
  in >> d.scalar_offset;
  expect("free_part");
  d.free_part = FreeFermionOp(read_complex_matrix(in, d.n_orbitals));
  expect("squares");
  std::size_t count = 0;
  in >> count;
  for (std::size_t i = 0; i < count; ++i) {
    expect("eta");
    int sign = 0;
    in >> sign;
    if (sign != 1 && sign != -1)
      throw InputError("sos schema violation: eta must be +-1");
    d.squares.push_back(
        {sign, FreeFermionOp(read_complex_matrix(in, d.n_orbitals))});
  }
  expect("end");
  return d;
}

}  // namespace trotter
