#include "trotter/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "trotter/parallel.hpp"
#include "trotter/philox.hpp"

namespace trotter {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void check_cap(int n) {
  if (n < 1) throw InputError("basis needs at least one orbital");
  if (n > Basis::kMaxOrbitals)
    throw NumericalGuardError(
        "dimension cap: dense oracle supports at most " +
        std::to_string(Basis::kMaxOrbitals) + " spin orbitals, got " +
        std::to_string(n));
}

// Parity of occupied modes strictly below k.
inline int parity_below(std::uint32_t mask, int k) {
  const std::uint32_t below = mask & ((1u << k) - 1u);
  return (std::popcount(below) & 1) ? -1 : 1;
}

}  // namespace

Basis Basis::full(int n) {
  check_cap(n);
  Basis b;
  b.n_ = n;
  b.full_ = true;
  b.states_.resize(std::size_t{1} << n);
  for (std::size_t i = 0; i < b.states_.size(); ++i)
    b.states_[i] = static_cast<std::uint32_t>(i);
  return b;
}

Basis Basis::sector(int n, int n_electrons) {
  check_cap(n);
  if (n_electrons < 0 || n_electrons > n)
    throw InputError("sector electron count out of range");
  Basis b;
  b.n_ = n;
  b.n_elec_ = n_electrons;
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (std::popcount(m) == n_electrons) b.states_.push_back(m);
  return b;
}

int Basis::find(std::uint32_t mask) const {
  if (full_) return static_cast<int>(mask);
  auto it = std::lower_bound(states_.begin(), states_.end(), mask);
  if (it == states_.end() || *it != mask) return -1;
  return static_cast<int>(it - states_.begin());
}

TermBlocks build_term_blocks(const Term& t, const Basis& basis) {
  TermBlocks tb;
  const int dim = basis.dim();
  for (const auto& mono : t.monos) {
    switch (mono.kind) {
      case MonoKind::Diag1: {
        const std::uint32_t bit = 1u << mono.idx[0];
        for (int i = 0; i < dim; ++i)
          if (basis.state(i) & bit) tb.diag.push_back({i, mono.coeff});
        break;
      }
      case MonoKind::NumNum: {
        const std::uint32_t bits =
            (1u << mono.idx[0]) | (1u << mono.idx[1]);
        for (int i = 0; i < dim; ++i)
          if ((basis.state(i) & bits) == bits)
            tb.diag.push_back({i, mono.coeff});
        break;
      }
      case MonoKind::Hop:
      case MonoKind::NumHop: {
        const int u = mono.idx[0], v = mono.idx[1];
        const std::uint32_t bu = 1u << u, bv = 1u << v;
        const std::uint32_t gate =
            mono.kind == MonoKind::NumHop ? (1u << mono.idx[2]) : 0u;
        for (int i = 0; i < dim; ++i) {
          const std::uint32_t m0 = basis.state(i);
          if ((m0 & bv) == 0 || (m0 & bu) != 0) continue;
          if (gate && (m0 & gate) == 0) continue;
          int sign = parity_below(m0, v);
          const std::uint32_t m1 = m0 ^ bv;
          sign *= parity_below(m1, u);
          const int j = basis.find(m1 | bu);
          if (j < 0) throw InternalError("hop left the basis");
          tb.pairs.push_back({i, j, sign * mono.coeff});
        }
        break;
      }
      case MonoKind::Quartic: {
        const int i1 = mono.idx[0], j1 = mono.idx[1];
        const int k1 = mono.idx[2], l1 = mono.idx[3];
        const std::uint32_t bi = 1u << i1, bj = 1u << j1;
        const std::uint32_t bk = 1u << k1, bl = 1u << l1;
        for (int i = 0; i < dim; ++i) {
          const std::uint32_t m0 = basis.state(i);
          // A = c+_i c+_j c_k c_l acting on states with k,l occupied and
          // i,j free; the conjugate pairs come out symmetric.
          if ((m0 & (bk | bl)) != (bk | bl)) continue;
          if ((m0 & (bi | bj)) != 0) continue;
          int sign = parity_below(m0, l1);
          std::uint32_t m = m0 ^ bl;
          sign *= parity_below(m, k1);
          m ^= bk;
          sign *= parity_below(m, j1);
          m |= bj;
          sign *= parity_below(m, i1);
          m |= bi;
          const int j = basis.find(m);
          if (j < 0) throw InternalError("quartic left the basis");
          tb.pairs.push_back({i, j, sign * mono.coeff});
        }
        break;
      }
    }
  }
  return tb;
}

Eigen::MatrixXd build_dense(const std::vector<Term>& terms,
                            const Basis& basis) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis.dim(), basis.dim());
  for (const auto& t : terms) {
    const TermBlocks tb = build_term_blocks(t, basis);
    for (const auto& [i, d] : tb.diag) h(i, i) += d;
    for (const auto& p : tb.pairs) {
      h(p.i, p.j) += p.v;
      h(p.j, p.i) += p.v;
    }
  }
  return h;
}

Eigen::SparseMatrix<double> build_sparse(const std::vector<Term>& terms,
                                         const Basis& basis) {
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& t : terms) {
    const TermBlocks tb = build_term_blocks(t, basis);
    for (const auto& [i, d] : tb.diag) trip.emplace_back(i, i, d);
    for (const auto& p : tb.pairs) {
      trip.emplace_back(p.i, p.j, p.v);
      trip.emplace_back(p.j, p.i, p.v);
    }
  }
  Eigen::SparseMatrix<double> m(basis.dim(), basis.dim());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

DenseOperator jw_build(const Term& t, int n_orbitals) {
  auto basis = std::make_shared<Basis>(Basis::full(n_orbitals));
  DenseOperator op;
  op.mat = build_dense({t}, *basis).cast<std::complex<double>>();
  op.basis = std::move(basis);
  return op;
}

DenseOperator jw_build(const SpinOrbitalHamiltonian& h, int n_orbitals) {
  auto basis = std::make_shared<Basis>(Basis::full(n_orbitals));
  DenseOperator op;
  op.mat =
      build_dense(enumerate_terms(h), *basis).cast<std::complex<double>>();
  op.mat += h.core_energy *
            Eigen::MatrixXcd::Identity(basis->dim(), basis->dim());
  op.basis = std::move(basis);
  return op;
}

std::pair<double, Eigen::VectorXcd> ground_state(
    const DenseOperator& op, std::optional<int> particle_sector) {
  const double scale = std::max(1.0, op.mat.norm());
  if ((op.mat - op.mat.adjoint()).norm() > 1e-10 * scale)
    throw InputError("ground_state: operator is not Hermitian");
  if (!particle_sector) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.mat);
    return {es.eigenvalues()[0], es.eigenvectors().col(0)};
  }
  // restrict to the sector rows/cols of the full basis
  std::vector<int> keep;
  for (int i = 0; i < op.basis->dim(); ++i)
    if (std::popcount(op.basis->state(i)) == *particle_sector)
      keep.push_back(i);
  if (keep.empty()) throw InputError("empty particle sector");
  Eigen::MatrixXcd sub(keep.size(), keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b)
      sub(a, b) = op.mat(keep[a], keep[b]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub);
  Eigen::VectorXcd full = Eigen::VectorXcd::Zero(op.basis->dim());
  for (std::size_t a = 0; a < keep.size(); ++a)
    full[keep[a]] = es.eigenvectors().col(0)[a];
  return {es.eigenvalues()[0], full};
}

double spectral_norm(const Eigen::SparseMatrix<double>& a,
                     int max_iterations) {
  const int dim = static_cast<int>(a.rows());
  if (dim == 0) return 0.0;
  if (dim == 1) return std::abs(a.coeff(0, 0));

  // deterministic pseudo-random start vector
  Eigen::VectorXd v(dim);
  const Philox rng(0x5eedull);
  for (int i = 0; i < dim; ++i) {
    const auto b = rng.block(0xbeef, static_cast<std::uint32_t>(i), 0, 0);
    v[i] = 2.0 * Philox::to_unit(b[0], b[1]) - 1.0;
  }
  v.normalize();

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alphas, betas;
  Eigen::VectorXd w;
  double prev_lo = 0.0, prev_hi = 0.0;
  const int cap = std::min(max_iterations, dim);
  for (int it = 0; it < cap; ++it) {
    basis.push_back(v);
    w = a * v;
    const double alpha = v.dot(w);
    alphas.push_back(alpha);
    w -= alpha * v;
    if (it > 0) w -= betas.back() * basis[it - 1];
    for (const auto& q : basis) w -= q.dot(w) * q;  // full reorthogonalization
    const double beta = w.norm();

    const int k = static_cast<int>(alphas.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      t(i, i) = alphas[i];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = betas[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t,
                                                      Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()[0];
    const double hi = es.eigenvalues()[k - 1];
    const double norm = std::max(std::abs(lo), std::abs(hi));
    if (k == dim || beta < 1e-13 * std::max(1.0, norm)) return norm;
    if (it > 2 && std::abs(lo - prev_lo) < 1e-7 * std::max(1.0, norm) &&
        std::abs(hi - prev_hi) < 1e-7 * std::max(1.0, norm))
      return norm;
    prev_lo = lo;
    prev_hi = hi;
    betas.push_back(beta);
    v = w / beta;
  }
  throw NumericalGuardError("spectral_norm: Lanczos failed to converge");
}

namespace {

// exp(-i theta T) applied on the left of u, with T the term's block matrix.
void apply_exp_factor(const TermBlocks& tb, double theta, UnitaryMatrix& u) {
  for (const auto& [i, d] : tb.diag) {
    const double phi = -theta * d;
    u.row(i) *= std::complex<double>(std::cos(phi), std::sin(phi));
  }
  Eigen::RowVectorXcd tmp;
  for (const auto& p : tb.pairs) {
    const double c = std::cos(theta * p.v);
    const std::complex<double> ms = -kI * std::sin(theta * p.v);
    tmp = u.row(p.i);
    u.row(p.i) = c * tmp + ms * u.row(p.j);
    u.row(p.j) = ms * tmp + c * u.row(p.j);
  }
}

std::vector<TermBlocks> blocks_for(const std::vector<Term>& terms,
                                   const Basis& basis) {
  std::vector<TermBlocks> blocks;
  blocks.reserve(terms.size());
  for (const auto& t : terms) blocks.push_back(build_term_blocks(t, basis));
  return blocks;
}

UnitaryMatrix product_from_blocks(const std::vector<TermBlocks>& blocks,
                                  const TermOrder& order, double dt,
                                  TsOrder ts_order, int dim) {
  UnitaryMatrix u = UnitaryMatrix::Identity(dim, dim);
  const int m = static_cast<int>(order.size());
  if (m == 0) return u;
  if (ts_order == TsOrder::First) {
    for (int a = 0; a < m; ++a) apply_exp_factor(blocks[order[a]], dt, u);
  } else {
    for (int a = m - 1; a >= 1; --a)
      apply_exp_factor(blocks[order[a]], dt / 2, u);
    apply_exp_factor(blocks[order[0]], dt, u);
    for (int a = 1; a < m; ++a)
      apply_exp_factor(blocks[order[a]], dt / 2, u);
  }
  return u;
}

}  // namespace

UnitaryMatrix trotter_unitary(const std::vector<Term>& terms,
                              const TermOrder& order, double dt,
                              TsOrder ts_order, const Basis& basis) {
  return product_from_blocks(blocks_for(terms, basis), order, dt, ts_order,
                             basis.dim());
}

UnitaryMatrix trotter_unitary(const std::vector<Term>& terms,
                              const CoalescingSchedule& schedule,
                              const Basis& basis) {
  const auto blocks = blocks_for(terms, basis);
  UnitaryMatrix u = UnitaryMatrix::Identity(basis.dim(), basis.dim());
  for (const auto& step : schedule.sub_steps)
    for (const auto& ex : step)
      apply_exp_factor(blocks[ex.term], schedule.base_step * ex.multiplier, u);
  return u;
}

Eigen::MatrixXcd matrix_log_unitary(const UnitaryMatrix& u, double t) {
  const Eigen::MatrixXcd m = u;
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m);
  const auto& tmat = schur.matrixT();
  const auto& q = schur.matrixU();
  const int dim = static_cast<int>(m.rows());
  // unitary input is normal, so T is diagonal up to roundoff
  double offdiag = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) offdiag += std::norm(tmat(i, j));
  if (std::sqrt(offdiag) > 1e-8 * dim)
    throw NumericalGuardError("matrix_log_unitary: input is not normal");
  Eigen::VectorXcd phases(dim);
  for (int i = 0; i < dim; ++i)
    phases[i] = -std::arg(tmat(i, i)) / t;  // principal branch
  return q * phases.asDiagonal() * q.adjoint();
}

OracleContext make_oracle_context(const SpinOrbitalHamiltonian& h,
                                  const std::vector<Term>& terms,
                                  std::optional<int> sector) {
  check_cap(h.n_orbitals);
  int n_elec;
  if (sector) {
    n_elec = *sector;
  } else if (h.n_electrons >= 0) {
    n_elec = h.n_electrons;
  } else {
    // global minimum over particle sectors
    n_elec = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int ne = 0; ne <= h.n_orbitals; ++ne) {
      const Basis b = Basis::sector(h.n_orbitals, ne);
      const Eigen::MatrixXd hd = build_dense(terms, b);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          hd, Eigen::EigenvaluesOnly);
      if (es.eigenvalues()[0] < best) {
        best = es.eigenvalues()[0];
        n_elec = ne;
      }
    }
  }
  OracleContext ctx;
  ctx.basis = std::make_shared<Basis>(Basis::sector(h.n_orbitals, n_elec));
  ctx.h_dense = build_dense(terms, *ctx.basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ctx.h_dense);
  ctx.e_exact = es.eigenvalues()[0];
  ctx.ground_vec = es.eigenvectors().col(0);
  ctx.h_norm = std::max(std::abs(es.eigenvalues()[0]),
                        std::abs(es.eigenvalues()[ctx.basis->dim() - 1]));
  return ctx;
}

namespace {

void check_branch(double h_norm, double t) {
  if (h_norm * t >= M_PI)
    throw NumericalGuardError(
        "branch ambiguity: ||H|| * dt = " + std::to_string(h_norm * t) +
        " >= pi; reduce the time step");
}

double ground_phase_energy(const UnitaryMatrix& u, double t) {
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(Eigen::MatrixXcd(u), false);
  double e = std::numeric_limits<double>::infinity();
  for (int i = 0; i < u.rows(); ++i)
    e = std::min(e, -std::arg(schur.matrixT()(i, i)) / t);
  return e;
}

}  // namespace

double measured_energy_error(const OracleContext& ctx,
                             const std::vector<Term>& terms,
                             const TermOrder& order, double dt,
                             TsOrder ts_order) {
  check_branch(ctx.h_norm, dt);
  const UnitaryMatrix u =
      trotter_unitary(terms, order, dt, ts_order, *ctx.basis);
  return ground_phase_energy(u, dt) - ctx.e_exact;
}

double measured_energy_error(const OracleContext& ctx,
                             const std::vector<Term>& terms,
                             const CoalescingSchedule& schedule) {
  const double cycle_time = schedule.base_step * schedule.cycle_length;
  check_branch(ctx.h_norm, cycle_time);
  const UnitaryMatrix u = trotter_unitary(terms, schedule, *ctx.basis);
  return ground_phase_energy(u, cycle_time) - ctx.e_exact;
}

std::pair<double, Eigen::VectorXcd> effective_ground(
    const OracleContext& ctx, const std::vector<Term>& terms,
    const CoalescingSchedule& schedule) {
  const double cycle_time = schedule.base_step * schedule.cycle_length;
  check_branch(ctx.h_norm, cycle_time);
  const UnitaryMatrix u = trotter_unitary(terms, schedule, *ctx.basis);
  Eigen::ComplexSchur<Eigen::MatrixXcd> schur{Eigen::MatrixXcd(u)};
  int best = 0;
  double e = std::numeric_limits<double>::infinity();
  for (int i = 0; i < u.rows(); ++i) {
    const double ei = -std::arg(schur.matrixT()(i, i)) / cycle_time;
    if (ei < e) {
      e = ei;
      best = i;
    }
  }
  // Schur vectors of a normal matrix are eigenvectors when T is diagonal;
  // tolerate tiny off-diagonal leakage.
  return {e, schur.matrixU().col(best)};
}

Eigen::MatrixXd bch_effective_hamiltonian(const OracleContext& ctx,
                                          const std::vector<Term>& terms,
                                          const TermOrder& order, double dt) {
  const int dim = ctx.basis->dim();
  Eigen::MatrixXd correction = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(dim, dim);  // P_{b-1}
  bool first = true;
  Eigen::MatrixXd hb, inner, outer_arg;
  for (int pos = 0; pos < static_cast<int>(order.size()); ++pos) {
    hb = build_dense({terms[order[pos]]}, *ctx.basis);
    if (!first) {
      inner = hb * prefix - prefix * hb;          // [H_b, P]
      outer_arg = prefix + 0.5 * hb;              // P + H_b/2
      correction += outer_arg * inner - inner * outer_arg;
    }
    prefix += hb;
    first = false;
  }
  return ctx.h_dense + (dt * dt / 12.0) * correction;
}

double perturbative_energy_error(const OracleContext& ctx,
                                 const std::vector<Term>& terms,
                                 const TermOrder& order, double dt) {
  const Eigen::MatrixXd heff =
      bch_effective_hamiltonian(ctx, terms, order, dt);
  const Eigen::MatrixXd delta = heff - ctx.h_dense;
  return ctx.ground_vec.dot(delta * ctx.ground_vec);
}

OrderExperiment randomized_order_experiment(const OracleContext& ctx,
                                            const std::vector<Term>& terms,
                                            int n_samples, double dt,
                                            std::uint64_t seed, int n_bins) {
  if (n_samples < 1)
    throw InputError("randomized_order_experiment: need at least one sample");
  check_branch(ctx.h_norm, dt);

  const TermOrder base = interleaved_order(terms);
  std::vector<int> prefix, tail;
  for (int id : base) {
    if (terms[id].cls == TermClass::FourIndex)
      tail.push_back(id);
    else
      prefix.push_back(id);
  }

  const auto blocks = blocks_for(terms, *ctx.basis);
  const int dim = ctx.basis->dim();
  const Philox rng(seed);

  OrderExperiment out;
  out.errors.resize(n_samples);
  parallel_for_chunks(n_samples, [&](std::size_t lo, std::size_t hi) {
    TermOrder order(prefix.size() + tail.size());
    std::vector<int> shuffled;
    for (std::size_t k = lo; k < hi; ++k) {
      shuffled = tail;
      // Fisher-Yates with one counter-addressed draw per step
      for (std::size_t i = shuffled.size(); i > 1; --i) {
        const auto b = rng.block(
            static_cast<std::uint32_t>(PhiloxDomain::OrderShuffle),
            static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(i), 0);
        const std::size_t j = static_cast<std::size_t>(
            Philox::to_unit(b[0], b[1]) * static_cast<double>(i));
        std::swap(shuffled[i - 1], shuffled[std::min(j, i - 1)]);
      }
      std::copy(prefix.begin(), prefix.end(), order.begin());
      std::copy(shuffled.begin(), shuffled.end(),
                order.begin() + prefix.size());
      const UnitaryMatrix u =
          product_from_blocks(blocks, order, dt, TsOrder::Second, dim);
      out.errors[k] = ground_phase_energy(u, dt) - ctx.e_exact;
    }
  });

  double mean = 0.0;
  for (double e : out.errors) mean += e;
  mean /= n_samples;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double e : out.errors) {
    const double d = e - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n_samples;
  m3 /= n_samples;
  m4 /= n_samples;
  out.mean = mean;
  out.m2 = m2;
  out.m3 = m3;
  out.m4 = m4;
  if (n_samples > 1 && m2 > 0.0) {
    out.kurtosis_ratio = m4 / (m2 * m2);
    out.skewness_ratio = m3 / std::pow(m2, 1.5);
    if (mean != 0.0) out.width_over_mean = std::sqrt(m2) / std::abs(mean);
  }

  const auto [mn_it, mx_it] =
      std::minmax_element(out.errors.begin(), out.errors.end());
  double lo = *mn_it, hi = *mx_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  out.bin_edges.resize(n_bins + 1);
  out.counts.assign(n_bins, 0);
  for (int i = 0; i <= n_bins; ++i)
    out.bin_edges[i] = lo + (hi - lo) * i / n_bins;
  for (double e : out.errors) {
    int b = static_cast<int>((e - lo) / (hi - lo) * n_bins);
    b = std::clamp(b, 0, n_bins - 1);
    ++out.counts[b];
  }
  return out;
}

}  // namespace trotter
