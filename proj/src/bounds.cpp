#include "trotter/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "trotter/parallel.hpp"
#include "trotter/philox.hpp"

namespace trotter {

namespace {
std::atomic<int> g_thread_cap{0};
}

void set_thread_cap(int cap) { g_thread_cap.store(cap); }

int effective_threads() {
  const int cap = g_thread_cap.load();
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int base = hw > 0 ? hw : 1;
  return cap > 0 ? std::min(cap, base) : base;
}

const char* bound_method_name(BoundMethod m) {
  switch (m) {
    case BoundMethod::ExhaustiveTriangle: return "triangle";
    case BoundMethod::MonteCarlo: return "triangle-mc";
    case BoundMethod::CauchySchwarz: return "cauchy-schwarz";
    case BoundMethod::SumOfSquaresMC: return "sos-mc";
  }
  return "?";
}

double steps_for_accuracy(double prefactor, double target_error) {
  if (!(target_error > 0.0))
    throw InputError("steps_for_accuracy: target error must be positive");
  if (prefactor < 0.0)
    throw InternalError("steps_for_accuracy: negative prefactor");
  return std::sqrt(prefactor / target_error);
}

namespace {

// Subset key: up to four ascending 8-bit indices, unused slots 0xFF.
std::uint32_t subset_key(const int* idx, int count) {
  std::uint32_t k = 0xFFFFFFFFu;
  for (int i = 0; i < count; ++i)
    k = (k << 8) | static_cast<std::uint32_t>(idx[i]);
  return k;
}

struct SubsetAgg {
  double norm_sum = 0.0;
  int count = 0;
};

using SubsetTable = std::unordered_map<std::uint32_t, SubsetAgg>;

void accumulate_subsets(SubsetTable& table, const std::vector<int>& indices,
                        double norm) {
  const int k = static_cast<int>(indices.size());
  int buf[4];
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    int c = 0;
    for (int b = 0; b < k; ++b)
      if (mask & (1u << b)) buf[c++] = indices[b];
    auto& agg = table[subset_key(buf, c)];
    agg.norm_sum += norm;
    agg.count += 1;
  }
}

SubsetAgg inclusion_exclusion(const SubsetTable& table,
                              const std::vector<int>& indices) {
  const int k = static_cast<int>(indices.size());
  SubsetAgg out;
  int buf[4];
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    int c = 0;
    for (int b = 0; b < k; ++b)
      if (mask & (1u << b)) buf[c++] = indices[b];
    const auto it = table.find(subset_key(buf, c));
    if (it == table.end()) continue;
    const int sign = (c % 2 == 1) ? 1 : -1;
    out.norm_sum += sign * it->second.norm_sum;
    out.count += sign * it->second.count;
  }
  return out;
}

}  // namespace

CommutationStructure CommutationStructure::build(
    const std::vector<Term>& terms) {
  CommutationStructure cs;
  cs.m_ = static_cast<int>(terms.size());
  cs.norms_.resize(cs.m_);
  cs.k_alpha_.resize(cs.m_);
  cs.s_alpha_.resize(cs.m_);
  cs.term_indices_.resize(cs.m_);
  cs.diagonal_.resize(cs.m_);

  int max_orbital = -1;
  for (const auto& t : terms)
    for (int i : t.indices) max_orbital = std::max(max_orbital, i);
  cs.orbital_terms_.resize(max_orbital + 1);

  SubsetTable all, diag;
  for (int id = 0; id < cs.m_; ++id) {
    const Term& t = terms[id];
    cs.norms_[id] = t.norm;
    cs.term_indices_[id] = t.indices;
    cs.diagonal_[id] = t.diagonal();
    for (int i : t.indices) cs.orbital_terms_[i].push_back(id);
    accumulate_subsets(all, t.indices, t.norm);
    if (t.diagonal()) accumulate_subsets(diag, t.indices, t.norm);
  }

  cs.l_ = 0;
  cs.k_max_ = 0;
  for (int id = 0; id < cs.m_; ++id) {
    const Term& t = terms[id];
    // all terms sharing >= 1 index (self included), minus self, minus the
    // occupation-diagonal exception when this term is itself diagonal
    const SubsetAgg sharing = inclusion_exclusion(all, t.indices);
    double s = sharing.norm_sum - t.norm;
    int k = sharing.count - 1;
    if (t.diagonal()) {
      const SubsetAgg dshare = inclusion_exclusion(diag, t.indices);
      s -= dshare.norm_sum - t.norm;
      k -= dshare.count - 1;
    }
    cs.s_alpha_[id] = s;
    cs.k_alpha_[id] = k;
    cs.k_max_ = std::max(cs.k_max_, k);
    cs.l_ += static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(k);
  }
  return cs;
}

CommutationStructure commutation_structure(const std::vector<Term>& terms) {
  return CommutationStructure::build(terms);
}

void CommutationStructure::neighbors(int alpha, Scratch& scratch,
                                     std::vector<int>& out) const {
  out.clear();
  if (scratch.stamp.size() != static_cast<std::size_t>(m_)) {
    scratch.stamp.assign(m_, -1);
    scratch.epoch = 0;
  }
  const int epoch = scratch.epoch++;
  const bool a_diag = diagonal_[alpha];
  for (int i : term_indices_[alpha]) {
    for (int beta : orbital_terms_[i]) {
      if (beta == alpha) continue;
      if (scratch.stamp[beta] == epoch) continue;
      scratch.stamp[beta] = epoch;
      if (a_diag && diagonal_[beta]) continue;
      out.push_back(beta);
    }
  }
}

BoundReport triangle_bound_exact(const std::vector<Term>& terms,
                                 const CommutationStructure& cs,
                                 double target_error) {
  (void)terms;
  double gamma = 0.0;
  for (int a = 0; a < cs.term_count(); ++a) {
    const double s = cs.neighbor_norm_sum(a);
    gamma += cs.norm(a) * s * s;
  }
  gamma *= 4.0;
  BoundReport rep;
  rep.method = BoundMethod::ExhaustiveTriangle;
  rep.prefactor = gamma;
  rep.energy_prefactor = gamma;
  rep.target_error = target_error;
  rep.steps_for_unit_accuracy = steps_for_accuracy(gamma, target_error);
  return rep;
}

BoundReport triangle_bound_mc(const std::vector<Term>& terms,
                              const CommutationStructure& cs,
                              std::size_t samples, std::uint64_t seed,
                              double target_error) {
  (void)terms;
  const int m = cs.term_count();
  BoundReport rep;
  rep.method = BoundMethod::MonteCarlo;
  rep.samples = samples;
  rep.seed = seed;
  rep.target_error = target_error;

  const double l_total = static_cast<double>(cs.triple_count());
  if (cs.triple_count() == 0) {
    rep.statistical_error = 0.0;
    rep.steps_for_unit_accuracy = 0.0;
    return rep;
  }

  if (samples == 0) {
    // Exhaustive enumeration over the posting-list path; algebraically
    // identical to the exact bound but through an independent code route.
    std::vector<double> partial(m, 0.0);
    parallel_for_chunks(m, [&](std::size_t b, std::size_t e) {
      CommutationStructure::Scratch scratch;
      std::vector<int> nbr;
      for (std::size_t a = b; a < e; ++a) {
        cs.neighbors(static_cast<int>(a), scratch, nbr);
        double s = 0.0;
        for (int beta : nbr) s += cs.norm(beta);
        partial[a] = cs.norm(static_cast<int>(a)) * s * s;
      }
    });
    double gamma = 0.0;
    for (double v : partial) gamma += v;
    gamma *= 4.0;
    rep.prefactor = gamma;
    rep.energy_prefactor = gamma;
    rep.statistical_error = 0.0;
    rep.steps_for_unit_accuracy = steps_for_accuracy(gamma, target_error);
    return rep;
  }

  // alpha sampled with probability K_a^2 / L, then beta, beta' uniform over
  // its neighbor list.
  std::vector<double> cdf(m);
  double acc = 0.0;
  for (int a = 0; a < m; ++a) {
    const double k = static_cast<double>(cs.neighbor_count(a));
    acc += k * k;
    cdf[a] = acc;
  }

  const Philox rng(seed);
  std::vector<double> values(samples);
  parallel_for_chunks(samples, [&](std::size_t b, std::size_t e) {
    CommutationStructure::Scratch scratch;
    std::vector<int> nbr;
    int cached_alpha = -1;
    for (std::size_t k = b; k < e; ++k) {
      const auto blk =
          rng.block(static_cast<std::uint32_t>(PhiloxDomain::TriangleMc),
                    static_cast<std::uint32_t>(k >> 32),
                    static_cast<std::uint32_t>(k), 0);
      const double u = Philox::to_unit(blk[0], blk[1]) * acc;
      int alpha = static_cast<int>(
          std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (alpha >= m) alpha = m - 1;
      if (alpha != cached_alpha) {
        cs.neighbors(alpha, scratch, nbr);
        cached_alpha = alpha;
      }
      const std::size_t deg = nbr.size();
      const std::size_t i1 = std::min<std::size_t>(
          deg - 1, static_cast<std::size_t>(static_cast<double>(blk[2]) *
                                            0x1.0p-32 * deg));
      const std::size_t i2 = std::min<std::size_t>(
          deg - 1, static_cast<std::size_t>(static_cast<double>(blk[3]) *
                                            0x1.0p-32 * deg));
      values[k] = cs.norm(alpha) * cs.norm(nbr[i1]) * cs.norm(nbr[i2]);
    }
  });

  double sum = 0.0, sumsq = 0.0;
  for (double v : values) {
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / static_cast<double>(samples);
  const double gamma = 4.0 * l_total * mean;
  rep.prefactor = gamma;
  rep.energy_prefactor = gamma;
  if (samples > 1 && mean > 0.0) {
    const double var =
        (sumsq - static_cast<double>(samples) * mean * mean) /
        (static_cast<double>(samples) - 1.0);
    rep.statistical_error = std::sqrt(std::max(var, 0.0)) /
                            (mean * std::sqrt(static_cast<double>(samples)));
  } else {
    rep.statistical_error = 0.0;
  }
  rep.steps_for_unit_accuracy = steps_for_accuracy(gamma, target_error);
  return rep;
}

BoundReport cauchy_schwarz_bound(const std::vector<Term>& terms,
                                 const CommutationStructure& cs,
                                 double target_error,
                                 const TripleExclusion& exclude) {
  const int m = cs.term_count();
  BoundReport rep;
  rep.method = BoundMethod::CauchySchwarz;
  rep.target_error = target_error;

  double norm_sq = 0.0;
  for (int a = 0; a < m; ++a) norm_sq += cs.norm(a) * cs.norm(a);

  double n_w = 0.0;
  if (exclude) {
    if (m > 2000)
      throw NumericalGuardError(
          "cauchy_schwarz_bound: the exclusion hook requires a triple scan, "
          "refused for more than 2000 terms");
    CommutationStructure::Scratch scratch;
    std::vector<int> nbr;
    std::vector<char> commutes_a(m);
    for (int a = 0; a < m; ++a) {
      cs.neighbors(a, scratch, nbr);
      std::fill(commutes_a.begin(), commutes_a.end(), 1);
      for (int b : nbr) commutes_a[b] = 0;
      for (int b : nbr) {
        for (int bp = 0; bp < m; ++bp) {
          if (commutes_a[bp] && terms_commute(terms[bp], terms[b])) continue;
          if (exclude(terms[a], terms[b], terms[bp])) continue;
          n_w += 1.0;
        }
      }
    }
  } else {
    if (m > 20000)
      throw NumericalGuardError(
          "cauchy_schwarz_bound: exact N_W counting capped at 20000 terms");
    // N_W = sum over non-commuting ordered pairs (a,b) of
    //       K_a + K_b - |nbr(a) ^ nbr(b)| via neighbor bitsets.
    const int words = (m + 63) / 64;
    std::vector<std::uint64_t> bits(static_cast<std::size_t>(m) * words, 0);
    {
      CommutationStructure::Scratch scratch;
      std::vector<int> nbr;
      for (int a = 0; a < m; ++a) {
        cs.neighbors(a, scratch, nbr);
        auto* row = &bits[static_cast<std::size_t>(a) * words];
        for (int b : nbr) row[b >> 6] |= 1ull << (b & 63);
      }
    }
    std::vector<double> partial(m, 0.0);
    parallel_for_chunks(m, [&](std::size_t lo, std::size_t hi) {
      CommutationStructure::Scratch scratch;
      std::vector<int> nbr;
      for (std::size_t a = lo; a < hi; ++a) {
        cs.neighbors(static_cast<int>(a), scratch, nbr);
        const auto* ra = &bits[a * words];
        double local = 0.0;
        for (int b : nbr) {
          const auto* rb = &bits[static_cast<std::size_t>(b) * words];
          int inter = 0;
          for (int w = 0; w < words; ++w)
            inter += std::popcount(ra[w] & rb[w]);
          local += cs.neighbor_count(static_cast<int>(a)) +
                   cs.neighbor_count(b) - inter;
        }
        partial[a] = local;
      }
    });
    for (double v : partial) n_w += v;
  }

  const double gamma = 4.0 * std::pow(norm_sq, 1.5) * std::sqrt(n_w);
  rep.prefactor = gamma;
  rep.energy_prefactor = gamma;
  rep.steps_for_unit_accuracy = steps_for_accuracy(gamma, target_error);
  return rep;
}

double rms_term_norm(const std::vector<Term>& terms) {
  if (terms.empty()) throw InputError("rms_term_norm: empty term list");
  double s = 0.0;
  for (const auto& t : terms) s += t.norm * t.norm;
  return std::sqrt(s / static_cast<double>(terms.size()));
}

}  // namespace trotter
