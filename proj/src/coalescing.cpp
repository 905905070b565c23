#include "trotter/coalescing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trotter/oracle.hpp"

namespace trotter {

Eigen::VectorXd orbital_energies(const SpinOrbitalHamiltonian& h,
                                 const std::vector<int>& occupied) {
  const int n = h.n_orbitals;
  for (int q : occupied)
    if (q < 0 || q >= n) throw InputError("occupied orbital out of range");
  Eigen::VectorXd omega(n);
  for (int p = 0; p < n; ++p) {
    double w = h.one_body(p, p);
    for (int q : occupied) {
      if (q == p) continue;
      // number-number coefficient of the {p,q} pair
      w += h.two_body.at(p, q, q, p) + h.two_body.at(q, p, p, q) -
           h.two_body.at(p, q, p, q) - h.two_body.at(q, p, q, p);
    }
    omega[p] = w;
  }
  return omega;
}

std::vector<int> default_occupied(const SpinOrbitalHamiltonian& h) {
  const int n = h.n_orbitals;
  const int n_elec = h.n_electrons >= 0 ? h.n_electrons : n / 2;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return h.one_body(a, a) < h.one_body(b, b);
  });
  std::vector<int> occ(order.begin(), order.begin() + std::min(n, n_elec));
  std::sort(occ.begin(), occ.end());
  return occ;
}

double delta_denominator(const Eigen::VectorXd& omega,
                         const std::array<int, 4>& idx) {
  const double a = omega[idx[0]], b = omega[idx[1]];
  const double c = omega[idx[2]], d = omega[idx[3]];
  const double d1 = std::abs(a + b - c - d);
  const double d2 = std::abs(a + c - b - d);
  const double d3 = std::abs(a + d - b - c);
  return std::min({d1, d2, d3});
}

namespace {

// Coefficient of the X/Y Pauli string `letters` (bit set = Y) in the
// 4-mode reduced Jordan-Wigner image m.
double pauli_xy_coefficient(const Eigen::MatrixXd& m, unsigned letters) {
  std::complex<double> trace = 0.0;
  for (unsigned col = 0; col < 16; ++col) {
    const unsigned row = col ^ 0xFu;  // every letter flips its qubit
    std::complex<double> amp = 1.0;
    for (int k = 0; k < 4; ++k) {
      const bool is_y = letters & (1u << k);
      if (!is_y) continue;
      amp *= (col & (1u << k)) ? std::complex<double>(0.0, -1.0)
                               : std::complex<double>(0.0, 1.0);
    }
    trace += amp * m(row, col);
  }
  return (trace / 16.0).real();
}

}  // namespace

double representative_magnitude(const Term& t) {
  if (t.cls != TermClass::FourIndex)
    throw InputError("representative_magnitude expects a grouped H_pqrs term");
  // Relabel the four active modes onto orbitals 0..3, preserving order;
  // external Jordan-Wigner dressing is common to all eight directions and
  // drops out of the strengths.
  Term reduced = t;
  reduced.indices = {0, 1, 2, 3};
  for (auto& mono : reduced.monos)
    for (int& ix : mono.idx) {
      const auto it =
          std::find(t.indices.begin(), t.indices.end(), ix);
      ix = static_cast<int>(it - t.indices.begin());
    }
  const Basis basis = Basis::full(4);
  const Eigen::MatrixXd m = build_dense({reduced}, basis);

  // letters bitmask: bit k set = Y on qubit k; qubit order follows the
  // sorted orbital order, string written low qubit first.
  const auto c = [&](unsigned letters) {
    return pauli_xy_coefficient(m, letters);
  };
  const double xxxx_yyyy = c(0b0000) + c(0b1111);
  const double xxyy_yyxx = c(0b1100) + c(0b0011);
  const double yxyx_xyxy = c(0b0101) + c(0b1010);
  const double yxxy_xyyx = c(0b0110) + c(0b1001);
  return std::max({std::abs(xxxx_yyyy), std::abs(xxyy_yyxx),
                   std::abs(yxyx_xyxy), std::abs(yxxy_xyyx)});
}

double importance(double representative, double delta) {
  if (delta < 0.0) throw InputError("importance: negative denominator");
  if (delta == 0.0) return kMaximalImportance;
  return representative * representative / delta;
}

bool hf_annihilates(const Term& t, const std::vector<int>& occupied) {
  if (t.cls != TermClass::FourIndex)
    throw InputError("hf_annihilates expects a grouped H_pqrs term");
  std::uint32_t occ = 0;
  for (int q : occupied) occ |= 1u << q;
  for (const auto& mono : t.monos) {
    if (mono.coeff == 0.0) continue;
    const std::uint32_t create =
        (1u << mono.idx[0]) | (1u << mono.idx[1]);
    const std::uint32_t annih =
        (1u << mono.idx[2]) | (1u << mono.idx[3]);
    // A = c+c+cc survives iff both annihilated modes are occupied and both
    // created modes are empty; A^dag is the reverse.
    const bool a_survives =
        ((occ & annih) == annih) && ((occ & create) == 0);
    const bool adag_survives =
        ((occ & create) == create) && ((occ & annih) == 0);
    if (a_survives || adag_survives) return false;
  }
  return true;
}

ImportanceTable build_importance_table(const SpinOrbitalHamiltonian& h,
                                       const std::vector<Term>& terms,
                                       const std::vector<int>& occupied) {
  ImportanceTable table;
  table.occupied = occupied;
  const Eigen::VectorXd omega = orbital_energies(h, occupied);
  for (int id = 0; id < static_cast<int>(terms.size()); ++id) {
    const Term& t = terms[id];
    if (t.cls != TermClass::FourIndex) continue;
    ImportanceEntry e;
    e.term_id = id;
    e.delta = delta_denominator(
        omega, {t.indices[0], t.indices[1], t.indices[2], t.indices[3]});
    e.representative = representative_magnitude(t);
    e.importance = importance(e.representative, e.delta);
    e.annihilates_hf = hf_annihilates(t, occupied);
    table.entries.push_back(e);
  }
  double sum = 0.0, count = 0.0;
  for (const auto& e : table.entries) {
    if (!std::isfinite(e.importance) || e.importance <= 0.0) continue;
    sum += std::log10(e.importance);
    count += 1.0;
  }
  const double mean = count > 0 ? sum / count : 0.0;
  double var = 0.0;
  for (const auto& e : table.entries) {
    if (!std::isfinite(e.importance) || e.importance <= 0.0) continue;
    const double d = std::log10(e.importance) - mean;
    var += d * d;
  }
  table.log10_mean = mean;
  table.log10_std = count > 0 ? std::sqrt(var / count) : 0.0;
  return table;
}

PeriodAssignment assign_periods(const ImportanceTable& table,
                                const std::vector<Term>& terms) {
  if (table.entries.empty())
    throw InputError("assign_periods: no FourIndex terms");
  PeriodAssignment out;
  out.periods.assign(terms.size(), 1);
  out.region.assign(terms.size(), '-');
  out.log10_cu = table.log10_mean + 3.0 * table.log10_std;
  out.log10_cl = table.log10_mean + 1.2 * table.log10_std;

  std::vector<const ImportanceEntry*> below;
  for (const auto& e : table.entries) {
    const double logi = e.importance > 0.0 && std::isfinite(e.importance)
                            ? std::log10(e.importance)
                            : (e.importance > 0.0
                                   ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity());
    if (logi >= out.log10_cu) {
      out.periods[e.term_id] = 1;
      out.region[e.term_id] = 'A';
    } else if (logi >= out.log10_cl) {
      out.periods[e.term_id] = e.annihilates_hf ? 16 : 1;
      out.region[e.term_id] = 'B';
    } else {
      below.push_back(&e);
    }
  }
  // ties toward smaller n: sort by importance descending, term id ascending
  std::sort(below.begin(), below.end(),
            [](const ImportanceEntry* a, const ImportanceEntry* b) {
              if (a->importance != b->importance)
                return a->importance > b->importance;
              return a->term_id < b->term_id;
            });
  const std::size_t k = below.size();
  const std::size_t n16 = static_cast<std::size_t>(0.25 * k);
  const std::size_t n32 = static_cast<std::size_t>(0.375 * k);
  for (std::size_t i = 0; i < k; ++i) {
    const int id = below[i]->term_id;
    if (i < n16) {
      out.periods[id] = 16;
      out.region[id] = 'C';
    } else if (i < n16 + n32) {
      out.periods[id] = 32;
      out.region[id] = 'D';
    } else {
      out.periods[id] = 64;
      out.region[id] = 'E';
    }
  }
  return out;
}

CoalescingSchedule build_schedule(const std::vector<Term>& terms,
                                  const std::vector<int>& periods,
                                  double base_step, const TermOrder& order) {
  if (periods.size() != terms.size())
    throw InputError("build_schedule: one period per term required");
  if (!(base_step > 0.0))
    throw InputError("build_schedule: base step must be positive");
  int cycle = 1;
  for (int n : periods) {
    if (n < 1 || (n & (n - 1)) != 0)
      throw InputError("build_schedule: period " + std::to_string(n) +
                       " is not a power of two");
    cycle = std::max(cycle, n);
  }
  CoalescingSchedule s;
  s.base_step = base_step;
  s.cycle_length = cycle;
  s.periods = periods;
  s.sub_steps.resize(cycle);
  for (int step = 1; step <= cycle; ++step) {
    auto& list = s.sub_steps[step - 1];
    for (int id : order) {
      const int n = periods[id];
      if ((step - 1) % n == 0) list.push_back({id, n});
    }
  }
  return s;
}

double work_per_cycle(const CoalescingSchedule& schedule) {
  double w = 0.0;
  for (int n : schedule.periods) w += 1.0 / static_cast<double>(n);
  return w;
}

}  // namespace trotter
