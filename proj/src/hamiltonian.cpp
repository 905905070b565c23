#include "trotter/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace trotter {

TwoBodyTensor TwoBodyTensor::from_entries(
    std::vector<std::pair<Key, double>> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  TwoBodyTensor t;
  t.entries_.reserve(entries.size());
  for (const auto& e : entries) {
    if (!t.entries_.empty() && t.entries_.back().first == e.first) {
      t.entries_.back().second = e.second;  // last one wins
    } else {
      t.entries_.push_back(e);
    }
  }
  std::erase_if(t.entries_, [](const auto& e) { return e.second == 0.0; });
  return t;
}

double TwoBodyTensor::at(int p, int q, int r, int s) const {
  const Key k = pack(p, q, r, s);
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), k,
      [](const auto& e, Key key) { return e.first < key; });
  if (it != entries_.end() && it->first == k) return it->second;
  return 0.0;
}

bool TwoBodyTensor::contains(Key k) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), k,
      [](const auto& e, Key key) { return e.first < key; });
  return it != entries_.end() && it->first == k;
}

void SpinOrbitalHamiltonian::validate() const {
  if (n_orbitals <= 0) throw InputError("n_orbitals must be positive");
  if (n_orbitals > 255) throw InputError("n_orbitals exceeds index width");
  if (one_body.rows() != n_orbitals || one_body.cols() != n_orbitals)
    throw InputError("one_body matrix has wrong dimensions");
  for (int p = 0; p < n_orbitals; ++p)
    for (int q = p + 1; q < n_orbitals; ++q)
      if (one_body(p, q) != one_body(q, p))
        throw InputError("one_body is not symmetric at (" + std::to_string(p) +
                         "," + std::to_string(q) + ")");
  for (const auto& [key, value] : two_body.entries()) {
    const auto [p, q, r, s] = TwoBodyTensor::unpack(key);
    if (p >= n_orbitals || q >= n_orbitals || r >= n_orbitals ||
        s >= n_orbitals)
      throw InputError("two_body index out of range");
    if (p == q || r == s)
      throw InputError("two_body quartet with repeated creation or "
                       "annihilation index is a zero operator");
    if (value == 0.0) throw InputError("two_body stores an explicit zero");
    if (two_body.at(q, p, s, r) != value)
      throw InputError("two_body violates h_pqrs = h_qpsr");
    if (two_body.at(s, r, q, p) != value)
      throw InputError("two_body violates Hermiticity h_pqrs = h_srqp");
  }
}

const char* term_class_name(TermClass c) {
  switch (c) {
    case TermClass::OneBodyDiag: return "H_pp";
    case TermClass::OneBodyOffDiag: return "H_pq";
    case TermClass::NumberNumber: return "H_pqqp";
    case TermClass::ThreeIndex: return "H_prrq";
    case TermClass::FourIndex: return "H_pqrs";
  }
  return "?";
}

std::string term_key(const Term& t) {
  std::string s = term_class_name(t.cls);
  s += '[';
  for (std::size_t i = 0; i < t.indices.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(t.indices[i]);
  }
  s += ']';
  return s;
}

TwoBodyTensor symmetrize_two_body(const TwoBodyTensor& raw) {
  std::vector<std::pair<TwoBodyTensor::Key, double>> out;
  out.reserve(raw.size() * 2);
  for (const auto& [key, value] : raw.entries()) {
    const auto [p, q, r, s] = TwoBodyTensor::unpack(key);
    const double partner = raw.at(q, p, s, r);
    const double avg = 0.5 * (value + partner);
    out.emplace_back(key, avg);
    out.emplace_back(TwoBodyTensor::pack(q, p, s, r), avg);
  }
  return TwoBodyTensor::from_entries(std::move(out));
}

namespace {

inline int sgn_sorted(int a, int b) { return a < b ? 1 : -1; }

// Accumulators keyed by canonical index tuples; std::map keeps the
// emission order deterministic.
struct QuarticAccum {
  // direction key: (i,j,k,l) canonical
  std::map<std::array<int, 4>, double> directions;
};

}  // namespace

std::vector<Term> enumerate_terms(const SpinOrbitalHamiltonian& h) {
  const int n = h.n_orbitals;

  std::map<int, double> diag1;                       // p -> coeff
  std::map<std::array<int, 2>, double> hops;         // (p<q) -> coeff
  std::map<std::array<int, 2>, double> numnum;       // (x<y) -> coeff
  std::map<std::array<int, 3>, double> numhop;       // (u<v, x) -> coeff
  std::map<std::array<int, 4>, QuarticAccum> quartic;  // sorted 4-set

  for (int p = 0; p < n; ++p) {
    if (h.one_body(p, p) != 0.0) diag1[p] = h.one_body(p, p);
    for (int q = p + 1; q < n; ++q)
      if (h.one_body(p, q) != 0.0) hops[{p, q}] = h.one_body(p, q);
  }

  for (const auto& [key, value] : h.two_body.entries()) {
    const auto [p, q, r, s] = TwoBodyTensor::unpack(key);
    const bool p_in = (p == r || p == s);
    const bool q_in = (q == r || q == s);
    if (p_in && q_in) {
      // {p,q} == {r,s}: c+_p c+_q c_r c_s = -sgn(p,q) sgn(r,s) n_x n_y
      const int x = std::min(p, q), y = std::max(p, q);
      numnum[{x, y}] -= sgn_sorted(p, q) * sgn_sorted(r, s) * value;
    } else if (p_in || q_in) {
      // one shared index: sigma n_x c+_u c_v
      const int x = p_in ? p : q;
      const int u = p_in ? q : p;
      const int v = (r == x) ? s : r;
      // c+_p c+_q = s1' c+_u c+_x with s1' = +1 iff (p,q) == (u,x)
      const int s1p = (p == u && q == x) ? 1 : -1;
      const int s2p = (r == x && s == v) ? 1 : -1;  // c_r c_s = s2' c_x c_v
      if (u < v)
        numhop[{u, v, x}] += s1p * s2p * value;
      // u > v entries are the Hermitian-conjugate orientation; the
      // validated h_pqrs = h_srqp symmetry makes them redundant.
    } else {
      // all distinct
      const int i = std::min(p, q), j = std::max(p, q);
      const int k = std::min(r, s), l = std::max(r, s);
      const int sg = sgn_sorted(p, q) * sgn_sorted(r, s);
      std::array<int, 4> set = {p, q, r, s};
      std::sort(set.begin(), set.end());
      if (std::array<int, 2>{i, j} < std::array<int, 2>{k, l})
        quartic[set].directions[{i, j, k, l}] += sg * value;
      // conjugate orientation skipped, same reasoning as above
    }
  }

  std::vector<Term> terms;
  for (const auto& [p, c] : diag1) {
    Term t;
    t.cls = TermClass::OneBodyDiag;
    t.indices = {p};
    t.coefficient = c;
    t.monos = {{MonoKind::Diag1, {p, 0, 0, 0}, c}};
    t.norm = term_norm(t);
    terms.push_back(std::move(t));
  }
  for (const auto& [uv, c] : hops) {
    Term t;
    t.cls = TermClass::OneBodyOffDiag;
    t.indices = {uv[0], uv[1]};
    t.coefficient = c;
    t.monos = {{MonoKind::Hop, {uv[0], uv[1], 0, 0}, c}};
    t.norm = term_norm(t);
    terms.push_back(std::move(t));
  }
  for (const auto& [xy, c] : numnum) {
    if (c == 0.0) continue;
    Term t;
    t.cls = TermClass::NumberNumber;
    t.indices = {xy[0], xy[1]};
    t.coefficient = c;
    t.monos = {{MonoKind::NumNum, {xy[0], xy[1], 0, 0}, c}};
    t.norm = term_norm(t);
    terms.push_back(std::move(t));
  }
  for (const auto& [uvx, c] : numhop) {
    if (c == 0.0) continue;
    Term t;
    t.cls = TermClass::ThreeIndex;
    t.indices = {uvx[0], uvx[1], uvx[2]};
    t.coefficient = c;
    t.monos = {{MonoKind::NumHop, {uvx[0], uvx[1], uvx[2], 0}, c}};
    t.norm = term_norm(t);
    terms.push_back(std::move(t));
  }
  for (const auto& [set, acc] : quartic) {
    Term t;
    t.cls = TermClass::FourIndex;
    t.indices = {set[0], set[1], set[2], set[3]};
    double abs_sum = 0.0;
    for (const auto& [dir, a] : acc.directions) {
      if (a == 0.0) continue;
      t.monos.push_back({MonoKind::Quartic, dir, a});
      abs_sum += std::abs(a);
    }
    if (t.monos.empty()) continue;  // all directions cancelled exactly
    t.coefficient = t.monos.size() == 1 ? t.monos[0].coeff : abs_sum;
    t.norm = term_norm(t);
    terms.push_back(std::move(t));
  }
  return terms;
}

double term_norm(const Term& t) {
  double s = 0.0;
  for (const auto& m : t.monos) s += std::abs(m.coeff);
  return s;
}

namespace {

bool share_index(const Term& a, const Term& b) {
  for (int i : a.indices)
    for (int j : b.indices)
      if (i == j) return true;
  return false;
}

}  // namespace

bool terms_commute(const Term& a, const Term& b) {
  if (a.cls == b.cls && a.indices == b.indices) return true;
  if (a.diagonal() && b.diagonal()) return true;
  return !share_index(a, b);
}

TermOrder interleaved_order(const std::vector<Term>& terms) {
  const int m = static_cast<int>(terms.size());
  // Sortable keys: phase, exterior-pair slot, sub-rank, canonical indices.
  struct Entry {
    int phase;
    std::vector<int> group;
    int rank;  // 0 = the H_pq itself, 1 = attached H_prrq
    std::vector<int> idx;
    int id;
  };
  std::vector<Entry> entries;
  entries.reserve(m);
  for (int id = 0; id < m; ++id) {
    const Term& t = terms[id];
    Entry e;
    e.id = id;
    e.idx = t.indices;
    switch (t.cls) {
      case TermClass::OneBodyDiag:
      case TermClass::NumberNumber:
        e.phase = 0;
        e.group = t.indices;
        e.rank = static_cast<int>(t.cls);
        break;
      case TermClass::OneBodyOffDiag:
        e.phase = 1;
        e.group = {t.indices[0], t.indices[1]};
        e.rank = 0;
        break;
      case TermClass::ThreeIndex:
        e.phase = 1;
        e.group = {t.indices[0], t.indices[1]};
        e.rank = 1;
        break;
      case TermClass::FourIndex:
        e.phase = 2;
        e.group = t.indices;
        e.rank = 0;
        break;
    }
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.phase, a.group, a.rank, a.idx) <
           std::tie(b.phase, b.group, b.rank, b.idx);
  });
  TermOrder order;
  order.reserve(m);
  for (const auto& e : entries) order.push_back(e.id);
  return order;
}

double sum_abs_coefficients(const SpinOrbitalHamiltonian& h) {
  double s = 0.0;
  for (const auto& [key, value] : h.two_body.entries()) s += std::abs(value);
  return s;
}

}  // namespace trotter
