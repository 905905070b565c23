#include "trotter/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "trotter/philox.hpp"

namespace trotter {

void EnsembleSpec::validate() const {
  if (n_orbitals <= 0) throw InputError("ensemble n_orbitals must be positive");
  if (n_orbitals > 255) throw InputError("ensemble n_orbitals exceeds 255");
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw InputError("ensemble fraction must lie in (0,1]");
}

namespace {

using Key = TwoBodyTensor::Key;

void emit_orbit(std::vector<std::pair<Key, double>>& out, int p, int q, int r,
                int s, double h) {
  out.emplace_back(TwoBodyTensor::pack(p, q, r, s), h);
  out.emplace_back(TwoBodyTensor::pack(q, p, s, r), h);
  out.emplace_back(TwoBodyTensor::pack(s, r, q, p), h);
  out.emplace_back(TwoBodyTensor::pack(r, s, p, q), h);
}

std::uint32_t pack2(int a, int b) {
  return (static_cast<std::uint32_t>(a) << 8) | static_cast<std::uint32_t>(b);
}

std::uint32_t pack4(int a, int b, int c, int d) {
  return TwoBodyTensor::pack(a, b, c, d);
}

}  // namespace

SpinOrbitalHamiltonian generate_ensemble(const EnsembleSpec& spec) {
  spec.validate();
  const int n = spec.n_orbitals;
  const Philox rng(spec.seed);
  std::vector<std::pair<Key, double>> entries;

  // H_pqqp: two orbits per unordered pair {x<y}:
  //   variant 0 -> (x,y,y,x)  (direct)
  //   variant 1 -> (x,y,x,y)  (exchange pattern)
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      for (std::uint32_t variant = 0; variant < 2; ++variant) {
        const auto d = draw_coefficient(rng, PhiloxDomain::EnsembleNumberNumber,
                                        pack2(x, y), variant, spec.fraction);
        if (!d.include) continue;
        const double h = d.sign * 0.5 * d.unit;
        if (h == 0.0) continue;
        if (variant == 0) {
          entries.emplace_back(TwoBodyTensor::pack(x, y, y, x), h);
          entries.emplace_back(TwoBodyTensor::pack(y, x, x, y), h);
        } else {
          entries.emplace_back(TwoBodyTensor::pack(x, y, x, y), h);
          entries.emplace_back(TwoBodyTensor::pack(y, x, y, x), h);
        }
      }
    }
  }

  // H_pqqr (three distinct indices): exterior pair {u<v}, interior x; two
  // orbits per triple, variant 0 -> (u,x,x,v), variant 1 -> (u,x,v,x).
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      for (int x = 0; x < n; ++x) {
        if (x == u || x == v) continue;
        for (std::uint32_t variant = 0; variant < 2; ++variant) {
          const auto d =
              draw_coefficient(rng, PhiloxDomain::EnsembleThreeIndex,
                               pack4(u, v, x, 0), variant, spec.fraction);
          if (!d.include) continue;
          const double h = d.sign * exponential_from_unit(d.unit, 0.2);
          if (h == 0.0) continue;
          if (variant == 0)
            emit_orbit(entries, u, x, x, v, h);
          else
            emit_orbit(entries, u, x, v, x, h);
        }
      }
    }
  }

  // H_pqrs (all distinct): per sorted 4-set {a<b<c<d}, six orbits indexed
  // by (creation partner of a, annihilation order).
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int c = b + 1; c < n; ++c) {
        for (int d4 = c + 1; d4 < n; ++d4) {
          const int set[4] = {a, b, c, d4};
          for (std::uint32_t variant = 0; variant < 6; ++variant) {
            // partner index of set[0] in the creation pair: 1, 2 or 3
            const int partner = 1 + static_cast<int>(variant / 2);
            const bool swap_annih = (variant % 2) == 1;
            const int i = set[0], j = set[partner];
            int k = 0, l = 0;
            int rest[2], ri = 0;
            for (int t = 1; t < 4; ++t)
              if (t != partner) rest[ri++] = set[t];
            k = rest[0];
            l = rest[1];
            const auto dr =
                draw_coefficient(rng, PhiloxDomain::EnsembleFourIndex,
                                 pack4(a, b, c, d4), variant, spec.fraction);
            if (!dr.include) continue;
            const double h = dr.sign * exponential_from_unit(dr.unit, 0.1);
            if (h == 0.0) continue;
            if (!swap_annih)
              emit_orbit(entries, i, j, k, l, h);
            else
              emit_orbit(entries, i, j, l, k, h);
          }
        }
      }
    }
  }

  SpinOrbitalHamiltonian h;
  h.n_orbitals = n;
  h.one_body = Eigen::MatrixXd::Zero(n, n);
  h.two_body = TwoBodyTensor::from_entries(std::move(entries));
  h.two_body = symmetrize_two_body(h.two_body);
  h.validate();
  return h;
}

namespace {

double parse_value(const std::string& tok, long line) {
  std::string t = tok;
  for (char& ch : t)
    if (ch == 'D' || ch == 'd') ch = 'E';  // Fortran exponents
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end == nullptr || *end != '\0')
    throw ParseError("non-numeric value '" + tok + "'", line);
  return v;
}

long parse_index(const std::string& tok, long line) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError("non-numeric index '" + tok + "'", line);
  return v;
}

}  // namespace

FcidumpFile parse_fcidump(std::istream& in) {
  FcidumpFile f;
  std::string line;
  long lineno = 0;

  // Header: starts at "&FCI", ends at "&END" or "/".  Collect the text in
  // between and scan for NORB= and NELEC=.
  std::string header;
  bool header_done = false;
  bool saw_fci = false;
  while (!header_done && std::getline(in, line)) {
    ++lineno;
    std::string upper = line;
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    if (!saw_fci) {
      const auto pos = upper.find("&FCI");
      if (pos == std::string::npos) {
        if (upper.find_first_not_of(" \t\r\n") != std::string::npos)
          throw ParseError("expected &FCI namelist header", lineno);
        continue;
      }
      saw_fci = true;
      upper = upper.substr(pos + 4);
    }
    const auto endpos = upper.find("&END");
    const auto slashpos = upper.find('/');
    auto cut = std::string::npos;
    if (endpos != std::string::npos) cut = endpos;
    if (slashpos != std::string::npos && slashpos < cut) cut = slashpos;
    if (cut != std::string::npos) {
      header += upper.substr(0, cut);
      header_done = true;
    } else {
      header += upper;
      header += ' ';
    }
  }
  if (!saw_fci) throw ParseError("missing &FCI namelist header", lineno);
  if (!header_done) throw ParseError("unterminated namelist header", lineno);

  auto read_int_field = [&](const std::string& name) -> long {
    const auto pos = header.find(name + "=");
    if (pos == std::string::npos)
      throw ParseError("header missing " + name + "=", lineno);
    std::size_t i = pos + name.size() + 1;
    while (i < header.size() && std::isspace(static_cast<unsigned char>(header[i]))) ++i;
    std::size_t j = i;
    while (j < header.size() &&
           (std::isdigit(static_cast<unsigned char>(header[j])) ||
            header[j] == '-' || header[j] == '+'))
      ++j;
    if (j == i) throw ParseError("header field " + name + " is not numeric", lineno);
    return parse_index(header.substr(i, j - i), lineno);
  };
  f.n_spatial = static_cast<int>(read_int_field("NORB"));
  f.n_electrons = static_cast<int>(read_int_field("NELEC"));
  if (f.n_spatial <= 0) throw ParseError("NORB must be positive", lineno);

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ss >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks.size() != 5)
      throw ParseError("expected 'value i j k l' record", lineno);
    FcidumpFile::Record rec;
    rec.value = parse_value(toks[0], lineno);
    rec.i = static_cast<int>(parse_index(toks[1], lineno));
    rec.j = static_cast<int>(parse_index(toks[2], lineno));
    rec.k = static_cast<int>(parse_index(toks[3], lineno));
    rec.l = static_cast<int>(parse_index(toks[4], lineno));
    for (int idx : {rec.i, rec.j, rec.k, rec.l})
      if (idx < 0 || idx > f.n_spatial)
        throw ParseError("orbital index " + std::to_string(idx) +
                             " out of range [0," +
                             std::to_string(f.n_spatial) + "]",
                         lineno);
    if (rec.i == 0 && rec.j == 0 && rec.k == 0 && rec.l == 0) {
      f.core_energy = rec.value;
      continue;
    }
    if (rec.i == 0 || rec.j == 0)
      throw ParseError("record with missing bra indices", lineno);
    if ((rec.k == 0) != (rec.l == 0))
      throw ParseError("record with only one ket index", lineno);
    f.records.push_back(rec);
  }
  return f;
}

FcidumpFile parse_fcidump_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return parse_fcidump(in);
}

SpinOrbitalHamiltonian to_spin_orbital(const FcidumpFile& f) {
  const int nsp = f.n_spatial;
  const int n = 2 * nsp;

  // Last-one-wins over raw records, then 8-fold symmetric completion of the
  // chemists' integrals (ij|kl).
  std::map<std::array<int, 4>, double> chem;  // 0-based spatial
  Eigen::MatrixXd hsp = Eigen::MatrixXd::Zero(nsp, nsp);
  for (const auto& r : f.records) {
    if (r.k == 0 && r.l == 0) {
      hsp(r.i - 1, r.j - 1) = r.value;
      hsp(r.j - 1, r.i - 1) = r.value;
    } else {
      chem[{r.i - 1, r.j - 1, r.k - 1, r.l - 1}] = r.value;
    }
  }
  std::map<std::array<int, 4>, double> full;
  for (const auto& [k, v] : chem) {
    const int i = k[0], j = k[1], a = k[2], b = k[3];
    const std::array<std::array<int, 4>, 8> images = {{
        {i, j, a, b}, {j, i, a, b}, {i, j, b, a}, {j, i, b, a},
        {a, b, i, j}, {b, a, i, j}, {a, b, j, i}, {b, a, j, i},
    }};
    for (const auto& im : images) full[im] = v;
  }

  SpinOrbitalHamiltonian h;
  h.n_orbitals = n;
  h.n_electrons = f.n_electrons;
  h.core_energy = f.core_energy;
  h.one_body = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < nsp; ++i)
    for (int j = 0; j < nsp; ++j)
      if (hsp(i, j) != 0.0) {
        h.one_body(2 * i, 2 * j) = hsp(i, j);
        h.one_body(2 * i + 1, 2 * j + 1) = hsp(i, j);
      }

  // h_pqrs = (1/2)(PS|QR), nonzero only when spin(p)=spin(s), spin(q)=spin(r).
  std::vector<std::pair<Key, double>> entries;
  for (const auto& [k, v] : full) {
    if (v == 0.0) continue;
    const int P = k[0], S = k[1], Q = k[2], R = k[3];
    for (int s1 = 0; s1 < 2; ++s1) {
      for (int s2 = 0; s2 < 2; ++s2) {
        const int p = 2 * P + s1, s = 2 * S + s1;
        const int q = 2 * Q + s2, r = 2 * R + s2;
        if (p == q || r == s) continue;
        entries.emplace_back(TwoBodyTensor::pack(p, q, r, s), 0.5 * v);
      }
    }
  }
  h.two_body = TwoBodyTensor::from_entries(std::move(entries));
  h.two_body = symmetrize_two_body(h.two_body);
  h.validate();
  return h;
}

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr const char* kMagic = "trotter-hamiltonian";
constexpr int kVersion = 1;

}  // namespace

std::string serialize(const SpinOrbitalHamiltonian& h) {
  std::ostringstream out;
  out << kMagic << " v" << kVersion << "\n";
  out << "n_orbitals " << h.n_orbitals << "\n";
  out << "n_electrons " << h.n_electrons << "\n";
  out << "core_energy " << fmt_double(h.core_energy) << "\n";
  std::vector<std::array<int, 2>> ob;
  for (int p = 0; p < h.n_orbitals; ++p)
    for (int q = p; q < h.n_orbitals; ++q)
      if (h.one_body(p, q) != 0.0) ob.push_back({p, q});
  out << "one_body " << ob.size() << "\n";
  for (const auto& e : ob)
    out << e[0] << ' ' << e[1] << ' ' << fmt_double(h.one_body(e[0], e[1]))
        << "\n";
  out << "two_body " << h.two_body.size() << "\n";
  for (const auto& [key, value] : h.two_body.entries()) {
    const auto [p, q, r, s] = TwoBodyTensor::unpack(key);
    out << p << ' ' << q << ' ' << r << ' ' << s << ' ' << fmt_double(value)
        << "\n";
  }
  out << "end\n";
  return out.str();
}

SpinOrbitalHamiltonian deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  in >> word;
  if (word != kMagic) throw InputError("not a canonical hamiltonian file");
  in >> word;
  if (word != "v1")
    throw InputError("version mismatch: expected v1, found '" + word + "'");

  SpinOrbitalHamiltonian h;
  auto expect = [&](const char* key) {
    in >> word;
    if (word != key)
      throw InputError(std::string("schema violation: expected '") + key +
                       "', found '" + word + "'");
  };
  expect("n_orbitals");
  in >> h.n_orbitals;
  if (!in || h.n_orbitals <= 0) throw InputError("schema violation: n_orbitals");
  expect("n_electrons");
  in >> h.n_electrons;
  expect("core_energy");
  in >> h.core_energy;
  h.one_body = Eigen::MatrixXd::Zero(h.n_orbitals, h.n_orbitals);
  expect("one_body");
  std::size_t n_ob = 0;
  in >> n_ob;
  for (std::size_t i = 0; i < n_ob; ++i) {
    int p, q;
    double v;
    in >> p >> q >> v;
    if (!in) throw InputError("schema violation: truncated one_body block");
    if (p < 0 || q < 0 || p >= h.n_orbitals || q >= h.n_orbitals || p > q)
      throw InputError("schema violation: one_body indices");
    h.one_body(p, q) = v;
    h.one_body(q, p) = v;
  }
  expect("two_body");
  std::size_t n_tb = 0;
  in >> n_tb;
  std::vector<std::pair<Key, double>> entries;
  entries.reserve(n_tb);
  for (std::size_t i = 0; i < n_tb; ++i) {
    int p, q, r, s;
    double v;
    in >> p >> q >> r >> s >> v;
    if (!in) throw InputError("schema violation: truncated two_body block");
    if (p < 0 || q < 0 || r < 0 || s < 0 || p >= h.n_orbitals ||
        q >= h.n_orbitals || r >= h.n_orbitals || s >= h.n_orbitals)
      throw InputError("schema violation: two_body indices");
    entries.emplace_back(TwoBodyTensor::pack(p, q, r, s), v);
  }
  expect("end");
  h.two_body = TwoBodyTensor::from_entries(std::move(entries));
  h.validate();  // rejects symmetry violations introduced by hand edits
  return h;
}

void save_hamiltonian(const SpinOrbitalHamiltonian& h,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << serialize(h);
}

SpinOrbitalHamiltonian load_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

SpinOrbitalHamiltonian load_any(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::string first;
  std::getline(in, first);
  in.seekg(0);
  if (first.rfind(kMagic, 0) == 0) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize(ss.str());
  }
  return to_spin_orbital(parse_fcidump(in));
}

}  // namespace trotter
