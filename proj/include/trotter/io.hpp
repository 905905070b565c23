#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trotter/hamiltonian.hpp"

namespace trotter {

/// Random artificial-molecule ensemble.  A candidate coefficient is drawn
/// independently for every canonical symmetry-orbit representative of each
/// class; each is nonzero with probability `fraction`, with magnitude
///   H_pqqp : Uniform(0, 0.5)
///   H_pqqr : Exponential(mean 0.2)
///   H_pqrs : Exponential(mean 0.1)
/// and a uniformly random sign.  Generation is seed-deterministic via
/// counter-based streams (one Philox block per candidate).
struct EnsembleSpec {
  int n_orbitals = 0;
  double fraction = 1.0;  // in (0, 1]
  std::uint64_t seed = 0;

  void validate() const;
};

SpinOrbitalHamiltonian generate_ensemble(const EnsembleSpec& spec);

/// Raw FCIDUMP contents: chemists'-notation spatial integrals.
struct FcidumpFile {
  int n_spatial = 0;   // NORB
  int n_electrons = 0; // NELEC
  struct Record {
    double value;
    int i, j, k, l;  // 1-based, 0 marks absent
  };
  std::vector<Record> records;
  double core_energy = 0.0;
};

/// Parses an FCIDUMP stream: "&FCI ... NORB=..,NELEC=.. ... &END" (or "/")
/// followed by "value i j k l" records.  Duplicate records: last one wins.
/// Throws ParseError with the offending line number.
FcidumpFile parse_fcidump(std::istream& in);
FcidumpFile parse_fcidump_file(const std::string& path);

/// Expands spatial chemists' integrals to spin orbitals: N = 2*NORB, even
/// spin-orbital indices are spin-up, odd spin-down of the same spatial
/// orbital; stored h_pqrs = (1/2) (PS|QR) with spin(p)=spin(s),
/// spin(q)=spin(r).
SpinOrbitalHamiltonian to_spin_orbital(const FcidumpFile& f);

/// Canonical versioned text serialization; round-trips coefficients
/// bit-exactly.  deserialize() re-validates every Hamiltonian invariant.
std::string serialize(const SpinOrbitalHamiltonian& h);
SpinOrbitalHamiltonian deserialize(const std::string& text);

void save_hamiltonian(const SpinOrbitalHamiltonian& h, const std::string& path);
SpinOrbitalHamiltonian load_hamiltonian(const std::string& path);

/// Loads either the canonical format or an FCIDUMP, sniffing the header.
SpinOrbitalHamiltonian load_any(const std::string& path);

}  // namespace trotter
