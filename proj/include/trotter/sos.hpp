#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trotter/bounds_types.hpp"
#include "trotter/free_fermion.hpp"
#include "trotter/hamiltonian.hpp"

namespace trotter {

/// Completed-square form  H = H0 - sum_g eta_g G_g^2 + scalar_offset,
/// with H0 quadratic and every G_g a Hermitian free-fermion operator.
struct SosDecomposition {
  int n_orbitals = 0;
  FreeFermionOp free_part;  // H0
  struct Square {
    int sign;  // eta in {+1, -1}
    FreeFermionOp generator;
  };
  std::vector<Square> squares;
  double scalar_offset = 0.0;
};

/// Rewrites the interaction by eigendecomposing the N^2 x N^2 pair matrix
/// W[(r,p),(q,s)] = h_pqrs, splitting each eigen-operator K into Hermitian
/// and skew parts, and absorbing the quadratic contraction H1 and the
/// i[K^,K~] commutators into H0.  Eigenvalues below 1e-12 * max|d| are
/// dropped; the square count never exceeds 2 N^2.
SosDecomposition build_sos(const SpinOrbitalHamiltonian& h);

/// Monte-Carlo estimate of the completed-square double-commutator bound
///   8 sum_{beta,beta'>alpha} ||G_a||*||G_b||*||G_b'||*||[[G_a,G_b],G_b']||,
/// where the summand list is H0 followed by the square generators (H0
/// enters with weight ||H0|| through the same free-fermion algebra).
/// Norms and double commutators are computed exactly per sample.
/// `samples` = 0 requests exhaustive enumeration of all triples.
BoundReport sos_bound_mc(const SosDecomposition& d, std::size_t samples,
                         std::uint64_t seed, double target_error = 1e-3);

std::string serialize_sos(const SosDecomposition& d);
SosDecomposition deserialize_sos(const std::string& text);

}  // namespace trotter
