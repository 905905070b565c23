#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace trotter {

enum class BoundMethod {
  ExhaustiveTriangle,
  MonteCarlo,
  CauchySchwarz,
  SumOfSquaresMC,
};

const char* bound_method_name(BoundMethod m);

/// A Trotter-error bound evaluation: delta_TS <= prefactor * dt^3 per step,
/// ground-energy error <= energy_prefactor * dt^2, and the step count
/// sqrt(energy_prefactor / target) needed to meet `target_error`.
struct BoundReport {
  BoundMethod method = BoundMethod::ExhaustiveTriangle;
  double prefactor = 0.0;
  double energy_prefactor = 0.0;
  double target_error = 0.0;
  double steps_for_unit_accuracy = 0.0;
  std::optional<double> statistical_error;  // relative; MC methods only
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

/// sqrt(prefactor / target): Trotter steps so the accumulated energy-error
/// bound meets the target.  Throws on target <= 0.
double steps_for_accuracy(double prefactor, double target_error);

}  // namespace trotter
