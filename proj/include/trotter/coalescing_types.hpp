#pragma once

#include <vector>

namespace trotter {

/// Multi-resolution Trotter cycle: term alpha executes on sub-steps
/// 1, n_a+1, 2n_a+1, ... with strength multiplier n_a; the cycle spans
/// K = max n_a sub-steps of length base_step each, so every term
/// accumulates strength K * base_step per cycle.
struct CoalescingSchedule {
  double base_step = 0.0;  // delta_t
  int cycle_length = 1;    // K
  std::vector<int> periods;  // n_a per term id (powers of two)
  struct Execution {
    int term;
    int multiplier;
  };
  std::vector<std::vector<Execution>> sub_steps;  // cycle_length entries
};

}  // namespace trotter
