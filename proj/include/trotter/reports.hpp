#pragma once

#include <string>
#include <vector>

#include "trotter/bounds_types.hpp"
#include "trotter/coalescing.hpp"
#include "trotter/hamiltonian.hpp"
#include "trotter/oracle.hpp"

namespace trotter {

/// JSON text for a bound evaluation (method, prefactors, steps, MC stats).
std::string bound_report_json(const BoundReport& rep);

/// schema: term,class,log10_importance,normalized_log10_importance,
///         delta,representative,annihilates_hf,region,n  (version 1)
std::string importance_csv(const ImportanceTable& table,
                           const PeriodAssignment& assignment,
                           const std::vector<Term>& terms);

/// Versioned structured-text schedule listing (term, multiplier) per
/// sub-step.
std::string schedule_text(const CoalescingSchedule& schedule,
                          const std::vector<Term>& terms);

/// schema: bin_lo,bin_hi,count with moment header comments (version 1)
std::string histogram_csv(const OrderExperiment& exp);

/// Least-squares slope of log y vs log x with its standard error.
struct LogLogFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
};
LogLogFit fit_loglog(const std::vector<double>& x,
                     const std::vector<double>& y);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace trotter
