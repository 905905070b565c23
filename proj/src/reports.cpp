#include "trotter/reports.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace trotter {

std::string bound_report_json(const BoundReport& rep) {
  nlohmann::json j;
  j["method"] = bound_method_name(rep.method);
  j["prefactor"] = rep.prefactor;
  j["energy_prefactor"] = rep.energy_prefactor;
  j["target_error"] = rep.target_error;
  j["steps_for_unit_accuracy"] = rep.steps_for_unit_accuracy;
  if (rep.statistical_error) {
    j["statistical_error"] = *rep.statistical_error;
    j["samples"] = rep.samples;
    j["seed"] = rep.seed;
  }
  return j.dump(2) + "\n";
}

std::string importance_csv(const ImportanceTable& table,
                           const PeriodAssignment& assignment,
                           const std::vector<Term>& terms) {
  std::ostringstream out;
  out << "# importance-csv v1\n";
  out << "# log10_mean=" << table.log10_mean
      << " log10_std=" << table.log10_std
      << " log10_cu=" << assignment.log10_cu
      << " log10_cl=" << assignment.log10_cl << "\n";
  out << "term,class,log10_importance,normalized_log10_importance,delta,"
         "representative,annihilates_hf,region,n\n";
  for (const auto& e : table.entries) {
    const Term& t = terms[e.term_id];
    double logi;
    if (e.importance > 0.0 && std::isfinite(e.importance))
      logi = std::log10(e.importance);
    else
      logi = e.importance > 0.0 ? std::numeric_limits<double>::infinity()
                                : -std::numeric_limits<double>::infinity();
    const double normalized =
        table.log10_std > 0.0 ? (logi - table.log10_mean) / table.log10_std
                              : 0.0;
    out << term_key(t) << ',' << term_class_name(t.cls) << ',' << logi << ','
        << normalized << ',' << e.delta << ',' << e.representative << ','
        << (e.annihilates_hf ? 1 : 0) << ',' << assignment.region[e.term_id]
        << ',' << assignment.periods[e.term_id] << "\n";
  }
  return out.str();
}

std::string schedule_text(const CoalescingSchedule& schedule,
                          const std::vector<Term>& terms) {
  std::ostringstream out;
  out << "trotter-schedule v1\n";
  out << "base_step " << schedule.base_step << "\n";
  out << "cycle_length " << schedule.cycle_length << "\n";
  for (int s = 0; s < schedule.cycle_length; ++s) {
    out << "step " << (s + 1) << ":";
    for (const auto& ex : schedule.sub_steps[s])
      out << ' ' << term_key(terms[ex.term]) << "x" << ex.multiplier;
    out << "\n";
  }
  out << "end\n";
  return out.str();
}

std::string histogram_csv(const OrderExperiment& exp) {
  std::ostringstream out;
  out << "# histogram-csv v1\n";
  out << "# samples=" << exp.errors.size() << " mean=" << exp.mean
      << " m2=" << exp.m2 << " m3=" << exp.m3 << " m4=" << exp.m4 << "\n";
  out << "# kurtosis_ratio="
      << (exp.kurtosis_ratio ? std::to_string(*exp.kurtosis_ratio) : "nan")
      << " skewness_ratio="
      << (exp.skewness_ratio ? std::to_string(*exp.skewness_ratio) : "nan")
      << " width_over_mean="
      << (exp.width_over_mean ? std::to_string(*exp.width_over_mean) : "nan")
      << "\n";
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < exp.counts.size(); ++i)
    out << exp.bin_edges[i] << ',' << exp.bin_edges[i + 1] << ','
        << exp.counts[i] << "\n";
  return out.str();
}

LogLogFit fit_loglog(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InputError("fit_loglog: need at least two points");
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InputError("fit_loglog: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += r * r;
  }
  fit.stderr_slope =
      n > 2 ? std::sqrt(ss_res / (static_cast<double>(n) - 2.0) / sxx) : 0.0;
  return fit;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

}  // namespace trotter
