#include "zeddet/csv.hpp"

#include <cstdio>

namespace zeddet {
namespace csv {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

} // namespace

void write_grid(std::ostream& os, const ResourceGrid& grid) {
  os << "k,l,t_seconds,re,im\n";
  for (int k = 0; k < grid.params.subcarriers(); ++k) {
    for (std::int64_t l = 0; l < grid.rs_count; ++l) {
      const cplx y = grid.at(k, l);
      os << k << ',' << l << ',' << num(grid.time_of(l)) << ',' << num(y.real()) << ','
         << num(y.imag()) << '\n';
    }
  }
}

void write_contrast_rm(std::ostream& os, const ContrastTrace& trace) {
  os << "n,t_seconds,r_m\n";
  for (std::int64_t n = 0; n < trace.n_count; ++n)
    os << n << ',' << num(trace.time_of(n)) << ',' << num(trace.r_m[static_cast<std::size_t>(n)])
       << '\n';
}

void write_contrast_per_subcarrier(std::ostream& os, const ContrastTrace& trace) {
  os << "k,n,r,lambda\n";
  for (int k = 0; k < trace.subcarriers; ++k) {
    for (std::int64_t n = 0; n < trace.n_count; ++n) {
      const auto idx = static_cast<std::size_t>(k) * static_cast<std::size_t>(trace.n_count) +
                       static_cast<std::size_t>(n);
      os << k << ',' << n << ',' << num(trace.r.empty() ? 0.0 : trace.r[idx]) << ','
         << num(trace.lambda[static_cast<std::size_t>(n)]) << '\n';
    }
  }
}

void write_h0(std::ostream& os, const H0Calibration& cal,
              std::span<const std::pair<double, double>> pfa_r_star,
              std::span<const double> exceedance) {
  os << "n_windows,mean,var_hat,skewness,excess_kurtosis,insufficient\n";
  os << cal.n_windows << ',' << num(cal.mean) << ',' << num(cal.var_hat) << ','
     << num(cal.skewness) << ',' << num(cal.excess_kurtosis) << ',' << (cal.insufficient ? 1 : 0)
     << '\n';
  os << "p_fa_target,r_star,exceedance_observed\n";
  for (std::size_t i = 0; i < pfa_r_star.size(); ++i) {
    os << num(pfa_r_star[i].first) << ',' << num(pfa_r_star[i].second) << ','
       << (i < exceedance.size() ? num(exceedance[i]) : std::string("nan")) << '\n';
  }
}

void write_roc(std::ostream& os, std::span<const RocRow> rows) {
  os << "eta2,p_fa,r_star,p_d_predicted,p_d_observed,trials\n";
  for (const auto& r : rows)
    os << num(r.eta2) << ',' << num(r.p_fa) << ',' << num(r.r_star) << ','
       << num(r.p_d_predicted) << ',' << num(r.p_d_observed) << ',' << r.trials << '\n';
}

void write_margin(std::ostream& os, std::span<const MarginSweepRow> rows) {
  os << "margin_db,false_alarms,missed_detections,eligible,windows\n";
  for (const auto& r : rows)
    os << num(r.margin_db) << ',' << r.false_alarms << ',' << r.missed_detections << ','
       << r.eligible << ',' << r.windows << '\n';
}

void write_two_tag_windows(std::ostream& os, std::span<const TwoTagWindowRow> rows,
                           double stride_seconds) {
  os << "window,primary_index,primary_t_seconds,primary_db,primary_correct,"
        "truth_strong,truth_weak,secondary_index,secondary_db,secondary_correct\n";
  for (const auto& r : rows) {
    os << r.window << ',' << r.primary_index << ','
       << num(r.primary_index >= 0 ? static_cast<double>(r.primary_index) * stride_seconds : -1.0)
       << ',' << num(r.primary_db) << ',' << (r.primary_correct ? 1 : 0) << ',' << r.truth_strong
       << ',' << r.truth_weak << ',' << r.secondary_index << ',' << num(r.secondary_db) << ','
       << (r.secondary_correct ? 1 : 0) << '\n';
  }
}

void write_single_tag_metrics(std::ostream& os, const TrialMetrics& m) {
  os << "trials,correct_detections,missed_detections,false_alarms,"
        "mean_abs_timing_error_strides,max_abs_timing_error_strides,var_hat\n";
  os << m.trials << ',' << m.correct_detections << ',' << m.missed_detections << ','
     << m.false_alarms << ',' << num(m.mean_abs_timing_error_strides) << ','
     << m.max_abs_timing_error_strides << ',' << num(m.var_hat) << '\n';
  os << "p_fa_target,p_d_observed\n";
  for (const auto& [pfa, pd] : m.p_d_obs) os << num(pfa) << ',' << num(pd) << '\n';
}

} // namespace csv
} // namespace zeddet
