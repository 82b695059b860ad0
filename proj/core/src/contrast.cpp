#include "zeddet/contrast.hpp"

#include "zeddet/errors.hpp"

#include <cmath>

namespace zeddet {

double epsilon_correction(double sigma2, int a_i, int b_i, int a_j, int b_j) {
  if (a_i < 1 || b_i < 1 || a_j < 1 || b_j < 1)
    throw ConfigError("epsilon_correction: counts must be >= 1");
  return sigma2 * (1.0 / a_i + 1.0 / b_i - 1.0 / a_j - 1.0 / b_j);
}

double path_power_estimate(cplx e_i, cplx e_j, int a_i, int b_i, int a_j, int b_j,
                           double sigma2) {
  return std::norm(e_i) - std::norm(e_j) - epsilon_correction(sigma2, a_i, b_i, a_j, b_j);
}

double lambda_weight(const CorrelatorCounts& c, std::size_t code_len) {
  if (c.a0 < 1 || c.b0 < 1 || c.a1 < 1 || c.b1 < 1)
    throw ConfigError("lambda_weight: counts must be >= 1");
  return (1.0 / c.a0 + 1.0 / c.b0 + 1.0 / c.a1 + 1.0 / c.b1) /
         static_cast<double>(code_len);
}

std::vector<double> contrast_row(std::span<const cplx> e0, std::span<const cplx> e1,
                                 std::span<const CorrelatorCounts> counts,
                                 const BitSequence& code, int delta_t, double sigma2) {
  if (e0.size() != e1.size() || e0.size() != counts.size())
    throw ConfigError("contrast_row: trace length mismatch");
  if (delta_t < 1) throw ConfigError("contrast_row: delta_t must be >= 1");
  const std::int64_t n_e = static_cast<std::int64_t>(e0.size());
  const std::int64_t span = static_cast<std::int64_t>(code.size() - 1) * delta_t;
  const std::int64_t n_out = n_e - span;
  if (n_out < 1) throw ConfigError("contrast_row: trace shorter than one code span");

  const std::size_t nb = code.size();
  std::vector<double> r(static_cast<std::size_t>(n_out), 0.0);
  for (std::int64_t n = 0; n < n_out; ++n) {
    double acc = 0.0;
    for (std::size_t m = 0; m < nb; ++m) {
      const auto idx = static_cast<std::size_t>(n + static_cast<std::int64_t>(m) * delta_t);
      const auto& c = counts[idx];
      const double eps1 = sigma2 * (1.0 / c.a1 + 1.0 / c.b1 - 1.0 / c.a0 - 1.0 / c.b0);
      const double d = std::norm(e1[idx]) - std::norm(e0[idx]) - eps1;
      acc += code.bit(m) ? d : -d;
    }
    r[static_cast<std::size_t>(n)] = acc / static_cast<double>(nb);
  }
  return r;
}

std::vector<double> combine_subcarriers(std::span<const std::span<const double>> r_rows,
                                        std::span<const std::span<const double>> lambda_rows) {
  if (r_rows.empty() || r_rows.size() != lambda_rows.size())
    throw ConfigError("combine: need matching R and lambda rows");
  const std::size_t n = r_rows[0].size();
  for (std::size_t k = 0; k < r_rows.size(); ++k) {
    if (r_rows[k].size() != n || lambda_rows[k].size() != n)
      throw ConfigError("combine: row length mismatch");
  }
  std::vector<double> r_m(n, 0.0);
  for (std::size_t k = 0; k < r_rows.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double lam = lambda_rows[k][i];
      if (!(lam > 0.0)) throw ConfigError("combine: weights must be > 0");
      r_m[i] += r_rows[k][i] / lam;
    }
  }
  const double inv_k = 1.0 / static_cast<double>(r_rows.size());
  for (double& v : r_m) v *= inv_k;
  return r_m;
}

ContrastTrace build_contrast(const CorrelatorTrace& trace, const BitSequence& code,
                             double sigma2, bool keep_per_subcarrier) {
  ContrastTrace out;
  out.subcarriers = trace.subcarriers;
  out.delta_t = trace.samples_per_bit;
  out.stride_seconds = trace.stride_seconds;
  const std::int64_t span = static_cast<std::int64_t>(code.size() - 1) * out.delta_t;
  out.n_count = trace.n_count - span;
  if (out.n_count < 1) throw ConfigError("contrast: trace shorter than one code span");

  out.lambda.resize(static_cast<std::size_t>(out.n_count));
  for (std::int64_t n = 0; n < out.n_count; ++n)
    out.lambda[static_cast<std::size_t>(n)] =
        lambda_weight(trace.counts[static_cast<std::size_t>(n)], code.size());

  out.r_m.assign(static_cast<std::size_t>(out.n_count), 0.0);
  if (keep_per_subcarrier)
    out.r.resize(static_cast<std::size_t>(trace.subcarriers) *
                 static_cast<std::size_t>(out.n_count));

  for (int k = 0; k < trace.subcarriers; ++k) {
    const auto off = static_cast<std::size_t>(k) * static_cast<std::size_t>(trace.n_count);
    const auto row = contrast_row({trace.e0.data() + off, static_cast<std::size_t>(trace.n_count)},
                                  {trace.e1.data() + off, static_cast<std::size_t>(trace.n_count)},
                                  trace.counts, code, out.delta_t, sigma2);
    for (std::int64_t n = 0; n < out.n_count; ++n) {
      out.r_m[static_cast<std::size_t>(n)] +=
          row[static_cast<std::size_t>(n)] / out.lambda[static_cast<std::size_t>(n)];
      if (keep_per_subcarrier)
        out.r[static_cast<std::size_t>(k) * static_cast<std::size_t>(out.n_count) +
              static_cast<std::size_t>(n)] = row[static_cast<std::size_t>(n)];
    }
  }
  const double inv_k = 1.0 / static_cast<double>(trace.subcarriers);
  for (double& v : out.r_m) v *= inv_k;
  return out;
}

} // namespace zeddet
