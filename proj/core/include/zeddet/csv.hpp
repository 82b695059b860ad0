#ifndef ZEDDET_CSV_HPP
#define ZEDDET_CSV_HPP

#include "zeddet/channel.hpp"
#include "zeddet/contrast.hpp"
#include "zeddet/harness.hpp"

#include <ostream>
#include <span>

namespace zeddet {
namespace csv {

/// RFC-4180-style numeric CSV: header row, '.' decimal separator, \n line
/// endings, deterministic formatting (byte-identical across identical runs).

void write_grid(std::ostream& os, const ResourceGrid& grid);
void write_contrast_rm(std::ostream& os, const ContrastTrace& trace);
void write_contrast_per_subcarrier(std::ostream& os, const ContrastTrace& trace);
void write_h0(std::ostream& os, const H0Calibration& cal,
              std::span<const std::pair<double, double>> pfa_r_star,
              std::span<const double> exceedance = {});
void write_roc(std::ostream& os, std::span<const RocRow> rows);
void write_margin(std::ostream& os, std::span<const MarginSweepRow> rows);
void write_two_tag_windows(std::ostream& os, std::span<const TwoTagWindowRow> rows,
                           double stride_seconds);
void write_single_tag_metrics(std::ostream& os, const TrialMetrics& m);

} // namespace csv
} // namespace zeddet

#endif
