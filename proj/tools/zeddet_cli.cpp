// zeddet: ambient-backscatter ZED beacon detection over an LTE RS grid.
// Subcommands: psl, calibrate, detect, sweep-roc, sweep-margin.

#include "zeddet/csv.hpp"
#include "zeddet/detect.hpp"
#include "zeddet/errors.hpp"
#include "zeddet/harness.hpp"
#include "zeddet/np.hpp"
#include "zeddet/scenario.hpp"
#include "zeddet/sequences.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "zeddet/rng.hpp"

namespace fs = std::filesystem;
using namespace zeddet;

namespace {

struct CommonArgs {
  std::string scenario_path;
  std::string out_dir;
  std::int64_t seed = -1;
  int trials = -1;
  std::vector<double> p_fa;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--scenario", args.scenario_path, "Scenario file")->required();
  cmd->add_option("--out", args.out_dir, "Output directory")->required();
  cmd->add_option("--seed", args.seed, "Override the scenario seed");
  cmd->add_option("--trials", args.trials, "Override the trial count");
  cmd->add_option("--pfa", args.p_fa, "Override the p_fa target list")->delimiter(',');
  cmd->add_option("--workers", args.workers, "Worker threads (default 1, sequential)");
}

TrialSpec load_spec(const CommonArgs& args) {
  TrialSpec spec = parse_scenario_file(args.scenario_path);
  if (args.seed >= 0) spec.seed_base = static_cast<std::uint64_t>(args.seed);
  if (args.trials > 0) spec.n_trials = args.trials;
  if (!args.p_fa.empty()) spec.p_fa_targets = args.p_fa;
  spec.detector.workers = args.workers;
  spec.validate();
  return spec;
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot write " + (dir / name).string());
  return f;
}

int cmd_psl(const std::string& code_csv) {
  const BitSequence code = code_csv.empty() ? npc25() : BitSequence::from_string(code_csv);
  const auto acf = aperiodic_autocorrelation(code);
  int max_sl = 0;
  for (std::size_t lag = 1; lag < acf.size(); ++lag) max_sl = std::max(max_sl, std::abs(acf[lag]));
  std::cout << "code " << code.to_string() << "\n";
  std::cout << "length " << code.size() << "\n";
  std::cout << "max_sidelobe " << max_sl << "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", psl_db(code));
  std::cout << "psl " << buf << " dB\n";
  return 0;
}

int cmd_calibrate(const CommonArgs& args) {
  TrialSpec spec = load_spec(args);
  if (!spec.tags.empty())
    throw ConfigError("calibrate: the scenario must have zero tags (H0 capture)");
  const auto cal = calibrate_h0(spec, spec.n_trials);
  std::vector<std::pair<double, double>> thresholds;
  for (double p : spec.p_fa_targets) thresholds.emplace_back(p, np_threshold(cal.var_hat, p));
  std::vector<double> r_stars;
  for (const auto& t : thresholds) r_stars.push_back(t.second);
  TrialSpec fresh = spec;
  fresh.seed_base = Rng::derive(spec.seed_base, 0xF5E5);
  const auto rates = h0_exceedance(fresh, r_stars, spec.n_trials);

  fs::create_directories(args.out_dir);
  { auto f = open_out(args.out_dir, "h0_calibration.csv"); csv::write_h0(f, cal, thresholds, rates); }
  std::ostringstream sum;
  sum << "h0 calibration over " << cal.n_windows << " windows\n"
      << "var_hat " << cal.var_hat << "\nmean " << cal.mean << "\nskewness " << cal.skewness
      << "\nexcess_kurtosis " << cal.excess_kurtosis << "\n";
  if (cal.insufficient) sum << "warning: fewer than 1000 windows, estimate is unreliable\n";
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    sum << "p_fa " << thresholds[i].first << " r_star " << thresholds[i].second
        << " observed_exceedance " << rates[i] << "\n";
  { auto f = open_out(args.out_dir, "summary.txt"); f << sum.str(); }
  std::cout << sum.str();
  return 0;
}

int cmd_detect(const CommonArgs& args, bool dump_grid, bool dump_per_subcarrier) {
  TrialSpec spec = load_spec(args);
  fs::path out(args.out_dir);

  if (spec.tags.size() == 2) {
    const auto analysis = analyze_two_tag(spec);
    const auto [metrics, rows] = classify_two_tag(spec, analysis, spec.margin_db);
    fs::create_directories(out);
    { auto f = open_out(out, "contrast_rm.csv"); csv::write_contrast_rm(f, analysis.trace); }
    if (dump_per_subcarrier) {
      auto f = open_out(out, "contrast_k.csv");
      csv::write_contrast_per_subcarrier(f, analysis.trace);
    }
    { auto f = open_out(out, "windows.csv");
      csv::write_two_tag_windows(f, rows, analysis.trace.stride_seconds); }
    std::ostringstream sum;
    sum << "two-tag detection over " << metrics.windows << " observation windows\n"
        << "var_hat " << analysis.var_hat << " r_star " << analysis.r_star << "\n"
        << "primary correct " << metrics.correct_detections << " missed "
        << metrics.missed_detections << " false_alarms " << metrics.false_alarms << "\n"
        << "secondary eligible " << metrics.secondary_eligible << " correct "
        << metrics.secondary_correct << " missed " << metrics.secondary_missed
        << " false_alarms " << metrics.secondary_false_alarms << "\n";
    for (const auto& [pfa, pd] : metrics.p_d_obs)
      sum << "p_fa " << pfa << " p_d_obs " << pd << "\n";
    { auto f = open_out(out, "summary.txt"); f << sum.str(); }
    std::cout << sum.str();
    return 0;
  }

  // zero or one tag: one capture, report the contrast and per-window peaks
  const auto& code = spec.rx_code.size() > 0 ? spec.rx_code : spec.tags.front().code;
  const auto& fsk = spec.rx_fsk.f0_hz > 0 ? spec.rx_fsk : spec.tags.front().fsk;

  TrialSpec cal_spec = spec;
  cal_spec.tags.clear();
  cal_spec.rx_code = code;
  cal_spec.rx_fsk = fsk;
  cal_spec.seed_base = Rng::derive(spec.seed_base, 0xCA11);
  const auto cal = calibrate_h0(cal_spec, spec.calibration_windows);
  const double r_star = np_threshold(cal.var_hat, spec.p_fa_targets[0]);

  Rng chan_rng(Rng::derive(spec.seed_base, 0xC4A0));
  ChannelCoeffs chans;
  if (spec.gamma_random_phase) {
    chans.gamma.resize(static_cast<std::size_t>(spec.grid.subcarriers()));
    for (auto& g : chans.gamma)
      g = std::polar(spec.gamma_amp,
                     spec.gamma_phase_rad + 2.0 * std::numbers::pi * chan_rng.uniform());
  } else {
    chans.gamma = {std::polar(spec.gamma_amp, spec.gamma_phase_rad)};
  }
  std::vector<ZedConfig> tags;
  for (const auto& t : spec.tags) {
    ZedConfig z;
    z.code = t.code;
    z.fsk = t.fsk;
    z.t_seq_seconds = t.t_seq_seconds;
    z.t_wait_seconds = t.t_wait_seconds;
    z.reflect = {std::polar(t.reflect_amp, t.reflect_phase_rad)};
    z.start_offset_seconds = t.randomize_offset ? 0.0 : t.start_offset_seconds;
    tags.push_back(z);
  }
  NoiseModel noise = spec.noise;
  noise.seed = spec.seed_base;
  const double capture = spec.tags.empty()
                             ? spec.effective_capture()
                             : std::max(spec.effective_capture(),
                                        spec.effective_t_obs() + spec.tags[0].t_seq_seconds);
  GridSynthesizer synth(spec.grid, tags, chans, noise, capture);
  const auto trace = run_pipeline(synth, code, fsk, spec.noise.sigma2, spec.detector);

  std::int64_t above = 0;
  for (double v : trace.r_m)
    if (v > r_star) ++above;
  const double exceedance_rate =
      static_cast<double>(above) / static_cast<double>(trace.n_count);

  const double t_obs = spec.effective_t_obs();
  const auto rep = detect_window(trace, r_star, spec.effective_g_psl_db(), spec.margin_db,
                                 t_obs, 0, spec.detector.exclusion_bits);

  fs::create_directories(out);
  { auto f = open_out(out, "contrast_rm.csv"); csv::write_contrast_rm(f, trace); }
  if (dump_per_subcarrier) {
    DetectorConfig cfg = spec.detector;
    cfg.keep_per_subcarrier = true;
    const auto trace_k = run_pipeline(synth, code, fsk, spec.noise.sigma2, cfg);
    auto f = open_out(out, "contrast_k.csv");
    csv::write_contrast_per_subcarrier(f, trace_k);
  }
  if (dump_grid) {
    auto f = open_out(out, "grid.csv");
    csv::write_grid(f, synth.materialize());
  }
  { auto f = open_out(out, "report.txt"); f << rep.to_text(); }

  std::ostringstream sum;
  sum << "capture " << capture << " s, " << trace.n_count << " contrast windows\n"
      << "var_hat " << cal.var_hat << " r_star " << r_star << " (p_fa "
      << spec.p_fa_targets[0] << ")\n"
      << "declared-detection rate " << exceedance_rate
      << " (fraction of windows above r_star)\n"
      << rep.to_text();
  { auto f = open_out(out, "summary.txt"); f << sum.str(); }
  std::cout << sum.str();
  return 0;
}

int cmd_sweep_roc(const CommonArgs& args, const std::vector<double>& pd_targets) {
  TrialSpec spec = load_spec(args);
  if (spec.tags.size() != 1)
    throw ConfigError("sweep-roc: the scenario must configure exactly one tag");

  std::vector<double> eta2 = spec.roc_eta2;
  if (!pd_targets.empty() || eta2.empty()) {
    // place eta2 points at requested detection probabilities for the first target
    TrialSpec cal_spec = spec;
    cal_spec.tags.clear();
    cal_spec.rx_code = spec.rx_code.size() > 0 ? spec.rx_code : spec.tags[0].code;
    cal_spec.rx_fsk = spec.rx_fsk.f0_hz > 0 ? spec.rx_fsk : spec.tags[0].fsk;
    cal_spec.seed_base = Rng::derive(spec.seed_base, 0xCA11);
    const auto cal = calibrate_h0(cal_spec, spec.calibration_windows);
    const double r1 = np_threshold(cal.var_hat, spec.p_fa_targets[0]);
    std::vector<double> pds = pd_targets;
    if (pds.empty()) pds = {0.1, 0.3, 0.5, 0.7, 0.9, 0.99};
    eta2.clear();
    for (double pd : pds) eta2.push_back(r1 - std::sqrt(cal.var_hat) * q_inverse(pd));
  }

  const auto rows = roc_sweep(spec, eta2, spec.p_fa_targets);
  fs::create_directories(args.out_dir);
  { auto f = open_out(args.out_dir, "roc.csv"); csv::write_roc(f, rows); }
  std::ostringstream sum;
  sum << "roc sweep: " << eta2.size() << " eta2 points x " << spec.p_fa_targets.size()
      << " p_fa targets, " << spec.n_trials << " trials per point\n";
  double max_gap = 0.0;
  for (const auto& r : rows)
    max_gap = std::max(max_gap, std::abs(r.p_d_predicted - r.p_d_observed));
  sum << "max |p_d_predicted - p_d_observed| " << max_gap << "\n";
  { auto f = open_out(args.out_dir, "summary.txt"); f << sum.str(); }
  std::cout << sum.str();
  return 0;
}

int cmd_sweep_margin(const CommonArgs& args) {
  TrialSpec spec = load_spec(args);
  if (spec.margins_db.empty())
    throw ConfigError("sweep-margin: the scenario must list margins_db under [run]");
  const auto rows = margin_sweep(spec, spec.margins_db);
  fs::create_directories(args.out_dir);
  { auto f = open_out(args.out_dir, "margin.csv"); csv::write_margin(f, rows); }
  std::ostringstream sum;
  sum << "margin sweep over " << rows.size() << " margin factors, " << rows.front().windows
      << " observation windows\n";
  for (const auto& r : rows)
    sum << "M " << r.margin_db << " dB: false_alarms " << r.false_alarms
        << " missed_detections " << r.missed_detections << " (eligible " << r.eligible << ")\n";
  { auto f = open_out(args.out_dir, "summary.txt"); f << sum.str(); }
  std::cout << sum.str();
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ZED ambient-backscatter beacon detection simulator"};
  app.require_subcommand(1);

  std::string psl_code;
  auto* psl_cmd = app.add_subcommand("psl", "Peak-to-sidelobe level of a code");
  psl_cmd->add_option("--code", psl_code, "Comma-separated bits (default: built-in 25-bit NPC)");

  CommonArgs cal_args, det_args, roc_args, mar_args;
  auto* cal_cmd = app.add_subcommand("calibrate", "H0 noise calibration and thresholds");
  add_common(cal_cmd, cal_args);
  auto* det_cmd = app.add_subcommand("detect", "Synthesize and detect one capture");
  add_common(det_cmd, det_args);
  bool dump_grid = false, dump_k = false;
  det_cmd->add_flag("--dump-grid", dump_grid, "Also write the raw RS grid CSV");
  det_cmd->add_flag("--dump-per-subcarrier", dump_k, "Also write per-subcarrier contrast CSV");
  auto* roc_cmd = app.add_subcommand("sweep-roc", "Predicted vs observed detection probability");
  add_common(roc_cmd, roc_args);
  std::vector<double> pd_targets;
  roc_cmd->add_option("--pd", pd_targets, "Place eta2 points at these detection probabilities")
      ->delimiter(',');
  auto* mar_cmd = app.add_subcommand("sweep-margin", "Secondary-threshold margin sweep");
  add_common(mar_cmd, mar_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (psl_cmd->parsed()) return cmd_psl(psl_code);
    if (cal_cmd->parsed()) return cmd_calibrate(cal_args);
    if (det_cmd->parsed()) return cmd_detect(det_args, dump_grid, dump_k);
    if (roc_cmd->parsed()) return cmd_sweep_roc(roc_args, pd_targets);
    if (mar_cmd->parsed()) return cmd_sweep_margin(mar_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
